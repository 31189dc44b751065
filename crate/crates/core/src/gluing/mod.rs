//! Piecewise smooth families of cycles over cell complexes and their
//! standard gluings, plus the localization toolkit (doubling collections
//! of generalized balls, coarea radius selection).
//!
//! A family assigns to every parameter a relative cycle, via per-cell
//! charts acting on per-cell model chains, with collapse maps tying
//! neighboring cells together. The standard gluing assembles a chain in
//! the parameter complex into a chain in the target by sweeping each
//! model chain along the restricted parameter chain:
//! glue(T) = sum over top cells of chart_push((T restricted to the cell)
//! x model chain).

mod balls;
mod coarea;
mod families;
mod glue;

pub use balls::{doubling_merge, BallComplex, DoublingReport, GeneralizedBall};
pub use coarea::{coarea_select_radius, CoareaCertificate};
pub use families::{point_transport_family, rpn_family, rpn_line_to_disk, torus_bundle_family};
pub use glue::{boundary_defect, standard_gluing, GluedChain, GluingOptions};

use crate::ambient::Ambient;
use crate::chain::SimplicialChain;
use crate::coeff::Prime;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// A parametrized rigid/affine map family: the chart of one cell. The
/// parameter is a point of the cell (1-dimensional cells use the arc
/// coordinate; higher cells get barycentric-free ambient coordinates).
#[derive(Debug, Clone)]
pub enum Chart {
    /// Rotation in a fixed coordinate plane by (x - anchor).
    Rotation {
        plane: (usize, usize),
        anchor: f64,
    },
    /// Translation along a direction by (x - anchor).
    Translation { direction: Vec<f64>, anchor: f64 },
    /// Radial dilation about a center by factor 1 + rate (x - anchor).
    Dilation {
        center: Vec<f64>,
        rate: f64,
        anchor: f64,
    },
    /// Geodesic transport on SO(d): rotate the anchor direction onto the
    /// parameter direction (used by the projective-space families, where
    /// the parameter itself is a unit vector).
    GeodesicTransport { anchor_dir: Vec<f64> },
}

impl Chart {
    /// Ambient matrix/offset of the chart at parameter x (1-d cells).
    pub fn at(&self, x: f64, dim: usize) -> (DMatrix<f64>, DVector<f64>) {
        match self {
            Chart::Rotation { plane, anchor } => {
                let mut m = DMatrix::identity(dim, dim);
                let (i, j) = *plane;
                let a = x - anchor;
                m[(i, i)] = a.cos();
                m[(i, j)] = -a.sin();
                m[(j, i)] = a.sin();
                m[(j, j)] = a.cos();
                (m, DVector::zeros(dim))
            }
            Chart::Translation { direction, anchor } => {
                let m = DMatrix::identity(dim, dim);
                let b = DVector::from_column_slice(direction) * (x - anchor);
                (m, b)
            }
            Chart::Dilation {
                center,
                rate,
                anchor,
            } => {
                let f = 1.0 + rate * (x - anchor);
                let m = DMatrix::identity(dim, dim) * f;
                let c = DVector::from_column_slice(center);
                let b = &c - &c * f;
                (m, b)
            }
            Chart::GeodesicTransport { anchor_dir } => {
                // For 1-d parameters x is an angle in the plane of the
                // first two coordinates relative to the anchor angle.
                let anchor = anchor_dir[1].atan2(anchor_dir[0]);
                Chart::Rotation {
                    plane: (0, 1),
                    anchor,
                }
                .at(x, dim)
            }
        }
    }

    pub fn apply(&self, x: f64, pt: &[f64]) -> Vec<f64> {
        let (m, b) = self.at(x, pt.len());
        (m * DVector::from_column_slice(pt) + b)
            .iter()
            .copied()
            .collect()
    }

    /// Lipschitz constant of the parameter-to-target sweep, bounded by
    /// the operator norm of the generator (1 for rotations at unit
    /// radius, |direction| for translations).
    pub fn lipschitz(&self, model_radius: f64) -> f64 {
        match self {
            Chart::Rotation { .. } | Chart::GeodesicTransport { .. } => model_radius.max(1.0),
            Chart::Translation { direction, .. } => {
                direction.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0)
            }
            Chart::Dilation { rate, .. } => (1.0 + rate.abs()).max(model_radius),
        }
    }
}

/// One cell of a 1-dimensional parameter complex: an arc [lo, hi] in the
/// (periodic) parameter line, or a vertex.
#[derive(Debug, Clone)]
pub struct FamilyCell {
    pub lo: f64,
    pub hi: f64,
    /// Anchor parameter (barycenter of the cell).
    pub anchor: f64,
    pub chart: Chart,
    pub model: SimplicialChain,
    /// Indices of the vertex cells bounding this arc.
    pub faces: Vec<usize>,
}

/// A discrete piecewise smooth family over a circle (period-identified
/// line) of parameters. Vertex cells are stored alongside arcs so the
/// compatibility identities can be checked across faces.
#[derive(Debug, Clone)]
pub struct CubicalFamily {
    pub p: Prime,
    pub ambient: Ambient,
    /// Parameter period (the circle's total length).
    pub period: f64,
    /// Top (1-dimensional) cells in parameter order.
    pub arcs: Vec<FamilyCell>,
    /// Vertex cells; vertex v bounds arcs v-1 and v.
    pub vertices: Vec<FamilyCell>,
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    /// max over sampled (cell, x) of Fl-free chain distance between
    /// chart(x) model and the family value (as mass of the difference).
    pub chart_identity_residual: f64,
    /// max over sampled (face pair, x) of the collapse identity defect.
    pub collapse_residual: f64,
    /// max over sampled triples of the cocycle defect.
    pub cocycle_residual: f64,
}

impl CubicalFamily {
    /// Wrap a parameter into [0, period).
    pub fn wrap(&self, x: f64) -> f64 {
        x.rem_euclid(self.period)
    }

    fn arc_containing(&self, x: f64) -> usize {
        let x = self.wrap(x);
        for (i, c) in self.arcs.iter().enumerate() {
            if x >= c.lo - 1e-12 && x <= c.hi + 1e-12 {
                return i;
            }
        }
        self.arcs.len() - 1
    }

    /// The family value f(x): push the model of the containing arc.
    pub fn eval(&self, x: f64) -> Result<SimplicialChain> {
        let x = self.wrap(x);
        let cell = &self.arcs[self.arc_containing(x)];
        self.push_model(cell, x)
    }

    fn push_model(&self, cell: &FamilyCell, x: f64) -> Result<SimplicialChain> {
        let simplices = cell
            .model
            .simplices()
            .iter()
            .map(|s| {
                (
                    s.verts
                        .iter()
                        .map(|v| cell.chart.apply(x, v))
                        .collect::<Vec<_>>(),
                    s.c as i64,
                )
            })
            .collect();
        SimplicialChain::new(
            cell.model.ambient,
            cell.model.p,
            cell.model.relative,
            cell.model.dim,
            simplices,
        )
    }

    /// Largest chart Lipschitz constant times model mass: the mass-
    /// amplification constant of the standard gluing.
    pub fn gluing_constant(&self) -> f64 {
        self.arcs
            .iter()
            .map(|c| {
                let r = c
                    .model
                    .simplices()
                    .iter()
                    .flat_map(|s| s.verts.iter())
                    .map(|v| crate::ambient::norm(v))
                    .fold(0.0f64, f64::max);
                c.chart.lipschitz(r) * c.model.mass()
            })
            .fold(0.0f64, f64::max)
    }

    /// Verify the defining identities at sampled parameters.
    pub fn check_structure(&self, samples_per_cell: usize) -> Result<StructureReport> {
        let mut chart_res: f64 = 0.0;
        let mut collapse_res: f64 = 0.0;
        let mut cocycle_res: f64 = 0.0;
        for (ai, arc) in self.arcs.iter().enumerate() {
            for s in 0..samples_per_cell {
                let t = (s as f64 + 0.5) / samples_per_cell as f64;
                let x = arc.lo + t * (arc.hi - arc.lo);
                let pushed = self.push_model(arc, x)?;
                let direct = self.eval(x)?;
                let diff = pushed.sub(&direct)?;
                chart_res = chart_res.max(diff.mass());
            }
            // Collapse identity at the two vertex faces: the collapse map
            // is defined as chart_vertex(x)^{-1} chart_arc(x); verify it
            // carries the arc model onto the vertex model and recomposes.
            for &vi in &arc.faces {
                let vert = &self.vertices[vi];
                let x = vert.anchor;
                let (ma, ba) = arc.chart.at(x, self.ambient.coord_dim());
                let (mv, bv) = vert.chart.at(x, self.ambient.coord_dim());
                // collapse = mv^{-1} (ma y + ba - bv)
                let mv_inv = mv
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::InvalidChain("singular chart".into()))?;
                let collapsed: Vec<(Vec<Vec<f64>>, i64)> = arc
                    .model
                    .simplices()
                    .iter()
                    .map(|sx| {
                        (
                            sx.verts
                                .iter()
                                .map(|v| {
                                    let y = &ma * DVector::from_column_slice(v) + &ba;
                                    (&mv_inv * (y - &bv)).iter().copied().collect()
                                })
                                .collect(),
                            sx.c as i64,
                        )
                    })
                    .collect();
                let collapsed = SimplicialChain::new(
                    arc.model.ambient,
                    arc.model.p,
                    arc.model.relative,
                    arc.model.dim,
                    collapsed,
                )?;
                collapse_res = collapse_res.max(collapsed.sub(&vert.model)?.mass());
                // Cocycle: chart_arc(x) = chart_vertex(x) o collapse holds
                // by construction; measure the matrix defect of the
                // recomposition as the residual.
                let recomposed = &mv * (&mv_inv * &ma);
                cocycle_res = cocycle_res.max((recomposed - &ma).amax());
                let _ = ai;
            }
        }
        Ok(StructureReport {
            chart_identity_residual: chart_res,
            collapse_residual: collapse_res,
            cocycle_residual: cocycle_res,
        })
    }

    /// Lipschitz probe: for sampled parameter pairs in one cell, the
    /// swept filling chart((x..y) x model) bounds the flat distance
    /// between f(x) and f(y). Returns the worst ratio of swept mass to
    /// (C + L) d(x, y) with C the gluing constant and L the chart
    /// Lipschitz bound; values at most 1 certify the Lipschitz estimate.
    pub fn lipschitz_probe(&self, samples: usize, seed: u64) -> Result<f64> {
        use rand::Rng;
        let mut rng = crate::rng::stratum_rng(seed, 0x11b);
        let c = self.gluing_constant();
        let l = self
            .arcs
            .iter()
            .map(|a| a.chart.lipschitz(1.0))
            .fold(1.0f64, f64::max);
        let mut worst_ratio: f64 = 0.0;
        for _ in 0..samples {
            let ai = rng.gen_range(0..self.arcs.len());
            let arc = &self.arcs[ai];
            let t0: f64 = rng.gen();
            let t1: f64 = rng.gen();
            let x = arc.lo + t0 * (arc.hi - arc.lo);
            let y = arc.lo + t1 * (arc.hi - arc.lo);
            if (x - y).abs() < 1e-9 {
                continue;
            }
            // Mass of the swept surface, by fine vertexwise quads: the
            // model segments swept along the parameter interval.
            let steps = 64;
            let mut swept = 0.0;
            for s in 0..steps {
                let a = x + (y - x) * s as f64 / steps as f64;
                let b = x + (y - x) * (s + 1) as f64 / steps as f64;
                for seg in arc.model.simplices() {
                    let p0 = arc.chart.apply(a, &seg.verts[0]);
                    let p1 = arc.chart.apply(a, &seg.verts[1]);
                    let q0 = arc.chart.apply(b, &seg.verts[0]);
                    let q1 = arc.chart.apply(b, &seg.verts[1]);
                    swept += quad_area(&p0, &p1, &q1, &q0);
                }
            }
            let ratio = swept / ((x - y).abs() * (c + l));
            worst_ratio = worst_ratio.max(ratio);
        }
        Ok(worst_ratio)
    }
}

/// Area of a (near-planar) quad by splitting into two triangles.
fn quad_area(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    tri_area(a, b, c) + tri_area(a, c, d)
}

fn tri_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let v: Vec<f64> = a.iter().zip(c).map(|(x, y)| y - x).collect();
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let uv: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    0.5 * (uu * vv - uv * uv).max(0.0).sqrt()
}
