//! Pushing chains through differentiable maps: vertexwise for affine
//! maps, subdivided vertexwise otherwise, with a quadrature estimate of
//! the image mass from the Jacobian.

use super::{sample_simplex, Simplex, SimplicialChain};
use crate::ambient::Ambient;
use crate::exec::{map_indexed, Exec};
use crate::rng::stratum_rng;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// A differentiable map descriptor: evaluation plus closed-form Jacobian.
pub trait SmoothMap: Sync {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Vec<f64>;
    /// out_dim x in_dim derivative matrix at x.
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64>;
    fn as_affine(&self) -> Option<(&DMatrix<f64>, &DVector<f64>)> {
        None
    }
}

/// x -> A x + b.
pub struct AffineMap {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl AffineMap {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Self {
        AffineMap { a, b }
    }

    pub fn scaling(dim: usize, factor: f64) -> Self {
        AffineMap {
            a: DMatrix::identity(dim, dim) * factor,
            b: DVector::zeros(dim),
        }
    }
}

impl SmoothMap for AffineMap {
    fn in_dim(&self) -> usize {
        self.a.ncols()
    }
    fn out_dim(&self) -> usize {
        self.a.nrows()
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(x);
        (&self.a * v + &self.b).iter().copied().collect()
    }
    fn jacobian(&self, _x: &[f64]) -> DMatrix<f64> {
        self.a.clone()
    }
    fn as_affine(&self) -> Option<(&DMatrix<f64>, &DVector<f64>)> {
        Some((&self.a, &self.b))
    }
}

#[derive(Debug, Clone)]
pub struct PushforwardOptions {
    /// Edgewise subdivision depth for non-affine maps.
    pub subdivision: usize,
    /// Quadrature samples per input simplex for the mass estimate.
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for PushforwardOptions {
    fn default() -> Self {
        PushforwardOptions {
            subdivision: 3,
            samples: 2000,
            seed: 0,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PushforwardResult {
    pub chain: SimplicialChain,
    /// Quadrature estimate of the image mass (exact image mass for
    /// affine maps).
    pub mass_estimate: f64,
    pub sample_count: usize,
    /// Set when the Jacobian degenerated somewhere on the support; the
    /// estimate is still returned.
    pub singular_warning: bool,
}

pub fn pushforward(
    chain: &SimplicialChain,
    map: &dyn SmoothMap,
    opts: &PushforwardOptions,
) -> Result<PushforwardResult> {
    if map.in_dim() != chain.ambient.coord_dim() {
        return Err(Error::AmbientMismatch(format!(
            "map expects dimension {}, chain has {}",
            map.in_dim(),
            chain.ambient.coord_dim()
        )));
    }
    let out_ambient = Ambient::Euclidean {
        dim: map.out_dim(),
    };

    if map.as_affine().is_some() {
        let imgs: Vec<(Vec<Vec<f64>>, i64)> = chain
            .simplices()
            .iter()
            .map(|s| {
                (
                    s.verts.iter().map(|v| map.eval(v)).collect(),
                    s.c as i64,
                )
            })
            .collect();
        let image = build_filtering_degenerate(out_ambient, chain, imgs)?;
        let mass = image.mass();
        return Ok(PushforwardResult {
            chain: image,
            mass_estimate: mass,
            sample_count: 0,
            singular_warning: false,
        });
    }

    if chain.dim > 2 {
        return Err(Error::Unsupported(
            "pushforward subdivision implemented for chains of dimension <= 2".into(),
        ));
    }

    // Subdivide, then map vertexwise.
    let mut imgs: Vec<(Vec<Vec<f64>>, i64)> = Vec::new();
    for s in chain.simplices() {
        for piece in subdivide(s, opts.subdivision) {
            imgs.push((
                piece.verts.iter().map(|v| map.eval(v)).collect(),
                piece.c as i64,
            ));
        }
    }
    let image = build_filtering_degenerate(out_ambient, chain, imgs)?;

    // Quadrature of the k-Jacobian over each input simplex.
    let k = chain.dim;
    let weights: Vec<f64> = chain
        .simplices()
        .iter()
        .map(|s| crate::coeff::Coeff::new(s.c as i64, chain.p).weight() as f64)
        .collect();
    let per: Vec<(f64, bool)> = map_indexed(chain.simplices().len(), opts.exec, |i| {
        let s = &chain.simplices()[i];
        let mut rng = stratum_rng(opts.seed, i as u64);
        let vol = s.volume();
        let mut acc = 0.0;
        let mut singular = false;
        for _ in 0..opts.samples {
            let x = sample_simplex(s, &mut rng);
            let scale = k_jacobian_scale(map, s, &x, k);
            if !scale.is_finite() || scale <= 1e-14 {
                singular = true;
                continue;
            }
            acc += scale;
        }
        (weights[i] * vol * acc / opts.samples as f64, singular)
    });
    let mass_estimate: f64 = per.iter().map(|(m, _)| m).sum();
    let singular_warning = per.iter().any(|&(_, s)| s);

    Ok(PushforwardResult {
        chain: image,
        mass_estimate,
        sample_count: opts.samples * chain.simplices().len(),
        singular_warning,
    })
}

fn build_filtering_degenerate(
    ambient: Ambient,
    source: &SimplicialChain,
    imgs: Vec<(Vec<Vec<f64>>, i64)>,
) -> Result<SimplicialChain> {
    let kept: Vec<(Vec<Vec<f64>>, i64)> = imgs
        .into_iter()
        .filter(|(verts, _)| {
            let s = Simplex {
                verts: verts.clone(),
                c: 1,
            };
            s.dim() == 0 || s.volume() > crate::tol::TAU_VOL
        })
        .collect();
    SimplicialChain::new(ambient, source.p, false, source.dim, kept)
}

/// Ratio of image k-volume element to source k-volume element at x.
fn k_jacobian_scale(map: &dyn SmoothMap, s: &Simplex, x: &[f64], k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let d = s.verts[0].len();
    let edges = DMatrix::from_fn(d, k, |i, j| s.verts[j + 1][i] - s.verts[0][i]);
    let j = map.jacobian(x);
    let img = &j * &edges;
    let g_img = img.transpose() * img;
    let g_src = edges.transpose() * edges;
    let det_img = g_img.determinant().max(0.0);
    let det_src = g_src.determinant();
    (det_img / det_src).sqrt()
}

/// Edgewise subdivision, `depth` rounds. Segments halve; triangles split
/// into four congruent children.
fn subdivide(s: &Simplex, depth: usize) -> Vec<Simplex> {
    let mut current = vec![s.clone()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(current.len() * 4);
        for t in &current {
            match t.dim() {
                0 => next.push(t.clone()),
                1 => {
                    let m = midpoint(&t.verts[0], &t.verts[1]);
                    next.push(Simplex {
                        verts: vec![t.verts[0].clone(), m.clone()],
                        c: t.c,
                    });
                    next.push(Simplex {
                        verts: vec![m, t.verts[1].clone()],
                        c: t.c,
                    });
                }
                2 => {
                    let (a, b, c) = (&t.verts[0], &t.verts[1], &t.verts[2]);
                    let ab = midpoint(a, b);
                    let bc = midpoint(b, c);
                    let ca = midpoint(c, a);
                    for verts in [
                        vec![a.clone(), ab.clone(), ca.clone()],
                        vec![ab.clone(), b.clone(), bc.clone()],
                        vec![ca.clone(), bc.clone(), c.clone()],
                        vec![ab, bc, ca],
                    ] {
                        next.push(Simplex { verts, c: t.c });
                    }
                }
                _ => next.push(t.clone()),
            }
        }
        current = next;
    }
    current
}

fn midpoint(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Prime;

    fn seg() -> SimplicialChain {
        SimplicialChain::new(
            Ambient::Euclidean { dim: 2 },
            Prime::new(2).unwrap(),
            false,
            1,
            vec![(vec![vec![0.0, 0.0], vec![1.0, 0.0]], 1)],
        )
        .unwrap()
    }

    #[test]
    fn affine_isometry_preserves_mass() {
        let rot = AffineMap::new(
            DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
            DVector::from_column_slice(&[0.3, -0.4]),
        );
        let r = pushforward(&seg(), &rot, &PushforwardOptions::default()).unwrap();
        assert!((r.mass_estimate - 1.0).abs() < 1e-12);
        assert!(!r.singular_warning);
    }

    #[test]
    fn scaling_doubles_segment_mass() {
        let m = AffineMap::scaling(2, 2.0);
        let r = pushforward(&seg(), &m, &PushforwardOptions::default()).unwrap();
        assert!((r.mass_estimate - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nonlinear_map_estimates_match_finite_difference_oracle() {
        // x -> (x0, x1, x0^2) on a segment; oracle integrates the exact
        // length element sqrt(1 + 4 x0^2) by fine Riemann sum.
        struct Parab;
        impl SmoothMap for Parab {
            fn in_dim(&self) -> usize {
                2
            }
            fn out_dim(&self) -> usize {
                3
            }
            fn eval(&self, x: &[f64]) -> Vec<f64> {
                vec![x[0], x[1], x[0] * x[0]]
            }
            fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
                DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 2.0 * x[0], 0.0])
            }
        }
        let n = 200_000;
        let oracle: f64 = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) / n as f64;
                (1.0 + 4.0 * t * t).sqrt() / n as f64
            })
            .sum();
        let opts = PushforwardOptions {
            samples: 60_000,
            ..Default::default()
        };
        let r = pushforward(&seg(), &Parab, &opts).unwrap();
        assert!(
            (r.mass_estimate - oracle).abs() < 5e-3,
            "estimate {} vs oracle {}",
            r.mass_estimate,
            oracle
        );
    }
}
