//! Shipped piecewise smooth families: the torus fiber bundle over the
//! circle, the projective family of perpendicular disks, and a point
//! transport family used to exercise the composition law.

use super::{Chart, CubicalFamily, FamilyCell};
use crate::ambient::Ambient;
use crate::chain::SimplicialChain;
use crate::coeff::Prime;
use crate::subspace::Subspace;
use crate::{Error, Result};

/// The fiber-bundle family of the projection T^2 = S^1 x S^1 -> S^1:
/// the parameter circle is triangulated into `n_base` arcs, each model
/// chain is the fiber polygon (an `n_fiber`-gon) over the arc anchor,
/// and the charts rotate the base coordinate plane. Gluing the base
/// fundamental cycle yields the product-polygon torus.
pub fn torus_bundle_family(p: Prime, n_base: usize, n_fiber: usize) -> Result<CubicalFamily> {
    if n_base < 3 || n_fiber < 3 {
        return Err(Error::InvalidChain(
            "torus family needs at least 3 base arcs and a 3-gon fiber".into(),
        ));
    }
    let ambient = Ambient::Euclidean { dim: 4 };
    let period = std::f64::consts::TAU;
    let fiber = |base_angle: f64| -> Result<SimplicialChain> {
        let verts: Vec<Vec<f64>> = (0..n_fiber)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / n_fiber as f64;
                vec![base_angle.cos(), base_angle.sin(), t.cos(), t.sin()]
            })
            .collect();
        let segs = (0..n_fiber)
            .map(|j| (vec![verts[j].clone(), verts[(j + 1) % n_fiber].clone()], 1))
            .collect();
        SimplicialChain::new(ambient, p, false, 1, segs)
    };
    let mut arcs = Vec::with_capacity(n_base);
    let mut vertices = Vec::with_capacity(n_base);
    for i in 0..n_base {
        let lo = period * i as f64 / n_base as f64;
        let hi = period * (i + 1) as f64 / n_base as f64;
        let anchor = 0.5 * (lo + hi);
        arcs.push(FamilyCell {
            lo,
            hi,
            anchor,
            chart: Chart::Rotation {
                plane: (0, 1),
                anchor,
            },
            model: fiber(anchor)?,
            faces: vec![i, (i + 1) % n_base],
        });
        vertices.push(FamilyCell {
            lo,
            hi: lo,
            anchor: lo,
            chart: Chart::Rotation {
                plane: (0, 1),
                anchor: lo,
            },
            model: fiber(lo)?,
            faces: vec![],
        });
    }
    Ok(CubicalFamily {
        p,
        ambient,
        period,
        arcs,
        vertices,
    })
}

/// The projective family for n = 1: the circle of unoriented lines in
/// R^2 (parameter period pi), each mapped to the perpendicular diameter
/// of the disk. Model chains are all the fixed diameter rotated by the
/// chart. For n >= 2 the family is returned as sampled subspace data via
/// [`rpn_line_to_disk`]; only n = 1 ships with a 1-dimensional gluing
/// structure.
pub fn rpn_family(p: Prime, n_arcs: usize) -> Result<CubicalFamily> {
    if p.get() != 2 {
        return Err(Error::InvalidChain(
            "the projective family is a mod 2 object".into(),
        ));
    }
    if n_arcs < 3 {
        return Err(Error::InvalidChain("need at least 3 arcs".into()));
    }
    let ambient = Ambient::Disk { dim: 2 };
    let period = std::f64::consts::PI;
    // Model at angle a: the diameter perpendicular to the line at angle
    // a, i.e. direction (cos(a+pi/2), sin(a+pi/2)), split in two
    // segments at the origin so vertex merging stays clean.
    let model_at = |a: f64| -> Result<SimplicialChain> {
        let d = [(a + period / 2.0).cos(), (a + period / 2.0).sin()];
        SimplicialChain::new(
            ambient,
            p,
            true,
            1,
            vec![
                (vec![vec![-d[0], -d[1]], vec![0.0, 0.0]], 1),
                (vec![vec![0.0, 0.0], vec![d[0], d[1]]], 1),
            ],
        )
    };
    let mut arcs = Vec::with_capacity(n_arcs);
    let mut vertices = Vec::with_capacity(n_arcs);
    for i in 0..n_arcs {
        let lo = period * i as f64 / n_arcs as f64;
        let hi = period * (i + 1) as f64 / n_arcs as f64;
        let anchor = 0.5 * (lo + hi);
        arcs.push(FamilyCell {
            lo,
            hi,
            anchor,
            chart: Chart::Rotation {
                plane: (0, 1),
                anchor,
            },
            model: model_at(anchor)?,
            faces: vec![i, (i + 1) % n_arcs],
        });
        vertices.push(FamilyCell {
            lo,
            hi: lo,
            anchor: lo,
            chart: Chart::Rotation {
                plane: (0, 1),
                anchor: lo,
            },
            model: model_at(lo)?,
            faces: vec![],
        });
    }
    Ok(CubicalFamily {
        p,
        ambient,
        period,
        arcs,
        vertices,
    })
}

/// The projective-family value for any n: the hyperplane disk
/// perpendicular to a line in R^{n+1}, as a subspace descriptor. This is
/// the model-chain identity "Z = Pi cap D^{n+1}" at arbitrary parameters
/// for the invariant checks at n in {1, 2, 3}.
pub fn rpn_line_to_disk(line_dir: &[f64]) -> Result<Subspace> {
    Subspace::line(line_dir)?.orth_complement()
}

/// Angle transport: the family x -> {x + shift} of 0-cycles of the
/// parameter circle itself, glued by translation charts. Its gluing
/// shifts parameter chains; composing it with another circle family
/// exercises the composition law.
pub fn point_transport_family(p: Prime, n_arcs: usize, shift: f64) -> Result<CubicalFamily> {
    let ambient = Ambient::Euclidean { dim: 1 };
    let period = std::f64::consts::TAU;
    let model_at = |a: f64| -> Result<SimplicialChain> {
        SimplicialChain::new(ambient, p, false, 0, vec![(vec![vec![a + shift]], 1)])
    };
    let mut arcs = Vec::with_capacity(n_arcs);
    let mut vertices = Vec::with_capacity(n_arcs);
    for i in 0..n_arcs {
        let lo = period * i as f64 / n_arcs as f64;
        let hi = period * (i + 1) as f64 / n_arcs as f64;
        let anchor = 0.5 * (lo + hi);
        arcs.push(FamilyCell {
            lo,
            hi,
            anchor,
            chart: Chart::Translation {
                direction: vec![1.0],
                anchor,
            },
            model: model_at(anchor)?,
            faces: vec![i, (i + 1) % n_arcs],
        });
        vertices.push(FamilyCell {
            lo,
            hi: lo,
            anchor: lo,
            chart: Chart::Translation {
                direction: vec![1.0],
                anchor: lo,
            },
            model: model_at(lo)?,
            faces: vec![],
        });
    }
    Ok(CubicalFamily {
        p,
        ambient,
        period,
        arcs,
        vertices,
    })
}
