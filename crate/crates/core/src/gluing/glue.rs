//! The standard gluing of a piecewise smooth family over a circle of
//! parameters: clip the parameter chain to the cells, sweep each model
//! chain along the clipped pieces through the charts, and triangulate
//! the product pieces consistently so that the boundary commutes.

use super::CubicalFamily;
use crate::chain::SimplicialChain;
use crate::tol;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct GluedChain {
    pub chain: SimplicialChain,
    /// Mass amplification constant: max over cells of chart Lipschitz
    /// constant times model mass; mass(glued) <= C mass(T).
    pub constant: f64,
    /// Vertex perturbations applied to reach general position, if any:
    /// (simplex index, vertex index, delta).
    pub perturbation: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct GluingOptions {
    /// Sweep subdivision steps per clipped parameter piece.
    pub steps_per_piece: usize,
    /// Perturb non-transversal chains into general position instead of
    /// erroring; the perturbation is recorded.
    pub perturb_seed: Option<u64>,
}

impl Default for GluingOptions {
    fn default() -> Self {
        GluingOptions {
            steps_per_piece: 8,
            perturb_seed: None,
        }
    }
}

/// Glue a parameter chain (0- or 1-dimensional, in angle coordinates,
/// ambient Euclidean of dimension 1) through the family.
pub fn standard_gluing(
    fam: &CubicalFamily,
    t: &SimplicialChain,
    opts: &GluingOptions,
) -> Result<GluedChain> {
    if t.p != fam.p {
        return Err(Error::ModulusMismatch(t.p.get(), fam.p.get()));
    }
    if t.ambient.coord_dim() != 1 {
        return Err(Error::AmbientMismatch(
            "parameter chains use 1-dimensional angle coordinates".into(),
        ));
    }
    if t.dim > 1 {
        return Err(Error::Unsupported(
            "gluing over a circle accepts chains of dimension 0 or 1".into(),
        ));
    }
    // The chain-map property needs model relative cycles: a model with
    // boundary sweeps its endpoints into extra boundary the parameter
    // chain knows nothing about.
    for (i, arc) in fam.arcs.iter().enumerate() {
        if arc.model.dim >= 1 && !arc.model.boundary()?.is_zero() {
            return Err(Error::InvalidChain(format!(
                "model chain of cell {i} is not a relative cycle"
            )));
        }
    }
    let constant = fam.gluing_constant();

    // 0-chains glue pointwise: glue(x) = f(x).
    if t.dim == 0 {
        let mut acc: Option<SimplicialChain> = None;
        for s in t.simplices() {
            let val = fam.eval(s.verts[0][0])?.scale(s.c as i64);
            acc = Some(match acc {
                None => val,
                Some(a) => a.add(&val)?,
            });
        }
        let model_dim = fam.arcs[0].model.dim;
        let chain = acc.unwrap_or_else(|| {
            SimplicialChain::empty(fam.ambient, fam.p, false, model_dim)
        });
        return Ok(GluedChain {
            chain,
            constant,
            perturbation: Vec::new(),
        });
    }

    // Transversality: no segment endpoint may sit on a cell boundary.
    let mut segments: Vec<(f64, f64, i64)> = t
        .simplices()
        .iter()
        .map(|s| (s.verts[0][0], s.verts[1][0], s.c as i64))
        .collect();
    let mut perturbation = Vec::new();
    let offenders = non_transversal(fam, &segments);
    if !offenders.is_empty() {
        match opts.perturb_seed {
            None => {
                return Err(Error::NonTransversal(format!(
                    "{} segment endpoints lie on cell boundaries (pass a perturbation seed to nudge them)",
                    offenders.len()
                )))
            }
            Some(seed) => {
                use rand::Rng;
                let mut rng = crate::rng::stratum_rng(seed, 0x9e);
                for (si, vi) in offenders {
                    let delta = 1e-7 * (rng.gen::<f64>() - 0.5);
                    if vi == 0 {
                        segments[si].0 += delta;
                    } else {
                        segments[si].1 += delta;
                    }
                    perturbation.push((si, vi, delta));
                }
                if !non_transversal(fam, &segments).is_empty() {
                    return Err(Error::NonTransversal(
                        "perturbation failed to reach general position".into(),
                    ));
                }
            }
        }
    }

    let model_dim = fam.arcs[0].model.dim;
    if model_dim > 1 {
        return Err(Error::Unsupported(
            "model chains of dimension <= 1 are supported".into(),
        ));
    }
    let out_dim = 1 + model_dim;
    for &(a, b, _) in &segments {
        if (a - b).abs() >= fam.period {
            return Err(Error::InvalidChain(
                "parameter segment longer than the period".into(),
            ));
        }
    }
    // Sweep the pieces in parallel and merge in segment order, so the
    // output is identical for every worker count.
    let per_segment: Vec<Vec<(Vec<Vec<f64>>, i64)>> =
        crate::exec::map_indexed(segments.len(), crate::exec::Exec::Parallel, |si| {
            let (a, b, c) = segments[si];
            let (lo, hi, c) = if a <= b { (a, b, c) } else { (b, a, -c) };
            let mut out: Vec<(Vec<Vec<f64>>, i64)> = Vec::new();
            for (plo, phi, arc_idx) in clip_to_arcs(fam, lo, hi) {
                let arc = &fam.arcs[arc_idx];
                let steps = opts.steps_per_piece.max(1);
                for s in 0..steps {
                    let s0 = plo + (phi - plo) * s as f64 / steps as f64;
                    let s1 = plo + (phi - plo) * (s + 1) as f64 / steps as f64;
                    for m in arc.model.simplices() {
                        let cc = c * m.c as i64;
                        match model_dim {
                            0 => {
                                let q0 = arc.chart.apply(s0, &m.verts[0]);
                                let q1 = arc.chart.apply(s1, &m.verts[0]);
                                out.push((vec![q0, q1], cc));
                            }
                            _ => {
                                let p00 = arc.chart.apply(s0, &m.verts[0]);
                                let p01 = arc.chart.apply(s0, &m.verts[1]);
                                let p10 = arc.chart.apply(s1, &m.verts[0]);
                                let p11 = arc.chart.apply(s1, &m.verts[1]);
                                // Shuffle triangulation of the parameter
                                // square, consistent across pieces.
                                out.push((vec![p00.clone(), p10, p11.clone()], cc));
                                out.push((vec![p00, p01, p11], -cc));
                            }
                        }
                    }
                }
            }
            out
        });
    let out: Vec<(Vec<Vec<f64>>, i64)> = per_segment.into_iter().flatten().collect();
    let kept: Vec<(Vec<Vec<f64>>, i64)> = out
        .into_iter()
        .filter(|(verts, _)| {
            let s = crate::chain::Simplex {
                verts: verts.clone(),
                c: 1,
            };
            s.dim() == 0 || s.volume() > tol::TAU_VOL
        })
        .collect();
    // The glued chain is relative exactly when the family's values are:
    // model chains relative to the ambient boundary sweep into chains
    // relative to it.
    let relative = fam.arcs[0].model.relative;
    let chain = SimplicialChain::new(fam.ambient, fam.p, relative, out_dim, kept)?;
    Ok(GluedChain {
        chain,
        constant,
        perturbation,
    })
}

/// Mass of d(glue T) - glue(dT): the chain-map defect, which must vanish
/// to vertex-position precision.
pub fn boundary_defect(
    fam: &CubicalFamily,
    t: &SimplicialChain,
    opts: &GluingOptions,
) -> Result<f64> {
    let glued = standard_gluing(fam, t, opts)?;
    let lhs = glued.chain.boundary()?;
    let dt = t.boundary()?;
    let rhs = standard_gluing(fam, &dt, opts)?.chain;
    Ok(lhs.sub(&rhs)?.mass())
}

fn non_transversal(fam: &CubicalFamily, segments: &[(f64, f64, i64)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (si, &(a, b, _)) in segments.iter().enumerate() {
        for (vi, x) in [(0usize, a), (1usize, b)] {
            let w = fam.wrap(x);
            let on_boundary = fam
                .arcs
                .iter()
                .any(|arc| (w - arc.lo).abs() < 1e-9 || (w - arc.hi).abs() < 1e-9);
            if on_boundary {
                out.push((si, vi));
            }
        }
    }
    out
}

/// Split [lo, hi] (hi - lo < period) into maximal pieces inside arcs,
/// returned in unwrapped coordinates of the original segment.
fn clip_to_arcs(fam: &CubicalFamily, lo: f64, hi: f64) -> Vec<(f64, f64, usize)> {
    let mut cuts = vec![lo, hi];
    for arc in &fam.arcs {
        // Arc boundaries lifted near [lo, hi].
        for b in [arc.lo, arc.hi] {
            let mut x = b + fam.period * ((lo - b) / fam.period).floor();
            while x <= hi + 1e-12 {
                if x >= lo - 1e-12 && x > lo + 1e-12 && x < hi - 1e-12 {
                    cuts.push(x);
                }
                x += fam.period;
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-12 {
            continue;
        }
        let mid = fam.wrap(0.5 * (a + b));
        let arc_idx = fam
            .arcs
            .iter()
            .position(|arc| mid >= arc.lo && mid <= arc.hi)
            .unwrap_or(0);
        out.push((a, b, arc_idx));
    }
    out
}
