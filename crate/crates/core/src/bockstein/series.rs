//! Diagonal-excision mass series for polyhedral cycles: Monte Carlo
//! estimates of the mass of f(R^p restricted away from the diagonal) and
//! of its boundary slices, at radii 1/i.

use crate::ambient::Ambient;
use crate::chain::SimplicialChain;
use crate::exec::{map_indexed, Exec};
use crate::fourier::DiagonalExcisionMap;
use crate::rng::stratum_rng;
use crate::{Error, Result};
use nalgebra::DVector;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct SeriesOptions {
    pub i_max: usize,
    /// Total surface samples, split across simplex pairs.
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            i_max: 16,
            samples: 1_000_000,
            seed: 7,
            exec: Exec::Parallel,
        }
    }
}

/// Least-squares fit of the Cauchy tail M_{2i} - M_i against C/i.
#[derive(Debug, Clone)]
pub struct CauchyFit {
    pub c: f64,
    pub r_squared: f64,
    /// (i, M_{2i} - M_i) pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct DiagonalExcisionSeries {
    /// Excision radii 1/i, i = 1..=i_max.
    pub radii: Vec<f64>,
    /// Estimated M(S_i).
    pub mass: Vec<f64>,
    /// Estimated M(dS_i) = mass of the image of the diagonal-distance
    /// level slice.
    pub boundary_mass: Vec<f64>,
    pub cauchy_fit: CauchyFit,
    /// max_i B_i / M(R).
    pub boundary_ratio_max: f64,
    /// Smallest C with M_i <= M(R)^p / r_i^{pk} + C r_i M(R) across the
    /// series (0 when the excision term alone dominates).
    pub mass_bound_constant: f64,
    pub input_mass: f64,
    pub seed: u64,
    pub samples: usize,
}

/// Estimate the excised cyclic-product masses of a polyhedral 1-cycle on
/// a sphere, p = 2.
pub fn cyc_poly_mass_series(
    r: &SimplicialChain,
    opts: &SeriesOptions,
) -> Result<DiagonalExcisionSeries> {
    let n = match r.ambient {
        Ambient::Sphere { dim } => dim,
        other => {
            return Err(Error::AmbientMismatch(format!(
                "cycle must live on a sphere, got {other:?}"
            )))
        }
    };
    if r.p.get() != 2 || r.dim != 1 {
        return Err(Error::Unsupported(
            "mass series implemented for p = 2, 1-cycles (the shipped compute budget)".into(),
        ));
    }
    if r.is_zero() {
        return Ok(zero_series(opts));
    }
    if !r.boundary()?.is_zero() {
        return Err(Error::InvalidChain("input is not a cycle mod p".into()));
    }
    let segs: Vec<(&[f64], &[f64])> = r
        .simplices()
        .iter()
        .map(|s| (s.verts[0].as_slice(), s.verts[1].as_slice()))
        .collect();
    let n_pairs = segs.len() * segs.len();
    if n_pairs == 0 {
        return Ok(zero_series(opts));
    }
    let per_pair = opts.samples.div_ceil(n_pairs).max(16);
    if n_pairs as u64 * per_pair as u64 > 200_000_000 {
        return Err(Error::BudgetExceeded(format!(
            "{n_pairs} simplex pairs x {per_pair} samples"
        )));
    }
    let map = DiagonalExcisionMap::new(r.p, n);
    let i_max = opts.i_max.max(1);

    // Per pair: bucketed surface mass (bucket j holds mass with first
    // contributing index j) and per-level boundary slice mass.
    let partials: Vec<(Vec<f64>, Vec<f64>)> = map_indexed(n_pairs, opts.exec, |pair| {
        let (ai, bi) = (pair / segs.len(), pair % segs.len());
        let (a0, a1) = segs[ai];
        let (b0, b1) = segs[bi];
        let mut rng = stratum_rng(opts.seed, pair as u64);
        let m = n + 1;
        let u: Vec<f64> = (0..m).map(|k| a1[k] - a0[k]).collect();
        let v: Vec<f64> = (0..m).map(|k| b1[k] - b0[k]).collect();

        let mut buckets = vec![0.0f64; i_max + 1];
        let mut x = vec![0.0f64; 2 * m];
        // Surface mass by uniform sampling of the parameter square.
        for _ in 0..per_pair {
            let s: f64 = rng.gen();
            let t: f64 = rng.gen();
            for k in 0..m {
                x[k] = a0[k] + s * u[k];
                x[m + k] = b0[k] + t * v[k];
            }
            let delta = diag_dist_p2(&x, m);
            if delta <= 0.0 {
                continue;
            }
            let jac = map.jacobian_full(&x);
            let (ta, tb) = tangents(&jac, &u, &v, m);
            let area = gram_area(&ta, &tb);
            // Contributes to M_i for every i >= 1/delta.
            let first = (1.0 / delta).ceil() as usize;
            if first <= i_max {
                buckets[first.max(1)] += area / per_pair as f64;
            }
        }

        // Boundary slices: for each level 1/i, integrate the image length
        // of the curve delta(s, t) = 1/i by sampling s and solving the
        // quadratic in t.
        let mut slices = vec![0.0f64; i_max + 1];
        let slice_samples = per_pair / 4 + 8;
        for i in 1..=i_max {
            let level = 1.0 / i as f64;
            let rhs = 2.0 * level * level; // |x1 - x2|^2 on the level set
            let mut acc = 0.0;
            for _ in 0..slice_samples {
                let s: f64 = rng.gen();
                // w(s) = a(s) - b0, solve |w - t v|^2 = rhs.
                let mut w = vec![0.0f64; m];
                for k in 0..m {
                    w[k] = a0[k] + s * u[k] - b0[k];
                }
                let vv: f64 = v.iter().map(|z| z * z).sum();
                let wv: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
                let ww: f64 = w.iter().map(|z| z * z).sum();
                let disc = wv * wv - vv * (ww - rhs);
                if disc <= 0.0 || vv == 0.0 {
                    continue;
                }
                let sq = disc.sqrt();
                for t in [(wv - sq) / vv, (wv + sq) / vv] {
                    if !(0.0..=1.0).contains(&t) {
                        continue;
                    }
                    for k in 0..m {
                        x[k] = a0[k] + s * u[k];
                        x[m + k] = b0[k] + t * v[k];
                    }
                    // dt/ds along the level curve.
                    let mut res = vec![0.0f64; m];
                    for k in 0..m {
                        res[k] = w[k] - t * v[k];
                    }
                    let ru: f64 = res.iter().zip(&u).map(|(a, b)| a * b).sum();
                    let rv: f64 = res.iter().zip(&v).map(|(a, b)| a * b).sum();
                    if rv.abs() < 1e-12 {
                        continue; // tangency, measure zero
                    }
                    let tprime = ru / rv;
                    let jac = map.jacobian_full(&x);
                    let (ta, tb) = tangents(&jac, &u, &v, m);
                    let g: Vec<f64> = ta
                        .iter()
                        .zip(&tb)
                        .map(|(a, b)| a + tprime * b)
                        .collect();
                    let glen: f64 = g.iter().map(|z| z * z).sum::<f64>().sqrt();
                    acc += glen / slice_samples as f64;
                }
            }
            slices[i] = acc;
        }
        (buckets, slices)
    });

    let mut buckets = vec![0.0f64; i_max + 1];
    let mut slices = vec![0.0f64; i_max + 1];
    for (b, s) in &partials {
        for i in 0..=i_max {
            buckets[i] += b[i];
            slices[i] += s[i];
        }
    }
    let mut mass = Vec::with_capacity(i_max);
    let mut acc = 0.0;
    let mut radii = Vec::with_capacity(i_max);
    for (i, b) in buckets.iter().enumerate().take(i_max + 1).skip(1) {
        acc += b;
        mass.push(acc);
        radii.push(1.0 / i as f64);
    }
    let boundary_mass: Vec<f64> = (1..=i_max).map(|i| slices[i]).collect();

    let input_mass = r.mass();
    let mut points = Vec::new();
    for i in 1..=i_max / 2 {
        let y = mass[2 * i - 1] - mass[i - 1];
        points.push((i as f64, y));
    }
    let cauchy_fit = fit_inverse(&points);
    let boundary_ratio_max = boundary_mass
        .iter()
        .fold(0.0f64, |m, &b| m.max(b / input_mass.max(1e-300)));
    // p = 2, k = 1: the excision bound reads M_i <= M(R)^2/r_i^2 + C r_i M(R).
    let mass_bound_constant = radii
        .iter()
        .zip(&mass)
        .map(|(&r, &m)| (m - input_mass * input_mass / (r * r)) / (r * input_mass.max(1e-300)))
        .fold(0.0f64, f64::max);

    Ok(DiagonalExcisionSeries {
        radii,
        mass,
        boundary_mass,
        cauchy_fit,
        boundary_ratio_max,
        mass_bound_constant,
        input_mass,
        seed: opts.seed,
        samples: opts.samples,
    })
}

fn zero_series(opts: &SeriesOptions) -> DiagonalExcisionSeries {
    let i_max = opts.i_max.max(1);
    DiagonalExcisionSeries {
        radii: (1..=i_max).map(|i| 1.0 / i as f64).collect(),
        mass: vec![0.0; i_max],
        boundary_mass: vec![0.0; i_max],
        cauchy_fit: CauchyFit {
            c: 0.0,
            r_squared: 1.0,
            points: Vec::new(),
        },
        boundary_ratio_max: 0.0,
        mass_bound_constant: 0.0,
        input_mass: 0.0,
        seed: opts.seed,
        samples: opts.samples,
    }
}

/// |x1 - x2| / sqrt(2): the diagonal-distance coordinate for p = 2.
fn diag_dist_p2(x: &[f64], m: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..m {
        let d = x[k] - x[m + k];
        s += d * d;
    }
    (s / 2.0).sqrt()
}

fn tangents(
    jac: &nalgebra::DMatrix<f64>,
    u: &[f64],
    v: &[f64],
    m: usize,
) -> (Vec<f64>, Vec<f64>) {
    let mut du = DVector::zeros(2 * m);
    let mut dv = DVector::zeros(2 * m);
    for k in 0..m {
        du[k] = u[k];
        dv[m + k] = v[k];
    }
    let ta = jac * du;
    let tb = jac * dv;
    (
        ta.iter().copied().collect(),
        tb.iter().copied().collect(),
    )
}

fn gram_area(a: &[f64], b: &[f64]) -> f64 {
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let bb: f64 = b.iter().map(|x| x * x).sum();
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (aa * bb - ab * ab).max(0.0).sqrt()
}

/// Fit y = c/x through the given points; r_squared against the mean.
fn fit_inverse(points: &[(f64, f64)]) -> CauchyFit {
    if points.is_empty() {
        return CauchyFit {
            c: 0.0,
            r_squared: 1.0,
            points: Vec::new(),
        };
    }
    let num: f64 = points.iter().map(|(x, y)| y / x).sum();
    let den: f64 = points.iter().map(|(x, _)| 1.0 / (x * x)).sum();
    let c = num / den;
    let mean: f64 = points.iter().map(|(_, y)| y).sum::<f64>() / points.len() as f64;
    let ss_res: f64 = points.iter().map(|(x, y)| (y - c / x).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    CauchyFit {
        c,
        r_squared,
        points: points.to_vec(),
    }
}

/// The equatorial regular polygon on S^2 as a mod-2 cycle.
pub fn equatorial_polygon(n_gon: usize, sphere_dim: usize) -> SimplicialChain {
    let verts: Vec<Vec<f64>> = (0..n_gon)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n_gon as f64;
            let mut v = vec![0.0; sphere_dim + 1];
            v[0] = t.cos();
            v[1] = t.sin();
            v
        })
        .collect();
    let segs = (0..n_gon)
        .map(|i| (vec![verts[i].clone(), verts[(i + 1) % n_gon].clone()], 1))
        .collect();
    SimplicialChain::new(
        Ambient::Sphere { dim: sphere_dim },
        crate::coeff::Prime::new(2).unwrap(),
        false,
        1,
        segs,
    )
    .unwrap()
}
