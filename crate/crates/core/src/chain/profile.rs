//! Mass concentration profile: the supremal mass a family member puts
//! inside a ball of radius r, over all members and ball centers.

use super::{sample_simplex, SimplicialChain};
use crate::coeff::Coeff;
use crate::rng::stratum_rng;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct MassProfile {
    /// (radius, sup over members and centers of restricted mass).
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct ProfileConfig {
    /// Ball centers to scan. Empty means: every simplex vertex and
    /// barycenter of every member.
    pub centers: Vec<Vec<f64>>,
    /// Monte Carlo samples for 2-chain restrictions.
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            centers: Vec::new(),
            mc_samples: 4000,
            seed: 0,
        }
    }
}

pub fn mass_concentration_profile(
    family: &[SimplicialChain],
    radii: &[f64],
    config: &ProfileConfig,
) -> Result<MassProfile> {
    if family.is_empty() {
        return Err(Error::InvalidChain("empty family".into()));
    }
    let ambient = family[0].ambient;
    for f in family {
        ambient.require_same(&f.ambient)?;
    }
    let centers: Vec<Vec<f64>> = if config.centers.is_empty() {
        let mut c = Vec::new();
        for f in family {
            for s in f.simplices() {
                for v in &s.verts {
                    c.push(v.clone());
                }
                c.push(s.barycenter());
            }
        }
        c
    } else {
        config.centers.clone()
    };
    let mut out = Vec::with_capacity(radii.len());
    for (ri, &r) in radii.iter().enumerate() {
        let mut sup: f64 = 0.0;
        for f in family {
            for center in &centers {
                sup = sup.max(restricted_mass(f, center, r, config.mc_samples, config.seed ^ ri as u64)?);
            }
        }
        out.push((r, sup));
    }
    Ok(MassProfile { samples: out })
}

/// Mass of `chain` restricted to the closed Euclidean ball B(center, r).
fn restricted_mass(
    chain: &SimplicialChain,
    center: &[f64],
    r: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<f64> {
    let mut total = 0.0;
    for (i, s) in chain.simplices().iter().enumerate() {
        let w = Coeff::new(s.c as i64, chain.p).weight() as f64;
        total += w
            * match chain.dim {
                0 => {
                    let d2: f64 = s.verts[0]
                        .iter()
                        .zip(center)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    if d2 <= r * r {
                        1.0
                    } else {
                        0.0
                    }
                }
                1 => restricted_mass_segment(&s.verts[0], &s.verts[1], center, r),
                2 => {
                    // Monte Carlo area fraction inside the ball.
                    let mut rng = stratum_rng(seed, i as u64);
                    let mut hits = 0usize;
                    for _ in 0..mc_samples {
                        let x = sample_simplex(s, &mut rng);
                        let d2: f64 =
                            x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                        if d2 <= r * r {
                            hits += 1;
                        }
                    }
                    s.volume() * hits as f64 / mc_samples as f64
                }
                _ => {
                    return Err(Error::Unsupported(
                        "profile restriction implemented for chain dimension <= 2".into(),
                    ))
                }
            };
    }
    Ok(total)
}

/// Exact length of the segment from `a` to `b` inside the closed ball
/// B(center, r).
pub fn restricted_mass_segment(a: &[f64], b: &[f64], center: &[f64], r: f64) -> f64 {
    let d = a.len();
    let u: Vec<f64> = (0..d).map(|i| b[i] - a[i]).collect();
    let w: Vec<f64> = (0..d).map(|i| a[i] - center[i]).collect();
    let uu: f64 = u.iter().map(|x| x * x).sum();
    if uu == 0.0 {
        return 0.0;
    }
    let uw: f64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    // |w + t u|^2 = r^2
    let disc = uw * uw - uu * (ww - r * r);
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let t0 = ((-uw - sq) / uu).max(0.0);
    let t1 = ((-uw + sq) / uu).min(1.0);
    if t1 <= t0 {
        return 0.0;
    }
    (t1 - t0) * uu.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::Ambient;
    use crate::coeff::Prime;

    fn segment(a: [f64; 2], b: [f64; 2]) -> SimplicialChain {
        SimplicialChain::new(
            Ambient::Euclidean { dim: 2 },
            Prime::new(2).unwrap(),
            false,
            1,
            vec![(vec![a.to_vec(), b.to_vec()], 1)],
        )
        .unwrap()
    }

    #[test]
    fn large_ball_captures_total_mass() {
        let f = vec![segment([0.0, 0.0], [1.0, 0.0])];
        let prof =
            mass_concentration_profile(&f, &[2.0], &ProfileConfig::default()).unwrap();
        assert!((prof.samples[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_radius_gives_zero_for_positive_dimension() {
        let f = vec![segment([0.0, 0.0], [1.0, 0.0])];
        let prof =
            mass_concentration_profile(&f, &[0.0], &ProfileConfig::default()).unwrap();
        assert_eq!(prof.samples[0].1, 0.0);
    }

    #[test]
    fn far_apart_segments_capture_one_subsegment() {
        // Two unit segments 100 apart; a 0.1-ball centered mid-segment
        // captures length 0.2 from exactly one of them.
        let f = vec![
            segment([0.0, 0.0], [1.0, 0.0]),
            segment([100.0, 0.0], [101.0, 0.0]),
        ];
        let config = ProfileConfig {
            centers: vec![vec![0.5, 0.0], vec![100.5, 0.0]],
            ..Default::default()
        };
        let prof = mass_concentration_profile(&f, &[0.1], &config).unwrap();
        assert!((prof.samples[0].1 - 0.2).abs() < 1e-12);
    }

    #[test]
    fn profile_nondecreasing_and_bounded() {
        let f = vec![segment([0.0, 0.0], [1.0, 0.0]), segment([0.0, 0.5], [1.0, 0.5])];
        let radii = [0.05, 0.1, 0.2, 0.4, 0.8, 3.0];
        let prof = mass_concentration_profile(&f, &radii, &ProfileConfig::default()).unwrap();
        let total: f64 = f.iter().map(|c| c.mass()).sum();
        for w in prof.samples.windows(2) {
            assert!(w[0].1 <= w[1].1 + 1e-12);
        }
        for (_, chi) in &prof.samples {
            assert!(*chi <= total.max(1.0) + 1e-12);
        }
    }
}
