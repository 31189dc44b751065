//! Coarea radius selection with boundary mass control: enlarge a ball
//! within [r, r+s] so that every chain in a family crosses its sphere
//! lightly and keeps little mass near it.

use super::GeneralizedBall;
use crate::chain::{restricted_mass_segment, SimplicialChain};
use crate::coeff::Coeff;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ChainCertificate {
    /// Weighted crossing count of the selected sphere.
    pub slice_mass: f64,
    /// (2 k^2 / s) M(tau_j).
    pub slice_bound: f64,
    /// Mass in the width-(s lambda / 4) annulus around the sphere.
    pub collar_mass: f64,
    /// lambda k M(tau_j).
    pub collar_bound: f64,
}

#[derive(Debug, Clone)]
pub struct CoareaCertificate {
    pub radius: f64,
    pub per_chain: Vec<ChainCertificate>,
    /// The annulus index the pigeonhole landed in.
    pub annulus: usize,
}

/// Pick a radius in [r, r+s] so that for every 1-chain in the family,
/// the crossing mass of the sphere is at most (2 k^2/s) M(tau_j) and the
/// mass within s lambda / 4 of the sphere is at most lambda k M(tau_j).
/// The search scans the L = ceil(1/lambda) annuli exactly: crossing
/// counts are piecewise constant in the radius with breakpoints at the
/// vertex and tangency radii.
pub fn coarea_select_radius(
    taus: &[SimplicialChain],
    ball: &GeneralizedBall,
    s: f64,
    lambda: f64,
) -> Result<CoareaCertificate> {
    let GeneralizedBall::Interior { center, radius: r } = ball else {
        return Err(Error::Unsupported(
            "coarea selection ships for interior balls".into(),
        ));
    };
    if !(0.0 < s && s <= *r) || !(0.0 < lambda && lambda < 1.0) {
        return Err(Error::InvalidChain(
            "need 0 < s <= r and 0 < lambda < 1".into(),
        ));
    }
    for t in taus {
        if t.dim != 1 {
            return Err(Error::Unsupported(
                "coarea selection ships for families of 1-chains".into(),
            ));
        }
    }
    let k = taus.len().max(1);
    let l = (1.0 / lambda).ceil() as usize;
    let masses: Vec<f64> = taus.iter().map(|t| t.mass()).collect();

    // Pigeonhole over the L annuli.
    let mut annulus = None;
    for a in 0..l {
        let lo = r + s * a as f64 / l as f64;
        let hi = r + s * (a + 1) as f64 / l as f64;
        let ratio: f64 = taus
            .iter()
            .zip(&masses)
            .map(|(t, &m)| {
                if m == 0.0 {
                    0.0
                } else {
                    annulus_mass(t, center, lo, hi) / m
                }
            })
            .sum();
        if ratio <= k as f64 / l as f64 + 1e-12 {
            annulus = Some(a);
            break;
        }
    }
    let Some(a) = annulus else {
        // The pigeonhole guarantees existence; reaching this is a
        // numerical-resolution failure worth reporting loudly.
        let margins: Vec<f64> = (0..l)
            .map(|a| {
                let lo = r + s * a as f64 / l as f64;
                let hi = r + s * (a + 1) as f64 / l as f64;
                taus.iter()
                    .zip(&masses)
                    .map(|(t, &m)| {
                        if m == 0.0 {
                            0.0
                        } else {
                            annulus_mass(t, center, lo, hi) / m
                        }
                    })
                    .sum()
            })
            .collect();
        return Err(Error::InvalidChain(format!(
            "no admissible annulus at this resolution; ratios {margins:?}"
        )));
    };

    // Middle half of the chosen annulus; scan breakpoint-free intervals
    // of the crossing function.
    let lo = r + s * (a as f64 + 0.25) / l as f64;
    let hi = r + s * (a as f64 + 0.75) / l as f64;
    let mut cuts = vec![lo, hi];
    for t in taus {
        for seg in t.simplices() {
            for v in &seg.verts {
                let d = crate::ambient::euclidean(v, center);
                if d > lo && d < hi {
                    cuts.push(d);
                }
            }
            if let Some(d) = tangency_radius(&seg.verts[0], &seg.verts[1], center) {
                if d > lo && d < hi {
                    cuts.push(d);
                }
            }
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    let crossing_ratio = |t: f64| -> f64 {
        taus.iter()
            .zip(&masses)
            .map(|(tau, &m)| {
                if m == 0.0 {
                    0.0
                } else {
                    crossing_mass(tau, center, t) / m
                }
            })
            .sum()
    };
    let budget = 2.0 * k as f64 / s;
    let mut chosen = None;
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if crossing_ratio(mid) <= budget + 1e-12 {
            chosen = Some(mid);
            break;
        }
    }
    let Some(radius) = chosen else {
        return Err(Error::InvalidChain(format!(
            "no crossing-light radius inside annulus {a} (finest margin {})",
            cuts.windows(2)
                .map(|w| crossing_ratio(0.5 * (w[0] + w[1])))
                .fold(f64::INFINITY, f64::min)
        )));
    };

    let width = s * lambda / 4.0;
    let per_chain: Vec<ChainCertificate> = taus
        .iter()
        .zip(&masses)
        .map(|(t, &m)| {
            let slice_mass = crossing_mass(t, center, radius);
            let collar_mass = annulus_mass(t, center, radius - width, radius + width);
            ChainCertificate {
                slice_mass,
                slice_bound: 2.0 * (k * k) as f64 / s * m,
                collar_mass,
                collar_bound: lambda * k as f64 * m,
            }
        })
        .collect();
    for (j, c) in per_chain.iter().enumerate() {
        if c.slice_mass > c.slice_bound + 1e-9 {
            return Err(Error::InvalidChain(format!(
                "chain {j}: slice mass {} beats bound {}",
                c.slice_mass, c.slice_bound
            )));
        }
        if c.collar_mass > c.collar_bound + 1e-9 {
            return Err(Error::InvalidChain(format!(
                "chain {j}: collar mass {} beats bound {}",
                c.collar_mass, c.collar_bound
            )));
        }
    }
    Ok(CoareaCertificate {
        radius,
        per_chain,
        annulus: a,
    })
}

/// Weighted number of transversal crossings of the radius-t sphere:
/// the 0-dimensional slice mass of a 1-chain.
fn crossing_mass(t: &SimplicialChain, center: &[f64], radius: f64) -> f64 {
    let mut total = 0.0;
    for seg in t.simplices() {
        let w = Coeff::new(seg.c as i64, t.p).weight() as f64;
        let d0 = crate::ambient::euclidean(&seg.verts[0], center);
        let d1 = crate::ambient::euclidean(&seg.verts[1], center);
        // Count sign changes of |x(t)| - radius along the segment; the
        // distance along a segment is unimodal (single minimum), so at
        // most two crossings.
        let dmin = segment_min_dist(&seg.verts[0], &seg.verts[1], center);
        let (lo, hi) = (d0.min(d1), d0.max(d1));
        let crossings = if radius < dmin || radius > hi {
            0
        } else if radius >= lo {
            1
        } else {
            2
        };
        total += w * crossings as f64;
    }
    total
}

fn annulus_mass(t: &SimplicialChain, center: &[f64], lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    for seg in t.simplices() {
        let w = Coeff::new(seg.c as i64, t.p).weight() as f64;
        let outer = restricted_mass_segment(&seg.verts[0], &seg.verts[1], center, hi);
        let inner = if lo > 0.0 {
            restricted_mass_segment(&seg.verts[0], &seg.verts[1], center, lo)
        } else {
            0.0
        };
        total += w * (outer - inner).max(0.0);
    }
    total
}

fn segment_min_dist(a: &[f64], b: &[f64], center: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ac: Vec<f64> = a.iter().zip(center).map(|(x, y)| y - x).collect();
    let denom: f64 = ab.iter().map(|v| v * v).sum();
    let t = if denom == 0.0 {
        0.0
    } else {
        (ab.iter().zip(&ac).map(|(u, v)| u * v).sum::<f64>() / denom).clamp(0.0, 1.0)
    };
    let proj: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + t * d).collect();
    crate::ambient::euclidean(&proj, center)
}

/// Radius at which the sphere is tangent to the segment's line, if the
/// closest point is interior to the segment.
fn tangency_radius(a: &[f64], b: &[f64], center: &[f64]) -> Option<f64> {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ac: Vec<f64> = a.iter().zip(center).map(|(x, y)| y - x).collect();
    let denom: f64 = ab.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return None;
    }
    let t = ab.iter().zip(&ac).map(|(u, v)| u * v).sum::<f64>() / denom;
    if !(0.0..=1.0).contains(&t) {
        return None;
    }
    let proj: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + t * d).collect();
    Some(crate::ambient::euclidean(&proj, center))
}
