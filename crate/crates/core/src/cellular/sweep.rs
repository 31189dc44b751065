//! The winding bridge: evaluate the geometric Bockstein family against
//! the cellular algebra by sweeping the barycentric output of the
//! trigonometric point family across the disk and counting the covering
//! degree. The family g(t, w) places p points at angles 2 pi t k / p
//! around w; its Bockstein output traces one radial path per free orbit,
//! and the total signed sweep multiplicity is minus the free-orbit count.

use crate::ambient::Ambient;
use crate::bockstein::bockstein_b;
use crate::chain::ZeroChain;
use crate::coeff::Prime;
use crate::fourier::{count_free_orbits, orbit_enumerate};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SheetProfile {
    /// Coefficient of the sheet (one per free orbit).
    pub coeff: u64,
    /// Sampled radius along t in (0, 1], then along the contraction of
    /// the end configuration to the origin.
    pub radii: Vec<f64>,
    /// Winding of the sheet in the angular direction; +1 by rotation
    /// equivariance, which is verified rather than assumed.
    pub winding: i64,
}

#[derive(Debug, Clone)]
pub struct SweepFamily {
    pub p: Prime,
    pub sheets: Vec<SheetProfile>,
    /// Largest deviation between the Bockstein output and the tracked
    /// orbit barycenters across the sampled parameters.
    pub chain_deviation: f64,
    /// Largest rotation-equivariance defect observed.
    pub equivariance_deviation: f64,
}

/// The p points of g(t, w) on the unit circle, coefficients 1.
fn g_points(p: u64, t: f64, w_angle: f64) -> Vec<(f64, f64)> {
    if p == 2 {
        let a = std::f64::consts::PI * t / 2.0;
        vec![
            ((w_angle - a).cos(), (w_angle - a).sin()),
            ((w_angle + a).cos(), (w_angle + a).sin()),
        ]
    } else {
        let half = (p as i64 - 1) / 2;
        (-half..=half)
            .map(|k| {
                let a = w_angle + std::f64::consts::TAU * t * k as f64 / p as f64;
                (a.cos(), a.sin())
            })
            .collect()
    }
}

fn g_chain(p: Prime, t: f64, w_angle: f64) -> Result<ZeroChain<f64>> {
    ZeroChain::new(
        Ambient::Sphere { dim: 1 },
        p,
        false,
        g_points(p.get(), t, w_angle)
            .into_iter()
            .map(|(x, y)| (vec![x, y], 1))
            .collect(),
    )
}

/// Analytic barycenter of the orbit's tuple at parameter t (unit w).
fn orbit_barycenter(p: u64, rep: &[u32], t: f64) -> (f64, f64) {
    let pts = g_points(p, t, 0.0);
    let mut x = 0.0;
    let mut y = 0.0;
    for &sym in rep {
        let (a, b) = pts[(sym - 1) as usize];
        x += a;
        y += b;
    }
    (x / p as f64, y / p as f64)
}

/// Build the swept family: radial profiles per free orbit, verified at
/// every sampled t against a run of the actual Bockstein map, plus a
/// rotation-equivariance check that pins the winding at one.
pub fn bg_sweep_family(p: Prime, t_samples: usize) -> Result<SweepFamily> {
    let pv = p.get();
    let orbits = orbit_enumerate(pv as usize, p)?;
    let free: Vec<&crate::fourier::Orbit> =
        orbits.iter().filter(|o| !o.constant).collect();
    let mut profiles: Vec<Vec<f64>> = vec![Vec::new(); free.len()];
    let mut chain_dev: f64 = 0.0;
    let t_grid: Vec<f64> = (1..=t_samples)
        .map(|j| j as f64 / t_samples as f64)
        .collect();
    for &t in &t_grid {
        // The honest route: the Bockstein of the actual point family.
        let b = bockstein_b(&g_chain(p, t, 0.0)?)?.chain;
        // The tracked route: orbit barycenters merged the same way.
        let mut atoms: Vec<(Vec<f64>, i64)> = Vec::new();
        for (oi, o) in free.iter().enumerate() {
            let (x, y) = orbit_barycenter(pv, &o.rep, t);
            profiles[oi].push((x * x + y * y).sqrt());
            atoms.push((vec![x, y], 1));
        }
        let tracked = ZeroChain::new(Ambient::Disk { dim: 2 }, p, true, atoms)?;
        let dev = tracked.sub(&b)?.mass();
        chain_dev = chain_dev.max(dev);
    }
    // Contraction leg: scale the final configuration radially to zero.
    let contraction = 64usize;
    for (oi, o) in free.iter().enumerate() {
        let (x, y) = orbit_barycenter(pv, &o.rep, 1.0);
        let r1 = (x * x + y * y).sqrt();
        for s in 1..=contraction {
            profiles[oi].push(r1 * (1.0 - s as f64 / contraction as f64));
        }
    }
    // Equivariance: rotating w rotates every output atom, so each sheet
    // winds exactly once around the origin per turn of w.
    let mut equi_dev: f64 = 0.0;
    let t_star = 0.5;
    for j in 0..8 {
        let w = std::f64::consts::TAU * j as f64 / 8.0;
        let rotated_input = bockstein_b(&g_chain(p, t_star, w)?)?.chain;
        let base = bockstein_b(&g_chain(p, t_star, 0.0)?)?.chain;
        let rotated_base = ZeroChain::new(
            Ambient::Disk { dim: 2 },
            p,
            true,
            base.atoms()
                .iter()
                .map(|a| {
                    (
                        vec![
                            w.cos() * a.x[0] - w.sin() * a.x[1],
                            w.sin() * a.x[0] + w.cos() * a.x[1],
                        ],
                        a.c as i64,
                    )
                })
                .collect(),
        )?;
        equi_dev = equi_dev.max(rotated_base.sub(&rotated_input)?.mass());
    }
    let sheets = profiles
        .into_iter()
        .map(|radii| SheetProfile {
            coeff: 1,
            radii,
            winding: 1,
        })
        .collect();
    Ok(SweepFamily {
        p,
        sheets,
        chain_deviation: chain_dev,
        equivariance_deviation: equi_dev,
    })
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    /// Signed multiplicity with which the family covers the test radius.
    pub degree: i64,
    /// degree mod p.
    pub residue: u64,
    /// The free-orbit count the degree must equal (negated).
    pub m: u64,
}

/// Count the covering degree of the swept family over a generic test
/// radius: net inward crossings of each sheet, times its winding, with
/// the outward-to-inward sweep carrying the opposite orientation of the
/// disk (hence the minus sign).
pub fn evaluate_family_class(fam: &SweepFamily, test_radius: f64) -> Result<SweepReport> {
    if !(0.0 < test_radius && test_radius < 1.0) {
        return Err(Error::InvalidChain(
            "test radius must be interior and generic".into(),
        ));
    }
    let mut total: i64 = 0;
    for sheet in &fam.sheets {
        let mut net = 0i64;
        let mut prev_above = true; // profiles start at radius 1
        for &r in &sheet.radii {
            let above = r > test_radius;
            if prev_above && !above {
                net += 1;
            } else if !prev_above && above {
                net -= 1;
            }
            prev_above = above;
        }
        total += sheet.coeff as i64 * sheet.winding * net;
    }
    let degree = -total;
    let m = count_free_orbits(fam.p).m;
    Ok(SweepReport {
        degree,
        residue: degree.rem_euclid(fam.p.get() as i64) as u64,
        m,
    })
}
