//! Cone fillings: an upper bound on the flat distance of a cycle to zero.

use crate::chain::{Simplex, SimplicialChain};
use crate::tol;
use crate::{Error, Result};

/// Cone a cycle off an apex: every k-simplex becomes the (k+1)-simplex
/// with the apex prepended. For a cycle, d(cone T) = T mod p, so the
/// cone mass bounds Fl(T, 0) from above.
pub fn cone_filling_upper_bound(
    t: &SimplicialChain,
    apex: &[f64],
) -> Result<(SimplicialChain, f64)> {
    if !t.boundary()?.is_zero() {
        return Err(Error::InvalidChain(
            "cone filling needs a cycle (dT = 0 mod p)".into(),
        ));
    }
    t.ambient.validate_point(apex, tol::TAU_AMB)?;
    if t.is_zero() {
        let p = SimplicialChain::empty(t.ambient, t.p, t.relative, t.dim + 1);
        return Ok((p, 0.0));
    }
    let mut cones = Vec::with_capacity(t.simplices().len());
    for s in t.simplices() {
        let mut verts = vec![apex.to_vec()];
        verts.extend(s.verts.iter().cloned());
        let test = Simplex {
            verts: verts.clone(),
            c: 1,
        };
        if test.volume() <= tol::TAU_VOL {
            return Err(Error::DegenerateCone(format!(
                "apex is affinely dependent with simplex at barycenter {:?}",
                s.barycenter()
            )));
        }
        cones.push((verts, s.c as i64));
    }
    let p_chain = SimplicialChain::new(t.ambient, t.p, t.relative, t.dim + 1, cones)?;
    // Safety net: the boundary identity is structural but cheap to check.
    let back = p_chain.boundary()?;
    if !back.chain_eq(t) {
        return Err(Error::InvalidChain(
            "cone boundary failed to reproduce the cycle".into(),
        ));
    }
    let bound = p_chain.mass();
    Ok((p_chain, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::Ambient;
    use crate::coeff::Prime;

    fn polygon_cycle(n: usize) -> SimplicialChain {
        let verts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let segs = (0..n)
            .map(|i| (vec![verts[i].clone(), verts[(i + 1) % n].clone()], 1))
            .collect();
        SimplicialChain::new(Ambient::Disk { dim: 2 }, Prime::new(2).unwrap(), false, 1, segs)
            .unwrap()
    }

    #[test]
    fn sixteen_gon_cone_area() {
        let t = polygon_cycle(16);
        let (p, bound) = cone_filling_upper_bound(&t, &[0.0, 0.0]).unwrap();
        // Independent oracle: 16 triangles of area sin(pi/8)/2 each.
        let oracle = 16.0 * 0.5 * (std::f64::consts::PI / 8.0).sin();
        assert!((bound - oracle).abs() < 1e-12, "bound {bound} oracle {oracle}");
        assert_eq!(p.dim, 2);
    }

    #[test]
    fn zero_cycle_cones_to_zero() {
        let t = SimplicialChain::empty(
            Ambient::Disk { dim: 2 },
            Prime::new(3).unwrap(),
            false,
            1,
        );
        let (_, bound) = cone_filling_upper_bound(&t, &[0.0, 0.0]).unwrap();
        assert_eq!(bound, 0.0);
    }

    #[test]
    fn equatorial_bigon_pair_in_three_disk() {
        // Two great "2-gons" (split into 4 arcs via intermediate points)
        // on the equator of D^3, coned from an interior apex off the
        // plane: the boundary must reproduce the cycle exactly.
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 6.0;
                vec![0.9 * t.cos(), 0.9 * t.sin(), 0.0]
            })
            .collect();
        let segs = (0..6)
            .map(|i| (vec![pts[i].clone(), pts[(i + 1) % 6].clone()], 1))
            .collect();
        let t = SimplicialChain::new(
            Ambient::Disk { dim: 3 },
            Prime::new(2).unwrap(),
            false,
            1,
            segs,
        )
        .unwrap();
        let (p, _) = cone_filling_upper_bound(&t, &[0.0, 0.0, 0.4]).unwrap();
        assert!(p.boundary().unwrap().chain_eq(&t));
    }

    #[test]
    fn coplanar_apex_rejected_with_diagnostic() {
        let t = polygon_cycle(8);
        // Apex on the polygon itself degenerates the first cone simplex.
        let r = cone_filling_upper_bound(&t, &[1.0, 0.0]);
        assert!(matches!(r, Err(Error::DegenerateCone(_))));
    }

    #[test]
    fn non_cycle_rejected() {
        let seg = SimplicialChain::new(
            Ambient::Disk { dim: 2 },
            Prime::new(2).unwrap(),
            false,
            1,
            vec![(vec![vec![0.0, 0.0], vec![0.5, 0.0]], 1)],
        )
        .unwrap();
        assert!(cone_filling_upper_bound(&seg, &[0.1, 0.1]).is_err());
    }
}
