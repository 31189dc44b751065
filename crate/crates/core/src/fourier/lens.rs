//! Lens-space points as canonicalized sphere-orbit representatives.

use super::DiagonalExcisionMap;
use crate::coeff::Prime;
use crate::{Error, Result};
use nalgebra::DVector;

/// A point of the lens space L_n held as a representative on the sphere
/// S^{(p-1)(n+1)-1}; two representatives are the same orbit iff related
/// by a power of the block rotation induced by the cyclic shift.
#[derive(Debug, Clone)]
pub struct LensOrbit {
    pub p: Prime,
    /// Lexicographically minimal rotation image (tolerance-aware).
    pub rep: Vec<f64>,
}

impl LensOrbit {
    /// Canonicalize a sphere representative by taking the lex-min image
    /// over the p rotations.
    pub fn new(map: &DiagonalExcisionMap, v: &DVector<f64>) -> LensOrbit {
        let mut best = v.clone();
        let mut cur = v.clone();
        for _ in 1..map.p.get() {
            cur = &map.d_perp * cur;
            if lex_less(&cur, &best, 1e-9) {
                best = cur.clone();
            }
        }
        LensOrbit {
            p: map.p,
            rep: best.iter().copied().collect(),
        }
    }

    pub fn same_orbit(&self, o: &LensOrbit, tol: f64) -> bool {
        self.rep.len() == o.rep.len()
            && self
                .rep
                .iter()
                .zip(&o.rep)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                <= tol
    }
}

fn lex_less(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x - y).abs() <= tol {
            continue;
        }
        return x < y;
    }
    false
}

/// Coordinate map from the general lens space L_p(l_1,..,l_n) to the
/// standard one: each complex coordinate r e^{i t} goes to
/// r e^{i t / l_j}, where the division is by the multiplicative inverse
/// of l_j mod p acting on the angle sector.
///
/// Input and output are points of S^{2n-1} in R^{2n} with coordinates
/// paired as (re, im) per complex factor.
pub fn lens_reindex(p: Prime, ells: &[u64], point: &[f64]) -> Result<Vec<f64>> {
    if point.len() != 2 * ells.len() {
        return Err(Error::AmbientMismatch(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            2 * ells.len()
        )));
    }
    let pu = p.get();
    let mut out = Vec::with_capacity(point.len());
    for (j, l) in ells.iter().enumerate() {
        let l = l % pu;
        if l == 0 {
            return Err(Error::InvalidChain(format!(
                "lens index l_{j} is 0 mod p"
            )));
        }
        let inv = mod_inverse(l, pu);
        let (re, im) = (point[2 * j], point[2 * j + 1]);
        let r = (re * re + im * im).sqrt();
        let t = im.atan2(re);
        let t2 = t * inv as f64;
        out.push(r * t2.cos());
        out.push(r * t2.sin());
    }
    Ok(out)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_identification_under_rotation() {
        let map = DiagonalExcisionMap::new(Prime::new(3).unwrap(), 1);
        let v = DVector::from_column_slice(&[0.5, -0.1, 0.7, 0.2]);
        let v = &v / v.norm();
        let rotated = &map.d_perp * &v;
        let a = LensOrbit::new(&map, &v);
        let b = LensOrbit::new(&map, &rotated);
        assert!(a.same_orbit(&b, 1e-9));
    }

    #[test]
    fn p2_orbit_is_sign_quotient() {
        let map = DiagonalExcisionMap::new(Prime::new(2).unwrap(), 1);
        let v = DVector::from_column_slice(&[0.6, -0.8]);
        let a = LensOrbit::new(&map, &v);
        let b = LensOrbit::new(&map, &(-v));
        assert!(a.same_orbit(&b, 1e-12));
    }

    #[test]
    fn reindex_inverts_angles() {
        let p = Prime::new(5).unwrap();
        // l = 2, inverse mod 5 is 3.
        let pt = [1.0, 0.0];
        let out = lens_reindex(p, &[2], &pt).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-12);
        let t = 0.7f64;
        let out = lens_reindex(p, &[2], &[t.cos(), t.sin()]).unwrap();
        let want = 3.0 * t;
        assert!((out[0] - want.cos()).abs() < 1e-12);
        assert!((out[1] - want.sin()).abs() < 1e-12);
    }

    #[test]
    fn reindex_preserves_radii() {
        let p = Prime::new(7).unwrap();
        let pt = [0.3, 0.4, 0.5, -0.2];
        let out = lens_reindex(p, &[3, 5], &pt).unwrap();
        for j in 0..2 {
            let r_in = (pt[2 * j].powi(2) + pt[2 * j + 1].powi(2)).sqrt();
            let r_out = (out[2 * j].powi(2) + out[2 * j + 1].powi(2)).sqrt();
            assert!((r_in - r_out).abs() < 1e-12);
        }
    }
}
