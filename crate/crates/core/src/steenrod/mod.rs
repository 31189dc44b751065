//! Planar Steenrod squares: the generator families g_q for the lens/
//! projective Thom classes, the union-of-subspaces support of sq^i on
//! planar cycles, the chord bisection witness behind it, and the residue
//! coefficients that relate the theta components to P^i and beta P^i.

use crate::coeff::Prime;
use crate::rng::stratum_rng;
use crate::subspace::Subspace;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Descriptor of one generator-family value: the affine subspace
/// (l_perp)^{k+i-1} x {v} clipped to the big disk. Vanishes when the
/// disk point reaches the boundary (Thom-space convention).
#[derive(Debug, Clone)]
pub struct GqDescriptor {
    /// None encodes the vanished (zero-cycle) value.
    pub subspace: Option<Subspace>,
    pub ambient_dim: usize,
    pub dim: usize,
}

/// g_q(l, v) = ((l_perp)^{k+i-1} x {v}) clipped to D^{(n+1)(k+i)}.
pub fn g_q(line: &Subspace, v: &[f64], k: usize, i: usize) -> Result<GqDescriptor> {
    if line.dim() != 1 || !line.offset_is_zero() {
        return Err(Error::InvalidChain(
            "g_q expects a line through the origin".into(),
        ));
    }
    if k + i < 1 {
        return Err(Error::InvalidChain("g_q needs k + i >= 1".into()));
    }
    let m = line.ambient_dim(); // n + 1
    if v.len() != m {
        return Err(Error::AmbientMismatch(format!(
            "disk point has {} coordinates, expected {m}",
            v.len()
        )));
    }
    let blocks = k + i;
    let ambient_dim = m * blocks;
    let vnorm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if vnorm >= 1.0 - crate::tol::TAU_AMB {
        return Ok(GqDescriptor {
            subspace: None,
            ambient_dim,
            dim: 0,
        });
    }
    let perp = line.orth_complement()?;
    // Block-diagonal basis: perp repeated in the first k+i-1 blocks.
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for b in 0..blocks - 1 {
        for j in 0..perp.dim() {
            let mut col = vec![0.0; ambient_dim];
            for r in 0..m {
                col[b * m + r] = perp.basis()[(r, j)];
            }
            cols.push(col);
        }
    }
    let mut offset = vec![0.0; ambient_dim];
    offset[(blocks - 1) * m..].copy_from_slice(v);
    let subspace = Subspace::affine(ambient_dim, &cols, &offset)?;
    let dim = subspace.dim();
    Ok(GqDescriptor {
        subspace: Some(subspace),
        ambient_dim,
        dim,
    })
}

/// The support family of sq^i on a planar cycle V cap S^n: one component
/// ((l_perp)^{k+i-1} x (l_perp cap V)) cap D^{(n+1)(k+i)} per unoriented
/// line l through the origin parallel to V.
#[derive(Debug, Clone)]
pub struct PlanarSqFamily {
    pub n: usize,
    pub k: usize,
    pub i: usize,
    /// The input affine subspace V (dim k+1).
    pub v: Subspace,
    /// Direction space of V.
    pub v0: Subspace,
    /// Set when V misses the sphere and the cycle is empty.
    pub empty: bool,
}

#[derive(Debug, Clone)]
pub struct MembershipWitness {
    /// Unit direction of the witnessing line (sign-canonical).
    pub line: Vec<f64>,
    pub residual: f64,
}

pub fn sq_planar(v: &Subspace, n: usize, k: usize, i: usize) -> Result<PlanarSqFamily> {
    if v.ambient_dim() != n + 1 {
        return Err(Error::AmbientMismatch(format!(
            "V lives in R^{}, expected R^{}",
            v.ambient_dim(),
            n + 1
        )));
    }
    if v.dim() != k + 1 {
        return Err(Error::InvalidChain(format!(
            "V has dimension {}, expected k + 1 = {}",
            v.dim(),
            k + 1
        )));
    }
    if k + i < 1 {
        return Err(Error::InvalidChain("sq_planar needs k + i >= 1".into()));
    }
    let empty = v.offset().norm() >= 1.0 - crate::tol::TAU_AMB;
    let mut v0_cols = Vec::new();
    for j in 0..v.dim() {
        v0_cols.push(v.basis().column(j).iter().copied().collect());
    }
    let v0 = Subspace::span(n + 1, &v0_cols)?;
    Ok(PlanarSqFamily {
        n,
        k,
        i,
        v: v.clone(),
        v0,
        empty,
    })
}

impl PlanarSqFamily {
    pub fn ambient_dim(&self) -> usize {
        (self.n + 1) * (self.k + self.i)
    }

    /// Whether q lies on some component, returning the witness line.
    ///
    /// The constraints are: every block of q is orthogonal to l (the last
    /// block must additionally lie in V), so l spans the nullspace of the
    /// blocks restricted to the direction space of V.
    pub fn member(&self, q: &[f64], tolerance: f64) -> Option<MembershipWitness> {
        if self.empty {
            return None;
        }
        let m = self.n + 1;
        let blocks = self.k + self.i;
        if q.len() != m * blocks {
            return None;
        }
        let qn: f64 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if qn > 1.0 + tolerance {
            return None;
        }
        let last = &q[(blocks - 1) * m..];
        if !self.v.contains(last, tolerance) {
            return None;
        }
        // Solve for a unit l in V0 orthogonal to every block of q. Pad
        // with zero rows so the SVD exposes the full coefficient space
        // even when there are fewer constraints than directions.
        let kv = self.v0.dim();
        let mut rows = DMatrix::zeros(blocks.max(kv), kv);
        for b in 0..blocks {
            for j in 0..kv {
                let mut dot = 0.0;
                for r in 0..m {
                    dot += q[b * m + r] * self.v0.basis()[(r, j)];
                }
                rows[(b, j)] = dot;
            }
        }
        let svd = rows.clone().svd(false, true);
        let v_t = svd.v_t.as_ref()?;
        let sv = &svd.singular_values;
        let mut best = (0usize, f64::INFINITY);
        for (j, &s) in sv.iter().enumerate() {
            if s < best.1 {
                best = (j, s);
            }
        }
        let (idx, min_sv) = best;
        if idx >= v_t.nrows() || min_sv > tolerance.max(1e-9) {
            return None;
        }
        let coeffs = v_t.row(idx).transpose();
        let line_vec = self.v0.basis() * &coeffs;
        let line: Vec<f64> =
            crate::scalar::Scalar::canonical_direction(&line_vec.iter().copied().collect::<Vec<f64>>());
        // Residual: how far q is from the component of this line.
        let residual = self.component_residual(&line, q);
        if residual <= tolerance.max(1e-9) {
            Some(MembershipWitness { line, residual })
        } else {
            None
        }
    }

    fn component_residual(&self, line: &[f64], q: &[f64]) -> f64 {
        let m = self.n + 1;
        let blocks = self.k + self.i;
        let l = DVector::from_column_slice(line);
        let mut worst: f64 = 0.0;
        for b in 0..blocks {
            let qb = DVector::from_column_slice(&q[b * m..(b + 1) * m]);
            worst = worst.max(l.dot(&qb).abs());
        }
        let last = &q[(blocks - 1) * m..];
        let vres = if self.v.contains(last, 1e-12) {
            0.0
        } else {
            let pt = DVector::from_column_slice(last) - self.v.offset();
            let tang = self.v.basis() * (self.v.basis().transpose() * &pt);
            (pt - tang).norm()
        };
        worst.max(vres)
    }

    /// Sample support points, uniform over (line, component) strata.
    /// Rejection keeps the final point inside the big disk.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
        if self.empty {
            return Vec::new();
        }
        let m = self.n + 1;
        let blocks = self.k + self.i;
        let mut rng = stratum_rng(seed, 0x50A17);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            // Uniform direction in V0.
            let coeffs: Vec<f64> = (0..self.v0.dim())
                .map(|_| gauss(&mut rng))
                .collect();
            let dir = self.v0.basis() * DVector::from_column_slice(&coeffs);
            if dir.norm() < 1e-9 {
                continue;
            }
            let line: Vec<f64> = crate::scalar::Scalar::canonical_direction(
                &dir.iter().copied().collect::<Vec<f64>>(),
            );
            let lvec = DVector::from_column_slice(&line);
            let perp = match Subspace::line(&line).and_then(|l| l.orth_complement()) {
                Ok(p) => p,
                Err(_) => continue,
            };
            // l_perp cap V: affine slice of V orthogonal to l.
            let lperp_v = match self.line_perp_cap_v(&lvec) {
                Some(s) => s,
                None => continue,
            };
            let mut q = vec![0.0; m * blocks];
            for b in 0..blocks - 1 {
                let x: Vec<f64> = (0..perp.dim()).map(|_| gauss(&mut rng)).collect();
                let pt = perp.basis() * DVector::from_column_slice(&x);
                let scale = rng.gen::<f64>().powf(1.0 / perp.dim().max(1) as f64)
                    / pt.norm().max(1e-12);
                for r in 0..m {
                    q[b * m + r] = pt[r] * scale;
                }
            }
            let x: Vec<f64> = (0..lperp_v.dim().max(1)).map(|_| gauss(&mut rng)).collect();
            let mut pt = lperp_v.offset().clone();
            if lperp_v.dim() > 0 {
                let t = lperp_v.basis()
                    * DVector::from_column_slice(&x[..lperp_v.dim()]);
                let scale = rng.gen::<f64>() / t.norm().max(1e-12);
                pt += t * scale;
            }
            for r in 0..m {
                q[(blocks - 1) * m + r] = pt[r];
            }
            let norm: f64 = q.iter().map(|z| z * z).sum::<f64>().sqrt();
            if norm <= 1.0 {
                out.push((q, line));
            }
        }
        out
    }

    /// The slice l_perp cap V as an affine subspace (or None if the
    /// line is not parallel to V, which cannot happen for lines of V0).
    fn line_perp_cap_v(&self, l: &DVector<f64>) -> Option<Subspace> {
        let m = self.n + 1;
        // Directions of V orthogonal to l.
        let mut cols = Vec::new();
        for j in 0..self.v0.dim() {
            let b = self.v0.basis().column(j).into_owned();
            let proj = &b - l * l.dot(&b);
            cols.push(proj.iter().copied().collect::<Vec<f64>>());
        }
        // Anchor point of V orthogonal to l: shift the offset along l
        // within V. offset is already orthogonal to V0... the offset of V
        // is orthogonal to V0, and l is in V0, so <offset, l> = 0 holds.
        let anchor: Vec<f64> = self.v.offset().iter().copied().collect();
        Subspace::affine(m, &cols, &anchor).ok()
    }
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller.
    let u1: f64 = rng.gen::<f64>().max(1e-12);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Bisection witness: the perpendicular through the chord midpoint. For
/// unit x, y the midpoint is automatically orthogonal to x - y.
#[derive(Debug, Clone)]
pub struct BisectionWitness {
    pub line: Vec<f64>,
    pub midpoint: Vec<f64>,
    /// |<(x+y)/2, x-y>|.
    pub orthogonality_residual: f64,
    /// Distance from the midpoint to l_perp cap V.
    pub membership_residual: f64,
}

pub fn bisection_witness(x: &[f64], y: &[f64], v: &Subspace) -> Result<BisectionWitness> {
    if crate::scalar::Scalar::points_coincide(x, y, crate::tol::TAU_MERGE) {
        return Err(Error::InvalidChain("bisection needs distinct points".into()));
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect();
    let orth: f64 = mid.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>().abs();
    let line = crate::scalar::Scalar::canonical_direction(&d);
    // Membership of the midpoint in l_perp cap V.
    let lvec = DVector::from_column_slice(&line);
    let midv = DVector::from_column_slice(&mid);
    let in_lperp = lvec.dot(&midv).abs();
    let in_v = if v.contains(&mid, 1e-12) {
        0.0
    } else {
        let pt = midv.clone() - v.offset();
        let tang = v.basis() * (v.basis().transpose() * &pt);
        (pt - tang).norm()
    };
    Ok(BisectionWitness {
        line,
        midpoint: mid,
        orthogonality_residual: orth,
        membership_residual: in_lperp.max(in_v),
    })
}

/// Reverse direction of the bisection argument: the chord of V cap S^n
/// through z parallel to l, whose midpoint is z again.
pub fn chord_through(z: &[f64], line: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let zz: f64 = z.iter().map(|a| a * a).sum();
    let zl: f64 = z.iter().zip(line).map(|(a, b)| a * b).sum();
    if zl.abs() > 1e-9 {
        return Err(Error::InvalidChain(
            "chord base point must be orthogonal to the line".into(),
        ));
    }
    if zz >= 1.0 {
        return Err(Error::InvalidChain(
            "chord base point must be interior to the disk".into(),
        ));
    }
    let t = (1.0 - zz).sqrt();
    let x: Vec<f64> = z.iter().zip(line).map(|(a, b)| a + t * b).collect();
    let y: Vec<f64> = z.iter().zip(line).map(|(a, b)| a - t * b).collect();
    Ok((x, y))
}

/// Residues (c_P, c_{beta P}) mod p with P^i = c_P theta_{2i(p-1)} and
/// beta P^i = c_{beta P} theta_{2i(p-1)+1} on degree-n classes:
/// c_P = (-1)^{i + m n(n+1)/2} (m!)^n with m = (p-1)/2, and
/// c_{beta P} = -c_P. For p = 2 both are 1 (Sq^i = theta_i).
pub fn steenrod_coefficient(p: Prime, n: u64, i: u64) -> (u64, u64) {
    let pv = p.get();
    if pv == 2 {
        return (1, 1);
    }
    let m = (pv - 1) / 2;
    let mut fact = 1u64;
    for j in 2..=m {
        fact = fact * j % pv;
    }
    let mut base = 1u64;
    for _ in 0..n {
        base = base * fact % pv;
    }
    let exponent = i + m * n * (n + 1) / 2;
    let c_p = if exponent.is_multiple_of(2) {
        base
    } else {
        (pv - base) % pv
    };
    let c_bp = (pv - c_p) % pv;
    (c_p, c_bp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn gq_point_case() {
        // n = 1, k = 0, i = 1: the factor (l_perp)^0 is a point, so the
        // output is {v} in D^2: a 0-dimensional descriptor.
        let line = Subspace::line(&[1.0, 0.0]).unwrap();
        let d = g_q(&line, &[0.0, 0.0], 0, 1).unwrap();
        assert_eq!(d.ambient_dim, 2);
        assert_eq!(d.dim, 0);
        assert!(d.subspace.is_some());
    }

    #[test]
    fn gq_plane_case() {
        // n = 2, k = 1, i = 1, l = z-axis: xy-plane x {0} in D^6, dim 2.
        let line = Subspace::line(&[0.0, 0.0, 1.0]).unwrap();
        let d = g_q(&line, &[0.0, 0.0, 0.0], 1, 1).unwrap();
        assert_eq!(d.ambient_dim, 6);
        assert_eq!(d.dim, 2);
        let s = d.subspace.unwrap();
        assert!(s.contains(&[0.5, -0.2, 0.0, 0.0, 0.0, 0.0], 1e-12));
        assert!(!s.contains(&[0.0, 0.0, 0.3, 0.0, 0.0, 0.0], 1e-9));
    }

    #[test]
    fn gq_dimension_formula() {
        // dim = n (k+i-1) exactly.
        for (n, k, i) in [(1usize, 1usize, 1usize), (2, 1, 2), (3, 2, 1)] {
            let mut dir = vec![0.0; n + 1];
            dir[n] = 1.0;
            let line = Subspace::line(&dir).unwrap();
            let d = g_q(&line, &vec![0.0; n + 1], k, i).unwrap();
            assert_eq!(d.dim, n * (k + i - 1), "n={n} k={k} i={i}");
        }
    }

    #[test]
    fn gq_vanishes_on_the_boundary() {
        let line = Subspace::line(&[1.0, 0.0]).unwrap();
        let d = g_q(&line, &[1.0, 0.0], 1, 1).unwrap();
        assert!(d.subspace.is_none());
    }

    #[test]
    fn bisection_identity_is_algebraic() {
        let x = [0.6, 0.8];
        let y = [-0.8, 0.6];
        let v = Subspace::full(2);
        let w = bisection_witness(&x, &y, &v).unwrap();
        assert!(w.orthogonality_residual < 1e-14);
    }

    #[test]
    fn chord_through_recovers_midpoint() {
        let z = [0.3, 0.0, 0.2];
        let mut l = [0.0, 1.0, 0.0];
        l = {
            let c: Vec<f64> = crate::scalar::Scalar::canonical_direction(l.as_ref());
            [c[0], c[1], c[2]]
        };
        let (x, y) = chord_through(&z, &l).unwrap();
        for v in [&x, &y] {
            let n: f64 = v.iter().map(|a| a * a).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        for j in 0..3 {
            assert!((0.5 * (x[j] + y[j]) - z[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn membership_round_trip_on_fig4_configuration() {
        // V parallel to the xz-plane at height y = 0.5.
        let v = Subspace::affine(
            3,
            &[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
            &[0.0, 0.5, 0.0],
        )
        .unwrap();
        let fam = sq_planar(&v, 2, 1, 1).unwrap();
        let pts = fam.sample(200, 9);
        assert_eq!(pts.len(), 200);
        for (q, line) in &pts {
            let w = fam.member(q, 1e-6).expect("sampled point must be a member");
            let dot: f64 = w.line.iter().zip(line).map(|(a, b)| a * b).sum();
            assert!(
                (dot.abs() - 1.0).abs() < 1e-6,
                "witness line deviates: dot {dot}"
            );
            let n: f64 = q.iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!(n <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn membership_rejects_off_support_points() {
        let v = Subspace::affine(
            3,
            &[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
            &[0.0, 0.5, 0.0],
        )
        .unwrap();
        let fam = sq_planar(&v, 2, 1, 1).unwrap();
        // Last block far from V.
        let q = [0.1, 0.0, 0.0, 0.0, 0.9, 0.0];
        assert!(fam.member(&q, 1e-6).is_none());
    }

    #[test]
    fn family_empty_when_v_misses_the_sphere() {
        let v = Subspace::affine(
            3,
            &[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
            &[0.0, 1.5, 0.0],
        )
        .unwrap();
        let fam = sq_planar(&v, 2, 1, 1).unwrap();
        assert!(fam.empty);
        assert!(fam.sample(10, 1).is_empty());
    }

    #[test]
    fn coefficients_match_hand_computation() {
        assert_eq!(steenrod_coefficient(prime(2), 5, 3), (1, 1));
        // p=3, n=1, i=0: m=1, exponent 1, (1!)^1 = 1: c_P = -1 = 2 mod 3.
        assert_eq!(steenrod_coefficient(prime(3), 1, 0), (2, 1));
    }

    #[test]
    fn p5_cross_check_by_independent_parity_route() {
        // Second route: compute the sign by counting parity separately
        // and the magnitude by modular exponentiation.
        let (c_p, c_bp) = steenrod_coefficient(prime(5), 2, 1);
        let m: u64 = 2; // (5-1)/2
        let fact_m = 2u64; // 2! = 2
        let magnitude = fact_m.pow(2) % 5; // (m!)^n
        let parity = (1 + (m * 2 * 3 / 2)) % 2; // i + m n(n+1)/2
        let expected = if parity == 0 {
            magnitude
        } else {
            (5 - magnitude) % 5
        };
        assert_eq!(c_p, expected);
        assert_eq!(c_bp, (5 - expected) % 5);
    }
}
