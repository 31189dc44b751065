//! Coordinate scalars: `f64` for generic geometry, `BigRational` when the
//! input data is rational and results must be reproduced with zero tolerance.

use num::{BigInt, BigRational, FromPrimitive, Signed, Zero};
use std::cmp::Ordering;
use std::fmt::Debug;

/// Arithmetic needed to carry chain coordinates.
///
/// Only ring operations plus division by small integers are required, which
/// keeps barycenters of rational points rational. Metric quantities (masses,
/// distances) always go through `to_f64`.
pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn from_int(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div_int(&self, k: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Total order used for canonical atom ordering.
    fn cmp_total(&self, o: &Self) -> Ordering;
    /// Whether two points coincide for merging purposes. Exact scalars
    /// compare exactly; floats use the squared-distance tolerance.
    fn points_coincide(a: &[Self], b: &[Self], tol: f64) -> bool;
    /// Canonical representative of a direction up to sign and positive
    /// scale: unit vector for floats, primitive integer vector for
    /// rationals, leading nonzero entry positive in both cases.
    fn canonical_direction(v: &[Self]) -> Vec<Self>;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_int(&self, k: i64) -> Self {
        self / k as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn cmp_total(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }
    fn points_coincide(a: &[Self], b: &[Self], tol: f64) -> bool {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        d2 <= tol * tol
    }
    fn canonical_direction(v: &[Self]) -> Vec<Self> {
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            return v.to_vec();
        }
        let mut u: Vec<f64> = v.iter().map(|x| x / n).collect();
        let lead = u.iter().find(|x| x.abs() > 1e-12).copied().unwrap_or(1.0);
        if lead < 0.0 {
            for x in &mut u {
                *x = -*x;
            }
        }
        u
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_i64(v).unwrap()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_int(&self, k: i64) -> Self {
        self / BigRational::from_i64(k).unwrap()
    }
    fn to_f64(&self) -> f64 {
        num::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn cmp_total(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn points_coincide(a: &[Self], b: &[Self], _tol: f64) -> bool {
        a == b
    }
    fn canonical_direction(v: &[Self]) -> Vec<Self> {
        // Clear denominators, divide out the content, fix the sign.
        if v.iter().all(|x| x.is_zero()) {
            return v.to_vec();
        }
        let lcm_den = v
            .iter()
            .map(|x| x.denom().clone())
            .fold(BigInt::from(1), num::integer::lcm);
        let ints: Vec<BigInt> = v
            .iter()
            .map(|x| x.numer() * (&lcm_den / x.denom()))
            .collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |a, b| num::integer::gcd(a, b.abs()));
        let mut prim: Vec<BigInt> = ints.iter().map(|x| x / &gcd).collect();
        if let Some(lead) = prim.iter().find(|x| !x.is_zero()) {
            if lead.is_negative() {
                for x in &mut prim {
                    *x = -x.clone();
                }
            }
        }
        prim.into_iter()
            .map(BigRational::from_integer)
            .collect()
    }
}

/// Squared Euclidean norm in the scalar's own arithmetic.
pub fn norm_sq<S: Scalar>(v: &[S]) -> S {
    let mut acc = S::zero();
    for x in v {
        acc = acc.add(&x.mul(x));
    }
    acc
}

/// Componentwise barycenter of the listed points (divide by the count).
pub fn barycenter<S: Scalar>(pts: &[&[S]]) -> Vec<S> {
    let d = pts[0].len();
    let mut out = vec![S::zero(); d];
    for p in pts {
        for (o, x) in out.iter_mut().zip(p.iter()) {
            *o = o.add(x);
        }
    }
    out.into_iter()
        .map(|x| x.div_int(pts.len() as i64))
        .collect()
}

/// Lexicographic comparison of coordinate vectors under `cmp_total`.
pub fn lex_cmp<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp_total(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_canonical_direction_is_primitive() {
        let v = vec![rat(-2, 3), rat(4, 3), rat(0, 1)];
        let c = BigRational::canonical_direction(&v);
        assert_eq!(c, vec![rat(1, 1), rat(-2, 1), rat(0, 1)]);
    }

    #[test]
    fn float_canonical_direction_sign_fixed() {
        let c = f64::canonical_direction(&[-3.0, 4.0]);
        assert!((c[0] - 0.6).abs() < 1e-15);
        assert!((c[1] + 0.8).abs() < 1e-15);
    }

    #[test]
    fn barycenter_rational_exact() {
        let a = [rat(1, 1), rat(0, 1)];
        let b = [rat(0, 1), rat(1, 1)];
        let m = barycenter(&[&a[..], &b[..]]);
        assert_eq!(m, vec![rat(1, 2), rat(1, 2)]);
    }
}
