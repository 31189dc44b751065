//! Generalized balls in the unit disk and the doubling merge.
//!
//! A generalized ball is an interior Euclidean ball or a collar
//! thickening of a boundary ball: the annular sector of angular radius r
//! and depth r about a boundary point. The merge procedure grows every
//! ball to its double, repeatedly replaces touching pairs by the doubled
//! enclosing ball, then halves; the result is doubling (doubles stay
//! disjoint, and doubles of a face cell's balls nest into its cofaces).

use crate::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneralizedBall {
    /// Euclidean ball in the interior of the disk.
    Interior { center: Vec<f64>, radius: f64 },
    /// Collar ball at a boundary angle: points with |x| >= 1 - r whose
    /// argument is within r of theta.
    Boundary { theta: f64, radius: f64 },
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

impl GeneralizedBall {
    pub fn radius(&self) -> f64 {
        match self {
            GeneralizedBall::Interior { radius, .. } => *radius,
            GeneralizedBall::Boundary { radius, .. } => *radius,
        }
    }

    pub fn scaled(&self, f: f64) -> GeneralizedBall {
        match self {
            GeneralizedBall::Interior { center, radius } => GeneralizedBall::Interior {
                center: center.clone(),
                radius: radius * f,
            },
            GeneralizedBall::Boundary { theta, radius } => GeneralizedBall::Boundary {
                theta: *theta,
                // Radii beyond pi mean the full annulus (and beyond 1 the
                // whole disk); capping here would break the concentric
                // halving the merge relies on.
                radius: radius * f,
            },
        }
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        match self {
            GeneralizedBall::Interior { center, radius } => {
                crate::ambient::euclidean(center, x) <= *radius + 1e-12
            }
            GeneralizedBall::Boundary { theta, radius } => {
                let n = crate::ambient::norm(x);
                n >= 1.0 - radius - 1e-12
                    && circ_dist(x[1].atan2(x[0]), *theta) <= radius.min(PI) + 1e-12
            }
        }
    }

    /// Whether the two regions intersect (closure touching counts).
    pub fn intersects(&self, o: &GeneralizedBall) -> bool {
        use GeneralizedBall::*;
        match (self, o) {
            (
                Interior {
                    center: c1,
                    radius: r1,
                },
                Interior {
                    center: c2,
                    radius: r2,
                },
            ) => crate::ambient::euclidean(c1, c2) <= r1 + r2,
            (
                Boundary {
                    theta: t1,
                    radius: r1,
                },
                Boundary {
                    theta: t2,
                    radius: r2,
                },
            ) => circ_dist(*t1, *t2) <= r1.min(PI) + r2.min(PI),
            (Interior { center, radius }, b @ Boundary { .. })
            | (b @ Boundary { .. }, Interior { center, radius }) => {
                b.distance_to_point(center) <= *radius
            }
        }
    }

    /// Euclidean distance from a point to the region (0 if inside).
    fn distance_to_point(&self, x: &[f64]) -> f64 {
        match self {
            GeneralizedBall::Interior { center, radius } => {
                (crate::ambient::euclidean(center, x) - radius).max(0.0)
            }
            GeneralizedBall::Boundary { theta, radius } => {
                let n = crate::ambient::norm(x).max(1e-12);
                let ang = circ_dist(x[1].atan2(x[0]), *theta);
                if ang <= radius.min(PI) {
                    (1.0 - radius - n).max(0.0)
                } else {
                    // Nearest point lies on one of the radial edges of
                    // the sector: segment from (1-r) to 1 at angle
                    // theta +- r.
                    let mut best = f64::INFINITY;
                    for sgn in [-1.0, 1.0] {
                        let a = theta + sgn * radius;
                        let e0 = [(1.0 - radius) * a.cos(), (1.0 - radius) * a.sin()];
                        let e1 = [a.cos(), a.sin()];
                        best = best.min(point_segment_dist(x, &e0, &e1));
                    }
                    best
                }
            }
        }
    }

    /// Whether the region is contained in another generalized ball.
    pub fn contained_in(&self, o: &GeneralizedBall) -> bool {
        use GeneralizedBall::*;
        let eps = 1e-9;
        match (self, o) {
            (
                Interior {
                    center: c1,
                    radius: r1,
                },
                Interior {
                    center: c2,
                    radius: r2,
                },
            ) => crate::ambient::euclidean(c1, c2) + r1 <= r2 + eps,
            (
                Boundary {
                    theta: t1,
                    radius: r1,
                },
                Boundary {
                    theta: t2,
                    radius: r2,
                },
            ) => {
                *r1 <= r2 + eps
                    && (circ_dist(*t1, *t2) + r1.min(PI) <= *r2 + eps || *r2 >= PI)
            }
            (Interior { center, radius }, Boundary { theta, radius: rb }) => {
                let n = crate::ambient::norm(center);
                // Depth: the deepest point of the ball must stay within
                // the collar; angle: the tangent-cone spread must fit.
                let depth_ok = 1.0 - (n - radius) <= rb + eps;
                if !depth_ok {
                    return false;
                }
                if n <= *radius {
                    return *rb >= PI - eps;
                }
                let spread = (radius / n).min(1.0).asin();
                *rb >= PI
                    || circ_dist(center[1].atan2(center[0]), *theta) + spread <= rb + eps
            }
            (b @ Boundary { theta, radius }, Interior { center, radius: ri }) => {
                // Farthest point of the sector from the center: corners
                // and, when the opposite direction falls inside the
                // angular window, the far arc point.
                let mut far: f64 = 0.0;
                for sa in [-1.0, 1.0] {
                    let a = theta + sa * radius;
                    for rr in [1.0 - radius, 1.0] {
                        let pt = [rr * a.cos(), rr * a.sin()];
                        far = far.max(crate::ambient::euclidean(center, &pt));
                    }
                }
                let opp = (center[1]).atan2(center[0]) + PI;
                if circ_dist(opp, *theta) <= *radius {
                    let pt = [opp.cos(), opp.sin()];
                    far = far.max(crate::ambient::euclidean(center, &pt));
                }
                let _ = b;
                far <= ri + eps
            }
        }
    }

    /// A generalized ball containing both inputs: the Euclidean
    /// enclosing ball when both are interior (and it stays inside the
    /// disk), otherwise the enclosing collar sector.
    pub fn enclose(&self, o: &GeneralizedBall) -> GeneralizedBall {
        use GeneralizedBall::*;
        if let (
            Interior {
                center: c1,
                radius: r1,
            },
            Interior {
                center: c2,
                radius: r2,
            },
        ) = (self, o)
        {
            let d = crate::ambient::euclidean(c1, c2);
            if d + r2 <= *r1 {
                return self.clone();
            }
            if d + r1 <= *r2 {
                return o.clone();
            }
            let r = 0.5 * (d + r1 + r2);
            let t = (r - r1) / d;
            let center: Vec<f64> = c1
                .iter()
                .zip(c2)
                .map(|(a, b)| a + t * (b - a))
                .collect();
            if crate::ambient::norm(&center) + r <= 1.0 {
                return Interior { center, radius: r };
            }
            // Fall through: promote to a collar ball.
        }
        let (w1, d1) = self.angular_window_and_depth();
        let (w2, d2) = o.angular_window_and_depth();
        let (theta, half) = enclose_windows(w1, w2);
        let radius = half.max(d1.max(d2));
        Boundary { theta, radius }
    }

    /// Angular window (center, half-width) and required collar depth.
    fn angular_window_and_depth(&self) -> ((f64, f64), f64) {
        match self {
            GeneralizedBall::Boundary { theta, radius } => ((*theta, *radius), *radius),
            GeneralizedBall::Interior { center, radius } => {
                let n = crate::ambient::norm(center);
                let depth = (1.0 - (n - radius)).min(1.0);
                if n <= *radius {
                    ((0.0, PI), depth)
                } else {
                    let spread = (radius / n).min(1.0).asin();
                    ((center[1].atan2(center[0]), spread), depth)
                }
            }
        }
    }
}

/// Smallest circular interval covering two intervals, as (center, half).
fn enclose_windows(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (ta, ra) = a;
    let (tb, rb) = b;
    if ra >= PI || rb >= PI {
        return (0.0, PI);
    }
    let d = circ_dist(ta, tb);
    if d + rb <= ra {
        return a;
    }
    if d + ra <= rb {
        return b;
    }
    let half = 0.5 * (d + ra + rb);
    if half >= PI {
        return (0.0, PI);
    }
    // Walk from ta toward tb by (half - ra).
    let dir = {
        let fwd = (tb - ta).rem_euclid(2.0 * PI);
        if fwd <= PI {
            1.0
        } else {
            -1.0
        }
    };
    ((ta + dir * (half - ra)).rem_euclid(2.0 * PI), half)
}

fn point_segment_dist(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(p, q)| q - p).collect();
    let ax: Vec<f64> = a.iter().zip(x).map(|(p, q)| q - p).collect();
    let denom: f64 = ab.iter().map(|v| v * v).sum();
    let t = if denom == 0.0 {
        0.0
    } else {
        (ab.iter().zip(&ax).map(|(u, v)| u * v).sum::<f64>() / denom).clamp(0.0, 1.0)
    };
    let proj: Vec<f64> = a.iter().zip(&ab).map(|(p, d)| p + t * d).collect();
    crate::ambient::euclidean(x, &proj)
}

/// Cells of the parameter complex with their codimension-one faces, in
/// any order; dimensions decide processing order.
#[derive(Debug, Clone)]
pub struct BallComplex {
    pub dims: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct DoublingReport {
    /// Output collection per cell.
    pub collections: Vec<Vec<GeneralizedBall>>,
    /// max over cells of (sum of radii) / delta.
    pub radius_factor: f64,
    /// max over cells of the collection size.
    pub max_count: usize,
}

/// The merging procedure: returns doubling collections containing the
/// inputs, with nesting across faces.
pub fn doubling_merge(
    complex: &BallComplex,
    collections: &[Vec<GeneralizedBall>],
    delta: f64,
    r0: f64,
) -> Result<DoublingReport> {
    if complex.dims.len() != collections.len() {
        return Err(Error::InvalidChain(
            "one ball collection per cell is required".into(),
        ));
    }
    for coll in collections {
        for b in coll {
            if b.radius() >= r0 {
                return Err(Error::CollarViolation {
                    r: b.radius(),
                    r0,
                });
            }
        }
        let total: f64 = coll.iter().map(|b| b.radius()).sum();
        if total >= delta {
            return Err(Error::InvalidChain(format!(
                "radii sum {total} exceeds the admissibility budget {delta}"
            )));
        }
    }
    let n = complex.dims.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| complex.dims[c]);
    let mut out: Vec<Vec<GeneralizedBall>> = vec![Vec::new(); n];
    for &c in &order {
        let mut work: Vec<GeneralizedBall> = collections[c].clone();
        for &f in &complex.faces[c] {
            for b in &out[f] {
                work.push(b.scaled(2.0));
            }
        }
        // Double everything, merge touching pairs, halve at the end.
        let mut bar: Vec<GeneralizedBall> = work.iter().map(|b| b.scaled(2.0)).collect();
        loop {
            let mut merged = false;
            'outer: for i in 0..bar.len() {
                for j in i + 1..bar.len() {
                    if bar[i].intersects(&bar[j]) {
                        let e = bar[i].enclose(&bar[j]).scaled(2.0);
                        bar.swap_remove(j);
                        bar.swap_remove(i);
                        bar.push(e);
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        out[c] = bar.iter().map(|b| b.scaled(0.5)).collect();
    }

    // Verify the doubling bullets and input containment.
    for c in 0..n {
        let v = &out[c];
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i].scaled(2.0).intersects(&v[j].scaled(2.0)) {
                    return Err(Error::InvalidChain(format!(
                        "cell {c}: doubled output balls {i} and {j} touch"
                    )));
                }
            }
        }
        for (bi, b) in collections[c].iter().enumerate() {
            if !v.iter().any(|w| b.contained_in(w)) {
                return Err(Error::InvalidChain(format!(
                    "cell {c}: input ball {bi} escapes the output collection"
                )));
            }
        }
        for &f in &complex.faces[c] {
            for (bi, b) in out[f].iter().enumerate() {
                if !v.iter().any(|w| b.scaled(2.0).contained_in(w)) {
                    return Err(Error::InvalidChain(format!(
                        "cell {c}: double of face-cell ball {bi} escapes"
                    )));
                }
            }
        }
    }
    for (c, v) in out.iter().enumerate() {
        for b in v {
            if b.radius() >= r0 {
                return Err(Error::CollarViolation {
                    r: b.radius(),
                    r0,
                });
            }
        }
        let _ = c;
    }
    let radius_factor = out
        .iter()
        .map(|v| v.iter().map(|b| b.radius()).sum::<f64>() / delta)
        .fold(0.0f64, f64::max);
    let max_count = out.iter().map(|v| v.len()).max().unwrap_or(0);
    Ok(DoublingReport {
        collections: out,
        radius_factor,
        max_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ib(x: f64, y: f64, r: f64) -> GeneralizedBall {
        GeneralizedBall::Interior {
            center: vec![x, y],
            radius: r,
        }
    }

    fn one_cell() -> BallComplex {
        BallComplex {
            dims: vec![1],
            faces: vec![vec![]],
        }
    }

    #[test]
    fn overlapping_pair_merges_into_a_container_of_both_doubles() {
        let u = vec![ib(0.0, 0.0, 0.04), ib(0.05, 0.0, 0.04)];
        let rep = doubling_merge(&one_cell(), std::slice::from_ref(&u), 0.2, 0.9).unwrap();
        assert_eq!(rep.collections[0].len(), 1);
        let v = &rep.collections[0][0];
        for b in &u {
            assert!(b.scaled(2.0).contained_in(v));
        }
    }

    #[test]
    fn already_doubling_input_is_preserved_up_to_containment() {
        let u = vec![ib(-0.5, 0.0, 0.02), ib(0.5, 0.0, 0.02)];
        let rep = doubling_merge(&one_cell(), std::slice::from_ref(&u), 0.2, 0.9).unwrap();
        assert_eq!(rep.collections[0].len(), 2);
        for b in &u {
            assert!(rep.collections[0].iter().any(|w| b.contained_in(w)));
        }
    }

    #[test]
    fn empty_collections_give_empty_output() {
        let rep = doubling_merge(&one_cell(), &[vec![]], 0.1, 0.9).unwrap();
        assert!(rep.collections[0].is_empty());
        assert_eq!(rep.max_count, 0);
    }

    #[test]
    fn face_nesting_holds() {
        let complex = BallComplex {
            dims: vec![0, 1],
            faces: vec![vec![], vec![0]],
        };
        let u0 = vec![ib(0.1, 0.1, 0.01)];
        let u1 = vec![ib(-0.2, 0.0, 0.015)];
        let rep = doubling_merge(&complex, &[u0, u1], 0.2, 0.9).unwrap();
        for b in &rep.collections[0] {
            assert!(rep.collections[1]
                .iter()
                .any(|w| b.scaled(2.0).contained_in(w)));
        }
    }

    #[test]
    fn boundary_balls_merge_on_the_collar() {
        let u = vec![
            GeneralizedBall::Boundary {
                theta: 0.0,
                radius: 0.05,
            },
            GeneralizedBall::Boundary {
                theta: 0.08,
                radius: 0.05,
            },
        ];
        let rep = doubling_merge(&one_cell(), std::slice::from_ref(&u), 0.5, 0.9).unwrap();
        assert_eq!(rep.collections[0].len(), 1);
        for b in &u {
            assert!(b.contained_in(&rep.collections[0][0]));
        }
    }

    #[test]
    fn halving_inverts_doubling_for_large_collars() {
        // The merge relies on halve(double(B)) = B even when the angular
        // radius of an intermediate collar exceeds pi.
        let b = GeneralizedBall::Boundary {
            theta: 1.0,
            radius: 2.5,
        };
        let round_trip = b.scaled(2.0).scaled(0.5);
        assert_eq!(b, round_trip);
        // A full-circle collar contains everything its halves did.
        let big = GeneralizedBall::Boundary {
            theta: 0.0,
            radius: 4.0,
        };
        assert!(b.contained_in(&big));
        assert!(GeneralizedBall::Interior {
            center: vec![0.1, -0.2],
            radius: 0.3
        }
        .contained_in(&big));
    }

    #[test]
    fn runaway_merge_reports_collar_violation() {
        // A chain of balls each touching the next cascades into a single
        // region wider than the collar allows; the procedure must refuse
        // rather than emit an illegal family.
        let u: Vec<GeneralizedBall> = (0..5)
            .map(|i| ib(-0.6 + 0.3 * i as f64, 0.0, 0.16))
            .collect();
        let r = doubling_merge(&one_cell(), &[u], 2.0, 0.9);
        assert!(matches!(r, Err(Error::CollarViolation { .. })), "{r:?}");
    }

    #[test]
    fn collar_violation_is_an_error() {
        let u = vec![ib(0.0, 0.0, 0.95)];
        assert!(matches!(
            doubling_merge(&one_cell(), &[u], 2.0, 0.9),
            Err(Error::CollarViolation { .. })
        ));
    }

    #[test]
    fn containment_predicates_agree_with_membership_sampling() {
        use rand::Rng;
        let mut rng = crate::rng::stratum_rng(5, 0);
        let balls = [
            ib(0.2, -0.1, 0.15),
            ib(-0.3, 0.4, 0.25),
            GeneralizedBall::Boundary {
                theta: 1.0,
                radius: 0.3,
            },
            GeneralizedBall::Boundary {
                theta: -2.0,
                radius: 0.5,
            },
        ];
        for a in &balls {
            for b in &balls {
                if !a.contained_in(b) {
                    continue;
                }
                // Every sampled point of a must lie in b.
                for _ in 0..4000 {
                    let x = [rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0];
                    if crate::ambient::norm(&x) <= 1.0 && a.contains_point(&x) {
                        assert!(b.contains_point(&x), "{a:?} not inside {b:?} at {x:?}");
                    }
                }
            }
        }
    }
}
