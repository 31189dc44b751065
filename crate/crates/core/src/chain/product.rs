//! Cartesian products of chains via the shuffle triangulation of
//! prisms, so that mass is multiplicative and the Leibniz rule holds
//! exactly mod p.

use super::{Simplex, SimplicialChain, ZeroChain};
use crate::ambient::Ambient;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Product of two 0-chains: all atom pairs, coefficients multiplied mod p.
pub fn zero_product<S: Scalar>(a: &ZeroChain<S>, b: &ZeroChain<S>) -> Result<ZeroChain<S>> {
    if a.p != b.p {
        return Err(Error::ModulusMismatch(a.p.get(), b.p.get()));
    }
    let d = a.ambient.coord_dim() + b.ambient.coord_dim();
    let mut atoms = Vec::new();
    for x in a.atoms() {
        for y in b.atoms() {
            let mut coords = x.x.clone();
            coords.extend(y.x.iter().cloned());
            atoms.push((coords, (x.c * y.c) as i64));
        }
    }
    ZeroChain::new(Ambient::Euclidean { dim: d }, a.p, false, atoms)
}

/// Cartesian product of simplicial chains, embedded in R^{d1+d2}.
///
/// Each pair of simplices contributes the shuffle triangulation of their
/// prism: one (j+k)-simplex per monotone lattice path, signed by the
/// parity of the shuffle.
pub fn cartesian_product(a: &SimplicialChain, b: &SimplicialChain) -> Result<SimplicialChain> {
    if a.p != b.p {
        return Err(Error::ModulusMismatch(a.p.get(), b.p.get()));
    }
    for amb in [&a.ambient, &b.ambient] {
        if matches!(amb, Ambient::Sphere { .. } | Ambient::LensDisk { .. }) {
            return Err(Error::Unsupported(
                "cartesian product requires chains embedded in flat ambients".into(),
            ));
        }
    }
    let d1 = a.ambient.coord_dim();
    let d2 = b.ambient.coord_dim();
    if d1 + d2 > 64 {
        return Err(Error::BudgetExceeded(format!(
            "product ambient dimension {} too large",
            d1 + d2
        )));
    }
    let dim = a.dim + b.dim;
    let p = a.p.get();
    let paths = monotone_paths(a.dim, b.dim);
    let mut simplices = Vec::new();
    for sa in a.simplices() {
        for sb in b.simplices() {
            let c = (sa.c * sb.c) % p;
            if c == 0 {
                continue;
            }
            for (path, odd) in &paths {
                let verts: Vec<Vec<f64>> = path
                    .iter()
                    .map(|&(i, j)| {
                        let mut v = sa.verts[i].clone();
                        v.extend(sb.verts[j].iter().cloned());
                        v
                    })
                    .collect();
                let cc = if *odd { (p - c) % p } else { c };
                simplices.push(Simplex { verts, c: cc });
            }
        }
    }
    let raw: Vec<(Vec<Vec<f64>>, i64)> = simplices
        .into_iter()
        .map(|s| (s.verts, s.c as i64))
        .collect();
    // Shuffle simplices of a degenerate-free product can still be thin;
    // route through `new` for canonical form but tolerate flat pieces by
    // filtering rather than erroring.
    let kept: Vec<(Vec<Vec<f64>>, i64)> = raw
        .into_iter()
        .filter(|(verts, _)| {
            let s = Simplex {
                verts: verts.clone(),
                c: 1,
            };
            s.dim() == 0 || s.volume() > crate::tol::TAU_VOL
        })
        .collect();
    SimplicialChain::new(Ambient::Euclidean { dim: d1 + d2 }, a.p, false, dim, kept)
}

/// Monotone lattice paths (0,0) -> (j,k) with the parity of the
/// corresponding (j,k)-shuffle.
fn monotone_paths(j: usize, k: usize) -> Vec<(Vec<(usize, usize)>, bool)> {
    let mut out = Vec::new();
    let mut path = vec![(0usize, 0usize)];
    fn rec(
        j: usize,
        k: usize,
        path: &mut Vec<(usize, usize)>,
        inv: usize,
        ups_seen: usize,
        out: &mut Vec<(Vec<(usize, usize)>, bool)>,
    ) {
        let (x, y) = *path.last().unwrap();
        if x == j && y == k {
            out.push((path.clone(), inv % 2 == 1));
            return;
        }
        if x < j {
            // A first-factor step after `ups_seen` second-factor steps
            // adds that many inversions to the shuffle.
            path.push((x + 1, y));
            rec(j, k, path, inv + ups_seen, ups_seen, out);
            path.pop();
        }
        if y < k {
            path.push((x, y + 1));
            rec(j, k, path, inv, ups_seen + 1, out);
            path.pop();
        }
    }
    rec(j, k, &mut path, 0, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Prime;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    fn segment(d: usize, along: usize) -> SimplicialChain {
        let mut a = vec![0.0; d];
        let mut b = vec![0.0; d];
        b[along] = 1.0;
        SimplicialChain::new(
            Ambient::Euclidean { dim: d },
            p2(),
            false,
            1,
            vec![(vec![std::mem::take(&mut a), std::mem::take(&mut b)], 1)],
        )
        .unwrap()
    }

    #[test]
    fn unit_square_has_mass_one() {
        let s = segment(1, 0);
        let prod = cartesian_product(&s, &s).unwrap();
        assert_eq!(prod.dim, 2);
        assert_eq!(prod.simplices().len(), 2);
        assert!((prod.mass() - 1.0).abs() < crate::tol::TAU_REL);
    }

    #[test]
    fn product_with_zero_is_zero() {
        let s = segment(1, 0);
        let z = SimplicialChain::empty(Ambient::Euclidean { dim: 1 }, p2(), false, 1);
        assert!(cartesian_product(&s, &z).unwrap().is_zero());
    }

    #[test]
    fn zero_chain_product_multiplies_coefficients() {
        let p3 = Prime::new(3).unwrap();
        let a = ZeroChain::new(
            Ambient::Euclidean { dim: 1 },
            p3,
            false,
            vec![(vec![0.0], 2)],
        )
        .unwrap();
        let b = ZeroChain::new(
            Ambient::Euclidean { dim: 1 },
            p3,
            false,
            vec![(vec![1.0], 2)],
        )
        .unwrap();
        let prod = zero_product(&a, &b).unwrap();
        assert_eq!(prod.atoms().len(), 1);
        assert_eq!(prod.atoms()[0].c, 1); // 2*2 = 4 = 1 mod 3
    }

    #[test]
    fn leibniz_rule_for_segment_times_segment() {
        let s = segment(1, 0);
        let t = segment(1, 0);
        let prod = cartesian_product(&s, &t).unwrap();
        let lhs = prod.boundary().unwrap();
        let ds_t = cartesian_product(&s.boundary().unwrap(), &t).unwrap();
        let s_dt = cartesian_product(&s, &t.boundary().unwrap()).unwrap();
        // dim S = 1, so the sign on S x dT is (-1)^1 = -1.
        let rhs = ds_t.add(&s_dt.neg()).unwrap();
        assert!(lhs.chain_eq(&rhs), "got {:?}\nwant {:?}", lhs, rhs);
    }

    #[test]
    fn mass_multiplicative_on_skew_segments() {
        let a = SimplicialChain::new(
            Ambient::Euclidean { dim: 2 },
            p2(),
            false,
            1,
            vec![(vec![vec![0.1, 0.2], vec![0.9, 1.4]], 1)],
        )
        .unwrap();
        let b = SimplicialChain::new(
            Ambient::Euclidean { dim: 2 },
            p2(),
            false,
            1,
            vec![(vec![vec![-0.3, 0.0], vec![0.4, 0.8]], 1)],
        )
        .unwrap();
        let prod = cartesian_product(&a, &b).unwrap();
        let expect = a.mass() * b.mass();
        assert!((prod.mass() - expect).abs() <= crate::tol::TAU_REL * expect);
    }
}
