//! Property tests for the chain axioms and the flat-distance metric
//! structure, on randomized instances.

use cycleops::ambient::Ambient;
use cycleops::chain::{cartesian_product, SimplicialChain, ZeroChain};
use cycleops::coeff::Prime;
use cycleops::flatnorm::{flat_distance_0, verify_certificate, FlatOptions};
use cycleops::rng::stratum_rng;
use proptest::prelude::*;
use rand::Rng;

fn prime(v: u64) -> Prime {
    Prime::new(v).unwrap()
}

/// Random fan triangulation around a hub: a 2-complex whose boundary
/// structure exercises face cancellation.
fn random_fan(seed: u64, p: u64) -> SimplicialChain {
    let mut rng = stratum_rng(seed, 0xFA);
    let hub = vec![rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5];
    let n = 3 + (seed % 5) as usize;
    let spokes: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            vec![
                2.0 * rng.gen::<f64>() - 1.0,
                2.0 * rng.gen::<f64>() - 1.0,
                2.0 * rng.gen::<f64>() - 1.0,
            ]
        })
        .collect();
    let tris: Vec<(Vec<Vec<f64>>, i64)> = (0..n)
        .map(|i| {
            (
                vec![hub.clone(), spokes[i].clone(), spokes[(i + 1) % n].clone()],
                1 + (seed as i64 + i as i64) % (p as i64 - 1).max(1),
            )
        })
        .collect();
    SimplicialChain::new(Ambient::Euclidean { dim: 3 }, prime(p), false, 2, tris).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn boundary_of_boundary_vanishes(seed in 0u64..5000, pick in 0usize..3) {
        let p = [2u64, 3, 5][pick];
        let chain = random_fan(seed, p);
        let dd = chain.boundary().unwrap().boundary().unwrap();
        prop_assert!(dd.is_zero(), "dd has {} simplices", dd.simplices().len());
    }

    #[test]
    fn mass_is_subadditive(seed in 0u64..5000) {
        let mut rng = stratum_rng(seed, 1);
        let p = prime(3);
        let amb = Ambient::Euclidean { dim: 2 };
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let atoms: Vec<(Vec<f64>, i64)> = (0..4)
                .map(|_| {
                    (
                        // A coarse grid makes coincidences (and hence
                        // cancellation) actually happen.
                        vec![
                            (rng.gen_range(-2i64..=2)) as f64 / 2.0,
                            (rng.gen_range(-2i64..=2)) as f64 / 2.0,
                        ],
                        rng.gen_range(1..3),
                    )
                })
                .collect();
            ZeroChain::new(amb, p, false, atoms).unwrap()
        };
        let s = mk(&mut rng);
        let t = mk(&mut rng);
        let sum = s.add(&t).unwrap();
        prop_assert!(sum.mass() <= s.mass() + t.mass() + 1e-12);
    }

    #[test]
    fn scaling_bounds_mass_by_weight_factor(seed in 0u64..5000, pick in 0usize..3) {
        // |a c| <= |a| |c| mod p, hence mass(aT) <= |a| mass(T); for
        // p in {2, 3} every unit weight is 1 so mass(aT) <= mass(T).
        let p = [2u64, 3, 5][pick];
        let mut rng = stratum_rng(seed, 2);
        let amb = Ambient::Euclidean { dim: 2 };
        let atoms: Vec<(Vec<f64>, i64)> = (0..5)
            .map(|i| (vec![i as f64, rng.gen::<f64>()], rng.gen_range(1..p as i64)))
            .collect();
        let t = ZeroChain::new(amb, prime(p), false, atoms).unwrap();
        for a in 1..p as i64 {
            let w = (a as u64).min(p - a as u64) as f64;
            prop_assert!(t.scale(a).mass() <= w * t.mass() + 1e-12);
            if p <= 3 {
                prop_assert!(t.scale(a).mass() <= t.mass() + 1e-12);
            }
        }
    }

    #[test]
    fn leibniz_rule_mod_p(seed in 0u64..3000, pick in 0usize..2) {
        let p = [2u64, 3][pick];
        let mut rng = stratum_rng(seed, 3);
        let amb = Ambient::Euclidean { dim: 2 };
        let seg = |rng: &mut rand_chacha::ChaCha8Rng| {
            let segs: Vec<(Vec<Vec<f64>>, i64)> = (0..2)
                .map(|_| {
                    (
                        vec![
                            vec![rng.gen::<f64>(), rng.gen::<f64>()],
                            vec![1.0 + rng.gen::<f64>(), rng.gen::<f64>()],
                        ],
                        rng.gen_range(1..p as i64),
                    )
                })
                .collect();
            SimplicialChain::new(amb, prime(p), false, 1, segs).unwrap()
        };
        let s = seg(&mut rng);
        let t = seg(&mut rng);
        let prod = cartesian_product(&s, &t).unwrap();
        let lhs = prod.boundary().unwrap();
        let ds_t = cartesian_product(&s.boundary().unwrap(), &t).unwrap();
        let s_dt = cartesian_product(&s, &t.boundary().unwrap()).unwrap();
        // dim S = 1: d(S x T) = dS x T - S x dT.
        let rhs = ds_t.add(&s_dt.neg()).unwrap();
        prop_assert!(lhs.chain_eq(&rhs));
    }

    #[test]
    fn product_mass_is_multiplicative(seed in 0u64..3000) {
        let mut rng = stratum_rng(seed, 4);
        let amb = Ambient::Euclidean { dim: 2 };
        let seg = |rng: &mut rand_chacha::ChaCha8Rng| {
            SimplicialChain::new(
                amb,
                prime(2),
                false,
                1,
                vec![(
                    vec![
                        vec![rng.gen::<f64>(), rng.gen::<f64>()],
                        vec![2.0 + rng.gen::<f64>(), rng.gen::<f64>()],
                    ],
                    1,
                )],
            )
            .unwrap()
        };
        let s = seg(&mut rng);
        let t = seg(&mut rng);
        let prod = cartesian_product(&s, &t).unwrap();
        let want = s.mass() * t.mass();
        prop_assert!((prod.mass() - want).abs() <= 1e-6 * want.max(1.0));
    }
}

fn random_chain(
    rng: &mut rand_chacha::ChaCha8Rng,
    p: Prime,
    ambient: Ambient,
    relative: bool,
    count: usize,
) -> ZeroChain<f64> {
    let atoms: Vec<(Vec<f64>, i64)> = (0..count)
        .map(|_| {
            let x = match ambient {
                Ambient::Sphere { .. } => {
                    let a = rng.gen::<f64>() * std::f64::consts::TAU;
                    vec![a.cos(), a.sin()]
                }
                _ => {
                    let r = 0.9 * rng.gen::<f64>();
                    let a = rng.gen::<f64>() * std::f64::consts::TAU;
                    vec![r * a.cos(), r * a.sin()]
                }
            };
            (x, rng.gen_range(1..p.get() as i64))
        })
        .collect();
    ZeroChain::new(ambient, p, relative, atoms).unwrap()
}

#[test]
fn flat_distance_triangle_inequality() {
    let opts = FlatOptions::default();
    for pv in [2u64, 3] {
        let p = prime(pv);
        for seed in 0..150u64 {
            let mut rng = stratum_rng(seed, 0x7127 + pv);
            let amb = if seed % 2 == 0 {
                Ambient::Sphere { dim: 1 }
            } else {
                Ambient::Disk { dim: 2 }
            };
            let relative = seed % 4 == 1;
            let s = random_chain(&mut rng, p, amb, relative, 2);
            let t = random_chain(&mut rng, p, amb, relative, 2);
            let u = random_chain(&mut rng, p, amb, relative, 2);
            let su = flat_distance_0(&s, &u, &opts).unwrap().value;
            let st = flat_distance_0(&s, &t, &opts).unwrap().value;
            let tu = flat_distance_0(&t, &u, &opts).unwrap().value;
            assert!(
                su <= st + tu + 1e-9,
                "p={pv} seed={seed}: {su} > {st} + {tu}"
            );
        }
    }
}

#[test]
fn flat_distance_bounded_by_difference_mass() {
    let opts = FlatOptions::default();
    for seed in 0..100u64 {
        let mut rng = stratum_rng(seed, 0xB0D);
        let p = prime(if seed % 2 == 0 { 2 } else { 3 });
        let amb = Ambient::Disk { dim: 2 };
        let s = random_chain(&mut rng, p, amb, false, 3);
        let t = random_chain(&mut rng, p, amb, false, 2);
        let d = flat_distance_0(&s, &t, &opts).unwrap().value;
        let bound = s.sub(&t).unwrap().mass();
        assert!(d <= bound + 1e-12, "seed {seed}: {d} > {bound}");
    }
}

#[test]
fn certificates_reverify_independently() {
    let opts = FlatOptions::default();
    for seed in 0..100u64 {
        let mut rng = stratum_rng(seed, 0xCE2);
        let p = prime(3);
        let amb = Ambient::Disk { dim: 2 };
        let relative = seed % 2 == 0;
        let s = random_chain(&mut rng, p, amb, relative, 3);
        let t = random_chain(&mut rng, p, amb, relative, 2);
        let r = flat_distance_0(&s, &t, &opts).unwrap();
        verify_certificate(&s, &t, &r.certificate).unwrap();
        assert!((r.certificate.cost - r.value).abs() < 1e-9);
    }
}

#[test]
fn p_annihilation_of_clusters() {
    // p unit points within radius eps cancel through one Steiner node at
    // cost at most p * eps * diameter factor.
    let opts = FlatOptions::default();
    for pv in [2u64, 3, 5] {
        let p = prime(pv);
        let eps = 0.01;
        let amb = Ambient::Euclidean { dim: 2 };
        let atoms: Vec<(Vec<f64>, i64)> = (0..pv)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / pv as f64;
                (vec![0.3 + eps * a.cos(), 0.3 + eps * a.sin()], 1)
            })
            .collect();
        let s = ZeroChain::new(amb, p, false, atoms).unwrap();
        let t = ZeroChain::empty(amb, p, false);
        let d = flat_distance_0(&s, &t, &opts).unwrap().value;
        assert!(
            d <= pv as f64 * eps * 2.0 + 1e-12,
            "p={pv}: {d} > {}",
            pv as f64 * eps * 2.0
        );
    }
}

#[test]
fn bockstein_generic_atom_count_p2() {
    // For k distinct generic points and p = 2: all pair midpoints are
    // distinct, constants vanish: k(k-1)/2 atoms.
    for k in 2..=6usize {
        let mut rng = stratum_rng(k as u64, 0xB0);
        let atoms: Vec<(Vec<f64>, i64)> = (0..k)
            .map(|_| {
                let a = rng.gen::<f64>() * std::f64::consts::TAU;
                (vec![a.cos(), a.sin()], 1)
            })
            .collect();
        let t = ZeroChain::new(Ambient::Sphere { dim: 1 }, prime(2), false, atoms).unwrap();
        let out = cycleops::bockstein::bockstein_b(&t).unwrap().chain;
        assert_eq!(out.atoms().len(), k * (k - 1) / 2, "k={k}");
    }
}

#[test]
fn cyc_equivariance_under_rotation() {
    // Rotating the input rotates barycenters and transforms the lens
    // line directions consistently.
    let mut rng = stratum_rng(3, 0xEE);
    let atoms: Vec<(Vec<f64>, i64)> = (0..4)
        .map(|_| {
            let a = rng.gen::<f64>() * std::f64::consts::TAU;
            (vec![a.cos(), a.sin()], 1)
        })
        .collect();
    let t = ZeroChain::new(Ambient::Sphere { dim: 1 }, prime(2), false, atoms).unwrap();
    let theta = 1.234f64;
    let rot = |v: &[f64]| {
        vec![
            theta.cos() * v[0] - theta.sin() * v[1],
            theta.sin() * v[0] + theta.cos() * v[1],
        ]
    };
    let rotated = ZeroChain::new(
        Ambient::Sphere { dim: 1 },
        prime(2),
        false,
        t.atoms().iter().map(|a| (rot(&a.x), a.c as i64)).collect(),
    )
    .unwrap();
    let c1 = cycleops::bockstein::cyc_0(&t).unwrap();
    let c2 = cycleops::bockstein::cyc_0(&rotated).unwrap();
    assert_eq!(c1.atoms.len(), c2.atoms.len());
    for a in &c1.atoms {
        let want_disk = rot(&a.disk);
        let found = c2.atoms.iter().any(|b| {
            f64::points_coincide_pub(&b.disk, &want_disk)
                && match (&a.lens, &b.lens) {
                    (
                        cycleops::bockstein::LensComponent::Direction(d1),
                        cycleops::bockstein::LensComponent::Direction(d2),
                    ) => {
                        let rd = rot(d1);
                        let dot: f64 = rd.iter().zip(d2.iter()).map(|(x, y)| x * y).sum();
                        (dot.abs() - 1.0).abs() < 1e-9
                    }
                    _ => false,
                }
        });
        assert!(found);
    }
}

trait CoincideExt {
    fn points_coincide_pub(a: &[f64], b: &[f64]) -> bool;
}

impl CoincideExt for f64 {
    fn points_coincide_pub(a: &[f64], b: &[f64]) -> bool {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
            <= 1e-9
    }
}
