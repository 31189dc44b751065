//! The acceptance suite: thirteen checks, each pinned to its stated
//! tolerance, runnable from the test harness and from the command line.

use crate::ambient::Ambient;
use crate::bockstein::{
    bockstein_b, cyc_0, cyc_poly_mass_series, equatorial_polygon, LensComponent, SeriesOptions,
};
use crate::cellular::{bg_sweep_family, evaluate_family_class, lens_complex, mapping_cone_degree_p};
use crate::chain::{SimplicialChain, ZeroChain};
use crate::coeff::Prime;
use crate::exec::Exec;
use crate::flatnorm::{flat_distance_0, flat_oracle_0, FlatOptions};
use crate::fourier::{
    build_dft, burnside_count, count_free_orbits, orbit_enumerate, rank_of_diagonal_projection,
    DiagonalExcisionMap,
};
use crate::gluing::{
    coarea_select_radius, doubling_merge, rpn_family, standard_gluing,
    torus_bundle_family, BallComplex, GeneralizedBall, GluingOptions,
};
use crate::rng::stratum_rng;
use crate::scalar::Scalar;
use crate::steenrod::{bisection_witness, chord_through, sq_planar};
use crate::subspace::Subspace;
use num::BigRational;
use rand::Rng;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
}

type Criterion = (usize, &'static str, fn(u64) -> (bool, String));

pub const CRITERIA: &[Criterion] = &[
    (1, "bockstein-figure", c1_bockstein_figure),
    (2, "cyc-figure", c2_cyc_figure),
    (3, "fourier-block", c3_fourier_block),
    (4, "jacobian-lemma", c4_jacobian_lemma),
    (5, "flatnorm-oracle", c5_flatnorm_oracle),
    (6, "gluing-chain-map", c6_gluing_chain_map),
    (7, "orbit-arithmetic", c7_orbit_arithmetic),
    (8, "cellular-bockstein", c8_cellular_bockstein),
    (9, "sweep-count-bridge", c9_sweep_bridge),
    (10, "planar-steenrod", c10_planar_steenrod),
    (11, "rank-lemma", c11_rank_lemma),
    (12, "excision-mass-series", c12_mass_series),
    (13, "localization-toolkit", c13_localization),
];

pub fn run_all(seed: u64, only: Option<&str>) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|(id, name, _)| match only {
            None => true,
            Some(f) => name.contains(f) || id.to_string() == f,
        })
        .map(|&(id, name, f)| {
            let start = Instant::now();
            let (passed, details) = f(seed);
            CriterionResult {
                id,
                name,
                passed,
                details,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Four generic rational points on the unit circle (the figure's
/// configuration; a true inscribed square merges its diagonal midpoints
/// away mod 2, which criterion 2 exercises instead).
pub fn generic_four_cycle() -> ZeroChain<BigRational> {
    ZeroChain::new(
        Ambient::Sphere { dim: 1 },
        Prime::new(2).unwrap(),
        false,
        vec![
            (vec![rat(1, 1), rat(0, 1)], 1),
            (vec![rat(3, 5), rat(4, 5)], 1),
            (vec![rat(-1, 1), rat(0, 1)], 1),
            (vec![rat(-4, 5), rat(-3, 5)], 1),
        ],
    )
    .unwrap()
}

pub fn square_cycle() -> ZeroChain<BigRational> {
    ZeroChain::new(
        Ambient::Sphere { dim: 1 },
        Prime::new(2).unwrap(),
        false,
        vec![
            (vec![rat(1, 1), rat(0, 1)], 1),
            (vec![rat(0, 1), rat(1, 1)], 1),
            (vec![rat(-1, 1), rat(0, 1)], 1),
            (vec![rat(0, 1), rat(-1, 1)], 1),
        ],
    )
    .unwrap()
}

pub fn rational_triangle() -> ZeroChain<BigRational> {
    ZeroChain::new(
        Ambient::Sphere { dim: 1 },
        Prime::new(3).unwrap(),
        false,
        vec![
            (vec![rat(1, 1), rat(0, 1)], 1),
            (vec![rat(-3, 5), rat(4, 5)], 1),
            (vec![rat(-3, 5), rat(-4, 5)], 1),
        ],
    )
    .unwrap()
}

fn c1_bockstein_figure(_seed: u64) -> (bool, String) {
    // p = 2: six pair midpoints, coefficient 1, exact rational equality.
    let four = generic_four_cycle();
    let out = bockstein_b(&four).unwrap().chain;
    let pts: Vec<Vec<BigRational>> = four.atoms().iter().map(|a| a.x.clone()).collect();
    let mut expected: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            expected.push(
                pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| a.add(b).div_int(2))
                    .collect(),
            );
        }
    }
    let mut ok = out.atoms().len() == 6 && out.atoms().iter().all(|a| a.c == 1);
    for e in &expected {
        ok &= out.atoms().iter().any(|a| a.x == *e);
    }
    // p = 3: six trisection points with coefficient 1 plus the barycenter
    // with coefficient 2; the three constant orbits vanish.
    let tri = rational_triangle();
    let out3 = bockstein_b(&tri).unwrap().chain;
    let center = vec![rat(-1, 15), rat(0, 1)];
    let mut tris = 0;
    let mut centers = 0;
    for a in out3.atoms() {
        if a.x == center {
            centers += 1;
            ok &= a.c == 2;
        } else {
            tris += 1;
            ok &= a.c == 1;
        }
    }
    ok &= tris == 6 && centers == 1;
    (
        ok,
        format!(
            "p=2: {} midpoint atoms; p=3: {} trisection + {} barycenter (coeff 2)",
            out.atoms().len(),
            tris,
            centers
        ),
    )
}

fn c2_cyc_figure(_seed: u64) -> (bool, String) {
    let sq = square_cycle();
    let out = cyc_0(&sq).unwrap();
    let pts: Vec<Vec<BigRational>> = sq.atoms().iter().map(|a| a.x.clone()).collect();
    let mut ok = out.atoms.len() == 6;
    for i in 0..4 {
        for j in i + 1..4 {
            let mid: Vec<BigRational> = pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| a.add(b).div_int(2))
                .collect();
            let dir = BigRational::canonical_direction(
                &pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| a.sub(b))
                    .collect::<Vec<_>>(),
            );
            ok &= out.atoms.iter().any(|a| {
                a.disk == mid
                    && matches!(&a.lens, LensComponent::Direction(d) if *d == dir)
                    && a.c == 1
            });
        }
    }
    // Projection onto the disk factor equals the Bockstein output
    // exactly (the two origin atoms merge away mod 2).
    let proj = out.disk_projection().unwrap();
    let b = bockstein_b(&sq).unwrap().chain;
    ok &= proj.chain_eq(&b);
    (
        ok,
        format!(
            "6 (line, midpoint) atoms with exact spans; projection equals the Bockstein output ({} atoms after merge)",
            b.atoms().len()
        ),
    )
}

fn c3_fourier_block(_seed: u64) -> (bool, String) {
    let mut worst_orth: f64 = 0.0;
    let mut worst_diag: f64 = 0.0;
    for p in [2u64, 3, 5, 7] {
        let dft = build_dft(Prime::new(p).unwrap());
        let (o, d) = dft.residuals();
        worst_orth = worst_orth.max(o);
        worst_diag = worst_diag.max(d);
    }
    (
        worst_orth < 1e-12 && worst_diag < 1e-12,
        format!("max |FF^T - I| = {worst_orth:.2e}, max |M - F^T D F| = {worst_diag:.2e}"),
    )
}

fn c4_jacobian_lemma(seed: u64) -> (bool, String) {
    let mut worst_rel: f64 = 0.0;
    let mut worst_null: f64 = 0.0;
    let mut ok = true;
    for p in [2u64, 3] {
        for n in [1usize, 2] {
            for eps in [0.05, 0.1, 0.5] {
                let map = DiagonalExcisionMap::new(Prime::new(p).unwrap(), n);
                for trial in 0..50u64 {
                    let v = map.point_at_diag_dist(eps, seed ^ (trial * 7919 + p + n as u64));
                    let split = map.jacobian_split(&v).unwrap();
                    // Multiplicity pattern: n+1 directions at 1/sqrt(p),
                    // (p-1)(n+1)-1 level-set-tangent directions at
                    // 1/eps, and the single normal direction where the
                    // sphere-normalized map is flat.
                    ok &= split.fd.diag_fd.len() == n + 1;
                    ok &= split.fd.tangent_fd.len()
                        == (p as usize - 1) * (n + 1) - 1;
                    worst_rel = worst_rel.max(split.fd.max_rel_err);
                    worst_null = worst_null.max(split.fd.radial_fd * eps);
                }
            }
        }
    }
    ok &= worst_rel < 1e-4 && worst_null < 1e-6;
    (
        ok,
        format!(
            "finite differences match the 1/sqrt(p), 1/eps pattern to rel {worst_rel:.2e}; level-set normal residual {worst_null:.2e}"
        ),
    )
}

fn c5_flatnorm_oracle(seed: u64) -> (bool, String) {
    let mut exact = 0usize;
    let mut total = 0usize;
    let mut worst: f64 = 0.0;
    for instance in 0..500u64 {
        let mut rng = stratum_rng(seed ^ 0xF1A7, instance);
        let p = Prime::new(if instance % 2 == 0 { 2 } else { 3 }).unwrap();
        let on_sphere = instance % 4 < 2;
        let relative = !on_sphere && instance % 4 == 3;
        let ambient = if on_sphere {
            Ambient::Sphere { dim: 1 }
        } else {
            Ambient::Disk { dim: 2 }
        };
        // Rational(ish) coordinates: circle points from the Pythagorean
        // parametrization, disk points on a 1/16 grid.
        let mut mk = |count: usize| -> ZeroChain<f64> {
            let atoms: Vec<(Vec<f64>, i64)> = (0..count)
                .map(|_| {
                    let x = if on_sphere {
                        let t = (rng.gen_range(-8i64..=8) as f64) / 4.0;
                        let d = 1.0 + t * t;
                        vec![(1.0 - t * t) / d, 2.0 * t / d]
                    } else {
                        loop {
                            let cand = vec![
                                rng.gen_range(-12i64..=12) as f64 / 16.0,
                                rng.gen_range(-12i64..=12) as f64 / 16.0,
                            ];
                            if crate::ambient::norm(&cand) <= 0.95 {
                                break cand;
                            }
                        }
                    };
                    (x, rng.gen_range(1..p.get() as i64))
                })
                .collect();
            ZeroChain::new(ambient, p, relative, atoms).unwrap()
        };
        let s = mk(3);
        let t = mk(2);
        let units: usize = s.sub(&t).unwrap().atoms().iter().map(|a| {
            let c = a.c;
            c.min(p.get() - c) as usize
        }).sum();
        if units > 12 {
            continue;
        }
        total += 1;
        let solver = flat_distance_0(&s, &t, &FlatOptions::default())
            .unwrap()
            .value;
        let oracle = flat_oracle_0(&s, &t).unwrap();
        if solver == oracle {
            exact += 1;
        }
        worst = worst.max((solver - oracle).abs());
    }
    (
        exact == total,
        format!("{exact}/{total} instances bit-identical (worst gap {worst:.2e})"),
    )
}

fn c6_gluing_chain_map(seed: u64) -> (bool, String) {
    let p2 = Prime::new(2).unwrap();
    let families = [
        ("torus", torus_bundle_family(p2, 8, 8).unwrap()),
        ("rp1", rpn_family(p2, 6).unwrap()),
    ];
    let mut worst_defect: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let opts = GluingOptions::default();
    for (_, fam) in &families {
        for trial in 0..50u64 {
            let mut rng = stratum_rng(seed ^ 0x61, trial);
            let nseg = 1 + (trial % 3) as usize;
            let segs: Vec<(Vec<Vec<f64>>, i64)> = (0..nseg)
                .map(|_| {
                    let a = rng.gen::<f64>() * fam.period;
                    let b = a + 0.05 + rng.gen::<f64>() * 0.8;
                    (vec![vec![a], vec![b]], 1)
                })
                .collect();
            let t = SimplicialChain::new(Ambient::Euclidean { dim: 1 }, p2, false, 1, segs)
                .unwrap();
            let glued = match standard_gluing(fam, &t, &opts) {
                Ok(g) => g,
                Err(_) => {
                    // Endpoint landed on a cell boundary: perturb.
                    let o2 = GluingOptions {
                        perturb_seed: Some(trial),
                        ..opts
                    };
                    standard_gluing(fam, &t, &o2).unwrap()
                }
            };
            let defect = {
                let lhs = glued.chain.boundary().unwrap();
                let rhs = standard_gluing(fam, &t.boundary().unwrap(), &opts)
                    .unwrap()
                    .chain;
                lhs.sub(&rhs).unwrap().mass()
            };
            worst_defect = worst_defect.max(defect);
            worst_ratio =
                worst_ratio.max(glued.chain.mass() / (glued.constant * t.mass()));
        }
    }
    // The torus fundamental cycle must glue to the product-polygon torus
    // (derived oracle: fiber polygon perimeter times the swept base
    // chord length).
    let fam = &families[0].1;
    let shift = 0.013;
    let segs: Vec<(Vec<Vec<f64>>, i64)> = (0..5)
        .map(|i| {
            (
                vec![
                    vec![shift + fam.period * i as f64 / 5.0],
                    vec![shift + fam.period * (i + 1) as f64 / 5.0],
                ],
                1,
            )
        })
        .collect();
    let t = SimplicialChain::new(Ambient::Euclidean { dim: 1 }, p2, false, 1, segs).unwrap();
    let glued = standard_gluing(fam, &t, &opts).unwrap();
    let cycle_ok = glued.chain.boundary().unwrap().is_zero();
    let fiber_per = 8.0 * 2.0 * (std::f64::consts::PI / 8.0).sin();
    let base_chord_sum: f64 = {
        // Recompute the sweep's base polygon from first principles: the
        // subdivision points are the clip cuts plus uniform steps.
        let glued_base_steps = 8.0;
        let mut sum = 0.0;
        for i in 0..5 {
            let a = shift + fam.period * i as f64 / 5.0;
            let b = shift + fam.period * (i + 1) as f64 / 5.0;
            let mut cuts = vec![a, b];
            for arc in &fam.arcs {
                for bb in [arc.lo, arc.hi] {
                    let mut x = bb + fam.period * ((a - bb) / fam.period).floor();
                    while x <= b + 1e-12 {
                        if x > a + 1e-12 && x < b - 1e-12 {
                            cuts.push(x);
                        }
                        x += fam.period;
                    }
                }
            }
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
            for w in cuts.windows(2) {
                let steps = glued_base_steps as usize;
                for s in 0..steps {
                    let s0 = w[0] + (w[1] - w[0]) * s as f64 / glued_base_steps;
                    let s1 = w[0] + (w[1] - w[0]) * (s + 1) as f64 / glued_base_steps;
                    sum += 2.0 * ((s1 - s0) / 2.0).sin();
                }
            }
        }
        sum
    };
    let oracle = fiber_per * base_chord_sum;
    let mass_ok = (glued.chain.mass() - oracle).abs() <= crate::tol::TAU_REL * oracle;
    let ok = worst_defect < crate::tol::TAU_REL && worst_ratio <= 1.0 + 1e-9 && cycle_ok && mass_ok;
    (
        ok,
        format!(
            "100 chain-map defects <= {worst_defect:.2e}; mass ratio vs C <= {worst_ratio:.3}; torus cycle mass {:.6} vs derived {:.6}",
            glued.chain.mass(),
            oracle
        ),
    )
}

fn c7_orbit_arithmetic(_seed: u64) -> (bool, String) {
    let mut ok = true;
    for k in 1..=6usize {
        for p in [2u64, 3, 5] {
            let prime = Prime::new(p).unwrap();
            ok &= orbit_enumerate(k, prime).unwrap().len() as u64 == burnside_count(k, prime);
        }
    }
    let mut residues = Vec::new();
    for p in [2u64, 3, 5, 7, 11] {
        let c = count_free_orbits(Prime::new(p).unwrap());
        residues.push((p, c.m, c.residue));
        ok &= c.residue == p - 1;
    }
    (
        ok,
        format!("Burnside exact for k <= 6, p <= 5; free-orbit residues {residues:?}"),
    )
}

fn c8_cellular_bockstein(_seed: u64) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2u64, 3, 5] {
        let prime = Prime::new(p).unwrap();
        let cone = mapping_cone_degree_p(prime);
        let beta = cone.bockstein_snake(1, &[1], prime, None).unwrap();
        ok &= beta == vec![1];
        notes.push(format!("cone p={p}: beta(psi)(e2)={}", beta[0]));
        let lens = lens_complex(prime, 5).unwrap();
        let b1 = lens.bockstein_snake(1, &[1], prime, None).unwrap();
        // Isomorphism H^1 -> H^2: the image of the generator generates.
        ok &= !lens.cohomologous(2, &b1, &[0], prime);
        // Lift independence.
        let b1b = lens.bockstein_snake(1, &[1], prime, Some(11)).unwrap();
        ok &= lens.cohomologous(2, &b1, &b1b, prime);
        // beta after beta dies in cohomology, in every degree available.
        for k in 1..=3usize {
            let gen = vec![1u64];
            if lens.bockstein_snake(k, &gen, prime, None).is_ok() {
                let once = lens.bockstein_snake(k, &gen, prime, None).unwrap();
                if k + 2 <= lens.top_dim() {
                    let twice = lens.bockstein_snake(k + 1, &once, prime, None).unwrap();
                    ok &= lens.cohomologous(k + 2, &twice, &[0], prime);
                }
            }
        }
    }
    (ok, notes.join("; "))
}

fn c9_sweep_bridge(_seed: u64) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2u64, 3] {
        let prime = Prime::new(p).unwrap();
        let fam = bg_sweep_family(prime, 128).unwrap();
        ok &= fam.chain_deviation < 1e-9 && fam.equivariance_deviation < 1e-9;
        let rep = evaluate_family_class(&fam, 0.437).unwrap();
        ok &= rep.degree == -(rep.m as i64);
        ok &= rep.residue == 1;
        notes.push(format!(
            "p={p}: degree {} = -(m={}) with residue {}",
            rep.degree, rep.m, rep.residue
        ));
    }
    (ok, notes.join("; "))
}

fn c10_planar_steenrod(seed: u64) -> (bool, String) {
    let mut worst_bisect: f64 = 0.0;
    let mut round_trips = 0usize;
    let mut round_trip_total = 0usize;
    let mut ok = true;
    // Bisection residuals over random chords for each (n, k) pair.
    for n in [1usize, 2, 3] {
        for k in [0usize, 1, 2] {
            if k + 1 > n + 1 {
                continue;
            }
            let mut rng = stratum_rng(seed ^ 0x57EE, (n * 10 + k) as u64);
            // Random affine V of dimension k+1 meeting the sphere.
            let dirs: Vec<Vec<f64>> = (0..k + 1)
                .map(|_| (0..n + 1).map(|_| rng.gen::<f64>() - 0.5).collect())
                .collect();
            let offset: Vec<f64> = (0..n + 1).map(|_| 0.4 * (rng.gen::<f64>() - 0.5)).collect();
            let v = Subspace::affine(n + 1, &dirs, &offset).unwrap();
            if v.dim() != k + 1 || v.offset().norm() >= 0.9 {
                continue;
            }
            for _ in 0..(1000 / 9 + 1) {
                // Chord through a random interior slice point.
                let coeffs: Vec<f64> = (0..v.dim()).map(|_| rng.gen::<f64>() - 0.5).collect();
                let dirv = v.basis() * nalgebra::DVector::from_column_slice(&coeffs);
                if dirv.norm() < 1e-6 {
                    continue;
                }
                let line: Vec<f64> =
                    Scalar::canonical_direction(&dirv.iter().copied().collect::<Vec<f64>>());
                // Base point in l_perp cap V cap interior.
                let lvec = nalgebra::DVector::from_column_slice(&line);
                let mut z = v.offset().clone();
                for j in 0..v.dim() {
                    let b = v.basis().column(j).into_owned();
                    let b_perp = &b - &lvec * lvec.dot(&b);
                    z += b_perp * (0.3 * (rng.gen::<f64>() - 0.5));
                }
                if z.norm() >= 0.95 {
                    continue;
                }
                let zs: Vec<f64> = z.iter().copied().collect();
                let Ok((x, y)) = chord_through(&zs, &line) else {
                    continue;
                };
                let w = bisection_witness(&x, &y, &v).unwrap();
                worst_bisect = worst_bisect
                    .max(w.orthogonality_residual)
                    .max(w.membership_residual);
            }
        }
    }
    ok &= worst_bisect < 1e-12;
    // Sample -> member round trips on the planar family.
    for (n, k, i) in [(2usize, 1usize, 1usize), (2, 1, 2), (3, 1, 1)] {
        let mut dirs = Vec::new();
        for j in 0..k + 1 {
            let mut d = vec![0.0; n + 1];
            d[j] = 1.0;
            dirs.push(d);
        }
        let mut offset = vec![0.0; n + 1];
        offset[n] = 0.4;
        let v = Subspace::affine(n + 1, &dirs, &offset).unwrap();
        let fam = sq_planar(&v, n, k, i).unwrap();
        let pts = fam.sample(334, seed ^ 0x5a);
        for (q, _) in &pts {
            round_trip_total += 1;
            if fam.member(q, 1e-6).is_some() {
                round_trips += 1;
            }
        }
    }
    ok &= round_trips == round_trip_total;
    (
        ok,
        format!(
            "bisection residual max {worst_bisect:.2e} over (n,k) grid; {round_trips}/{round_trip_total} sample->member round trips"
        ),
    )
}

fn c11_rank_lemma(seed: u64) -> (bool, String) {
    let mut ok = true;
    let mut min_slack = i64::MAX;
    for trial in 0..200u64 {
        let mut rng = stratum_rng(seed ^ 0x7a, trial);
        let p = [2usize, 3, 5][(trial % 3) as usize];
        let m = 3 + (trial % 2) as usize;
        let factors: Vec<Subspace> = (0..p)
            .map(|_| {
                let dim = rng.gen_range(0..=m);
                let cols: Vec<Vec<f64>> = (0..dim)
                    .map(|_| (0..m).map(|_| rng.gen::<f64>() - 0.5).collect())
                    .collect();
                Subspace::span(m, &cols).unwrap()
            })
            .collect();
        let r = rank_of_diagonal_projection(&factors).unwrap();
        ok &= r.rank >= r.lower_bound;
        min_slack = min_slack.min(r.rank as i64 - r.lower_bound as i64);
    }
    // Equality clause when all factors coincide.
    for m in 1..=3usize {
        let cols: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut v = vec![0.0; 4];
                v[i] = 1.0;
                v
            })
            .collect();
        let s = Subspace::span(4, &cols).unwrap();
        let r = rank_of_diagonal_projection(&[s.clone(), s.clone(), s]).unwrap();
        ok &= r.rank == m && r.lower_bound == m;
    }
    (
        ok,
        format!("bound held on 200 tuples (min slack {min_slack}); equality at coinciding factors"),
    )
}

fn c12_mass_series(seed: u64) -> (bool, String) {
    let r = equatorial_polygon(16, 2);
    let opts = SeriesOptions {
        i_max: 16,
        samples: 1_000_000,
        seed,
        exec: Exec::Parallel,
    };
    let s = cyc_poly_mass_series(&r, &opts).unwrap();
    let monotone = s.mass.windows(2).all(|w| w[1] + 1e-6 >= w[0]);
    let fit_ok = s.cauchy_fit.r_squared >= 0.9;
    let ratio_ok = s.boundary_ratio_max.is_finite() && s.boundary_ratio_max <= 32.0;
    // Stability: the later boundary slices hover around a common level.
    let tail: Vec<f64> = s.boundary_mass.iter().skip(3).copied().collect();
    let tail_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let stable = tail
        .iter()
        .all(|b| *b <= 2.0 * tail_mean && *b >= 0.25 * tail_mean);
    let bound_ok = s.mass_bound_constant.is_finite() && s.mass_bound_constant <= 8.0;
    (
        monotone && fit_ok && ratio_ok && stable && bound_ok,
        format!(
            "M_i monotone; Cauchy fit C={:.4} with R^2={:.3}; max B_i/M(R)={:.3} (tail mean {:.3}); mass-bound C={:.3}",
            s.cauchy_fit.c, s.cauchy_fit.r_squared, s.boundary_ratio_max, tail_mean, s.mass_bound_constant
        ),
    )
}

fn c13_localization(seed: u64) -> (bool, String) {
    let mut ok = true;
    // Coarea certificates on 100 random instances.
    let mut worst_slack: f64 = f64::INFINITY;
    for trial in 0..100u64 {
        let mut rng = stratum_rng(seed ^ 0xC0, trial);
        let taus: Vec<SimplicialChain> = (0..5)
            .map(|_| {
                let segs: Vec<(Vec<Vec<f64>>, i64)> = (0..4)
                    .map(|_| {
                        (
                            vec![
                                vec![rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5],
                                vec![rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5],
                            ],
                            1,
                        )
                    })
                    .collect();
                SimplicialChain::new(
                    Ambient::Euclidean { dim: 2 },
                    Prime::new(2).unwrap(),
                    false,
                    1,
                    segs,
                )
                .unwrap()
            })
            .collect();
        let ball = GeneralizedBall::Interior {
            center: vec![0.0, 0.0],
            radius: 0.2,
        };
        let s = 0.1 + 0.1 * rng.gen::<f64>();
        let lambda = 0.2 + 0.6 * rng.gen::<f64>();
        match coarea_select_radius(&taus, &ball, s, lambda) {
            Ok(cert) => {
                for c in &cert.per_chain {
                    ok &= c.slice_mass <= c.slice_bound + 1e-9;
                    ok &= c.collar_mass <= c.collar_bound + 1e-9;
                    worst_slack = worst_slack.min(c.slice_bound - c.slice_mass);
                }
            }
            Err(_) => ok = false,
        }
    }
    // Doubling merges on 100 random ball families over a vertex-edge
    // complex; the constructor verifies both bullets and containment.
    let complex = BallComplex {
        dims: vec![0, 1],
        faces: vec![vec![], vec![0]],
    };
    let mut merged_ok = 0;
    for trial in 0..100u64 {
        let mut rng = stratum_rng(seed ^ 0xD0, trial);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| -> Vec<GeneralizedBall> {
            (0..n)
                .map(|_| {
                    // Radii well below the collar scale: the merging
                    // procedure amplifies radii geometrically, and the
                    // doubling guarantees presume the result stays a
                    // legal generalized ball.
                    if rng.gen::<f64>() < 0.25 {
                        GeneralizedBall::Boundary {
                            theta: rng.gen::<f64>() * std::f64::consts::TAU,
                            radius: 0.002 + 0.004 * rng.gen::<f64>(),
                        }
                    } else {
                        let a = rng.gen::<f64>() * std::f64::consts::TAU;
                        let r = 0.7 * rng.gen::<f64>();
                        GeneralizedBall::Interior {
                            center: vec![r * a.cos(), r * a.sin()],
                            radius: 0.002 + 0.004 * rng.gen::<f64>(),
                        }
                    }
                })
                .collect()
        };
        let u0 = mk(&mut rng, 2);
        let u1 = mk(&mut rng, 3);
        if doubling_merge(&complex, &[u0, u1], 0.2, 0.9).is_ok() {
            merged_ok += 1;
        }
    }
    ok &= merged_ok == 100;
    (
        ok,
        format!(
            "coarea certificates held on 100 instances (min slice slack {worst_slack:.3}); {merged_ok}/100 doubling merges verified"
        ),
    )
}
