//! Sequential vs rayon execution of the data-parallel inner loops: the
//! diagonal-excision Monte Carlo series and a batch of flat-distance
//! solves. Run with `cargo bench -p cycleops`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cycleops::ambient::Ambient;
use cycleops::bockstein::{cyc_poly_mass_series, equatorial_polygon, SeriesOptions};
use cycleops::chain::ZeroChain;
use cycleops::coeff::Prime;
use cycleops::exec::{map_indexed, Exec};
use cycleops::flatnorm::{flat_distance_0, FlatOptions};
use cycleops::rng::stratum_rng;
use rand::Rng;

fn bench_mass_series(c: &mut Criterion) {
    let r = equatorial_polygon(12, 2);
    let mut group = c.benchmark_group("cyc_mass_series");
    group.sample_size(10);
    for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            let opts = SeriesOptions {
                i_max: 8,
                samples: 120_000,
                seed: 7,
                exec,
            };
            b.iter(|| cyc_poly_mass_series(&r, &opts).unwrap());
        });
    }
    group.finish();
}

fn bench_flatnorm_batch(c: &mut Criterion) {
    // A batch of independent solver instances, fanned out by the same
    // dispatcher the library uses internally.
    let p = Prime::new(3).unwrap();
    let amb = Ambient::Disk { dim: 2 };
    let instances: Vec<(ZeroChain<f64>, ZeroChain<f64>)> = (0..64u64)
        .map(|seed| {
            let mut rng = stratum_rng(seed, 0xBE);
            let mut mk = |k: usize| {
                let atoms: Vec<(Vec<f64>, i64)> = (0..k)
                    .map(|_| {
                        let r: f64 = 0.9 * rng.gen::<f64>();
                        let a: f64 = std::f64::consts::TAU * rng.gen::<f64>();
                        (vec![r * a.cos(), r * a.sin()], rng.gen_range(1..3))
                    })
                    .collect();
                ZeroChain::new(amb, p, false, atoms).unwrap()
            };
            (mk(4), mk(3))
        })
        .collect();
    let mut group = c.benchmark_group("flatnorm_batch");
    group.sample_size(10);
    for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| {
                let values = map_indexed(instances.len(), exec, |i| {
                    let (s, t) = &instances[i];
                    flat_distance_0(s, t, &FlatOptions::default()).unwrap().value
                });
                values.iter().sum::<f64>()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_mass_series, bench_flatnorm_batch);
criterion_main!(benches);
