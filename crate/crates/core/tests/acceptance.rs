//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its timing and detail string. `verify-all` on the command
//! line runs the same table.

use cycleops::verify::{run_all, CriterionResult};

fn run(id: usize) -> CriterionResult {
    let seed = 7;
    let mut rs = run_all(seed, Some(&id.to_string()));
    let r = rs.remove(0);
    println!(
        "[{}] {:>2} {:<22} ({} ms) {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.millis,
        r.details
    );
    r
}

macro_rules! criterion_test {
    ($name:ident, $id:expr) => {
        #[test]
        fn $name() {
            let r = run($id);
            assert!(r.passed, "criterion {} failed: {}", r.id, r.details);
        }
    };
}

criterion_test!(criterion_01_bockstein_figure, 1);
criterion_test!(criterion_02_cyc_figure, 2);
criterion_test!(criterion_03_fourier_block, 3);
criterion_test!(criterion_04_jacobian_lemma, 4);
criterion_test!(criterion_05_flatnorm_oracle, 5);
criterion_test!(criterion_06_gluing_chain_map, 6);
criterion_test!(criterion_07_orbit_arithmetic, 7);
criterion_test!(criterion_08_cellular_bockstein, 8);
criterion_test!(criterion_09_sweep_bridge, 9);
criterion_test!(criterion_10_planar_steenrod, 10);
criterion_test!(criterion_11_rank_lemma, 11);
criterion_test!(criterion_12_excision_mass_series, 12);
criterion_test!(criterion_13_localization_toolkit, 13);
