use cycleops::ambient::Ambient;
use cycleops::chain::ZeroChain;
use cycleops::coeff::Prime;
use cycleops::flatnorm::{flat_distance_0, flat_oracle_0, FlatOptions};

#[test]
fn circle_matching_tie() {
    let amb = Ambient::Sphere { dim: 1 };
    let p = Prime::new(3).unwrap();
    let s = ZeroChain::new(amb, p, false, vec![
        (vec![0.0, 1.0], 1),
        (vec![0.8823529411764706, 0.47058823529411764], 2),
    ]).unwrap();
    let t = ZeroChain::new(amb, p, false, vec![
        (vec![-0.6, 0.8], 2),
        (vec![0.6, 0.8], 1),
    ]).unwrap();
    let solver = flat_distance_0(&s, &t, &FlatOptions::default()).unwrap().value;
    let oracle = flat_oracle_0(&s, &t).unwrap();
    println!("solver {:.20e}", solver);
    println!("oracle {:.20e}", oracle);
    assert_eq!(solver.to_bits(), oracle.to_bits());
}
