//! The geometry runs in single precision as well; on coordinates exact in
//! both types it must agree with double precision.

use extreme_ec::complexes::{ComplexRule, RuleKind};
use extreme_ec::ec_process::{brute_force_ec, ec_curve, ec_process, uniform_grid, ProcessOptions};
use extreme_ec::radial_models::{radius_r_n, sample_cloud, RadialLaw};
use extreme_ec::{ComplexRule32, PointSet32, PointSet64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lattice_cloud(seed: u64) -> (PointSet32, PointSet64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=10);
    // Quarter-integer coordinates: exact in f32 and f64.
    let coords: Vec<i32> = (0..2 * n).map(|_| rng.random_range(-12..=12)).collect();
    (
        PointSet32::from_flat(2, coords.iter().map(|&c| c as f32 * 0.25).collect()).unwrap(),
        PointSet64::from_flat(2, coords.iter().map(|&c| c as f64 * 0.25).collect()).unwrap(),
    )
}

#[test]
fn single_and_double_precision_agree_on_exact_coordinates() {
    // Grid points at odd multiples of 1/64 avoid the lattice's exact ties.
    let grid64: Vec<f64> = (0..40).map(|j| (2 * j + 1) as f64 / 64.0 * 3.0).collect();
    let grid32: Vec<f32> = grid64.iter().map(|&t| t as f32).collect();
    for seed in 0..40 {
        let (p32, p64) = lattice_cloud(seed);
        for kind in RuleKind::BUILT_IN {
            let r32 = ComplexRule32::new(kind, 1.0).unwrap();
            let r64 = ComplexRule::<f64>::new(kind, 1.0).unwrap();
            let a = ec_curve(&p32, &r32, &grid32, Default::default()).unwrap();
            let b = ec_curve(&p64, &r64, &grid64, Default::default()).unwrap();
            assert_eq!(a.chi, b.chi, "seed {seed} {}", kind.as_str());
            let j = seed as usize % grid32.len();
            assert_eq!(brute_force_ec(&p32, &r32, grid32[j]).unwrap(), a.chi[j]);
        }
    }
}

#[test]
fn single_precision_process_from_a_sampled_cloud() {
    let law = RadialLaw::example_3_2();
    let n = 20_000;
    let cloud = sample_cloud::<f32>(&law, n, 3);
    let r_n = radius_r_n(&law, n, 1.0).unwrap();
    let grid: Vec<f32> = uniform_grid(3.0, 0.02).unwrap().into_iter().map(|t| t as f32).collect();
    let process = ec_process(&cloud, &ComplexRule32::example_rule(), r_n, &grid, ProcessOptions::default()).unwrap();
    assert_eq!(process.chi[0] as usize, process.exterior_count);
    assert!(process.exterior_count > 100);
    let double = sample_cloud::<f64>(&law, n, 3);
    assert_eq!(double.points_outside(r_n).len(), process.exterior_count);
}
