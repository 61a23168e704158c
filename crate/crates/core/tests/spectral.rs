//! Eigendecomposition, expansion coefficients and clock planning, checked
//! against nalgebra and against the defining identities.

use approx::assert_relative_eq;
use hhl_core::random::{exact_ratio_system, hermitian_with_spectrum, random_hermitian, random_unit_vector};
use hhl_core::{
    clock_register_plan, condition_number, hermitian_eigen, validate_system, CMatrix64, SpectralData64, C64,
};
use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_nalgebra(m: &CMatrix64) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn oracle_eigenvalues(m: &CMatrix64) -> Vec<f64> {
    let mut v: Vec<f64> = to_nalgebra(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_nalgebra(seed in any::<u64>(), n in 1u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: CMatrix64 = random_hermitian(&mut rng, 1 << n);
        let eig = hermitian_eigen(&a).unwrap();
        let oracle = oracle_eigenvalues(&a);
        for (x, y) in eig.values.iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-10, "{x} vs nalgebra {y}");
        }
    }

    #[test]
    fn eigenpairs_satisfy_their_equation(seed in any::<u64>(), n in 1u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: CMatrix64 = random_hermitian(&mut rng, 1 << n);
        let eig = hermitian_eigen(&a).unwrap();
        prop_assert!(eig.vectors.unitarity_deviation() <= 1e-12);
        for (j, &lambda) in eig.values.iter().enumerate() {
            let u = eig.vectors.column(j);
            let au = a.mul_vec(&u);
            for (x, y) in au.iter().zip(&u) {
                prop_assert!((x - y * lambda).norm() <= 1e-10);
            }
        }
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn coefficients_reconstruct_b(seed in any::<u64>(), n in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 1usize << n;
        let eigs: Vec<f64> = (1..=dim).map(|k| k as f64 * 0.7).collect();
        let a = hermitian_with_spectrum(&mut rng, &eigs);
        let sys = validate_system(a, random_unit_vector(&mut rng, dim)).unwrap();
        let spec = SpectralData64::analyze(&sys, None).unwrap();
        let rebuilt = spec.eigenvectors.mul_vec(&spec.coefficients);
        for (x, y) in rebuilt.iter().zip(sys.rhs()) {
            prop_assert!((x - y).norm() <= 1e-10);
        }
        let mass: f64 = spec.coefficients.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((mass - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn kappa_is_scale_invariant(seed in any::<u64>(), s in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: CMatrix64 = random_hermitian(&mut rng, 4);
        let eig = hermitian_eigen(&a).unwrap();
        let scaled = hermitian_eigen(&a.scale(C64::new(s, 0.0))).unwrap();
        let k1 = condition_number(&eig.values).unwrap();
        let k2 = condition_number(&scaled.values).unwrap();
        prop_assert!((k1 - k2).abs() <= 1e-9 * k1);
    }

    #[test]
    fn exact_plans_encode_the_spectrum(
        seed in any::<u64>(),
        ratios in prop::collection::vec(1u64..=15, 2..=8),
        scale in 0.05f64..20.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = ratios.len().next_power_of_two();
        let mut ratios = ratios;
        ratios.resize(dim, 1);
        let sys = exact_ratio_system::<f64, _>(&mut rng, &ratios, scale).unwrap();
        let spec = SpectralData64::analyze(&sys, None).unwrap();
        prop_assert!(spec.is_exact());
        let m = spec.clock_qubits();
        let t = spec.evolution_time();
        for (&lambda, &k) in spec.eigenvalues.iter().zip(spec.scaled_eigs()) {
            prop_assert!(k >= 1 && k < 1u64 << m);
            let encoded = lambda * t * (1u64 << m) as f64 / (2.0 * std::f64::consts::PI);
            prop_assert!((encoded - k as f64).abs() <= 1e-9 * k as f64);
        }
        let lo = spec.eigenvalues[0];
        let k0 = spec.scaled_eigs()[0] as f64;
        for (&lambda, &k) in spec.eigenvalues.iter().zip(spec.scaled_eigs()) {
            prop_assert!((lambda / lo - k as f64 / k0).abs() <= 1e-9 * lambda / lo);
        }
        let c = spec.rotation_constant;
        prop_assert!(spec.scaled_eigs().iter().all(|&k| c <= k as f64));
    }
}

#[test]
fn wider_override_keeps_clock_values() {
    let plan = clock_register_plan(&[2.0 / 3.0, 4.0 / 3.0], None).unwrap();
    let wide = clock_register_plan(&[2.0 / 3.0, 4.0 / 3.0], Some(6)).unwrap();
    assert_eq!(plan.scaled_eigs, wide.scaled_eigs);
    assert!(wide.exact);
    assert_eq!(wide.clock_qubits, 6);
    assert_relative_eq!(
        wide.evolution_time * 64.0,
        plan.evolution_time * 4.0,
        max_relative = 1e-12
    );
}

#[test]
fn single_precision_tracks_double() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a: CMatrix64 = hermitian_with_spectrum(&mut rng, &[1.0, 2.0, 3.0, 5.0]);
    let a32 = hhl_core::CMatrix::<f32>::from_row_major(
        4,
        4,
        a.as_slice().iter().map(|z| Complex::new(z.re as f32, z.im as f32)).collect(),
    )
    .unwrap();
    let e64 = hermitian_eigen(&a).unwrap();
    let e32 = hermitian_eigen(&a32).unwrap();
    for (x, y) in e64.values.iter().zip(&e32.values) {
        assert_relative_eq!(*x, *y as f64, max_relative = 1e-5);
    }
}
