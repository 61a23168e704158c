//! Direct preparation of the HHL output state from spectral data.
//!
//! The clock register never appears: an ideal run returns it to `|0…0⟩`, so
//! the state over (b, ancilla) is written down from the eigendecomposition,
//!
//! ```text
//! Σ_j β_j |u_j⟩ ( √(1 − C²/λ̃_j²) |0⟩ + (C/λ̃_j) |1⟩ )
//! ```
//!
//! and its cost depends on `N` alone, not on the clock width.

use num_traits::Zero;

use crate::error::{HhlError, Result};
use crate::histogram::{sample_indices_on_stream, ShotHistogram};
use crate::linsys::{HermitianSystem, SpectralData};
use crate::scalar::{Real, C};

/// Joint (b, ancilla) state, indexed by `(b << 1) | a`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmulatedState<T> {
    b_qubits: u32,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> EmulatedState<T> {
    /// Wraps amplitudes over `2^(n+1)` outcomes.
    pub fn from_amplitudes(b_qubits: u32, amplitudes: Vec<C<T>>) -> Option<Self> {
        (amplitudes.len() == 1 << (b_qubits + 1)).then_some(Self { b_qubits, amplitudes })
    }

    pub fn b_qubits(&self) -> u32 {
        self.b_qubits
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, b_value: usize, ancilla: bool) -> C<T> {
        self.amplitudes[(b_value << 1) | ancilla as usize]
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of measuring the ancilla in `|1⟩`.
    pub fn success_probability(&self) -> T {
        self.amplitudes.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum()
    }

    /// Distribution over the b register conditioned on ancilla `|1⟩`.
    pub fn postselect_ancilla(&self) -> Result<Vec<T>> {
        let p1 = self.success_probability();
        if !(p1 > T::zero()) {
            return Err(HhlError::ZeroSuccessProbability);
        }
        Ok(self
            .amplitudes
            .iter()
            .skip(1)
            .step_by(2)
            .map(|a| a.norm_sqr() / p1)
            .collect())
    }

    /// Samples `shots` outcomes; see [`crate::histogram`] for the generator.
    pub fn sample(&self, shots: u64, seed: u64) -> ShotHistogram {
        self.sample_on_stream(shots, seed, 0)
    }

    /// [`EmulatedState::sample`] on generator stream `stream`.
    pub fn sample_on_stream(&self, shots: u64, seed: u64, stream: u64) -> ShotHistogram {
        let mut hist = ShotHistogram::empty(self.b_qubits);
        sample_indices_on_stream(&self.probabilities(), shots, seed, stream, |i| hist.record(i));
        hist
    }
}

/// Computes the post-algorithm (b, ancilla) state.
///
/// Rotation ratios are `C / λ̃_j` with the integer clock values when the plan
/// is exact or `round_eigs` is set; otherwise the unrounded scaled values are
/// used, giving the ideal `λ_min / λ_j`.
pub fn prepare_emulated_state<T: Real>(
    sys: &HermitianSystem<T>,
    spec: &SpectralData<T>,
    round_eigs: bool,
) -> Result<EmulatedState<T>> {
    let dim = sys.dim();
    if spec.eigenvectors.rows() != dim || spec.coefficients.len() != dim {
        return Err(HhlError::DimensionMismatch {
            expected: dim,
            found: spec.coefficients.len(),
        });
    }
    let ratios: Vec<T> = if spec.plan.exact || round_eigs {
        let c = spec.rotation_constant;
        spec.plan
            .scaled_eigs
            .iter()
            .map(|&e| c / T::lit(e as f64))
            .collect()
    } else {
        let c = spec
            .plan
            .scaled_values
            .iter()
            .fold(T::infinity(), |acc, &s| acc.min(s));
        spec.plan.scaled_values.iter().map(|&s| c / s).collect()
    };

    let mut amplitudes = vec![C::zero(); 2 * dim];
    for (j, (&beta, &r)) in spec.coefficients.iter().zip(&ratios).enumerate() {
        if r > T::one() + T::tol(1e-12) || r < T::zero() {
            return Err(HhlError::RotationDomain {
                c: spec.rotation_constant.as_f64(),
                eig: spec.plan.scaled_eigs[j] as f64,
            });
        }
        let r = r.min(T::one());
        let keep = (T::one() - r * r).sqrt();
        for i in 0..dim {
            let w = beta * spec.eigenvectors[(i, j)];
            amplitudes[i << 1] = amplitudes[i << 1] + w * keep;
            amplitudes[(i << 1) | 1] = amplitudes[(i << 1) | 1] + w * r;
        }
    }
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
    if norm > T::zero() {
        for a in &mut amplitudes {
            *a = *a / norm;
        }
    }
    Ok(EmulatedState {
        b_qubits: sys.qubits(),
        amplitudes,
    })
}

/// `A⁻¹ b` by direct Gaussian elimination.
pub fn classical_solution<T: Real>(sys: &HermitianSystem<T>) -> Result<Vec<C<T>>> {
    sys.matrix().solve(sys.rhs())
}

/// `|x_i|² / ‖x‖²` for the direct solution: the distribution an ideal
/// post-selected HHL run samples from.
pub fn solution_distribution<T: Real>(sys: &HermitianSystem<T>) -> Result<Vec<T>> {
    let x = classical_solution(sys)?;
    let total: T = x.iter().map(|z| z.norm_sqr()).sum();
    Ok(x.iter().map(|z| z.norm_sqr() / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsys::validate_system;
    use crate::matrix::CMatrix;

    fn system(rows: &[&[f64]], b: &[f64]) -> HermitianSystem<f64> {
        let a = CMatrix::from_real_rows(rows).unwrap();
        validate_system(a, b.iter().map(|&x| C::new(x, 0.0)).collect()).unwrap()
    }

    fn exp1() -> HermitianSystem<f64> {
        system(&[&[1.0, -1.0 / 3.0], &[-1.0 / 3.0, 1.0]], &[0.0, 1.0])
    }

    fn exp2() -> HermitianSystem<f64> {
        system(&[&[6.5, -0.5], &[-0.5, 6.5]], &[0.0, 1.0])
    }

    fn emulate(sys: &HermitianSystem<f64>) -> EmulatedState<f64> {
        let spec = SpectralData::analyze(sys, None).unwrap();
        prepare_emulated_state(sys, &spec, false).unwrap()
    }

    #[test]
    fn first_experiment_distribution() {
        let st = emulate(&exp1());
        let post = st.postselect_ancilla().unwrap();
        assert!((post[0] - 0.1).abs() < 1e-12);
        assert!((post[1] - 0.9).abs() < 1e-12);
        // β = (1/√2, −1/√2), λ̃ = (1, 2), C = 1.
        assert!((st.success_probability() - 0.625).abs() < 1e-12);
        let p = st.probabilities();
        assert!((p[0b01] / p[0b11] - 1.0 / 9.0).abs() < 1e-12);
        assert!(p[0b00] > 0.0 && p[0b10] > 0.0);
        assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_experiment_distribution() {
        let post = emulate(&exp2()).postselect_ancilla().unwrap();
        assert!((post[0] - 0.00588235).abs() < 1e-8);
        assert!((post[1] - 0.99411765).abs() < 1e-8);
        assert!((post[0] - 1.0 / 170.0).abs() < 1e-12);
    }

    #[test]
    fn identity_flips_ancilla_fully() {
        let st = emulate(&system(&[&[1.0, 0.0], &[0.0, 1.0]], &[1.0, 0.0]));
        assert!((st.amplitude(0, true) - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!((st.probabilities()[0b01] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_rhs_gives_uniform_solution() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let post = emulate(&system(&[&[2.0, 0.0], &[0.0, 2.0]], &[h, h]))
            .postselect_ancilla()
            .unwrap();
        assert!((post[0] - 0.5).abs() < 1e-12);
        assert!((post[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn success_probability_formula() {
        for sys in [exp1(), exp2()] {
            let spec = SpectralData::analyze(&sys, None).unwrap();
            let st = prepare_emulated_state(&sys, &spec, false).unwrap();
            let expected: f64 = spec
                .coefficients
                .iter()
                .zip(spec.scaled_eigs())
                .map(|(b, &e)| b.norm_sqr() * (spec.rotation_constant / e as f64).powi(2))
                .sum();
            assert!((st.success_probability() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn rounded_mode_uses_integer_clock_values() {
        let sys = exp2();
        let spec = SpectralData::analyze(&sys, Some(2)).unwrap();
        assert!(!spec.is_exact());
        // Both eigenvalues round to clock value 2: post-selection returns b itself.
        let rounded = prepare_emulated_state(&sys, &spec, true).unwrap();
        let post = rounded.postselect_ancilla().unwrap();
        assert!(post[0].abs() < 1e-12 && (post[1] - 1.0).abs() < 1e-12);
        let ideal = prepare_emulated_state(&sys, &spec, false).unwrap();
        let post = ideal.postselect_ancilla().unwrap();
        assert!((post[0] - 1.0 / 170.0).abs() < 1e-12);
    }

    #[test]
    fn zero_success_probability_is_an_error() {
        let st = EmulatedState::from_amplitudes(1, vec![C::new(1.0, 0.0), C::zero(), C::zero(), C::zero()]).unwrap();
        assert_eq!(st.postselect_ancilla(), Err(HhlError::ZeroSuccessProbability));
    }

    #[test]
    fn rotation_domain_detected() {
        let sys = exp1();
        let mut spec = SpectralData::analyze(&sys, None).unwrap();
        spec.rotation_constant = 3.0;
        assert!(matches!(
            prepare_emulated_state(&sys, &spec, false),
            Err(HhlError::RotationDomain { .. })
        ));
    }

    #[test]
    fn classical_solutions() {
        let x = classical_solution(&exp1()).unwrap();
        assert!((x[0].re - 3.0 / 8.0).abs() < 1e-15 && (x[1].re - 9.0 / 8.0).abs() < 1e-15);
        let x = classical_solution(&exp2()).unwrap();
        assert!((x[0].re - 1.0 / 84.0).abs() < 1e-15 && (x[1].re - 13.0 / 84.0).abs() < 1e-15);
        let id = system(&[&[1.0, 0.0], &[0.0, 1.0]], &[0.6, 0.8]);
        assert_eq!(classical_solution(&id).unwrap(), id.rhs().to_vec());
    }

    #[test]
    fn sampling_shape() {
        let st = emulate(&exp1());
        let h = st.sample(2048, 1);
        assert_eq!(h.shots(), 2048);
        let (c01, c11) = (h.count(0, true), h.count(1, true));
        assert!(c11 > 6 * c01, "{c01} {c11}");
        assert!(h.count(0, false) + h.count(1, false) > 0);
        assert_eq!(st.sample(1, 5).shots(), 1);
        assert_eq!(st.sample(300, 42), st.sample(300, 42));
    }

    #[test]
    fn single_precision_agrees() {
        let a = CMatrix::<f32>::from_real_rows(&[&[1.0, -1.0 / 3.0], &[-1.0 / 3.0, 1.0]]).unwrap();
        let sys = validate_system(a, vec![C::zero(), C::new(1.0, 0.0)]).unwrap();
        let spec = SpectralData::analyze(&sys, None).unwrap();
        assert_eq!(spec.scaled_eigs(), &[1, 2]);
        let post = prepare_emulated_state(&sys, &spec, false)
            .unwrap()
            .postselect_ancilla()
            .unwrap();
        assert!((post[1] - 0.9).abs() < 1e-5);
    }
}
