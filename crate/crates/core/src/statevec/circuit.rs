use std::borrow::Cow;

use log::warn;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{GateOp, RegisterLayout, StateVector};
use crate::error::{HhlError, Result};
use crate::histogram::{sample_indices_on_stream, ShotHistogram};
use crate::linsys::{HermitianSystem, SpectralData, UNIT_TOLERANCE};
use crate::matrix::{vec_norm, CMatrix};
use crate::scalar::{c, Real, C};

/// Maximum tolerated `max |V^H V - I|` of a built `exp(iAt)^p`.
pub const UNITARY_DRIFT_TOLERANCE: f64 = 1e-10;

/// Clock mass above which measurement warns that the clock is still entangled.
const CLOCK_WARN_THRESHOLD: f64 = 1e-6;

/// `exp(iAt)` held in spectral form; powers are built on demand.
#[derive(Debug, Clone)]
pub struct Evolution<'a, T: Real> {
    eigenvalues: Cow<'a, [T]>,
    eigenvectors: Cow<'a, CMatrix<T>>,
    time: T,
    /// `exp(iAt)^(2^k)` and its adjoint at index `k`.
    cached: Vec<CMatrix<T>>,
}

impl<'a, T: Real> Evolution<'a, T> {
    pub fn new(eigenvalues: Vec<T>, eigenvectors: CMatrix<T>, time: T) -> Self {
        Self {
            eigenvalues: Cow::Owned(eigenvalues),
            eigenvectors: Cow::Owned(eigenvectors),
            time,
            cached: Vec::new(),
        }
    }

    /// Builds `exp(iAt)^(2^k)` for every `k < clock_qubits` up front.
    pub fn cache_powers(&mut self, clock_qubits: u32) -> Result<()> {
        self.cached = (0..clock_qubits)
            .map(|k| self.unitary(1 << k, false))
            .collect::<Result<_>>()?;
        Ok(())
    }

    fn cached(&self, power: u64) -> Option<&CMatrix<T>> {
        power
            .is_power_of_two()
            .then(|| self.cached.get(power.trailing_zeros() as usize))
            .flatten()
    }

    pub fn from_spectral(spec: &'a SpectralData<T>) -> Self {
        Self {
            eigenvalues: Cow::Borrowed(&spec.eigenvalues),
            eigenvectors: Cow::Borrowed(&spec.eigenvectors),
            time: spec.evolution_time(),
            cached: Vec::new(),
        }
    }

    pub fn time(&self) -> T {
        self.time
    }

    /// `exp(iAt)^power`, or its adjoint when `inverse` is set.
    pub fn unitary(&self, power: u64, inverse: bool) -> Result<CMatrix<T>> {
        let two_pi = T::PI() + T::PI();
        let sign = if inverse { -T::one() } else { T::one() };
        let phases: SmallVec<[C<T>; 8]> = self
            .eigenvalues
            .iter()
            .map(|&l| {
                let angle = (l * self.time * T::lit(power as f64)) % two_pi;
                let (s, co) = (sign * angle).sin_cos();
                c(co, s)
            })
            .collect();
        let u = &self.eigenvectors;
        let n = u.rows();
        let mut v = CMatrix::<T>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                v[(i, j)] = (0..n).fold(C::zero(), |acc, k| acc + u[(i, k)] * phases[k] * u[(j, k)].conj());
            }
        }
        let drift = v.unitarity_deviation();
        if !(drift <= T::tol(UNITARY_DRIFT_TOLERANCE)) {
            return Err(HhlError::NonUnitaryGate {
                deviation: drift.as_f64(),
            });
        }
        Ok(v)
    }
}

/// A unitary whose first column is `b`: the Householder reflection taking
/// `e^{iφ} e_0` to `b`, times `e^{iφ}`, where `φ = arg b_0`.
pub fn state_prep_unitary<T: Real>(b: &[C<T>]) -> Result<CMatrix<T>> {
    let norm = vec_norm(b);
    if !((norm - T::one()).abs() <= T::tol(UNIT_TOLERANCE)) {
        return Err(HhlError::NotUnitVector {
            norm: norm.as_f64(),
        });
    }
    let phase = if b[0].is_zero() { C::one() } else { b[0] / b[0].norm() };
    let mut w: Vec<C<T>> = b.iter().map(|&x| -x).collect();
    w[0] = w[0] + phase;
    let ww: T = w.iter().map(|z| z.norm_sqr()).sum();
    let s = if ww > T::zero() { T::lit(2.0) / ww } else { T::zero() };
    let mut u = CMatrix::zeros(b.len(), b.len());
    for (i, &wi) in w.iter().enumerate() {
        for (j, &wj) in w.iter().enumerate() {
            let delta: C<T> = if i == j { C::one() } else { C::zero() };
            u[(i, j)] = (delta - wi * wj.conj() * s) * phase;
        }
    }
    Ok(u)
}

/// Loads `b` into the b register, which must be in `|0…0⟩`.
pub fn state_prep_b<T: Real>(state: &mut StateVector<T>, b: &[C<T>]) -> Result<()> {
    let layout = state.layout();
    let dim = 1usize << layout.b_qubits();
    if b.len() != dim {
        return Err(HhlError::DimensionMismatch {
            expected: dim,
            found: b.len(),
        });
    }
    let u = state_prep_unitary(b)?;
    let gate = GateOp::prechecked("prep_b", None, Cow::Owned(u), layout.b_range(), &[])?;
    state.apply(&gate)
}

/// Applies `exp(iAt)^power` to the b register, controlled on qubit `control`.
pub fn controlled_evolution<T: Real>(
    state: &mut StateVector<T>,
    evolution: &Evolution<'_, T>,
    power: u64,
    control: usize,
    inverse: bool,
) -> Result<()> {
    let layout = state.layout();
    let param = Some(T::lit(power as f64));
    let controls = [(control, true)];
    let gate = match evolution.cached(power) {
        Some(u) if inverse => GateOp::prechecked("u", param, Cow::Borrowed(u), layout.b_range(), &controls)?.dagger("u_inv"),
        Some(u) => GateOp::prechecked("u", param, Cow::Borrowed(u), layout.b_range(), &controls)?,
        None => {
            let name = if inverse { "u_inv" } else { "u" };
            GateOp::prechecked(name, param, Cow::Owned(evolution.unitary(power, inverse)?), layout.b_range(), &controls)?
        }
    };
    state.apply(&gate)
}

/// Quantum Fourier transform on the clock register:
/// `|x⟩ ↦ 2^{-m/2} Σ_y e^{2πi xy/2^m} |y⟩`.
pub fn qft<T: Real>(state: &mut StateVector<T>) -> Result<()> {
    let layout = state.layout();
    let m = layout.clock_qubits();
    for i in 0..m / 2 {
        state.apply(&GateOp::swap(layout.clock(i), layout.clock(m - 1 - i))?)?;
    }
    // Mirror of the inverse below, with positive angles.
    for j in (0..m).rev() {
        let target = layout.clock(m - 1 - j);
        state.apply(&GateOp::h(target))?;
        for k in (0..j).rev() {
            let angle = T::PI() / T::lit((1u64 << (j - k)) as f64);
            let gate = GateOp::phase(angle, target).controlled(&[(layout.clock(m - 1 - k), true)])?;
            state.apply(&gate)?;
        }
    }
    Ok(())
}

/// Inverse QFT on the clock register: Hadamards and controlled phases of
/// `−π/2^d`, then the bit-reversal swaps.
pub fn iqft<T: Real>(state: &mut StateVector<T>) -> Result<()> {
    let layout = state.layout();
    let m = layout.clock_qubits();
    for j in 0..m {
        let target = layout.clock(m - 1 - j);
        for k in 0..j {
            let angle = -T::PI() / T::lit((1u64 << (j - k)) as f64);
            let gate = GateOp::phase(angle, target).controlled(&[(layout.clock(m - 1 - k), true)])?;
            state.apply(&gate)?;
        }
        state.apply(&GateOp::h(target))?;
    }
    for i in 0..m / 2 {
        state.apply(&GateOp::swap(layout.clock(i), layout.clock(m - 1 - i))?)?;
    }
    Ok(())
}

/// Phase estimation: Hadamards on the clock, `exp(iAt)^{2^k}` controlled on
/// clock qubit `k`, then the inverse QFT.
pub fn qpe<T: Real>(state: &mut StateVector<T>, evolution: &Evolution<'_, T>) -> Result<()> {
    let layout = state.layout();
    for k in 0..layout.clock_qubits() {
        state.apply(&GateOp::h(layout.clock(k)))?;
    }
    for k in 0..layout.clock_qubits() {
        controlled_evolution(state, evolution, 1 << k, layout.clock(k), false)?;
    }
    iqft(state)
}

/// Exact adjoint of [`qpe`].
pub fn iqpe<T: Real>(state: &mut StateVector<T>, evolution: &Evolution<'_, T>) -> Result<()> {
    let layout = state.layout();
    qft(state)?;
    for k in (0..layout.clock_qubits()).rev() {
        controlled_evolution(state, evolution, 1 << k, layout.clock(k), true)?;
    }
    for k in (0..layout.clock_qubits()).rev() {
        state.apply(&GateOp::h(layout.clock(k)))?;
    }
    Ok(())
}

/// For every nonzero clock value `k`, rotates the ancilla by
/// `RY(2 arcsin(C/k))` controlled on the clock holding exactly `k`.
///
/// Clock values below `C` saturate at a full flip. With exact clock values
/// they carry no amplitude.
pub fn eigenvalue_inversion<T: Real>(state: &mut StateVector<T>, c_const: T) -> Result<()> {
    if !(c_const > T::zero() && c_const.is_finite()) {
        return Err(HhlError::RotationDomain {
            c: c_const.as_f64(),
            eig: 1.0,
        });
    }
    let layout = state.layout();
    let m = layout.clock_qubits();
    for k in 1u64..1 << m {
        let ratio = (c_const / T::lit(k as f64)).min(T::one());
        let theta = T::lit(2.0) * ratio.asin();
        let controls: SmallVec<[(usize, bool); 8]> = (0..m).map(|bit| (layout.clock(bit), k >> bit & 1 == 1)).collect();
        let gate = GateOp::ry(theta, layout.ancilla()).controlled(&controls)?;
        state.apply(&gate)?;
    }
    Ok(())
}

/// Runs prep, phase estimation, inversion and uncomputation on `state`,
/// which must be `|0…0⟩` with a layout matching `sys` and `spec`.
pub fn run_hhl_circuit_on<T: Real>(
    state: &mut StateVector<T>,
    sys: &HermitianSystem<T>,
    spec: &SpectralData<T>,
) -> Result<()> {
    let layout = state.layout();
    if layout.b_qubits() != sys.qubits() || layout.clock_qubits() != spec.clock_qubits() {
        return Err(HhlError::DimensionMismatch {
            expected: RegisterLayout::new(spec.clock_qubits(), sys.qubits()).num_qubits(),
            found: layout.num_qubits(),
        });
    }
    let mut evolution = Evolution::from_spectral(spec);
    evolution.cache_powers(layout.clock_qubits())?;
    state_prep_b(state, sys.rhs())?;
    qpe(state, &evolution)?;
    eigenvalue_inversion(state, spec.rotation_constant)?;
    iqpe(state, &evolution)
}

/// The full HHL circuit from `|0…0⟩`; returns the final `2^(1+m+n)` state.
pub fn run_hhl_circuit<T: Real>(sys: &HermitianSystem<T>, spec: &SpectralData<T>) -> Result<StateVector<T>> {
    let mut state = StateVector::new(RegisterLayout::new(spec.clock_qubits(), sys.qubits()));
    run_hhl_circuit_on(&mut state, sys, spec)?;
    Ok(state)
}

/// Samples the full register and reports `(b, ancilla)` outcomes with the
/// clock bits summed out.
pub fn measure_all<T: Real>(state: &StateVector<T>, shots: u64, seed: u64) -> ShotHistogram {
    measure_all_on_stream(state, shots, seed, 0)
}

/// [`measure_all`] on generator stream `stream`.
pub fn measure_all_on_stream<T: Real>(state: &StateVector<T>, shots: u64, seed: u64, stream: u64) -> ShotHistogram {
    let layout = state.layout();
    let excited = state.clock_excitation().as_f64();
    if excited > CLOCK_WARN_THRESHOLD {
        warn!("clock register not disentangled before measurement: mass {excited:e} on nonzero clock values");
    }
    let mut hist = ShotHistogram::empty(layout.b_qubits());
    sample_indices_on_stream(&state.probabilities(), shots, seed, stream, |i| {
        let (a, _, b) = layout.split(i);
        hist.record((b << 1) | a);
    });
    hist
}
