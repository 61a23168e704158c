//! Gate-level state-vector simulation of the full HHL circuit.
//!
//! The state spans `1 + m + n` qubits laid out as ancilla (qubit 0), clock
//! (qubits `1..=m`, qubit `1 + k` carrying bit `k` of the clock value) and
//! the b register (qubits `m+1..`, qubit `m + 1 + k` carrying bit `k`).
//! Gates update amplitude groups in place; nothing builds a full-register
//! matrix, yet every gate still touches the whole `2^(1+m+n)` vector.

mod circuit;
mod gate;

pub use circuit::{
    controlled_evolution, eigenvalue_inversion, iqft, iqpe, measure_all, measure_all_on_stream, qft, qpe, run_hhl_circuit,
    run_hhl_circuit_on, state_prep_b, state_prep_unitary, Evolution, UNITARY_DRIFT_TOLERANCE,
};
pub use gate::{GateOp, GATE_UNITARY_TOLERANCE};

use num_traits::{One, Zero};

use crate::emulator::EmulatedState;
use crate::error::{HhlError, Result};
use crate::scalar::{Real, C};

/// Qubit positions of the ancilla, clock and b registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    clock_qubits: u32,
    b_qubits: u32,
}

impl RegisterLayout {
    pub fn new(clock_qubits: u32, b_qubits: u32) -> Self {
        Self {
            clock_qubits,
            b_qubits,
        }
    }

    pub fn clock_qubits(&self) -> u32 {
        self.clock_qubits
    }

    pub fn b_qubits(&self) -> u32 {
        self.b_qubits
    }

    pub fn num_qubits(&self) -> usize {
        1 + self.clock_qubits as usize + self.b_qubits as usize
    }

    pub fn ancilla(&self) -> usize {
        0
    }

    /// Qubit holding bit `k` of the clock value.
    pub fn clock(&self, k: u32) -> usize {
        1 + k as usize
    }

    /// Qubit holding bit `k` of the b-register value.
    pub fn b(&self, k: u32) -> usize {
        1 + self.clock_qubits as usize + k as usize
    }

    pub fn clock_range(&self) -> std::ops::Range<usize> {
        1..1 + self.clock_qubits as usize
    }

    pub fn b_range(&self) -> std::ops::Range<usize> {
        let start = 1 + self.clock_qubits as usize;
        start..start + self.b_qubits as usize
    }

    /// Splits a basis index into `(ancilla, clock, b)` values.
    pub fn split(&self, index: usize) -> (usize, usize, usize) {
        let m = self.clock_qubits as usize;
        (index & 1, (index >> 1) & ((1 << m) - 1), index >> (1 + m))
    }

    pub fn join(&self, ancilla: usize, clock: usize, b: usize) -> usize {
        ancilla | clock << 1 | b << (1 + self.clock_qubits as usize)
    }
}

/// Dense amplitudes over the `(a, c, b)` registers.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    layout: RegisterLayout,
    amps: Vec<C<T>>,
    trace: Option<Vec<String>>,
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩`.
    pub fn new(layout: RegisterLayout) -> Self {
        let mut amps = vec![C::zero(); 1 << layout.num_qubits()];
        amps[0] = C::one();
        Self {
            layout,
            amps,
            trace: None,
        }
    }

    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<C<T>>) -> Result<Self> {
        let expected = 1usize << layout.num_qubits();
        if amps.len() != expected {
            return Err(HhlError::DimensionMismatch {
                expected,
                found: amps.len(),
            });
        }
        Ok(Self {
            layout,
            amps,
            trace: None,
        })
    }

    /// Starts recording a text line per applied gate.
    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace(&self) -> Option<&[String]> {
        self.trace.as_deref()
    }

    pub fn take_trace(&mut self) -> Option<Vec<String>> {
        self.trace.take()
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.num_qubits()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply(&mut self, gate: &GateOp<T>) -> Result<()> {
        gate.apply_to(&mut self.amps, self.layout.num_qubits())?;
        if let Some(trace) = &mut self.trace {
            trace.push(gate.describe());
        }
        Ok(())
    }

    /// Probability mass on clock values other than zero.
    pub fn clock_excitation(&self) -> T {
        self.amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.layout.split(i).1 != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Distribution of the clock value.
    pub fn clock_distribution(&self) -> Vec<T> {
        let mut out = vec![T::zero(); 1 << self.layout.clock_qubits];
        for (i, a) in self.amps.iter().enumerate() {
            let (_, c, _) = self.layout.split(i);
            out[c] = out[c] + a.norm_sqr();
        }
        out
    }

    /// Marginal distribution over `(b << 1) | a`, clock summed out.
    pub fn marginal_distribution(&self) -> Vec<T> {
        let mut out = vec![T::zero(); 1 << (self.layout.b_qubits + 1)];
        for (i, a) in self.amps.iter().enumerate() {
            let (anc, _, b) = self.layout.split(i);
            out[(b << 1) | anc] = out[(b << 1) | anc] + a.norm_sqr();
        }
        out
    }

    /// The (b, ancilla) amplitudes on the clock-zero slice, in the emulator's
    /// indexing. Equals the full state when the clock is disentangled.
    pub fn clock_zero_slice(&self) -> EmulatedState<T> {
        let n = self.layout.b_qubits;
        let amps = (0..1usize << (n + 1))
            .map(|o| self.amps[self.layout.join(o & 1, 0, o >> 1)])
            .collect();
        EmulatedState::from_amplitudes(n, amps).unwrap()
    }
}
