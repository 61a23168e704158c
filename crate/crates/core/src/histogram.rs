//! Seeded shot sampling and outcome histograms.
//!
//! Outcomes are labelled little-endian as `|b a⟩`: the b-register value in
//! binary (most significant qubit first) followed by the ancilla bit. The
//! outcome index `(b << 1) | a` therefore prints as its own label.
//!
//! Sampling draws `u ∈ [0, 1)` from ChaCha8 seeded with `seed_from_u64(seed)`
//! (`rand_chacha` 0.9, `rand` 0.9 `StandardUniform` f64) and inverts the cumulative
//! distribution with a binary search. An optional stream number selects one
//! of ChaCha's independent streams under the same seed; plain sampling uses
//! stream 0. A given `(probabilities, shots, seed, stream)` produces the same
//! histogram on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;

/// Counts over the `2^(n+1)` outcomes of the (b, ancilla) registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    b_qubits: u32,
    counts: Vec<u64>,
    shots: u64,
}

impl ShotHistogram {
    pub fn empty(b_qubits: u32) -> Self {
        Self {
            b_qubits,
            counts: vec![0; 1 << (b_qubits + 1)],
            shots: 0,
        }
    }

    /// Builds a histogram from per-outcome counts indexed by `(b << 1) | a`.
    pub fn from_counts(b_qubits: u32, counts: Vec<u64>) -> Option<Self> {
        if counts.len() != 1 << (b_qubits + 1) {
            return None;
        }
        let shots = counts.iter().sum();
        Some(Self {
            b_qubits,
            counts,
            shots,
        })
    }

    /// Builds a histogram from `(label, count)` pairs; labels must be `n+1`
    /// binary digits. Unlisted labels count zero.
    pub fn from_labels<'a, I>(b_qubits: u32, entries: I) -> Option<Self>
    where
        I: IntoIterator<Item = (&'a str, u64)>,
    {
        let mut h = Self::empty(b_qubits);
        for (label, count) in entries {
            let idx = parse_label(label, b_qubits)?;
            h.counts[idx] += count;
            h.shots += count;
        }
        Some(h)
    }

    pub fn record(&mut self, outcome: usize) {
        self.counts[outcome] += 1;
        self.shots += 1;
    }

    pub fn b_qubits(&self) -> u32 {
        self.b_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Number of distinct outcome labels, `2^(n+1)`.
    pub fn num_outcomes(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, b_value: usize, ancilla: bool) -> u64 {
        self.counts[(b_value << 1) | ancilla as usize]
    }

    pub fn count_label(&self, label: &str) -> Option<u64> {
        parse_label(label, self.b_qubits).map(|i| self.counts[i])
    }

    pub fn label(&self, outcome: usize) -> String {
        outcome_label(outcome, self.b_qubits)
    }

    /// `(label, count)` for every outcome, in index order.
    pub fn labelled(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (outcome_label(i, self.b_qubits), c))
    }

    /// Relative frequency of each outcome; all zero for an empty histogram.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.shots.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Adds another histogram over the same label space.
    pub fn merge(&mut self, other: &ShotHistogram) {
        assert_eq!(self.b_qubits, other.b_qubits, "label spaces differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.shots += other.shots;
    }
}

/// Little-endian `|b a⟩` label for outcome index `(b << 1) | a`.
pub fn outcome_label(outcome: usize, b_qubits: u32) -> String {
    format!("{:0width$b}", outcome, width = b_qubits as usize + 1)
}

fn parse_label(label: &str, b_qubits: u32) -> Option<usize> {
    if label.len() != b_qubits as usize + 1 || !label.bytes().all(|c| c == b'0' || c == b'1') {
        return None;
    }
    usize::from_str_radix(label, 2).ok()
}

/// Draws `shots` outcome indices from `probabilities` (need not be exactly
/// normalized) and feeds each to `record`.
pub fn sample_indices<T: Real>(probabilities: &[T], shots: u64, seed: u64, record: impl FnMut(usize)) {
    sample_indices_on_stream(probabilities, shots, seed, 0, record)
}

/// [`sample_indices`] on ChaCha stream `stream`.
pub fn sample_indices_on_stream<T: Real>(
    probabilities: &[T],
    shots: u64,
    seed: u64,
    stream: u64,
    mut record: impl FnMut(usize),
) {
    let mut cdf = Vec::with_capacity(probabilities.len());
    let mut acc = 0.0f64;
    for p in probabilities {
        acc += p.as_f64().max(0.0);
        cdf.push(acc);
    }
    let total = acc;
    let last_nonzero = probabilities
        .iter()
        .rposition(|p| p.as_f64() > 0.0)
        .unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
        record(idx);
    }
}
