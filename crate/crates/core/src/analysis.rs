//! Solution estimates and error metrics computed from shot histograms.

use crate::error::{HhlError, Result};
use crate::histogram::ShotHistogram;
use crate::scalar::Real;

/// Estimated `|x_i|² / ‖x‖²`, component `i` corresponding to b-register value `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionEstimate<T> {
    pub x_hat: Vec<T>,
    pub runs: usize,
    pub shots_per_run: u64,
}

/// Renormalized ancilla = 1 counts across b outcomes.
///
/// For one b qubit this is `(c01, c11) / (c01 + c11)`.
pub fn estimate_x<T: Real>(hist: &ShotHistogram) -> Result<SolutionEstimate<T>> {
    let dim = 1usize << hist.b_qubits();
    let hits: Vec<u64> = (0..dim).map(|b| hist.count(b, true)).collect();
    let total: u64 = hits.iter().sum();
    if total == 0 {
        return Err(HhlError::ZeroSuccessCounts);
    }
    let total = T::lit(total as f64);
    Ok(SolutionEstimate {
        x_hat: hits.iter().map(|&h| T::lit(h as f64) / total).collect(),
        runs: 1,
        shots_per_run: hist.shots(),
    })
}

/// Componentwise mean of the estimates, renormalized to sum to one.
pub fn aggregate_estimates<T: Real>(estimates: &[SolutionEstimate<T>]) -> Result<SolutionEstimate<T>> {
    let first = estimates.first().ok_or(HhlError::EmptyList)?;
    let dim = first.x_hat.len();
    let mut mean = vec![T::zero(); dim];
    for e in estimates {
        if e.x_hat.len() != dim {
            return Err(HhlError::DimensionMismatch {
                expected: dim,
                found: e.x_hat.len(),
            });
        }
        for (m, &x) in mean.iter_mut().zip(&e.x_hat) {
            *m = *m + x;
        }
    }
    let total: T = mean.iter().copied().sum();
    for m in &mut mean {
        *m = *m / total;
    }
    Ok(SolutionEstimate {
        x_hat: mean,
        runs: estimates.iter().map(|e| e.runs).sum(),
        shots_per_run: first.shots_per_run,
    })
}

/// `Σ_i |est_i − truth_i|`.
pub fn l1_error<T: Real>(estimate: &[T], truth: &[T]) -> T {
    assert_eq!(estimate.len(), truth.len(), "l1_error dimension mismatch");
    estimate.iter().zip(truth).map(|(&a, &b)| (a - b).abs()).sum()
}

/// Mean over every outcome label of the absolute difference in relative
/// frequency. Shot totals may differ.
pub fn histogram_mae(a: &ShotHistogram, b: &ShotHistogram) -> f64 {
    assert_eq!(a.b_qubits(), b.b_qubits(), "histograms over different label spaces");
    let (fa, fb) = (a.frequencies(), b.frequencies());
    fa.iter().zip(&fb).map(|(x, y)| (x - y).abs()).sum::<f64>() / fa.len() as f64
}

/// Fraction of shots with the ancilla in `|1⟩`.
pub fn success_rate(hist: &ShotHistogram) -> f64 {
    if hist.shots() == 0 {
        return 0.0;
    }
    let dim = 1usize << hist.b_qubits();
    let hits: u64 = (0..dim).map(|b| hist.count(b, true)).sum();
    hits as f64 / hist.shots() as f64
}
