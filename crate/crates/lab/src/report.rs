use std::collections::BTreeMap;

use hhl_core::ShotHistogram;
use serde::{Serialize, Serializer};

use crate::config::{Backend, ExperimentConfig};

/// Wall-clock seconds for one run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RunTiming {
    pub prepare_s: f64,
    pub sample_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: u32,
    pub seed: u64,
    #[serde(rename = "counts", serialize_with = "serialize_counts")]
    pub histogram: ShotHistogram,
    /// `None` when the run saw no ancilla = 1 outcome.
    pub estimate: Option<Vec<f64>>,
    pub timing: RunTiming,
}

/// Per-backend totals; `prepare_mean_s` and `sample_mean_s` average over runs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BackendTiming {
    pub analysis_s: f64,
    pub prepare_mean_s: f64,
    pub sample_mean_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackendReport {
    /// Generator stream used with each run's seed.
    pub stream: u64,
    pub runs: Vec<RunRecord>,
    /// Mean of the per-run estimates that exist, renormalized.
    pub estimate: Option<Vec<f64>>,
    pub success_rate: f64,
    pub l1_error: Option<f64>,
    /// Probability on nonzero clock values after uncomputation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clock_excitation: Option<f64>,
    pub timing: BackendTiming,
}

impl BackendReport {
    /// All runs' counts added together.
    pub fn merged_histogram(&self) -> ShotHistogram {
        let b_qubits = self.runs.first().map_or(0, |r| r.histogram.b_qubits());
        let mut merged = ShotHistogram::empty(b_qubits);
        for r in &self.runs {
            merged.merge(&r.histogram);
        }
        merged
    }
}

/// Problem facts derived from the system, echoed next to the configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub b_qubits: u32,
    pub clock_qubits: u32,
    pub evolution_time: f64,
    pub exact_ratio: bool,
    pub eigenvalues: Vec<f64>,
    pub scaled_eigenvalues: Vec<u64>,
    pub rotation_constant: f64,
    pub condition_number: f64,
    /// `|x_i|² / ‖x‖²` from the direct solve.
    pub truth: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    #[serde(flatten)]
    pub experiment: ExperimentConfig,
    pub instance: InstanceSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossReport {
    /// Between the merged histograms of both backends; `None` with one backend.
    pub histogram_mae: Option<f64>,
    /// Mean over runs of the MAE between same-index run histograms.
    pub histogram_mae_run_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub host: String,
    pub tool: String,
}

impl Environment {
    pub fn current() -> Self {
        let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
        Self {
            host: format!(
                "{} {}, {cpus} logical CPUs",
                std::env::consts::OS,
                std::env::consts::ARCH
            ),
            tool: format!("hhl-lab {}", env!("CARGO_PKG_VERSION")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ConfigEcho,
    pub backends: BTreeMap<Backend, BackendReport>,
    pub cross: CrossReport,
    pub environment: Environment,
}

impl ExperimentReport {
    pub fn backend(&self, backend: Backend) -> Option<&BackendReport> {
        self.backends.get(&backend)
    }
}

fn serialize_counts<S: Serializer>(hist: &ShotHistogram, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(hist.labelled())
}

/// One row of a scaling sweep. Times are medians over repeated batches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: u32,
    pub backend: Backend,
    pub prepare_s: f64,
    pub sample_s: f64,
}

impl SweepRow {
    pub fn total_s(&self) -> f64 {
        self.prepare_s + self.sample_s
    }
}
