use std::collections::BTreeMap;
use std::time::Instant;

use hhl_core::{
    aggregate_estimates, estimate_x, histogram_mae, l1_error, measure_all_on_stream, prepare_emulated_state, run_hhl_circuit,
    solution_distribution, success_rate, HhlError, ShotHistogram, SpectralData64, System64,
};
use log::{debug, info};

use crate::config::{Backend, ExperimentConfig};
use crate::error::Result;
use crate::report::{
    BackendReport, BackendTiming, ConfigEcho, CrossReport, Environment, ExperimentReport, InstanceSummary, RunRecord,
    RunTiming, SweepRow,
};

/// Batches are sized to last at least this long before they are timed.
const MIN_BATCH_SECONDS: f64 = 2e-3;
const MAX_BATCH: usize = 1 << 17;
const TIMING_ROUNDS: usize = 15;

/// Runs every configured backend `repeats` times on the configured problem.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let sys = cfg.load_problem()?;
    let spec = SpectralData64::analyze(&sys, cfg.m_override)?;
    let truth = solution_distribution(&sys)?;
    info!(
        "{}: n = {}, m = {}, exact = {}, kappa = {:.4}",
        cfg.problem,
        sys.qubits(),
        spec.clock_qubits(),
        spec.is_exact(),
        spec.kappa
    );

    let mut backends = BTreeMap::new();
    for &backend in cfg.backend.backends() {
        backends.insert(backend, run_backend(backend, &sys, cfg, &truth)?);
    }
    let pair = match (backends.get(&Backend::Emulator), backends.get(&Backend::Simulator)) {
        (Some(e), Some(s)) => Some((e, s)),
        _ => None,
    };
    let cross = CrossReport {
        histogram_mae: pair.map(|(e, s)| histogram_mae(&s.merged_histogram(), &e.merged_histogram())),
        histogram_mae_run_mean: pair.map(|(e, s)| {
            let total: f64 = e
                .runs
                .iter()
                .zip(&s.runs)
                .map(|(a, b)| histogram_mae(&b.histogram, &a.histogram))
                .sum();
            total / e.runs.len() as f64
        }),
    };

    Ok(ExperimentReport {
        config: ConfigEcho {
            experiment: cfg.clone(),
            instance: InstanceSummary {
                b_qubits: sys.qubits(),
                clock_qubits: spec.clock_qubits(),
                evolution_time: spec.evolution_time(),
                exact_ratio: spec.is_exact(),
                eigenvalues: spec.eigenvalues.clone(),
                scaled_eigenvalues: spec.scaled_eigs().to_vec(),
                rotation_constant: spec.rotation_constant,
                condition_number: spec.kappa,
                truth,
            },
        },
        backends,
        cross,
        environment: Environment::current(),
    })
}

/// A prepared state of either backend, ready to be sampled.
enum Prepared {
    Emulated(hhl_core::EmulatedState64),
    Simulated(hhl_core::StateVector64),
}

impl Prepared {
    fn new(backend: Backend, sys: &System64, spec: &SpectralData64, round_eigs: bool) -> Result<Self> {
        Ok(match backend {
            Backend::Emulator => Prepared::Emulated(prepare_emulated_state(sys, spec, round_eigs)?),
            Backend::Simulator => Prepared::Simulated(run_hhl_circuit(sys, spec)?),
        })
    }

    fn sample(&self, shots: u64, seed: u64, stream: u64) -> ShotHistogram {
        match self {
            Prepared::Emulated(s) => s.sample_on_stream(shots, seed, stream),
            Prepared::Simulated(s) => measure_all_on_stream(s, shots, seed, stream),
        }
    }
}

fn run_backend(backend: Backend, sys: &System64, cfg: &ExperimentConfig, truth: &[f64]) -> Result<BackendReport> {
    let start = Instant::now();
    let spec = SpectralData64::analyze(sys, cfg.m_override)?;
    let analysis_s = start.elapsed().as_secs_f64();

    let mut runs = Vec::with_capacity(cfg.repeats as usize);
    let mut clock_excitation = None;
    for run in 0..cfg.repeats {
        let seed = cfg.run_seed(run);
        let t = Instant::now();
        let prepared = Prepared::new(backend, sys, &spec, cfg.round_eigs)?;
        let prepare_s = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let histogram = prepared.sample(cfg.shots, seed, backend.stream());
        let sample_s = t.elapsed().as_secs_f64();

        if let Prepared::Simulated(state) = &prepared {
            let mass = state.clock_excitation();
            clock_excitation = Some(clock_excitation.map_or(mass, |m: f64| m.max(mass)));
        }
        let estimate = match estimate_x::<f64>(&histogram) {
            Ok(e) => Some(e),
            Err(HhlError::ZeroSuccessCounts) => None,
            Err(e) => return Err(e.into()),
        };
        debug!("{backend} run {run} (seed {seed}): {:?}", histogram.counts());
        runs.push((
            RunRecord {
                run,
                seed,
                histogram,
                estimate: estimate.as_ref().map(|e| e.x_hat.clone()),
                timing: RunTiming { prepare_s, sample_s },
            },
            estimate,
        ));
    }

    let estimates: Vec<_> = runs.iter().filter_map(|(_, e)| e.clone()).collect();
    let estimate = match aggregate_estimates(&estimates) {
        Ok(agg) => Some(agg.x_hat),
        Err(HhlError::EmptyList) => None,
        Err(e) => return Err(e.into()),
    };
    let runs: Vec<RunRecord> = runs.into_iter().map(|(r, _)| r).collect();
    let n = runs.len() as f64;
    let timing = BackendTiming {
        analysis_s,
        prepare_mean_s: runs.iter().map(|r| r.timing.prepare_s).sum::<f64>() / n,
        sample_mean_s: runs.iter().map(|r| r.timing.sample_s).sum::<f64>() / n,
        total_s: start.elapsed().as_secs_f64(),
    };
    let mut report = BackendReport {
        stream: backend.stream(),
        runs,
        l1_error: estimate.as_ref().map(|e| l1_error(e, truth)),
        estimate,
        success_rate: 0.0,
        clock_excitation,
        timing,
    };
    report.success_rate = success_rate(&report.merged_histogram());
    if let Some(l1) = report.l1_error {
        info!("{backend}: l1 error {l1:.5}, success rate {:.4}", report.success_rate);
    }
    Ok(report)
}

/// Smallest doubling of the call count whose batch lasts `MIN_BATCH_SECONDS`.
fn calibrate(f: &mut impl FnMut() -> Result<()>) -> Result<usize> {
    let mut n = 1;
    while n < MAX_BATCH && time_batch(f, n)? * (n as f64) < MIN_BATCH_SECONDS {
        n *= 2;
    }
    Ok(n)
}

/// Seconds per call over a batch of `n` calls.
fn time_batch(f: &mut impl FnMut() -> Result<()>, n: usize) -> Result<f64> {
    let t = Instant::now();
    for _ in 0..n {
        f()?;
    }
    Ok(t.elapsed().as_secs_f64() / n as f64)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

struct SweepCase {
    m: u32,
    backend: Backend,
    spec: SpectralData64,
    prepared: Prepared,
}

impl SweepCase {
    fn prepare(&self, sys: &System64, cfg: &ExperimentConfig) -> Result<()> {
        std::hint::black_box(Prepared::new(self.backend, sys, &self.spec, cfg.round_eigs)?);
        Ok(())
    }

    fn sample(&self, cfg: &ExperimentConfig) -> Result<()> {
        std::hint::black_box(self.prepared.sample(cfg.shots, cfg.seed, self.backend.stream()));
        Ok(())
    }
}

/// Times state preparation and sampling of each configured backend at every
/// clock width in `m_values`. `cfg.m_override` is ignored.
///
/// Each timing round visits every (m, backend) pair in turn; reported times
/// are medians over rounds.
pub fn scaling_sweep(sys: &System64, m_values: &[u32], cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut cases = Vec::new();
    for &m in m_values {
        let spec = SpectralData64::analyze(sys, Some(m))?;
        for &backend in cfg.backend.backends() {
            let prepared = Prepared::new(backend, sys, &spec, cfg.round_eigs)?;
            cases.push(SweepCase {
                m,
                backend,
                spec: spec.clone(),
                prepared,
            });
        }
    }

    let sizes = cases
        .iter()
        .map(|c| Ok((calibrate(&mut || c.prepare(sys, cfg))?, calibrate(&mut || c.sample(cfg))?)))
        .collect::<Result<Vec<_>>>()?;
    let mut times = vec![(Vec::new(), Vec::new()); cases.len()];
    for _ in 0..TIMING_ROUNDS {
        for ((c, &(np, ns)), (tp, ts)) in cases.iter().zip(&sizes).zip(&mut times) {
            tp.push(time_batch(&mut || c.prepare(sys, cfg), np)?);
            ts.push(time_batch(&mut || c.sample(cfg), ns)?);
        }
    }

    Ok(cases
        .iter()
        .zip(times)
        .map(|(c, (tp, ts))| {
            let row = SweepRow {
                m: c.m,
                backend: c.backend,
                prepare_s: median(tp),
                sample_s: median(ts),
            };
            info!("m = {} {}: prepare {:.3e} s, sample {:.3e} s", row.m, row.backend, row.prepare_s, row.sample_s);
            row
        })
        .collect())
}
