//! Report serialization.
//!
//! JSON is the canonical form. CSV writes two files: the per-run histogram
//! rows (`run,backend,seed,label,count`) at the requested path, and
//! `scope,key,value` summary rows next to it with a `.summary.csv` suffix.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hhl_core::ShotHistogram;
use serde::{Deserialize, Serialize};

use crate::config::{Backend, Format};
use crate::error::{LabError, Result};
use crate::report::{ExperimentReport, SweepRow};

pub fn to_json(report: &ExperimentReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Companion summary file for a CSV report at `path`.
pub fn summary_path(path: &Path) -> PathBuf {
    path.with_extension("summary.csv")
}

/// Writes `report` to `path`; returns every file written.
pub fn emit_report(report: &ExperimentReport, format: Format, path: &Path) -> Result<Vec<PathBuf>> {
    ensure_parent(path)?;
    match format {
        Format::Json => {
            std::fs::write(path, to_json(report)).map_err(|e| LabError::io(path, e))?;
            Ok(vec![path.to_path_buf()])
        }
        Format::Csv => {
            write_run_rows(report, path)?;
            let summary = summary_path(path);
            write_summary(report, &summary)?;
            Ok(vec![path.to_path_buf(), summary])
        }
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))
        }
        _ => Ok(()),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RunRow {
    run: u32,
    backend: String,
    seed: u64,
    label: String,
    count: u64,
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|source| LabError::Csv {
        path: path.into(),
        source,
    })
}

fn write_run_rows(report: &ExperimentReport, path: &Path) -> Result<()> {
    let csv_err = |source| LabError::Csv {
        path: path.into(),
        source,
    };
    let mut w = csv_writer(path)?;
    for (backend, b) in &report.backends {
        for r in &b.runs {
            for (label, count) in r.histogram.labelled() {
                w.serialize(RunRow {
                    run: r.run,
                    backend: backend.name().into(),
                    seed: r.seed,
                    label,
                    count,
                })
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(|e| LabError::io(path, e))
}

fn write_summary(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut rows: Vec<(String, String, String)> = Vec::new();
    let mut push = |scope: &str, key: String, value: String| rows.push((scope.into(), key, value));
    for (i, t) in report.config.instance.truth.iter().enumerate() {
        push("truth", format!("x{i}"), t.to_string());
    }
    for (backend, b) in &report.backends {
        let scope = backend.name();
        if let Some(est) = &b.estimate {
            for (i, x) in est.iter().enumerate() {
                push(scope, format!("x{i}"), x.to_string());
            }
        }
        push(scope, "success_rate".into(), b.success_rate.to_string());
        push(scope, "l1_error".into(), b.l1_error.map_or(String::new(), |v| v.to_string()));
        push(scope, "prepare_mean_s".into(), b.timing.prepare_mean_s.to_string());
        push(scope, "sample_mean_s".into(), b.timing.sample_mean_s.to_string());
        push(scope, "total_s".into(), b.timing.total_s.to_string());
    }
    if let Some(mae) = report.cross.histogram_mae {
        push("cross", "histogram_mae".into(), mae.to_string());
    }
    let mut w = csv_writer(path)?;
    let csv_err = |source| LabError::Csv {
        path: path.into(),
        source,
    };
    w.write_record(["scope", "key", "value"]).map_err(csv_err)?;
    for (s, k, v) in rows {
        w.write_record([s, k, v]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| LabError::io(path, e))
}

/// Reads the per-run rows of a CSV report back into histograms, keyed by
/// backend and ordered by run.
pub fn read_run_csv(path: &Path) -> Result<BTreeMap<Backend, Vec<ShotHistogram>>> {
    let mut r = csv::Reader::from_path(path).map_err(|source| LabError::Csv {
        path: path.into(),
        source,
    })?;
    let mut runs: BTreeMap<Backend, BTreeMap<u32, Vec<(String, u64)>>> = BTreeMap::new();
    for row in r.deserialize() {
        let row: RunRow = row.map_err(|source| LabError::Csv {
            path: path.into(),
            source,
        })?;
        let backend = Backend::from_name(&row.backend)
            .ok_or_else(|| LabError::Format(format!("unknown backend '{}'", row.backend)))?;
        runs.entry(backend)
            .or_default()
            .entry(row.run)
            .or_default()
            .push((row.label, row.count));
    }
    runs.into_iter()
        .map(|(backend, by_run)| {
            let hists = by_run
                .into_values()
                .map(|entries| {
                    let b_qubits = entries.first().map_or(1, |(l, _)| l.len().saturating_sub(1)) as u32;
                    ShotHistogram::from_labels(b_qubits, entries.iter().map(|(l, c)| (l.as_str(), *c)))
                        .ok_or_else(|| LabError::Format("inconsistent outcome labels".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((backend, hists))
        })
        .collect()
}

/// Writes sweep rows as a JSON array or CSV table.
pub fn emit_sweep(rows: &[SweepRow], format: Format, path: &Path) -> Result<()> {
    ensure_parent(path)?;
    match format {
        Format::Json => {
            let file = File::create(path).map_err(|e| LabError::io(path, e))?;
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, rows).map_err(|e| LabError::io(path, e.into()))?;
            writeln!(w).and_then(|_| w.flush()).map_err(|e| LabError::io(path, e))
        }
        Format::Csv => {
            let mut w = csv_writer(path)?;
            for row in rows {
                w.serialize(row).map_err(|source| LabError::Csv {
                    path: path.into(),
                    source,
                })?;
            }
            w.flush().map_err(|e| LabError::io(path, e))
        }
    }
}
