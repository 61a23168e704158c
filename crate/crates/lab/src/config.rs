use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hhl_core::{builtin, parse_instance, System64, BUILTIN_NAMES};
use serde::Serialize;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Emulator,
    Simulator,
    Both,
}

impl BackendChoice {
    pub fn backends(self) -> &'static [Backend] {
        match self {
            BackendChoice::Emulator => &[Backend::Emulator],
            BackendChoice::Simulator => &[Backend::Simulator],
            BackendChoice::Both => &[Backend::Emulator, Backend::Simulator],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Emulator,
    Simulator,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Emulator => "emulator",
            Backend::Simulator => "simulator",
        }
    }

    /// Generator stream the backend samples on, so that both backends draw
    /// independent shots from the same per-run seed.
    pub fn stream(self) -> u64 {
        match self {
            Backend::Emulator => 0,
            Backend::Simulator => 1,
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "emulator" => Some(Backend::Emulator),
            "simulator" => Some(Backend::Simulator),
            _ => None,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Everything that determines a report, apart from where it is written.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Builtin name (`exp1`, `exp2`) or path to an instance file.
    pub problem: String,
    pub backend: BackendChoice,
    pub shots: u64,
    pub repeats: u32,
    pub seed: u64,
    pub m_override: Option<u32>,
    pub round_eigs: bool,
}

impl ExperimentConfig {
    pub fn new(problem: impl Into<String>) -> Self {
        Self {
            problem: problem.into(),
            backend: BackendChoice::Both,
            shots: 2048,
            repeats: 10,
            seed: 0,
            m_override: None,
            round_eigs: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(LabError::Config("shots must be at least 1".into()));
        }
        if self.repeats == 0 {
            return Err(LabError::Config("repeats must be at least 1".into()));
        }
        if self.m_override == Some(0) {
            return Err(LabError::Config("clock size must be at least 1".into()));
        }
        Ok(())
    }

    /// Seed for run `index`: `seed + index`, wrapping.
    pub fn run_seed(&self, index: u32) -> u64 {
        self.seed.wrapping_add(index as u64)
    }

    pub fn load_problem(&self) -> Result<System64> {
        load_problem(&self.problem)
    }
}

/// Resolves a builtin name or reads and parses an instance file.
pub fn load_problem(problem: &str) -> Result<System64> {
    if let Some(sys) = builtin(problem) {
        return Ok(sys);
    }
    let path = Path::new(problem);
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Problem {
        problem: problem.into(),
        reason: if BUILTIN_NAMES.contains(&problem) {
            e.to_string()
        } else {
            format!("not a builtin ({}) and not a readable file: {e}", BUILTIN_NAMES.join(", "))
        },
    })?;
    parse_instance(&text).map_err(|e| LabError::Problem {
        problem: problem.into(),
        reason: e.to_string(),
    })
}

/// Default report location: `$dir/hhl-<problem>-<seed>.<ext>`.
pub fn default_output_path(dir: &Path, cfg: &ExperimentConfig, format: Format) -> PathBuf {
    let stem = Path::new(&cfg.problem)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("problem");
    dir.join(format!("hhl-{stem}-{}.{}", cfg.seed, format.extension()))
}
