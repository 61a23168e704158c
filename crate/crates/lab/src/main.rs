use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hhl_lab::{
    default_output_path, emit_report, emit_sweep, load_problem, run_experiment, scaling_sweep, BackendChoice,
    ExperimentConfig, Format, LabError, OUT_DIR_ENV,
};

#[derive(Parser)]
#[command(name = "hhl-lab", version, about = "Run and time HHL experiments on the emulator and simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a problem repeatedly and write a report.
    Run(RunArgs),
    /// Time both backends across clock register sizes.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Builtin problem (exp1, exp2) or path to an instance file.
    #[arg(long)]
    problem: String,
    #[arg(long, value_enum, default_value = "both")]
    backend: BackendChoice,
    #[arg(long, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Round eigenvalues to the clock grid in the emulator.
    #[arg(long)]
    round_eigs: bool,
    /// Output file; defaults to a generated name in the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    repeats: u32,
    /// Clock register size.
    #[arg(long = "m")]
    m: Option<u32>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Clock sizes to time, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    m_list: Vec<u32>,
}

impl Common {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            problem: self.problem.clone(),
            backend: self.backend,
            shots: self.shots,
            repeats: 1,
            seed: self.seed,
            m_override: None,
            round_eigs: self.round_eigs,
        }
    }

    fn report_path(&self, cfg: &ExperimentConfig) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| default_output_path(&self.out_dir, cfg, self.format))
    }
}

fn run(args: RunArgs) -> Result<(), LabError> {
    let mut cfg = args.common.config();
    cfg.repeats = args.repeats;
    cfg.m_override = args.m;
    let report = run_experiment(&cfg)?;
    for (backend, b) in &report.backends {
        let est = b
            .estimate
            .as_ref()
            .map_or("none".to_string(), |e| format!("{e:.5?}"));
        let l1 = b.l1_error.map_or("n/a".to_string(), |v| format!("{v:.5}"));
        println!(
            "{backend:<9}  estimate {est}  l1 {l1}  success {:.4}  prepare {:.3e} s  sample {:.3e} s",
            b.success_rate, b.timing.prepare_mean_s, b.timing.sample_mean_s
        );
    }
    if let (Some(all), Some(per_run)) = (report.cross.histogram_mae, report.cross.histogram_mae_run_mean) {
        println!("histogram mae {all:.5} (merged), {per_run:.5} (per-run mean)");
    }
    for path in emit_report(&report, args.common.format, &args.common.report_path(&cfg))? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), LabError> {
    let cfg = args.common.config();
    let sys = load_problem(&cfg.problem)?;
    let rows = scaling_sweep(&sys, &args.m_list, &cfg)?;
    println!("{:>3}  {:<9}  {:>12}  {:>12}", "m", "backend", "prepare_s", "sample_s");
    for r in &rows {
        println!("{:>3}  {:<9}  {:>12.4e}  {:>12.4e}", r.m, r.backend, r.prepare_s, r.sample_s);
    }
    let path = args.common.out.clone().unwrap_or_else(|| {
        let report = default_output_path(&args.common.out_dir, &cfg, args.common.format);
        let name = report.file_name().and_then(|s| s.to_str()).unwrap_or("hhl.json");
        report.with_file_name(format!("sweep-{name}"))
    });
    emit_sweep(&rows, args.common.format, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hhl-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
