//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qtanner::cayley_complex::GroupSpec;
use qtanner::decoder::{Decoder, DecoderMode};
use qtanner::local_codes::Rate;
use serde_json::json;

use crate::error::{Result, SimError};
use crate::pipeline::{build_code, inspect, load_bundle, load_local_code, summarize, write_text, BuildConfig};
use crate::sim::{csv, simulate, sweep, trend_report, Noise, SimConfig, SimulationResult};

#[derive(Debug, Parser)]
#[command(
    name = "qtanner-sim",
    version,
    about = "Build, inspect and simulate quantum Tanner codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample local codes and a generating pair, assemble the code, write a bundle.
    Build(BuildArgs),
    /// Report parameters of a bundle.
    Inspect(InspectArgs),
    /// Run decoding trials at one noise level.
    Simulate(SimulateArgs),
    /// Run decoding trials over a list of noise levels.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// cyclic:N, psl2:Q or table:PATH
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub delta: usize,
    /// Rate of C_A (C_B gets 1 − rho), as p/q or a decimal.
    #[arg(long, default_value = "1/2")]
    pub rho: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Resample local codes until the pair is w-robust.
    #[arg(long)]
    pub robust_w: Option<usize>,
    /// Minimum local distance as a fraction of delta (with --robust-w).
    #[arg(long, default_value_t = 0.0)]
    pub delta_target: f64,
    #[arg(long, default_value_t = 1000)]
    pub code_attempts: usize,
    /// Local code file for C_A (needs --code-b).
    #[arg(long, requires = "code_b")]
    pub code_a: Option<PathBuf>,
    #[arg(long, requires = "code_a")]
    pub code_b: Option<PathBuf>,
    /// Bundle output path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    /// Robustness parameter to check on the dual tensor code.
    #[arg(long)]
    pub robust_w: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrialArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// exact or structured
    #[arg(long, default_value = "structured")]
    pub mode: String,
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
    /// CSV output path; a JSON sidecar with per-trial records is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write per-trial decoder traces to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Include per-trial wall time in the JSON sidecar.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: TrialArgs,
    /// IID Z-error probability per qubit.
    #[arg(long, conflicts_with = "weight", required_unless_present = "weight")]
    pub p: Option<f64>,
    /// Fixed error weight.
    #[arg(long)]
    pub weight: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: TrialArgs,
    /// Comma-separated error probabilities.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p_list: Vec<f64>,
    /// Second bundle to compare against in a trend report.
    #[arg(long)]
    pub compare: Option<PathBuf>,
}

fn parse_core<T: std::str::FromStr<Err = qtanner::Error>>(s: &str) -> Result<T> {
    Ok(s.parse::<T>()?)
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sim_config(args: &TrialArgs, noise: Noise) -> Result<SimConfig> {
    Ok(SimConfig {
        noise,
        trials: args.trials,
        seed: args.seed,
        mode: parse_core::<DecoderMode>(&args.mode)?,
        max_iters: args.max_iters,
        timing: args.timing,
        trace: args.trace.is_some(),
    })
}

fn write_results(args: &TrialArgs, results: &[SimulationResult], extra: serde_json::Value) -> Result<()> {
    emit(args.out.as_deref(), &csv(results))?;
    if let Some(out) = &args.out {
        let sidecar = json!({ "results": results, "report": extra });
        write_text(
            &sidecar_path(out),
            &(serde_json::to_string_pretty(&sidecar).expect("serializable") + "\n"),
        )?;
    }
    if let Some(path) = &args.trace {
        let text: String = results.iter().map(SimulationResult::trace_text).collect();
        write_text(path, &text)?;
    }
    Ok(())
}

fn cmd_build(args: &BuildArgs) -> Result<()> {
    let mut config = BuildConfig::new(
        parse_core::<GroupSpec>(&args.group)?,
        args.delta,
        parse_core::<Rate>(&args.rho)?,
        args.seed,
    );
    config.robust_w = args.robust_w;
    config.delta_target = args.delta_target;
    config.code_attempts = args.code_attempts;
    if let (Some(a), Some(b)) = (&args.code_a, &args.code_b) {
        config.codes = Some((load_local_code(a)?, load_local_code(b)?));
    }
    let built = build_code(&config)?;
    write_text(&args.out, &(built.code.to_bundle_json(built.seeds) + "\n"))?;
    let summary = summarize(&built.code)?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    Ok(())
}

fn cmd_inspect(args: &InspectArgs) -> Result<()> {
    let code = load_bundle(&args.bundle)?;
    let report = inspect(&code, args.robust_w.unwrap_or(code.delta()))?;
    emit(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"),
    )
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let noise = match (args.p, args.weight) {
        (Some(p), None) => Noise::Iid(p),
        (None, Some(t)) => Noise::FixedWeight(t),
        _ => return Err(SimError::Usage("give exactly one of --p and --weight".into())),
    };
    let config = sim_config(&args.common, noise)?;
    let code = load_bundle(&args.common.bundle)?;
    config.validate(code.n())?;
    let decoder = Decoder::new(&code)?;
    let result = simulate(&code, &decoder, &config)?;
    write_results(&args.common, &[result], serde_json::Value::Null)
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let config = sim_config(&args.common, Noise::Iid(0.0))?;
    let code = load_bundle(&args.common.bundle)?;
    let decoder = Decoder::new(&code)?;
    let results = sweep(&code, &decoder, &config, &args.p_list)?;
    let mut report = serde_json::Value::Null;
    if let Some(other_path) = &args.compare {
        let other = load_bundle(other_path)?;
        let other_decoder = Decoder::new(&other)?;
        let other_results = sweep(&other, &other_decoder, &config, &args.p_list)?;
        let trend = trend_report(&results, &other_results)?;
        let line = serde_json::to_string(&trend).expect("serializable");
        // Standard output carries the CSV when no --out is given.
        if args.common.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
        report = json!({ "trend": trend, "compare_results": other_results });
    }
    write_results(&args.common, &results, report)
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Inspect(a) => cmd_inspect(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

/// Parses arguments, runs the command, and returns the process exit code.
/// Errors go to standard error as one JSON object.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let err = SimError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    match std::panic::catch_unwind(|| execute(&cli)) {
        Ok(Ok(())) => 0,
        Ok(Err(err)) => {
            eprintln!("{}", err.to_json());
            err.exit_code()
        }
        Err(_) => {
            eprintln!("{}", json!({ "error": "internal", "message": "panic" }));
            2
        }
    }
}
