use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spinstar_cli::{run_scenario, write_outputs, Command, Format, ScenarioConfig};

#[derive(Parser)]
#[command(name = "spinstar", version, about = "Central spin in a spin-star bath: exact dynamics, envelopes, time scales, rates")]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Scenario file (`key = value` lines or a JSON object)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Significant digits in the output
    #[arg(long)]
    precision: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads; falls back to SPINSTAR_THREADS, then to all cores
    #[arg(long)]
    threads: Option<usize>,
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("SPINSTAR_THREADS") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("SPINSTAR_THREADS must be a positive integer, got `{v}`")),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if let Some(n) = threads(cli.threads)? {
        if n == 0 {
            return Err("thread count must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => ScenarioConfig::default(),
    };
    if let Some(f) = &cli.format {
        cfg.format = f.parse::<Format>()?;
    }
    if let Some(p) = cli.precision {
        cfg.precision = p;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.validate().map_err(|(k, m)| format!("field `{k}`: {m}"))?;

    let mut run = run_scenario(&cfg, cli.command).map_err(|e| e.to_string())?;
    let written = write_outputs(&mut run, cfg.format, cfg.precision, cfg.out.as_deref()).map_err(|e| e.to_string())?;
    for w in written {
        eprintln!("wrote {}", w.display());
    }
    if let Some(list) = run.manifest.get("warnings").and_then(|w| w.as_array()) {
        for w in list {
            eprintln!("warning: {}", w.as_str().unwrap_or_default());
        }
    }
    if run.failed_checks > 0 {
        eprintln!("{} verification check(s) failed", run.failed_checks);
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
