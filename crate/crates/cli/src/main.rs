//! `percolab`: experiment runner for percolation on unimodular random rooted graphs.

mod config;
mod manifest;
mod run;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{Format, Invalid, Overlay};
use manifest::{manifest_path, RunManifest};

#[derive(Parser)]
#[command(name = "percolab", version, about = "Bernoulli bond percolation experiments on unimodular random rooted graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON config file; inline flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; a manifest is written to `<out>.manifest.json`. Stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Generator descriptor JSON, e.g. '{"kind":"canopy"}'.
    #[arg(long)]
    source: Option<String>,
    /// Set a config field, `key=value` with a JSON value (bare strings allowed).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a config file, dispatching on its `experiment` field.
    Run(Common),
    /// Sample instances and report their root balls.
    Generate(Common),
    /// Annealed expected phi of root balls.
    Phi(Common),
    /// Search sampled instances for sets with phi < 1.
    Witness(Common),
    /// Bracket pc by survival probes, or the annealed phi threshold.
    EstimatePc(Common),
    /// Quenched expected cluster size diagnostic (or the exact canopy series).
    PtDiag(Common),
    /// Root-averaged expected cluster size diagnostic.
    PtaDiag(Common),
    /// Mass transport and root-law tests.
    MtpTest(Common),
    /// Ball-law distributions and locality tables.
    Converge(Common),
    /// Four-point crossing probabilities in boxes.
    Crossing(Common),
    /// The acceptance suite with a pass/fail table.
    Suite(Common),
}

impl Cmd {
    fn split(self) -> (Option<&'static str>, Common) {
        match self {
            Cmd::Run(c) => (None, c),
            Cmd::Generate(c) => (Some("generate"), c),
            Cmd::Phi(c) => (Some("phi"), c),
            Cmd::Witness(c) => (Some("witness"), c),
            Cmd::EstimatePc(c) => (Some("estimate-pc"), c),
            Cmd::PtDiag(c) => (Some("pt-diag"), c),
            Cmd::PtaDiag(c) => (Some("pta-diag"), c),
            Cmd::MtpTest(c) => (Some("mtp-test"), c),
            Cmd::Converge(c) => (Some("converge"), c),
            Cmd::Crossing(c) => (Some("crossing"), c),
            Cmd::Suite(c) => (Some("suite"), c),
        }
    }
}

/// 2 for validation errors, 3 for budget and bracket errors, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    use percolab::Error as E;
    if e.downcast_ref::<Invalid>().is_some() || e.downcast_ref::<serde_json::Error>().is_some() {
        return 2;
    }
    match e.downcast_ref::<E>() {
        Some(E::InvalidParameter(_) | E::RadiusMismatch(..)) => 2,
        Some(E::BudgetExceeded { .. } | E::CanonCap { .. } | E::EdgeCap { .. } | E::RetryCap(_) | E::Bracket { .. }) => 3,
        Some(E::NoMethod) => 3,
        _ => 1,
    }
}

fn execute(sub: Option<&str>, c: Common) -> anyhow::Result<()> {
    if let Some(n) = c.threads {
        if n == 0 {
            return Err(config::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let overlay = Overlay { seed: c.seed, source: c.source, sets: c.sets, out: c.out, format: c.format };
    let cfg = config::load(c.config.as_deref(), sub, overlay)?;
    let start = Instant::now();
    let output = run::dispatch(&cfg)?;
    let body = match cfg.format {
        Format::Csv => output.table.to_csv(&cfg.hash)?,
        Format::Json => {
            let doc = json!({"config_hash": cfg.hash, "experiment": cfg.experiment, "result": output.json});
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    match &cfg.out {
        None => print!("{body}"),
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, &body)?;
            let mut m = RunManifest::new(&cfg.hash, &cfg.canonical, start.elapsed().as_secs_f64(), output.seeds);
            m.add_output(path, body.as_bytes());
            std::fs::write(manifest_path(path), serde_json::to_string_pretty(&m)? + "\n")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, common) = cli.cmd.split();
    match execute(sub, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
