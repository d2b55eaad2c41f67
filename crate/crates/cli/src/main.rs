//! `ntuple`: verification reports for principal groups, groupoids, graded maps,
//! automorphism groups, and cocycles.
//!
//! Exit codes: 0 pass, 1 verified failure (with witnesses), 2 input error.
//! Worker threads follow `RAYON_NUM_THREADS`.

mod aut;
mod cocycle;
mod graded;
mod group;
mod groupoid;
mod principal;
mod report;

use std::io::Write;
use std::panic;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use ntuple_core::group::DEFAULT_MAX_ORDER;
use report::{input, CmdResult, Failure, Report};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "ntuple",
    version,
    about = "Exact verification of n-tuple principal structures"
)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Cap on the order of groups generated by permutations.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    /// Cap on candidate maps in automorphism enumeration and cohomology search.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_candidates: u128,
    /// Print a human-readable summary instead of JSON on stdout.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Finite groups.
    #[command(subcommand)]
    Group(group::GroupCmd),
    /// Double principal groups.
    #[command(subcommand)]
    Dpg(principal::DpgCmd),
    /// n-tuple principal groups.
    #[command(subcommand)]
    Ntuple(principal::NtupleCmd),
    /// Groupoids and group actions on them.
    #[command(subcommand)]
    Groupoid(groupoid::GroupoidCmd),
    /// Graded polynomial maps and homogeneity structures.
    #[command(subcommand)]
    Graded(graded::GradedCmd),
    /// Automorphism groups of n-tuple vector spaces.
    #[command(subcommand)]
    Aut(aut::AutCmd),
    /// Transition cocycles.
    #[command(subcommand)]
    Cocycle(cocycle::CocycleCmd),
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn dispatch(command: &Command, opts: &Options) -> CmdResult {
    match command {
        Command::Group(c) => group::run(c, opts),
        Command::Dpg(c) => principal::run_dpg(c, opts),
        Command::Ntuple(c) => principal::run_ntuple(c, opts),
        Command::Groupoid(c) => groupoid::run(c, opts),
        Command::Graded(c) => graded::run(c, opts),
        Command::Aut(c) => aut::run(c, opts),
        Command::Cocycle(c) => cocycle::run(c, opts),
    }
}

/// Runs a command, turning library assertion panics into theory failures.
fn guarded(command: &Command, opts: &Options) -> CmdResult {
    let message = Arc::new(Mutex::new(None::<String>));
    let slot = Arc::clone(&message);
    let previous = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        *slot.lock().unwrap() = Some(info.to_string());
    }));
    let result = panic::catch_unwind(panic::AssertUnwindSafe(|| dispatch(command, opts)));
    panic::set_hook(previous);
    result.unwrap_or_else(|_| {
        let msg = message
            .lock()
            .unwrap()
            .take()
            .unwrap_or_else(|| "panic".into());
        Err(Failure::Theory(msg))
    })
}

fn main() {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let result = guarded(&cli.command, &cli.opts);
    let report = Report::build(argv, result, start.elapsed().as_secs_f64() * 1e3);
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    if let Some(path) = &cli.opts.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            std::process::exit(2);
        }
    }
    let mut stdout = std::io::stdout().lock();
    if cli.opts.text {
        let _ = writeln!(stdout, "{}", report.summary());
    } else {
        let _ = writeln!(stdout, "{json}");
        eprintln!("{}", report.summary());
    }
    std::process::exit(report.verdict.exit_code());
}
