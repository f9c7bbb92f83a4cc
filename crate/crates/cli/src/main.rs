//! `trustsim`: check trust metrics against the two formal requirements and
//! run the trust-round network simulation, with reproducible manifests and
//! machine-readable outputs.
//!
//! Exit codes: 0 when the run succeeded and matched the published comparison
//! matrix, 1 on usage or I/O errors, 2 when a run diverged from the matrix
//! (a finding worth looking at).

mod report;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use trustsim_core::checker::{
    search_counterexamples, MetricUnderTest, RequirementId, SearchConfig, SearchMode,
};
use trustsim_core::metrics::{MetricKind, MetricParams};
use trustsim_core::sim::{run_simulation, trace_to_csv, trace_to_jsonl, SimConfig, Topology};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "trustsim",
    version,
    about = "Trust-metric requirement checker and lossy-network trust simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a trust metric for violations of requirement R1 or R2.
    Check(CheckArgs),
    /// Run the trust-round simulation over a topology file.
    Simulate(SimulateArgs),
    /// Print the metric comparison matrix, with the requirement columns
    /// filled by live checker runs.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Simple,
    Wtm,
    Wses,
}

impl MetricArg {
    fn kind(self) -> MetricKind {
        match self {
            MetricArg::Simple => MetricKind::Simple,
            MetricArg::Wtm => MetricKind::Wtm,
            MetricArg::Wses => MetricKind::Wses,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RequirementArg {
    R1,
    R2,
}

impl RequirementArg {
    fn id(self) -> RequirementId {
        match self {
            RequirementArg::R1 => RequirementId::R1,
            RequirementArg::R2 => RequirementId::R2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Grid,
    Random,
}

impl ModeArg {
    fn mode(self) -> SearchMode {
        match self {
            ModeArg::Grid => SearchMode::ExhaustiveGrid,
            ModeArg::Random => SearchMode::Randomized,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceFormatArg {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct CheckArgs {
    /// Metric to check.
    #[arg(long, value_enum)]
    metric: MetricArg,
    /// Requirement to check.
    #[arg(long, value_enum)]
    requirement: RequirementArg,
    /// How to explore the state space.
    #[arg(long, value_enum, default_value_t = ModeArg::Random)]
    mode: ModeArg,
    /// Randomized trials to run (random mode).
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Seed for the randomized search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid spacing over the rating range (grid mode).
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// State-building updates from the initial state (grid mode; the
    /// windowed metric is bounded by its capacity instead).
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Smoothing weight for the simple and sign-split metrics.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// FIFO capacity for the windowed metric.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Manifest path; defaults to `<out stem>.manifest.json` when --out is
    /// given.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Topology JSON file: {"nodes": [...], "links": [{"a","b","p"}, ...]}.
    #[arg(long)]
    topology: PathBuf,
    /// Smoothing weight for the trust updates.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Trust rounds to complete.
    #[arg(long, default_value_t = 10)]
    rounds: u64,
    /// Packets each node sends per sending sweep.
    #[arg(long, default_value_t = 10)]
    packets: u64,
    /// Event ticks between periodic DIOs.
    #[arg(long, default_value_t = 1)]
    dio_period: u64,
    /// Loss-triggered DIO threshold in [0, 1]; 0 disables the loss path.
    #[arg(long, default_value_t = 0.0)]
    loss_trigger: f64,
    /// Probability that a delivered packet arrives only after the next DIO.
    #[arg(long, default_value_t = 0.0)]
    late_fraction: f64,
    /// Seed for every random draw in the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trace file format.
    #[arg(long, value_enum, default_value_t = TraceFormatArg::Jsonl)]
    trace_format: TraceFormatArg,
    /// Directory for manifest.json, the trace file, and summary.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Randomized trials per requirement cell.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smoothing weight used for the simple and sign-split cells.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Grid spacing for the windowed metric's exhaustive cells.
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// FIFO capacity for the windowed metric's exhaustive cells.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Write the JSON report here (the text table always goes to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Manifest path; defaults to `<out stem>.manifest.json` when --out is
    /// given.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Report(args) => report::cmd_report(args),
    }
}

/// Every run records its fully resolved configuration up front; re-running
/// with the recorded values reproduces the outputs byte for byte.
#[derive(Serialize)]
struct RunManifest<'a, C: Serialize> {
    command: &'static str,
    config: &'a C,
    seed: u64,
    tool_version: &'static str,
}

fn write_manifest<C: Serialize>(
    path: &Path,
    command: &'static str,
    config: &C,
    seed: u64,
) -> Result<(), String> {
    let manifest = RunManifest {
        command,
        config,
        seed,
        tool_version: TOOL_VERSION,
    };
    let mut json = serde_json::to_string_pretty(&manifest).map_err(|e| e.to_string())?;
    json.push('\n');
    fs::write(path, json).map_err(|e| format!("cannot write manifest {}: {e}", path.display()))
}

/// `report.json` -> `report.manifest.json`.
fn manifest_sibling(out: &Path) -> PathBuf {
    let mut name = out
        .file_stem()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// The published comparison matrix: only the windowed metric's R2 is
/// expected to have violations.
fn expected_violations(kind: MetricKind, requirement: RequirementId) -> bool {
    matches!((kind, requirement), (MetricKind::Wtm, RequirementId::R2))
}

#[derive(Serialize)]
struct CheckResolvedConfig<'a> {
    metric: MetricKind,
    requirement: RequirementId,
    params: &'a MetricParams,
    search: &'a SearchConfig,
    out: Option<&'a Path>,
}

fn cmd_check(args: CheckArgs) -> i32 {
    let kind = args.metric.kind();
    let requirement = args.requirement.id();
    let params = match MetricParams::new(args.alpha, args.k) {
        Ok(params) => params,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let config = SearchConfig {
        mode: args.mode.mode(),
        trials: args.trials,
        seed: args.seed,
        grid_step: args.step,
        depth: args.depth,
    };

    let resolved = CheckResolvedConfig {
        metric: kind,
        requirement,
        params: &params,
        search: &config,
        out: args.out.as_deref(),
    };
    let manifest_path = args
        .manifest
        .clone()
        .or_else(|| args.out.as_deref().map(manifest_sibling));
    if let Some(path) = &manifest_path {
        if let Err(e) = write_manifest(path, "check", &resolved, args.seed) {
            eprintln!("error: {e}");
            return 1;
        }
    }

    let metric = MetricUnderTest::new(kind, params);
    let report = match search_counterexamples(&metric, requirement, &config) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };

    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    if let Some(out) = &args.out {
        if let Err(e) = fs::write(out, &json) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return 1;
        }
    } else {
        print!("{json}");
    }

    let expected = expected_violations(kind, requirement);
    let found = !report.violations.is_empty();
    if found == expected {
        0
    } else {
        eprintln!(
            "finding: {kind} {requirement} reported {} violation(s) over {} trials, expected {}",
            report.violations.len(),
            report.trials_run,
            if expected { "some" } else { "none" },
        );
        2
    }
}

#[derive(Serialize)]
struct SimulateResolvedConfig<'a> {
    topology: &'a Path,
    sim: &'a SimConfig,
    trace_format: &'static str,
    out_dir: &'a Path,
}

fn cmd_simulate(args: SimulateArgs) -> i32 {
    let text = match fs::read_to_string(&args.topology) {
        Ok(text) => text,
        Err(e) => {
            eprintln!(
                "error: cannot read topology {}: {e}",
                args.topology.display()
            );
            return 1;
        }
    };
    let topology = match Topology::from_json(&text) {
        Ok(topology) => topology,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let config = SimConfig {
        alpha: args.alpha,
        rounds: args.rounds,
        packets_per_round: args.packets,
        dio_period: args.dio_period,
        loss_trigger_fraction: args.loss_trigger,
        seed: args.seed,
        late_delivery_fraction: args.late_fraction,
        failures: Vec::new(),
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return 1;
    }
    if let Err(e) = fs::create_dir_all(&args.out_dir) {
        eprintln!("error: cannot create {}: {e}", args.out_dir.display());
        return 1;
    }

    let trace_format = match args.trace_format {
        TraceFormatArg::Jsonl => "jsonl",
        TraceFormatArg::Csv => "csv",
    };
    let resolved = SimulateResolvedConfig {
        topology: &args.topology,
        sim: &config,
        trace_format,
        out_dir: &args.out_dir,
    };
    if let Err(e) = write_manifest(
        &args.out_dir.join("manifest.json"),
        "simulate",
        &resolved,
        args.seed,
    ) {
        eprintln!("error: {e}");
        return 1;
    }

    let outcome = match run_simulation(&topology, config) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };

    let (trace_name, trace_text) = match args.trace_format {
        TraceFormatArg::Jsonl => ("trace.jsonl", trace_to_jsonl(&outcome.trace)),
        TraceFormatArg::Csv => ("trace.csv", trace_to_csv(&outcome.trace)),
    };
    let trace_path = args.out_dir.join(trace_name);
    if let Err(e) = fs::write(&trace_path, trace_text) {
        eprintln!("error: cannot write {}: {e}", trace_path.display());
        return 1;
    }
    let mut summary = serde_json::to_string_pretty(&outcome.summary).expect("summary serializes");
    summary.push('\n');
    let summary_path = args.out_dir.join("summary.json");
    if let Err(e) = fs::write(&summary_path, summary) {
        eprintln!("error: cannot write {}: {e}", summary_path.display());
        return 1;
    }

    println!(
        "completed {} round(s), {} trace event(s) -> {}",
        outcome.summary.rounds_completed,
        outcome.trace.len(),
        args.out_dir.display()
    );
    0
}
