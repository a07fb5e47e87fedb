//! Command-line front end: loads catalogs and parameter files, dispatches to
//! the library, and writes machine-readable JSON or CSV reports.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 infeasible.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use distill_core::analytic::{evaluate_sequence, EvalConfig};
use distill_core::channels::depolarizing;
use distill_core::codes::{load_catalog, parse_sequence, CodeSpec};
use distill_core::estimators::{
    bell_injection_reject, comparison_table, injection_error, ComparisonTable, CompareConfig,
    InjectionParams,
};
use distill_core::montecarlo::{simulate_sequence, TrialConfig};
use distill_core::optimizer::{optimize, SearchConstraints};
use distill_core::pipeline::plan_pipeline;

use distill_cli::{EvaluateReport, InputEcho, OptimizeReport, PipelineReport, SimulateReport};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_TARGET: f64 = 1e-12;
const DEFAULT_L_MAX: u32 = 7;
const DEFAULT_TRIALS: u64 = 100_000;
const DEFAULT_ATTEMPT_CAP: u64 = 1_000_000;
const DEFAULT_P_GATE: f64 = 0.001;
const DEFAULT_P_REJECT: f64 = 0.08;
const DEFAULT_T_BELL: f64 = 1.0;
const DEFAULT_T_GATE: f64 = 0.01;
const DEFAULT_T_INJECT: f64 = 1.0;
const DEFAULT_RATES: [f64; 5] = [0.001, 0.01, 0.05, 0.10, 0.15];
const BDSWY_L_MAX: u32 = 14;
const BDSWY_M_MAX: u64 = 15;

#[derive(Parser)]
#[command(
    name = "distill",
    version,
    about = "Plan, optimize, and simulate entanglement-distillation sequences"
)]
struct Cli {
    /// Catalog CSV merged over the builtin code list.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Use only the catalog file, dropping the builtin code list.
    #[arg(long, global = true)]
    no_builtin: bool,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// RNG seed for simulation.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores. Output is identical for any
    /// thread count.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// JSON file supplying defaults for any long flag; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Search the catalog for the lowest-overhead sequence under a buffer cap.
    Optimize(OptimizeArgs),
    /// Evaluate one sequence with the analytic model.
    Evaluate(EvaluateArgs),
    /// Monte Carlo run of one sequence with exact error tracking.
    Simulate(SimulateArgs),
    /// Compare schemes across a list of network error rates.
    Compare(CompareArgs),
    /// Buffer sizes and batch cadence for one sequence.
    Pipeline(PipelineArgs),
}

/// Input-model flags shared by the sequence subcommands. Exactly one of
/// `--p-in` (raw pairs) and `--p-bell` (network rate fed through the
/// injection estimate) selects the model.
#[derive(Args)]
struct InputArgs {
    /// Raw depolarizing error rate of the input pairs.
    #[arg(long, value_name = "P")]
    p_in: Option<f64>,
    /// Network Bell-pair error rate; the input error is then the injection
    /// estimate at this rate.
    #[arg(long, value_name = "P")]
    p_bell: Option<f64>,
    /// Physical gate error rate for the injection estimate.
    #[arg(long, value_name = "P")]
    p_gate: Option<f64>,
    /// Injection rejection rate; sets the pre-distillation discard
    /// probability to 1-(1-p)^2 when given.
    #[arg(long, value_name = "P")]
    p_reject: Option<f64>,
    /// Pre-distillation discard probability, overriding --p-reject.
    #[arg(long, value_name = "P")]
    p0_reject: Option<f64>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Buffer cap in qubits per node.
    #[arg(long, value_name = "M")]
    buffer: Option<u64>,
    /// Residual error target per output qubit.
    #[arg(long, value_name = "P")]
    target: Option<f64>,
    /// Maximum sequence length explored.
    #[arg(long, value_name = "L")]
    l_max: Option<u32>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated sequence, e.g. "r3x,r2y,r2x,q4.2.2".
    #[arg(long, value_name = "SEQ")]
    seq: Option<String>,
    /// Residual error target per output qubit.
    #[arg(long, value_name = "P")]
    target: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated sequence, e.g. "r2z,r2x".
    #[arg(long, value_name = "SEQ")]
    seq: Option<String>,
    /// Number of independent trials.
    #[arg(long, value_name = "N")]
    trials: Option<u64>,
    /// Retry cap per repeat-until-success gate before a trial aborts.
    #[arg(long, value_name = "N")]
    attempt_cap: Option<u64>,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated network error rates.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    network_errors: Option<Vec<f64>>,
    /// Physical gate error rate.
    #[arg(long, value_name = "P")]
    p_gate: Option<f64>,
    /// Injection rejection rate for the two-pair schemes.
    #[arg(long, value_name = "P")]
    p_reject: Option<f64>,
    /// Residual error target per output qubit.
    #[arg(long, value_name = "P")]
    target: Option<f64>,
    /// Buffer caps; one optimizer column is added per entry.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    buffers: Option<Vec<u64>>,
    /// Maximum sequence length for the buffered columns.
    #[arg(long, value_name = "L")]
    l_max: Option<u32>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated sequence to plan for.
    #[arg(long, value_name = "SEQ")]
    seq: Option<String>,
    /// Residual error target per output qubit.
    #[arg(long, value_name = "P")]
    target: Option<f64>,
    /// Average time to deliver one raw Bell pair.
    #[arg(long, value_name = "T")]
    t_bell: Option<f64>,
    /// Time per transversal gate layer.
    #[arg(long, value_name = "T")]
    t_gate: Option<f64>,
    /// Time to inject one pair into logical memory.
    #[arg(long, value_name = "T")]
    t_inject: Option<f64>,
}

/// Optional defaults loaded from --config; every key mirrors a long flag.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    catalog: Option<PathBuf>,
    no_builtin: Option<bool>,
    format: Option<String>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
    p_in: Option<f64>,
    p_bell: Option<f64>,
    p_gate: Option<f64>,
    p_reject: Option<f64>,
    p0_reject: Option<f64>,
    buffer: Option<u64>,
    target: Option<f64>,
    l_max: Option<u32>,
    seq: Option<String>,
    trials: Option<u64>,
    attempt_cap: Option<u64>,
    network_errors: Option<Vec<f64>>,
    buffers: Option<Vec<u64>>,
    t_bell: Option<f64>,
    t_gate: Option<f64>,
    t_inject: Option<f64>,
}

enum Failure {
    Usage(String),
    Infeasible(String),
}

impl From<distill_core::Error> for Failure {
    fn from(e: distill_core::Error) -> Self {
        match e {
            distill_core::Error::Infeasible(msg) => Failure::Infeasible(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn resolve_input(a: &InputArgs, f: &FileConfig) -> Result<InputEcho, Failure> {
    enum Model {
        Raw(f64),
        Injected(f64),
    }
    let both = "give exactly one of --p-in and --p-bell";
    let model = match (a.p_in, a.p_bell) {
        (Some(_), Some(_)) => return Err(usage(format!("invalid argument `p_in`: {both}"))),
        (Some(p), None) => Model::Raw(p),
        (None, Some(b)) => Model::Injected(b),
        (None, None) => match (f.p_in, f.p_bell) {
            (Some(_), Some(_)) => return Err(usage(format!("invalid argument `p_in`: {both}"))),
            (Some(p), None) => Model::Raw(p),
            (None, Some(b)) => Model::Injected(b),
            (None, None) => {
                return Err(usage(
                    "invalid argument `p_in`: an input model is required (--p-in or --p-bell)",
                ))
            }
        },
    };
    let p_reject = a.p_reject.or(f.p_reject);
    let p0_reject = match a.p0_reject.or(f.p0_reject) {
        Some(p0) => p0,
        None => match p_reject {
            Some(r) => bell_injection_reject(r)?,
            None => 0.0,
        },
    };
    let (name, p_total) = match model {
        Model::Raw(p) => ("depolarizing", p),
        Model::Injected(b) => {
            let p_gate = a.p_gate.or(f.p_gate).unwrap_or(DEFAULT_P_GATE);
            let params = InjectionParams::new(
                p_gate,
                p_gate,
                b,
                p_reject.unwrap_or(DEFAULT_P_REJECT),
            )?;
            ("injected", injection_error(&params))
        }
    };
    Ok(InputEcho {
        model: name.to_string(),
        p_total,
        dist: depolarizing(p_total)?,
        p0_reject,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| usage(format!("config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    if let Some(t) = cli.threads.or(file.threads) {
        if t < 1 {
            return Err(usage("invalid argument `threads`: must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| usage(format!("threads: {e}")))?;
    }
    let format = match cli.format {
        Some(f) => f,
        None => match file.format.as_deref() {
            Some("json") | None => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                return Err(usage(format!(
                    "invalid argument `format`: expected json or csv, got {other}"
                )))
            }
        },
    };
    let out = cli.out.clone().or(file.out.clone());
    let seed = cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let catalog_path = cli.catalog.clone().or(file.catalog.clone());
    let include_builtin = !(cli.no_builtin || file.no_builtin.unwrap_or(false));

    let (text, code) = match &cli.command {
        Command::Optimize(args) => {
            let input = resolve_input(&args.input, &file)?;
            let m_max = args
                .buffer
                .or(file.buffer)
                .ok_or_else(|| usage("invalid argument `buffer`: required for optimize"))?;
            if m_max < 1 {
                return Err(usage("invalid argument `buffer`: must be at least 1"));
            }
            let p_target = args.target.or(file.target).unwrap_or(DEFAULT_TARGET);
            let l_max = args.l_max.or(file.l_max).unwrap_or(DEFAULT_L_MAX);
            let catalog = load_catalog(catalog_path.as_deref(), include_builtin)?;
            let cons = SearchConstraints {
                m_max,
                p_target,
                l_max,
                cfg: EvalConfig::new(input.dist, input.p0_reject, p_target)?,
            };
            let search = optimize(&catalog, &cons)?;
            let feasible = search.best.is_some();
            let report = OptimizeReport {
                input,
                p_target,
                m_max,
                l_max,
                catalog_size: catalog.entries.len(),
                search,
            };
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => optimize_csv(&report),
            };
            if !feasible {
                eprintln!("infeasible: no sequence meets the target under these constraints");
            }
            (text, if feasible { 0 } else { 2 })
        }
        Command::Evaluate(args) => {
            let input = resolve_input(&args.input, &file)?;
            let seq_text = args
                .seq
                .clone()
                .or(file.seq.clone())
                .ok_or_else(|| usage("invalid argument `seq`: required for evaluate"))?;
            let seq = parse_sequence(&seq_text)?;
            let p_target = args.target.or(file.target).unwrap_or(DEFAULT_TARGET);
            let cfg = EvalConfig::new(input.dist, input.p0_reject, p_target)?;
            let metrics = evaluate_sequence(&seq, &cfg)?;
            let report = EvaluateReport {
                input,
                seq: seq_ids(&seq),
                p_target,
                metrics,
            };
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => evaluate_csv(&report),
            };
            (text, 0)
        }
        Command::Simulate(args) => {
            let input = resolve_input(&args.input, &file)?;
            let seq_text = args
                .seq
                .clone()
                .or(file.seq.clone())
                .ok_or_else(|| usage("invalid argument `seq`: required for simulate"))?;
            let seq = parse_sequence(&seq_text)?;
            let trials = args.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
            let attempt_cap = args
                .attempt_cap
                .or(file.attempt_cap)
                .unwrap_or(DEFAULT_ATTEMPT_CAP);
            let tc = TrialConfig::new(seed, trials, attempt_cap)?;
            let estimate = simulate_sequence(&seq, &input.dist, &tc)?;
            let report = SimulateReport {
                input,
                seq: seq_ids(&seq),
                trials,
                attempt_cap,
                estimate,
            };
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => simulate_csv(&report),
            };
            (text, 0)
        }
        Command::Compare(args) => {
            let rates = args
                .network_errors
                .clone()
                .or(file.network_errors.clone())
                .unwrap_or_else(|| DEFAULT_RATES.to_vec());
            let buffers = args.buffers.clone().or(file.buffers.clone()).unwrap_or_default();
            let catalog = load_catalog(catalog_path.as_deref(), include_builtin)?;
            let cfg = CompareConfig {
                p_gate: args.p_gate.or(file.p_gate).unwrap_or(DEFAULT_P_GATE),
                p_reject: args.p_reject.or(file.p_reject).unwrap_or(DEFAULT_P_REJECT),
                p_target: args.target.or(file.target).unwrap_or(DEFAULT_TARGET),
                buffers,
                catalog,
                l_max: args.l_max.or(file.l_max).unwrap_or(DEFAULT_L_MAX),
                bdswy_l_max: BDSWY_L_MAX,
                bdswy_m_max: BDSWY_M_MAX,
            };
            let table = comparison_table(&rates, &cfg)?;
            let text = match format {
                Format::Json => to_json(&table),
                Format::Csv => compare_csv(&table),
            };
            (text, 0)
        }
        Command::Pipeline(args) => {
            let input = resolve_input(&args.input, &file)?;
            let seq_text = args
                .seq
                .clone()
                .or(file.seq.clone())
                .ok_or_else(|| usage("invalid argument `seq`: required for pipeline"))?;
            let seq = parse_sequence(&seq_text)?;
            let p_target = args.target.or(file.target).unwrap_or(DEFAULT_TARGET);
            let t_bell = args.t_bell.or(file.t_bell).unwrap_or(DEFAULT_T_BELL);
            let t_gate = args.t_gate.or(file.t_gate).unwrap_or(DEFAULT_T_GATE);
            let t_inject = args.t_inject.or(file.t_inject).unwrap_or(DEFAULT_T_INJECT);
            let cfg = EvalConfig::new(input.dist, input.p0_reject, p_target)?;
            let metrics = evaluate_sequence(&seq, &cfg)?;
            let plan = plan_pipeline(&seq, &metrics, t_bell, t_gate, t_inject)?;
            let report = PipelineReport {
                input,
                seq: seq_ids(&seq),
                t_bell,
                t_gate,
                t_inject,
                metrics,
                plan,
            };
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => pipeline_csv(&report),
            };
            (text, 0)
        }
    };

    match &out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::from(code))
}

fn seq_ids(seq: &[CodeSpec]) -> String {
    seq.iter().map(|s| s.id()).collect::<Vec<_>>().join(",")
}

fn to_json(report: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

fn optimize_csv(r: &OptimizeReport) -> String {
    let mut w = csv_writer();
    w.write_record([
        "sequence",
        "overhead",
        "memory",
        "levels",
        "p_final",
        "p_per_qubit",
        "batch_outputs",
        "is_best",
    ])
    .unwrap();
    for cand in &r.search.viable {
        let is_best = r.search.best.as_ref() == Some(cand);
        let ids = cand
            .seq
            .iter()
            .map(|s| s.id())
            .collect::<Vec<_>>()
            .join(",");
        w.write_record([
            ids,
            fmt_f64(cand.metrics.overhead),
            cand.metrics.memory.to_string(),
            cand.seq.len().to_string(),
            fmt_f64(cand.metrics.p_final),
            fmt_f64(cand.metrics.p_per_qubit),
            cand.metrics.batch_outputs.to_string(),
            is_best.to_string(),
        ])
        .unwrap();
    }
    csv_finish(w)
}

fn evaluate_csv(r: &EvaluateReport) -> String {
    let mut w = csv_writer();
    w.write_record([
        "sequence",
        "levels",
        "overhead",
        "memory",
        "p_final",
        "p_per_qubit",
        "batch_outputs",
    ])
    .unwrap();
    w.write_record([
        r.seq.clone(),
        r.metrics.levels.len().to_string(),
        fmt_f64(r.metrics.overhead),
        r.metrics.memory.to_string(),
        fmt_f64(r.metrics.p_final),
        fmt_f64(r.metrics.p_per_qubit),
        r.metrics.batch_outputs.to_string(),
    ])
    .unwrap();
    csv_finish(w)
}

fn simulate_csv(r: &SimulateReport) -> String {
    let mut w = csv_writer();
    w.write_record([
        "sequence",
        "seed",
        "trials",
        "attempt_cap",
        "aborted",
        "p_fail",
        "p_fail_radius",
        "p_out",
        "p_out_radius",
        "consumed_per_output",
        "consumed_radius",
    ])
    .unwrap();
    w.write_record([
        r.seq.clone(),
        r.estimate.seed.to_string(),
        r.trials.to_string(),
        r.attempt_cap.to_string(),
        r.estimate.aborted.to_string(),
        fmt_f64(r.estimate.p_fail_hat.value),
        fmt_f64(r.estimate.p_fail_hat.radius),
        fmt_f64(r.estimate.p_out_hat.value),
        fmt_f64(r.estimate.p_out_hat.radius),
        fmt_f64(r.estimate.consumed_per_output.value),
        fmt_f64(r.estimate.consumed_per_output.radius),
    ])
    .unwrap();
    csv_finish(w)
}

fn compare_csv(t: &ComparisonTable) -> String {
    let mut w = csv_writer();
    w.write_record([
        "p_bell",
        "injected_error",
        "scheme",
        "feasible",
        "overhead",
        "levels",
        "memory",
        "sequence",
        "d",
        "bell_pairs",
        "note",
    ])
    .unwrap();
    for row in &t.rows {
        let cells = std::iter::once(&row.bdsw)
            .chain(std::iter::once(&row.bdsw_y))
            .chain(row.buffered.iter());
        for cell in cells {
            w.write_record([
                fmt_f64(row.p_bell),
                fmt_f64(row.injected_error),
                cell.scheme.clone(),
                cell.feasible.to_string(),
                fmt_opt(&cell.overhead),
                fmt_opt(&cell.levels),
                fmt_opt(&cell.memory),
                cell.sequence.clone().unwrap_or_default(),
                String::new(),
                String::new(),
                cell.note.clone(),
            ])
            .unwrap();
        }
        w.write_record([
            fmt_f64(row.p_bell),
            fmt_f64(row.injected_error),
            "lattice-surgery".to_string(),
            row.surgery.feasible.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            fmt_opt(&row.surgery.d),
            fmt_opt(&row.surgery.bell_pairs),
            row.surgery.note.clone(),
        ])
        .unwrap();
    }
    csv_finish(w)
}

fn pipeline_csv(r: &PipelineReport) -> String {
    let mut w = csv_writer();
    w.write_record([
        "level",
        "id",
        "n",
        "k",
        "b",
        "t_input",
        "t_distill",
        "b_all",
        "batch_size",
        "batch_period",
    ])
    .unwrap();
    for s in &r.plan.stages {
        w.write_record([
            s.level.to_string(),
            s.id.clone(),
            s.n.to_string(),
            s.k.to_string(),
            fmt_f64(s.b),
            fmt_f64(s.t_input),
            fmt_f64(s.t_distill),
            String::new(),
            String::new(),
            String::new(),
        ])
        .unwrap();
    }
    w.write_record([
        String::new(),
        "total".to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        fmt_f64(r.plan.b_all),
        r.plan.batch_size.to_string(),
        fmt_f64(r.plan.batch_period),
    ])
    .unwrap();
    csv_finish(w)
}
