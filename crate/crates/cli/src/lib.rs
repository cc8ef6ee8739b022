//! `gtdistrict`: file-driven runs of the geometric-target protocol and of
//! recombination ensembles.
//!
//! Exit codes: 0 success, 2 bad input (including disconnected graphs),
//! 3 internal invariant violation or unmet target, 4 infeasible seeding.

pub mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use gtdistrict_core::{build_gt_partition, target_bounds, Instance, Party};
use gtdistrict_ensemble::{
    deviation_report, deviation_sweep, ensemble_targets, evaluate, grid, mark_gt, price_of_fairness_report,
    run_chain, write_records_csv, write_sweep_csv, Beliefs, ChainError, Deviation, DeviationMode, GraphInstance,
    GridSpec, Pattern, SweepRow, RNG_ALGORITHM, TRUTH_DATASET,
};

use crate::config::FileConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

pub const DEFAULT_STEPS: usize = 50_000;
pub const DEFAULT_BURN_IN: usize = 1_000;
pub const DEFAULT_SWEEP: [u32; 10] = [5, 10, 15, 20, 25, 30, 35, 40, 45, 50];

#[derive(Debug, Parser)]
#[command(name = "gtdistrict", version, about = "Geometric-target redistricting: exact protocol and ensemble analysis")]
pub struct Cli {
    /// TOML file with [ensemble] and [gridgen] tables; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a partition meeting both parties' geometric targets.
    Protocol {
        /// Instance JSON.
        instance: PathBuf,
        /// Write the trace here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Report each party's seat bounds and geometric target.
    Targets {
        instance: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run a recombination chain and report the price of the geometric target.
    Ensemble(EnsembleArgs),
    /// Write a synthetic grid graph.
    Gridgen(GridgenArgs),
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Graph JSON.
    pub graph: PathBuf,
    /// Directory for records.csv, summary.json, and deviation.csv [default: ensemble-out].
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Chain length including burn-in [default: 50000].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Leading states to discard [default: 1000].
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// PRNG seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Population tolerance as a fraction; overrides the graph's value.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `sweep`, `sweep:5,10,...`, or `PARTY:uniform|random:PERCENT` (for
    /// example `1:uniform:-10`).
    #[arg(long)]
    pub deviate: Option<String>,
    /// Dataset used for metrics [default: "truth" if present, else the first].
    #[arg(long)]
    pub truth: Option<String>,
    /// Party 1's belief dataset [default: the truth dataset].
    #[arg(long = "belief-1")]
    pub belief_1: Option<String>,
    /// Party 2's belief dataset [default: the truth dataset].
    #[arg(long = "belief-2")]
    pub belief_2: Option<String>,
}

#[derive(Debug, Args)]
pub struct GridgenArgs {
    /// [default: 6]
    #[arg(long)]
    pub rows: Option<usize>,
    /// [default: 6]
    #[arg(long)]
    pub cols: Option<usize>,
    /// District count [default: 3].
    #[arg(long)]
    pub m: Option<usize>,
    /// `uniform[:share]`, `gradient[:mean[:spread]]`, or `clustered[:blobs[:base[:peak]]]` [default: gradient].
    #[arg(long)]
    pub pattern: Option<String>,
    /// Seed for clustered centers [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Population tolerance written into the graph [default: 0.02].
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

type Outcome = Result<i32, Failure>;

pub fn run(cli: Cli) -> i32 {
    let result = FileConfig::load(cli.config.as_deref()).map_err(Failure::input).and_then(|cfg| match cli.command {
        Command::Protocol { instance, output } => cmd_protocol(&instance, output.as_deref()),
        Command::Targets { instance, output } => cmd_targets(&instance, output.as_deref()),
        Command::Ensemble(args) => cmd_ensemble(&args, &cfg),
        Command::Gridgen(args) => cmd_gridgen(&args, &cfg),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| Failure::input(format!("cannot write stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    Instance::from_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn cmd_protocol(instance: &Path, output: Option<&Path>) -> Outcome {
    let inst = load_instance(instance)?;
    match build_gt_partition(&inst) {
        Ok(trace) => {
            let satisfied = trace.report.as_ref().is_some_and(|r| r.iter().all(|t| t.satisfied));
            emit(output, &to_json(&serde_json::json!({ "report": trace.report, "trace": trace })))?;
            if satisfied {
                Ok(EXIT_OK)
            } else {
                Err(Failure { code: EXIT_INVARIANT, message: "a geometric target is not met".into() })
            }
        }
        Err(err) => {
            emit(output, &to_json(&serde_json::json!({ "error": err.check, "trace": err.trace })))?;
            Err(Failure { code: EXIT_INVARIANT, message: err.to_string() })
        }
    }
}

pub fn cmd_targets(instance: &Path, output: Option<&Path>) -> Outcome {
    let inst = load_instance(instance)?;
    let bounds = Party::BOTH.map(|p| target_bounds(&inst, p));
    emit(output, &to_json(&bounds))?;
    Ok(EXIT_OK)
}

/// A parsed `--deviate` value.
#[derive(Clone, Debug, PartialEq)]
pub enum DeviateSpec {
    Sweep(Vec<u32>),
    Single(Deviation),
}

impl std::str::FromStr for DeviateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "sweep" {
            return Ok(DeviateSpec::Sweep(DEFAULT_SWEEP.to_vec()));
        }
        if let Some(list) = s.strip_prefix("sweep:") {
            let xs = list
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad sweep percent {x:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(DeviateSpec::Sweep(xs));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let [party, mode, percent] = parts[..] else {
            return Err(format!("expected sweep or PARTY:MODE:PERCENT, got {s:?}"));
        };
        let party = party.parse::<usize>().map_err(|e| format!("bad party {party:?}: {e}"))?;
        let mode = match mode {
            "uniform" => DeviationMode::Uniform,
            "random" => DeviationMode::Random,
            other => return Err(format!("unknown deviation mode {other:?}")),
        };
        let percent = percent.parse::<i32>().map_err(|e| format!("bad percent {percent:?}: {e}"))?;
        Ok(DeviateSpec::Single(Deviation::new(party, mode, percent)?))
    }
}

#[derive(Serialize)]
struct RunMeta<'a> {
    rng: &'a str,
    seed: u64,
    steps: usize,
    burn_in: usize,
    epsilon: f64,
    m: usize,
    nodes: usize,
    samples: usize,
    self_loops: usize,
}

pub fn cmd_ensemble(args: &EnsembleArgs, cfg: &FileConfig) -> Outcome {
    let c = &cfg.ensemble;
    let steps = args.steps.or(c.steps).unwrap_or(DEFAULT_STEPS);
    let burn_in = args.burn_in.or(c.burn_in).unwrap_or(DEFAULT_BURN_IN);
    let seed = args.seed.or(c.seed).unwrap_or(0);
    let out_dir = args.out_dir.clone().or_else(|| c.out_dir.clone()).unwrap_or_else(|| PathBuf::from("ensemble-out"));
    let deviate = args
        .deviate
        .as_ref()
        .or(c.deviate.as_ref())
        .map(|s| s.parse::<DeviateSpec>())
        .transpose()
        .map_err(Failure::input)?;

    let mut g = GraphInstance::from_json(&read(&args.graph)?)
        .map_err(|e| Failure::input(format!("{}: {e}", args.graph.display())))?;
    if let Some(eps) = args.epsilon.or(c.epsilon) {
        g = g.with_epsilon(eps).map_err(|e| Failure::input(e.to_string()))?;
    }
    let datasets = g.datasets();
    let truth = args.truth.clone().or_else(|| c.truth.clone()).unwrap_or_else(|| {
        if datasets.iter().any(|d| d == TRUTH_DATASET) {
            TRUTH_DATASET.to_string()
        } else {
            datasets.first().cloned().unwrap_or_default()
        }
    });
    let belief = |flag: &Option<String>, file: &Option<String>| flag.clone().or_else(|| file.clone()).unwrap_or_else(|| truth.clone());
    let beliefs = Beliefs {
        truth: truth.clone(),
        party: [belief(&args.belief_1, &c.belief_1), belief(&args.belief_2, &c.belief_2)],
    };
    for name in std::iter::once(&beliefs.truth).chain(&beliefs.party) {
        g.votes(name).map_err(|e| Failure::input(e.to_string()))?;
    }

    let run = run_chain(&g, steps, burn_in, seed).map_err(|e| match e {
        ChainError::Schedule { .. } => Failure::input(e.to_string()),
        ChainError::Seeding { .. } => Failure { code: EXIT_INFEASIBLE, message: e.to_string() },
        ChainError::Initial(_) | ChainError::Invariant { .. } => Failure { code: EXIT_INVARIANT, message: e.to_string() },
    })?;
    let mut records = evaluate(&g, &run.samples, &beliefs).map_err(|e| Failure::input(e.to_string()))?;
    let targets = ensemble_targets(&records);
    let report = targets.map(|t| {
        mark_gt(&mut records, &t);
        price_of_fairness_report(&records, &t)
    });

    fs::create_dir_all(&out_dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", out_dir.display())))?;
    let write_err = |e: &dyn std::fmt::Display| Failure::input(format!("cannot write output: {e}"));
    let file = |name: &str| fs::File::create(out_dir.join(name)).map_err(|e| write_err(&e));
    write_records_csv(&records, file("records.csv")?).map_err(|e| write_err(&e))?;

    let deviation: Option<Vec<SweepRow>> = match &deviate {
        None => None,
        Some(DeviateSpec::Sweep(xs)) => {
            Some(deviation_sweep(&g, &run.samples, &beliefs, xs, seed).map_err(|e| Failure::input(e.to_string()))?)
        }
        Some(DeviateSpec::Single(dev)) => Some(
            deviation_report(&g, &run.samples, &beliefs, *dev, seed)
                .map_err(|e| Failure::input(e.to_string()))?
                .into_iter()
                .collect(),
        ),
    };
    if let Some(rows) = &deviation {
        write_sweep_csv(rows, file("deviation.csv")?).map_err(|e| write_err(&e))?;
    }

    let meta = RunMeta {
        rng: RNG_ALGORITHM,
        seed,
        steps,
        burn_in,
        epsilon: g.epsilon(),
        m: g.m(),
        nodes: g.len(),
        samples: records.len(),
        self_loops: run.self_loops,
    };
    let summary = serde_json::json!({
        "run": meta,
        "beliefs": beliefs,
        "targets": targets,
        "price_of_fairness": report,
        "table": report.as_ref().map(|r| r.table()),
        "deviation": deviation,
    });
    fs::write(out_dir.join("summary.json"), to_json(&summary) + "\n").map_err(|e| write_err(&e))?;
    info!("wrote {} records to {}", records.len(), out_dir.display());
    Ok(EXIT_OK)
}

pub fn cmd_gridgen(args: &GridgenArgs, cfg: &FileConfig) -> Outcome {
    let c = &cfg.gridgen;
    let pattern: Pattern = args
        .pattern
        .as_ref()
        .or(c.pattern.as_ref())
        .map_or("gradient", |s| s.as_str())
        .parse()
        .map_err(Failure::input)?;
    let mut spec = GridSpec::new(
        args.rows.or(c.rows).unwrap_or(6),
        args.cols.or(c.cols).unwrap_or(6),
        args.m.or(c.m).unwrap_or(3),
        pattern,
    );
    spec.seed = args.seed.or(c.seed).unwrap_or(0);
    spec.epsilon = args.epsilon.or(c.epsilon).unwrap_or(0.02);
    if spec.rows == 0 || spec.cols == 0 {
        return Err(Failure::input("grid needs at least one row and one column"));
    }
    let g = grid(&spec).map_err(|e| Failure::input(e.to_string()))?;
    emit(args.output.as_deref(), &g.to_json())?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_deviation_specs() {
        assert_eq!("sweep".parse::<DeviateSpec>().unwrap(), DeviateSpec::Sweep(DEFAULT_SWEEP.to_vec()));
        assert_eq!("sweep:5, 15".parse::<DeviateSpec>().unwrap(), DeviateSpec::Sweep(vec![5, 15]));
        let single = "2:uniform:-25".parse::<DeviateSpec>().unwrap();
        assert_eq!(single, DeviateSpec::Single(Deviation::new(2, DeviationMode::Uniform, -25).unwrap()));
        assert!("3:uniform:5".parse::<DeviateSpec>().is_err());
        assert!("1:sideways:5".parse::<DeviateSpec>().is_err());
        assert!("1:uniform".parse::<DeviateSpec>().is_err());
    }
}
