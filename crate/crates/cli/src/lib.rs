//! The `ilpdom` command: solve, generate, check and bench.
//!
//! Exit codes: 0 feasible (or success), 1 infeasible, 2 unreadable or
//! invalid input, 3 capacity or overflow-risk refusal.

mod bench;
mod rational;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ilpdom::{
    optimize, parse, serialize, solve_feasibility, validate_no_overflow, GenMode, GenSpec,
    OptimizeOutcome, ParamSpec, Preset, SolveOptions, Stats, Strategy, TieRule,
};
use serde::Serialize;

pub use bench::{pair_exponent, BenchRow, BENCH_HEADER};
pub use rational::{parse_ratio, parse_ratio_u64};

pub const EXIT_FEASIBLE: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ilpdom", version, about = "Exact 0-1 / finite-domain ILP feasibility")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide feasibility of an instance file (or maximize with --objective).
    Solve(SolveArgs),
    /// Write a seeded random instance.
    Generate(GenerateArgs),
    /// Parse and validate an instance file.
    Check { file: PathBuf },
    /// Run both strategies over a range of sizes and record a CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Mitm,
    Brute,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Mitm => Strategy::Mitm,
            StrategyArg::Brute => Strategy::Brute,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Balanced,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Uniform,
    Planted,
}

/// Solver parameter flags shared by `solve` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Balance threshold, e.g. 1/16 or 0.0625.
    #[arg(long, value_parser = parse_ratio)]
    pub epsilon: Option<num_rational::Ratio<num_bigint::BigUint>>,
    /// Recursion budget.
    #[arg(long = "t")]
    pub t_initial: Option<u32>,
    /// Pair count at or below which a node is scanned directly.
    #[arg(long)]
    pub cutoff: Option<u64>,
    /// epsilon = 1/16, t = log2(N)/4 instead of the formula defaults.
    #[arg(long)]
    pub practical: bool,
    #[arg(long, value_enum, default_value = "balanced")]
    pub tie_rule: TieArg,
}

impl ParamArgs {
    pub fn spec(&self) -> ParamSpec {
        ParamSpec {
            preset: if self.practical {
                Preset::Practical
            } else {
                Preset::Formula
            },
            epsilon: self.epsilon.clone(),
            t_initial: self.t_initial,
            brute_pair_cutoff: self.cutoff,
            tie_rule: match self.tie_rule {
                TieArg::Balanced => TieRule::Balanced,
                TieArg::Fixed => TieRule::Fixed,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Include search statistics in the report.
    #[arg(long)]
    pub stats: bool,
    /// Maximize this weight vector instead of deciding feasibility.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub objective: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub vars: usize,
    #[arg(long)]
    pub constraints: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = -8, allow_negative_numbers = true)]
    pub coeff_min: i64,
    #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
    pub coeff_max: i64,
    #[arg(long)]
    pub planted: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Inclusive range of variable counts, LO..HI.
    #[arg(long, value_parser = bench::parse_vars)]
    pub vars: (usize, usize),
    /// Constraints per variable; m = round(ratio * n).
    #[arg(long, value_parser = parse_ratio_u64)]
    pub ratio: num_rational::Ratio<u64>,
    #[arg(long)]
    pub trials: u32,
    /// Trial k of every size uses instance seed `seed + k`.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "uniform")]
    pub mode: ModeArg,
    #[arg(long)]
    pub csv: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest assignment count the exhaustive strategy is run on.
    #[arg(long, default_value_t = 1 << 30)]
    pub brute_limit: u64,
    /// Largest half size the meet-in-the-middle strategy is run on.
    #[arg(long, default_value_t = ilpdom::ilp::DEFAULT_MAX_SIDE_VECTORS)]
    pub side_limit: u64,
}

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<ilpdom::Error> for Failure {
    fn from(e: ilpdom::Error) -> Self {
        let code = match e {
            ilpdom::Error::Capacity { .. } | ilpdom::Error::OverflowRisk { .. } => EXIT_REFUSED,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Generate(a) => cmd_generate(a),
        Command::Check { file } => cmd_check(file, out),
        Command::Bench(a) => bench::cmd_bench(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<(ilpdom::IlpInstance, ilpdom::DomainSpec), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Ok(parse(&bytes)?)
}

#[derive(Debug, Serialize)]
struct Report {
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective_value: Option<i128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<StatsReport>,
}

#[derive(Debug, Serialize)]
struct StatsReport {
    strategy: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_initial: Option<u32>,
    nodes_visited: u64,
    balanced_nodes: u64,
    unbalanced_nodes: u64,
    guard_activations: u64,
    brute_leaf_pairs_examined: u64,
    max_depth: u64,
    elapsed_millis: u128,
}

impl StatsReport {
    fn new(strategy: Strategy, stats: &Stats) -> Self {
        StatsReport {
            strategy: strategy.name(),
            epsilon: None,
            t_initial: None,
            nodes_visited: stats.nodes_visited,
            balanced_nodes: stats.balanced_nodes,
            unbalanced_nodes: stats.unbalanced_nodes,
            guard_activations: stats.guard_activations,
            brute_leaf_pairs_examined: stats.brute_leaf_pairs_examined,
            max_depth: stats.max_depth,
            elapsed_millis: stats.elapsed.as_millis(),
        }
    }
}

fn emit(out: &mut dyn Write, report: &Report) -> Result<(), Failure> {
    let text = serde_json::to_string(report).expect("report serializes");
    writeln!(out, "{text}").map_err(|e| Failure::invalid(format!("writing report: {e}")))
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (instance, domains) = read_instance(&args.file)?;
    // reject bad overrides even when the chosen strategy never reads them
    args.params
        .spec()
        .resolve(num_rational::Ratio::from_integer(1), 1)
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let options = SolveOptions {
        strategy: args.strategy.into(),
        params: args.params.spec(),
        ..SolveOptions::default()
    };
    let report = match &args.objective {
        None => {
            let outcome = solve_feasibility(&instance, &domains, &options)?;
            let stats = args.stats.then(|| {
                let mut s = StatsReport::new(outcome.strategy, &outcome.stats);
                if let Some(p) = &outcome.params {
                    s.epsilon = Some(p.epsilon.to_string());
                    s.t_initial = Some(p.t_initial);
                }
                s
            });
            Report {
                feasible: outcome.verdict.is_feasible(),
                assignment: outcome.verdict.witness().map(|x| x.values().to_vec()),
                objective_value: None,
                stats,
            }
        }
        Some(weights) => {
            let (outcome, stats) = optimize(&instance, &domains, weights, &options)?;
            let stats = args
                .stats
                .then(|| StatsReport::new(options.strategy, &stats));
            match outcome {
                OptimizeOutcome::Optimal { value, assignment } => Report {
                    feasible: true,
                    assignment: Some(assignment.values().to_vec()),
                    objective_value: Some(value),
                    stats,
                },
                OptimizeOutcome::Infeasible => Report {
                    feasible: false,
                    assignment: None,
                    objective_value: None,
                    stats,
                },
            }
        }
    };
    emit(out, &report)?;
    Ok(if report.feasible {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_generate(args: &GenerateArgs) -> Result<i32, Failure> {
    let spec = GenSpec {
        num_vars: args.vars,
        num_constraints: args.constraints,
        seed: args.seed,
        coeff_min: args.coeff_min,
        coeff_max: args.coeff_max,
        mode: if args.planted {
            GenMode::Planted
        } else {
            GenMode::Uniform
        },
        domain: None,
    };
    let (instance, domains) = ilpdom::generate(&spec).map_err(|e| Failure::invalid(e.to_string()))?;
    fs::write(&args.out, serialize(&instance, &domains))
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.out.display())))?;
    Ok(EXIT_FEASIBLE)
}

fn cmd_check(file: &PathBuf, out: &mut dyn Write) -> Result<i32, Failure> {
    let (instance, domains) = read_instance(file)?;
    validate_no_overflow(&instance, &domains).map_err(|e| Failure::invalid(e.to_string()))?;
    let summary = serde_json::json!({
        "valid": true,
        "num_vars": instance.num_vars(),
        "num_constraints": instance.num_constraints(),
    });
    writeln!(out, "{summary}").map_err(|e| Failure::invalid(e.to_string()))?;
    Ok(EXIT_FEASIBLE)
}
