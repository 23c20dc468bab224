use std::fs::File;
use std::io::Write;

use ilpdom::{generate, solve_feasibility, GenMode, GenSpec, SolveOptions, Strategy};
use num_rational::Ratio;
use serde::Serialize;

use crate::{BenchArgs, Failure, ModeArg, EXIT_FEASIBLE, EXIT_INFEASIBLE};

pub const BENCH_HEADER: &str = "n,m,c,seed,mode,strategy,verdict,nodes_visited,balanced_nodes,unbalanced_nodes,guard_activations,brute_leaf_pairs_examined,pair_exponent,elapsed_millis";

/// One solver run. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub c: f64,
    pub seed: u64,
    pub mode: &'static str,
    pub strategy: &'static str,
    pub verdict: &'static str,
    pub nodes_visited: u64,
    pub balanced_nodes: u64,
    pub unbalanced_nodes: u64,
    pub guard_activations: u64,
    pub brute_leaf_pairs_examined: u64,
    pub pair_exponent: f64,
    pub elapsed_millis: u128,
}

/// `log2(max(1, pairs)) / log2(side^2)`, clamped to `[0, 1]`.
pub fn pair_exponent(pairs: u64, side: u64) -> f64 {
    if side <= 1 {
        return 0.0;
    }
    let e = (pairs.max(1) as f64).log2() / (2.0 * (side as f64).log2());
    e.clamp(0.0, 1.0)
}

pub(crate) fn parse_vars(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {text:?}"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= LO <= HI, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// `round(c * n)`, halves rounded up, at least one.
fn constraint_count(c: Ratio<u64>, n: usize) -> usize {
    let (p, q) = (*c.numer() as u128, *c.denom() as u128);
    let m = (2 * p * n as u128 + q) / (2 * q);
    m.max(1) as usize
}

pub(crate) fn cmd_bench(
    args: &BenchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if args.trials == 0 {
        return Err(Failure::invalid("--trials must be at least 1"));
    }
    if *args.ratio.numer() == 0 {
        return Err(Failure::invalid("--ratio must be positive"));
    }
    let file = File::create(&args.csv)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.csv.display())))?;
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    let io = |e: csv::Error| Failure::invalid(format!("{}: {e}", args.csv.display()));
    csv.write_record(BENCH_HEADER.split(',')).map_err(io)?;
    csv.flush().map_err(|e| Failure::invalid(e.to_string()))?;

    let mode = match args.mode {
        ModeArg::Uniform => GenMode::Uniform,
        ModeArg::Planted => GenMode::Planted,
    };
    let (mut rows, mut mismatches) = (0u64, 0u64);
    for n in args.vars.0..=args.vars.1 {
        let m = constraint_count(args.ratio, n);
        for trial in 0..args.trials {
            let seed = args.seed.wrapping_add(trial as u64);
            let spec = GenSpec {
                mode,
                ..GenSpec::new(n, m, seed)
            };
            let (instance, domains) = generate(&spec)?;
            let mut verdicts = Vec::new();
            for strategy in [Strategy::Brute, Strategy::Mitm] {
                let half = 1u64 << n.div_ceil(2).min(63);
                let fits = match strategy {
                    Strategy::Brute => n < 64 && (1u64 << n) <= args.brute_limit,
                    _ => half <= args.side_limit,
                };
                if !fits {
                    let _ = writeln!(err, "n={n} seed={seed}: {} skipped, over budget", strategy.name());
                    continue;
                }
                let options = SolveOptions {
                    strategy,
                    params: args.params.spec(),
                    max_side_vectors: args.side_limit,
                    max_brute_assignments: args.brute_limit,
                };
                let outcome = solve_feasibility(&instance, &domains, &options)?;
                let s = &outcome.stats;
                let row = BenchRow {
                    n,
                    m,
                    c: m as f64 / n as f64,
                    seed,
                    mode: mode.name(),
                    strategy: strategy.name(),
                    verdict: if outcome.verdict.is_feasible() {
                        "feasible"
                    } else {
                        "infeasible"
                    },
                    nodes_visited: s.nodes_visited,
                    balanced_nodes: s.balanced_nodes,
                    unbalanced_nodes: s.unbalanced_nodes,
                    guard_activations: s.guard_activations,
                    brute_leaf_pairs_examined: s.brute_leaf_pairs_examined,
                    pair_exponent: pair_exponent(s.brute_leaf_pairs_examined, outcome.larger_side()),
                    elapsed_millis: s.elapsed.as_millis(),
                };
                csv.serialize(&row).map_err(io)?;
                csv.flush().map_err(|e| Failure::invalid(e.to_string()))?;
                rows += 1;
                verdicts.push(outcome.verdict.is_feasible());
            }
            if verdicts.windows(2).any(|w| w[0] != w[1]) {
                mismatches += 1;
                let _ = writeln!(err, "n={n} seed={seed}: strategies disagree");
            }
        }
    }
    let summary = serde_json::json!({
        "rows": rows,
        "mismatches": mismatches,
        "csv": args.csv.display().to_string(),
    });
    let _ = writeln!(out, "{summary}");
    Ok(if mismatches == 0 {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    })
}
