//! The release acceptance suite. Every criterion runs, prints one
//! `PASS`/`FAIL` line, and the test fails if any criterion did.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use ilpdom::ilp::brute_force_feasibility_counted;
use ilpdom::rng::SplitMix64;
use ilpdom::vecdom::{
    find_dominating_pair_observed, split_by_first_coord_with, CallInfo, SearchObserver, SplitInfo,
};
use ilpdom::{
    brute_force_feasibility, brute_force_pair, default_params, dominates, enumerate_left,
    enumerate_right, evaluate, find_dominating_pair, find_pair_unequal, generate, optimize, parse,
    serialize, solve_feasibility, split_variables, Assignment, Constraint, DomainSpec, GenSpec,
    IlpInstance, OptimizeOutcome, ParamSpec, SolveOptions, SolverParams, Strategy, TaggedVector,
    TieRule, VectorSet,
};
use num_bigint::BigUint;
use num_rational::Ratio;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ratio(n: u64, d: u64) -> Ratio<BigUint> {
    Ratio::new(BigUint::from(n), BigUint::from(d))
}

fn recursive_params(rule: TieRule) -> SolverParams {
    SolverParams::new(ratio(1, 8), 8, 1).unwrap().with_tie_rule(rule)
}

fn random_set(rng: &mut SplitMix64, len: usize, dim: usize, lo: i64, hi: i64) -> VectorSet<i64> {
    let rows: Vec<Vec<i64>> = (0..len)
        .map(|_| (0..dim).map(|_| rng.range_inclusive(lo, hi)).collect())
        .collect();
    VectorSet::from_rows(dim, &rows).unwrap()
}

fn witness_holds(a: &VectorSet<i64>, b: &VectorSet<i64>, a_tag: u64, b_tag: u64) -> bool {
    let pick = |s: &VectorSet<i64>, tag: u64| {
        let i = s.tags().iter().position(|&t| t == tag).unwrap();
        TaggedVector::new(tag, s.row(i).to_vec())
    };
    dominates(&pick(a, a_tag), &pick(b, b_tag)).unwrap()
}

fn mitm_options() -> SolveOptions {
    SolveOptions::with_strategy(Strategy::Mitm)
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut feasible = 0;
    for i in 0..2000u64 {
        let n = 1 + (i % 18) as usize;
        let c = [1, 2, 4][((i / 18) % 3) as usize];
        let (inst, dom) = generate(&GenSpec::new(n, c * n, i)).unwrap();
        let want = brute_force_feasibility(&inst, &dom).unwrap();
        let got = solve_feasibility(&inst, &dom, &mitm_options()).unwrap().verdict;
        check(got.is_feasible() == want.is_feasible(), || {
            format!("instance {i} (n={n}, c={c}): mitm {got:?}, brute {want:?}")
        })?;
        for x in [got.witness(), want.witness()].into_iter().flatten() {
            check(evaluate(&inst, &dom, x).unwrap(), || format!("instance {i}: witness fails"))?;
        }
        feasible += want.is_feasible() as u32;
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "2000 instances agree ({feasible} feasible), {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    let mut rng = SplitMix64::new(2);
    let mut found = 0;
    for i in 0..500 {
        let n = 2 + rng.below(255) as usize;
        let c = [1u64, 4][i % 2];
        let log_n = (n as f64).log2();
        let max_d = (2.0 * c as f64 * log_n).ceil() as u128;
        let d = 1 + rng.below(max_d) as usize;
        let a = random_set(&mut rng, n, d, -4, 4);
        let b = random_set(&mut rng, n, d, -4, 4);
        let want = brute_force_pair(&a, &b).unwrap().is_some();
        let runs = [
            default_params(Ratio::from_integer(c), n as u128),
            recursive_params(TieRule::Balanced),
            recursive_params(TieRule::Fixed),
        ];
        for p in &runs {
            let (got, _) = find_dominating_pair(&a, &b, p).unwrap();
            check(got.is_some() == want, || format!("equal-size instance {i}: N={n}, d={d}"))?;
            if let Some(w) = got {
                check(witness_holds(&a, &b, w.a_tag, w.b_tag), || {
                    format!("equal-size instance {i}: bad witness")
                })?;
            }
        }
        found += want as u32;
    }
    for i in 0..100 {
        let nb = 2 + rng.below(40) as usize;
        let na = nb + rng.below(7 * nb as u128 + 1) as usize;
        let d = 1 + rng.below(8) as usize;
        let a = random_set(&mut rng, na, d, -4, 4);
        let b = random_set(&mut rng, nb, d, -4, 4);
        let want = brute_force_pair(&a, &b).unwrap().is_some();
        for p in [recursive_params(TieRule::Balanced), default_params(Ratio::from_integer(4), na as u128)] {
            let (got, _) = find_pair_unequal(&a, &b, &p).unwrap();
            check(got.is_some() == want, || format!("unequal instance {i}: |A|={na}, |B|={nb}"))?;
        }
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "500 equal-size ({found} with a pair) + 100 unequal agree, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

#[derive(Default)]
struct SplitLog(Vec<SplitInfo>);

impl SearchObserver for SplitLog {
    fn on_split(&mut self, s: &SplitInfo) {
        self.0.push(s.clone());
    }
}

fn criterion_3() -> Outcome {
    let mut rng = SplitMix64::new(3);
    let mut identity_checked = 0;
    let mut fixed_rule_identity_misses = 0;
    for i in 0..1000 {
        let len = 1 + rng.below(60) as usize;
        let nb = if i % 2 == 0 { len } else { 1 + rng.below(60) as usize };
        let tie_free = i % 4 == 0;
        let (mut a, mut b) = (random_set(&mut rng, len, 3, -5, 5), random_set(&mut rng, nb, 3, -5, 5));
        if tie_free {
            // distinct first coordinates across both sets
            let mut firsts: Vec<i64> = (0..(len + nb) as i64).collect();
            for k in (1..firsts.len()).rev() {
                firsts.swap(k, rng.below(k as u128 + 1) as usize);
            }
            let remap = |s: &VectorSet<i64>, vals: &[i64]| {
                let rows: Vec<Vec<i64>> = s
                    .iter()
                    .zip(vals)
                    .map(|((_, r), &v)| {
                        let mut r = r.to_vec();
                        r[0] = v;
                        r
                    })
                    .collect();
                VectorSet::from_rows(3, &rows).unwrap()
            };
            a = remap(&a, &firsts[..len]);
            b = remap(&b, &firsts[len..]);
        }
        for rule in [TieRule::Balanced, TieRule::Fixed] {
            let s = split_by_first_coord_with(&a, &b, rule).unwrap();
            for (_, u) in s.a_minus.iter() {
                for (_, v) in s.b_plus.iter() {
                    check(u[0] < v[0], || format!("split {i} {rule:?}: A- meets B+"))?;
                }
            }
            if tie_free && a.len() == b.len() {
                let lhs = Ratio::new(s.a_minus.len(), a.len());
                let rhs = Ratio::new(s.b_plus.len(), b.len());
                match rule {
                    TieRule::Balanced => {
                        check(lhs == rhs, || format!("split {i}: {lhs} != {rhs}"))?;
                        identity_checked += 1;
                    }
                    TieRule::Fixed => fixed_rule_identity_misses += (lhs != rhs) as u32,
                }
            }
        }
    }

    let mut balanced = 0;
    for i in 0..40 {
        let a = random_set(&mut rng, 200, 5, -3, 3);
        let b = random_set(&mut rng, 150, 5, -3, 3);
        let eps = [(1u64, 4u64), (1, 8), (1, 3)][i % 3];
        let rule = [TieRule::Balanced, TieRule::Fixed][i % 2];
        let p = SolverParams::new(ratio(eps.0, eps.1), 6, 1).unwrap().with_tie_rule(rule);
        let mut log = SplitLog::default();
        find_dominating_pair_observed(&a, &b, &p, &mut log).unwrap();
        for s in log.0.iter().filter(|s| s.balanced) {
            let lhs = (s.a_minus * s.b_plus) as u128 * (eps.1 * eps.1) as u128;
            let rhs = (s.a_len * s.b_len) as u128 * (eps.0 * eps.0) as u128;
            check(lhs >= rhs, || format!("balanced node {s:?} discards too little"))?;
            balanced += 1;
        }
    }
    Ok(format!(
        "1000 splits sound, identity exact on {identity_checked} tie-free equal-size splits \
         (fixed tie rule would miss {fixed_rule_identity_misses}), {balanced} balanced nodes checked"
    ))
}

#[derive(Default)]
struct MeasureLog {
    calls: u64,
    guards: u64,
    violations: u64,
}

impl SearchObserver for MeasureLog {
    fn on_call(&mut self, call: &CallInfo) {
        self.calls += 1;
        self.guards += (call.kind == ilpdom::vecdom::CallKind::Guard) as u64;
        if let Some(parent) = call.parent {
            self.violations += (call.measure >= parent) as u64;
        }
    }
}

fn criterion_4() -> Outcome {
    let constant = |rows: usize, dim: usize, v: i64| {
        VectorSet::from_rows(dim, &vec![vec![v; dim]; rows]).unwrap()
    };
    let mut rng = SplitMix64::new(4);
    let mut fixtures = vec![
        (constant(64, 4, 0), constant(64, 4, 1)),
        (constant(64, 4, 1), constant(64, 4, 0)),
        (constant(64, 4, 3), constant(64, 4, 3)),
        (constant(100, 3, -2), constant(25, 3, 7)),
    ];
    for _ in 0..30 {
        let mut a = random_set(&mut rng, 80, 4, -2, 2);
        let mut b = random_set(&mut rng, 80, 4, -2, 2);
        for (s, v) in [(&mut a, 0i64), (&mut b, rng.range_inclusive(-1, 1))] {
            let rows: Vec<Vec<i64>> = s
                .iter()
                .map(|(_, r)| {
                    let mut r = r.to_vec();
                    r[0] = v;
                    r
                })
                .collect();
            *s = VectorSet::from_rows(4, &rows).unwrap();
        }
        fixtures.push((a, b));
    }
    let (mut calls, mut guards_fixed, mut guards_balanced) = (0, 0, 0);
    for (k, (a, b)) in fixtures.iter().enumerate() {
        for rule in [TieRule::Fixed, TieRule::Balanced] {
            let p = SolverParams::new(ratio(1, 1000), 64, 1).unwrap().with_tie_rule(rule);
            let mut log = MeasureLog::default();
            let (got, _) = find_dominating_pair_observed(a, b, &p, &mut log).unwrap();
            check(log.violations == 0, || format!("fixture {k} {rule:?}: measure did not decrease"))?;
            check(got.is_some() == brute_force_pair(a, b).unwrap().is_some(), || {
                format!("fixture {k} {rule:?}: wrong verdict")
            })?;
            calls += log.calls;
            match rule {
                TieRule::Fixed => guards_fixed += log.guards,
                TieRule::Balanced => guards_balanced += log.guards,
            }
        }
    }
    check(guards_fixed > 0, || "fixtures never triggered the guard".into())?;
    Ok(format!(
        "{calls} calls, measure strictly decreasing; guard fired {guards_fixed}x under the fixed \
         tie rule, {guards_balanced}x under the balanced rule"
    ))
}

fn criterion_5() -> Outcome {
    let pow2 = |k: usize| Ratio::new(BigUint::from(1u32), BigUint::from(1u32) << k);
    let p = default_params(Ratio::from_integer(4), 1 << 16);
    check(p.epsilon == pow2(30) && p.t_initial == 1, || format!("c=4, N=2^16: {p:?}"))?;
    let p = default_params(Ratio::from_integer(8), 1 << 90);
    check(p.epsilon == pow2(45) && p.t_initial == 2, || format!("c=8, N=2^90: {p:?}"))?;
    let p = default_params(Ratio::from_integer(2), 1024);
    check(p.epsilon == pow2(30) && p.t_initial == 1, || format!("c=2, N=1024: {p:?}"))?;
    Ok("eps = 2^-30, t = 1 (c=4, N=2^16); eps = 2^-45, t = 2 (c=8, N=2^90)".into())
}

fn criterion_6() -> Outcome {
    for n in [4usize, 8, 12] {
        for c in [1usize, 2, 4] {
            let (inst, dom) = generate(&GenSpec::new(n, c * n, n as u64)).unwrap();
            let split = split_variables(&inst, &dom).unwrap();
            let a = enumerate_left::<i64>(&inst, &dom, &split, 1 << 20).unwrap();
            let b = enumerate_right::<i64>(&inst, &dom, &split, 1 << 20).unwrap();
            let side = 1usize << (n / 2);
            let log_side = n / 2;
            check(a.len() == side && b.len() == side, || format!("n={n}: sides {} {}", a.len(), b.len()))?;
            check(a.dim() == c * n && a.dim() == 2 * c * log_side, || {
                format!("n={n}, c={c}: d={}", a.dim())
            })?;
        }
    }
    Ok("N = 2^(n/2) and d = m = 2c log2 N for n in {4,8,12}, c in {1,2,4}".into())
}

fn every_assignment(dom: &DomainSpec) -> Vec<Assignment> {
    let mut out = vec![Vec::new()];
    for values in dom.all() {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                values.iter().map(move |&v| {
                    let mut x = p.clone();
                    x.push(v);
                    x
                })
            })
            .collect();
    }
    out.into_iter().map(Assignment).collect()
}

fn criterion_7() -> Outcome {
    let mut rng = SplitMix64::new(7);
    let mut optimal = 0;
    for i in 0..300u64 {
        let n = 1 + (i % 14) as usize;
        let m = 1 + rng.below(2 * n as u128) as usize;
        let spec = GenSpec::new(n, m, 7000 + i);
        let spec = if i % 3 == 2 { spec } else { spec.planted() };
        let (inst, dom) = generate(&spec).unwrap();
        let w: Vec<i64> = (0..n).map(|_| rng.range_inclusive(-8, 8)).collect();
        let want = every_assignment(&dom)
            .iter()
            .filter(|x| evaluate(&inst, &dom, x).unwrap())
            .map(|x| w.iter().zip(x.values()).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>())
            .max();
        let strategy = if i % 2 == 0 { Strategy::Mitm } else { Strategy::Auto };
        let (got, _) = optimize(&inst, &dom, &w, &SolveOptions::with_strategy(strategy)).unwrap();
        match (want, got) {
            (None, OptimizeOutcome::Infeasible) => {}
            (Some(best), OptimizeOutcome::Optimal { value, assignment }) => {
                check(value == best, || format!("instance {i}: {value} vs {best}"))?;
                check(evaluate(&inst, &dom, &assignment).unwrap(), || {
                    format!("instance {i}: witness infeasible")
                })?;
                let achieved: i128 = w
                    .iter()
                    .zip(assignment.values())
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                check(achieved == value, || format!("instance {i}: witness scores {achieved}"))?;
                optimal += 1;
            }
            (want, got) => return Err(format!("instance {i}: expected {want:?}, got {got:?}")),
        }
    }
    Ok(format!("300 instances agree ({optimal} with an optimum)"))
}

fn criterion_8() -> Outcome {
    let practical = SolveOptions {
        params: ParamSpec::practical(),
        ..mitm_options()
    };
    let mut slowest = Duration::ZERO;
    let mut times = Vec::new();
    for seed in 1..=3u64 {
        let (inst, dom) = generate(&GenSpec::new(40, 160, seed).planted()).unwrap();
        let started = Instant::now();
        let out = solve_feasibility(&inst, &dom, &practical).unwrap();
        let elapsed = started.elapsed();
        let x = out.verdict.witness().ok_or(format!("seed {seed}: no witness"))?;
        check(evaluate(&inst, &dom, x).unwrap(), || format!("seed {seed}: witness fails"))?;
        check(elapsed < Duration::from_secs(60), || format!("seed {seed}: {elapsed:?}"))?;
        times.push(format!("{:.1}s", elapsed.as_secs_f64()));
        slowest = slowest.max(elapsed);
    }

    let (inst, dom) = generate(&GenSpec::new(28, 160, 28)).unwrap();
    let started = Instant::now();
    let (_, examined) = brute_force_feasibility_counted(&inst, &dom, 1 << 28).unwrap();
    let rate = examined as f64 / started.elapsed().as_secs_f64();
    let full = (1u64 << 40) as f64 / rate;
    let factor = full / slowest.as_secs_f64();
    check(factor >= 10.0, || format!("extrapolated factor only {factor:.1}"))?;
    Ok(format!(
        "n=40 m=160 planted seeds 1-3 solved in {}; brute force {:.2e} assignments/s at n=28 \
         puts 2^40 at {:.0}s, {factor:.0}x the slowest solve",
        times.join(", "),
        rate,
        full
    ))
}

const GOLDEN_GENERATED: &str = "{\"version\":1,\"num_vars\":3,\"constraints\":[{\"coeffs\":[5,2,-2],\"rhs\":-22},{\"coeffs\":[-3,4,8],\"rhs\":3}]}\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ilpdom"))
}

fn criterion_9(dir: &Path) -> Outcome {
    let mut files = Vec::new();
    for run in 0..2 {
        let out = dir.join(format!("gen{run}.json"));
        let status = bin()
            .args(["generate", "--vars", "24", "--constraints", "96", "--seed", "99", "--planted", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        check(status.code() == Some(0), || format!("generate exited {status}"))?;
        files.push(std::fs::read(&out).unwrap());
    }
    check(files[0] == files[1], || "two runs differ".into())?;

    let (inst, dom) = generate(&GenSpec::new(3, 2, 42)).unwrap();
    check(serialize(&inst, &dom) == GOLDEN_GENERATED.as_bytes(), || {
        "seed 42 document differs from the reference implementation".into()
    })?;

    let mut rng = SplitMix64::new(9);
    for i in 0..100 {
        let n = 1 + rng.below(8) as usize;
        let m = rng.below(6) as usize;
        let boolean = rng.below(2) == 0;
        let domains: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                if boolean {
                    vec![0, 1]
                } else {
                    let set: std::collections::BTreeSet<i64> =
                        (0..1 + rng.below(3)).map(|_| rng.range_inclusive(-50, 50)).collect();
                    set.into_iter().collect()
                }
            })
            .collect();
        let constraints = (0..m)
            .map(|_| Constraint {
                coeffs: (0..n).map(|_| rng.range_inclusive(-1 << 40, 1 << 40)).collect(),
                rhs: rng.range_inclusive(i64::MIN, i64::MAX),
            })
            .collect();
        let inst = IlpInstance::new(n, constraints).unwrap();
        let dom = DomainSpec::new(domains).unwrap();
        let bytes = serialize(&inst, &dom);
        let (back, back_dom) = parse(&bytes).unwrap();
        check(back == inst && back_dom == dom, || format!("instance {i} changed"))?;
        check(serialize(&back, &back_dom) == bytes, || format!("instance {i} not canonical"))?;
    }
    Ok("byte-identical across runs and against the reference document; 100 round trips".into())
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn criterion_10(dir: &Path) -> Outcome {
    for (name, code) in [
        ("feasible.json", 0),
        ("infeasible.json", 1),
        ("ragged.json", 2),
        ("overflow.json", 3),
    ] {
        let out = bin().arg("solve").arg(fixture(name)).output().unwrap();
        check(out.status.code() == Some(code), || {
            format!("{name}: exit {:?}, expected {code}", out.status.code())
        })?;
    }

    let run_bench = |name: &str, mode: &str, trials: &str| -> Result<String, String> {
        let csv = dir.join(name);
        let out = bin()
            .args(["bench", "--vars", "8..17", "--ratio", "1", "--trials", trials, "--seed", "10"])
            .args(["--mode", mode, "--csv"])
            .arg(&csv)
            .output()
            .unwrap();
        check(out.status.code() == Some(0), || {
            format!("bench exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        Ok(std::fs::read_to_string(&csv).unwrap())
    };
    let header = "n,m,c,seed,mode,strategy,verdict,nodes_visited,balanced_nodes,unbalanced_nodes,guard_activations,brute_leaf_pairs_examined,pair_exponent,elapsed_millis\n";
    let mut summary = Vec::new();
    for (name, mode, trials, expect_rows) in [
        ("planted.csv", "planted", "5", 100),
        ("uniform.csv", "uniform", "2", 40),
    ] {
        let text = run_bench(name, mode, trials)?;
        check(text.starts_with(header), || format!("{name}: header bytes differ"))?;
        let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
        check(rows.len() == expect_rows, || format!("{name}: {} rows", rows.len()))?;
        let mut verdicts: std::collections::HashMap<(&str, &str), HashSet<&str>> = Default::default();
        for r in &rows {
            let e: f64 = r[12].parse().unwrap();
            check((0.0..=1.0).contains(&e), || format!("pair_exponent {e}"))?;
            verdicts.entry((r[0], r[3])).or_default().insert(r[6]);
        }
        check(verdicts.len() * 2 == rows.len() && verdicts.values().all(|v| v.len() == 1), || {
            format!("{name}: strategies disagree")
        })?;
        if mode == "planted" {
            check(rows.iter().all(|r| r[6] == "feasible"), || "planted row not feasible".into())?;
        }
        let feasible = rows.iter().filter(|r| r[6] == "feasible").count();
        summary.push(format!("{mode} {} rows ({feasible} feasible)", rows.len()));
    }
    Ok(format!(
        "exit codes 0/1/2/3 on fixtures; header exact; strategies agree on {}",
        summary.join(", ")
    ))
}

#[test]
fn acceptance_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let criteria: Vec<Criterion> = vec![
        ("ILP oracle equivalence", Box::new(criterion_1)),
        ("vector domination oracle equivalence", Box::new(criterion_2)),
        ("split invariants", Box::new(criterion_3)),
        ("termination measure", Box::new(criterion_4)),
        ("parameter formulas", Box::new(criterion_5)),
        ("reduction dimension identity", Box::new(criterion_6)),
        ("optimization", Box::new(criterion_7)),
        ("performance smoke", Box::new(criterion_8)),
        ("toolkit determinism", Box::new(|| criterion_9(dir.path()))),
        ("CLI contract", Box::new(|| criterion_10(dir.path()))),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
