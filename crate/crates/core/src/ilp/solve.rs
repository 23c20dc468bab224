use num_bigint::BigUint;
use num_rational::Ratio;

use super::model::{
    coordinate_bound, evaluate, validate_no_overflow, Assignment, Constraint, DomainSpec,
    IlpInstance, Verdict,
};
use super::reduction::{enumerate_left, enumerate_right, merge_tags, split_variables, VariableSplit};
use crate::error::{contract, Error, Result};
use crate::scalar::{Coord, CoordWidth};
use crate::vecdom::{default_params, find_pair_any, practical_params, SolverParams, Stats, TieRule};

/// Refuse half enumerations above this many vectors.
pub const DEFAULT_MAX_SIDE_VECTORS: u64 = 1 << 26;
/// Refuse exhaustive scans above this many assignments.
pub const DEFAULT_MAX_BRUTE_ASSIGNMENTS: u64 = 1 << 40;
/// `Strategy::Auto` enumerates directly up to this many variables.
pub const AUTO_BRUTE_MAX_VARS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Mitm,
    Brute,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Mitm => "mitm",
            Strategy::Brute => "brute",
        }
    }
}

/// Where solver parameters come from before overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preset {
    /// [`default_params`] from `c = m/n` and the larger half size.
    #[default]
    Formula,
    /// [`practical_params`].
    Practical,
}

/// Parameters are resolved once the half sizes are known; any field set
/// here overrides the preset.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamSpec {
    pub preset: Preset,
    pub epsilon: Option<Ratio<BigUint>>,
    pub t_initial: Option<u32>,
    pub brute_pair_cutoff: Option<u64>,
    pub tie_rule: TieRule,
}

impl ParamSpec {
    pub fn explicit(params: SolverParams) -> Self {
        ParamSpec {
            preset: Preset::Formula,
            tie_rule: params.tie_rule,
            epsilon: Some(params.epsilon),
            t_initial: Some(params.t_initial),
            brute_pair_cutoff: Some(params.brute_pair_cutoff),
        }
    }

    pub fn practical() -> Self {
        ParamSpec {
            preset: Preset::Practical,
            ..ParamSpec::default()
        }
    }

    pub fn resolve(&self, c: Ratio<u64>, n: u128) -> Result<SolverParams> {
        let base = match self.preset {
            Preset::Formula => default_params(c, n),
            Preset::Practical => practical_params(n),
        };
        SolverParams::new(
            self.epsilon.clone().unwrap_or(base.epsilon),
            self.t_initial.unwrap_or(base.t_initial),
            self.brute_pair_cutoff.unwrap_or(base.brute_pair_cutoff),
        )
        .map(|p| p.with_tie_rule(self.tie_rule))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub strategy: Strategy,
    pub params: ParamSpec,
    pub max_side_vectors: u64,
    pub max_brute_assignments: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::Auto,
            params: ParamSpec::default(),
            max_side_vectors: DEFAULT_MAX_SIDE_VECTORS,
            max_brute_assignments: DEFAULT_MAX_BRUTE_ASSIGNMENTS,
        }
    }
}

impl SolveOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        SolveOptions {
            strategy,
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: Stats,
    /// The strategy actually run (`Auto` resolved).
    pub strategy: Strategy,
    /// Number of half assignments on each side of the variable split.
    pub left_size: u64,
    pub right_size: u64,
    pub width: CoordWidth,
    /// Resolved parameters, for the meet-in-the-middle path.
    pub params: Option<SolverParams>,
}

impl SolveOutcome {
    pub fn larger_side(&self) -> u64 {
        self.left_size.max(self.right_size)
    }
}

fn saturating_u64(v: &BigUint) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// Decides feasibility over the given domains.
///
/// `Mitm` enumerates both halves of the variable split and searches for a
/// dominating pair; `Brute` scans every assignment; `Auto` picks `Brute` for
/// at most twelve variables.
pub fn solve_feasibility(
    instance: &IlpInstance,
    domains: &DomainSpec,
    options: &SolveOptions,
) -> Result<SolveOutcome> {
    domains.check_matches(instance)?;
    validate_no_overflow(instance, domains)?;
    let split = split_variables(instance, domains)?;
    let left_size = saturating_u64(&domains.product(split.s1.iter().copied()));
    let right_size = saturating_u64(&domains.product(split.s2.iter().copied()));
    let width = CoordWidth::for_bound(coordinate_bound(instance, domains));
    let strategy = match options.strategy {
        Strategy::Auto if instance.num_vars() <= AUTO_BRUTE_MAX_VARS => Strategy::Brute,
        Strategy::Auto => Strategy::Mitm,
        s => s,
    };

    let (verdict, stats, params) = match strategy {
        Strategy::Brute => {
            let started = std::time::Instant::now();
            let (verdict, examined) =
                brute_force_feasibility_counted(instance, domains, options.max_brute_assignments)?;
            let stats = Stats {
                brute_leaf_pairs_examined: examined,
                elapsed: started.elapsed(),
                ..Stats::default()
            };
            (verdict, stats, None)
        }
        _ => {
            let (v, s, p) = match width {
                CoordWidth::W16 => mitm::<i16>(instance, domains, &split, options)?,
                CoordWidth::W32 => mitm::<i32>(instance, domains, &split, options)?,
                CoordWidth::W64 => mitm::<i64>(instance, domains, &split, options)?,
                CoordWidth::W128 => mitm::<i128>(instance, domains, &split, options)?,
            };
            (v, s, Some(p))
        }
    };

    Ok(SolveOutcome {
        verdict,
        stats,
        strategy,
        left_size,
        right_size,
        width,
        params,
    })
}

fn mitm<T: Coord>(
    instance: &IlpInstance,
    domains: &DomainSpec,
    split: &VariableSplit,
    options: &SolveOptions,
) -> Result<(Verdict, Stats, SolverParams)> {
    let started = std::time::Instant::now();
    let a = enumerate_left::<T>(instance, domains, split, options.max_side_vectors)?;
    let b = enumerate_right::<T>(instance, domains, split, options.max_side_vectors)?;
    let c = Ratio::new(instance.num_constraints() as u64, instance.num_vars() as u64);
    let n = a.len().max(b.len()) as u128;
    let params = options.params.resolve(c, n)?;
    let (witness, mut stats) = find_pair_any(&a, &b, &params)?;
    drop((a, b));
    stats.elapsed = started.elapsed();
    let verdict = match witness {
        Some(w) => {
            let x = merge_tags(split, domains, w.a_tag, w.b_tag)?;
            debug_assert!(evaluate(instance, domains, &x)?);
            Verdict::Feasible(x)
        }
        None => Verdict::Infeasible,
    };
    Ok((verdict, stats, params))
}

/// Every assignment in mixed-radix order (variable 0 most significant);
/// the first satisfying one wins.
pub fn brute_force_feasibility(instance: &IlpInstance, domains: &DomainSpec) -> Result<Verdict> {
    brute_force_feasibility_counted(instance, domains, DEFAULT_MAX_BRUTE_ASSIGNMENTS).map(|(v, _)| v)
}

/// As [`brute_force_feasibility`], also returning the number of
/// assignments examined.
pub fn brute_force_feasibility_counted(
    instance: &IlpInstance,
    domains: &DomainSpec,
    max_assignments: u64,
) -> Result<(Verdict, u64)> {
    domains.check_matches(instance)?;
    validate_no_overflow(instance, domains)?;
    let total = domains.product(0..instance.num_vars());
    let total = match u64::try_from(&total) {
        Ok(t) if t <= max_assignments => t,
        _ => {
            return Err(Error::Capacity {
                what: "exhaustive scan",
                requested: total.to_string(),
                budget: max_assignments,
            })
        }
    };
    let (digits, examined) = match CoordWidth::for_bound(coordinate_bound(instance, domains)) {
        CoordWidth::W16 => scan_assignments::<i16>(instance, domains, total),
        CoordWidth::W32 => scan_assignments::<i32>(instance, domains, total),
        CoordWidth::W64 => scan_assignments::<i64>(instance, domains, total),
        CoordWidth::W128 => scan_assignments::<i128>(instance, domains, total),
    };
    let verdict = match digits {
        Some(d) => Verdict::Feasible(Assignment(
            d.iter()
                .enumerate()
                .map(|(i, &k)| domains.values(i)[k])
                .collect(),
        )),
        None => Verdict::Infeasible,
    };
    Ok((verdict, examined))
}

/// Tracks the slack `M x - r` incrementally; an assignment is feasible when
/// no slack is negative.
fn scan_assignments<T: Coord>(
    instance: &IlpInstance,
    domains: &DomainSpec,
    total: u64,
) -> (Option<Vec<usize>>, u64) {
    let n = instance.num_vars();
    let m = instance.num_constraints();
    let narrow = |v: i128| T::from_wide(v).expect("width chosen from the coordinate bound");

    let mut slack: Vec<T> = instance
        .constraints()
        .iter()
        .map(|c| {
            narrow(
                (0..n)
                    .map(|i| c.coeffs[i] as i128 * domains.values(i)[0] as i128)
                    .sum::<i128>()
                    - c.rhs as i128,
            )
        })
        .collect();
    let steps: Vec<Vec<Vec<T>>> = (0..n)
        .map(|i| {
            let d = domains.values(i);
            (0..d.len())
                .map(|k| {
                    let diff = d[(k + 1) % d.len()] as i128 - d[k] as i128;
                    (0..m)
                        .map(|j| narrow(instance.coeff(j, i) as i128 * diff))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut digits = vec![0usize; n];
    for examined in 1..=total {
        // OR of the slacks is negative iff some slack is
        if slack.iter().fold(T::zero(), |acc, &s| acc | s) >= T::zero() {
            return (Some(digits), examined);
        }
        for i in (0..n).rev() {
            let step = &steps[i][digits[i]];
            for (s, d) in slack.iter_mut().zip(step) {
                *s = s.wrapping_add(d);
            }
            digits[i] += 1;
            if digits[i] < steps[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
    (None, total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimizeOutcome {
    Optimal { value: i128, assignment: Assignment },
    Infeasible,
}

fn objective_value(w: &[i64], x: &Assignment) -> i128 {
    w.iter().zip(x.values()).map(|(&a, &b)| a as i128 * b as i128).sum()
}

/// Maximizes `w . x` by binary search on `k` over feasibility of the
/// program extended with `w . x >= k`.
pub fn optimize(
    instance: &IlpInstance,
    domains: &DomainSpec,
    objective: &[i64],
    options: &SolveOptions,
) -> Result<(OptimizeOutcome, Stats)> {
    if objective.len() != instance.num_vars() {
        return contract(format!(
            "objective has {} weights for {} variables",
            objective.len(),
            instance.num_vars()
        ));
    }
    domains.check_matches(instance)?;
    let objective_row = instance.num_constraints();
    let overflow = || Error::OverflowRisk {
        constraint: objective_row,
    };

    let mut upper: i128 = 0;
    for (i, &w) in objective.iter().enumerate() {
        let best = domains
            .values(i)
            .iter()
            .map(|&v| w as i128 * v as i128)
            .max()
            .expect("domains are non-empty");
        upper = upper.checked_add(best).ok_or_else(overflow)?;
    }

    let mut stats = Stats::default();
    let first = solve_feasibility(instance, domains, options)?;
    stats.absorb(&first.stats);
    let mut best = match first.verdict {
        Verdict::Feasible(x) => x,
        Verdict::Infeasible => return Ok((OptimizeOutcome::Infeasible, stats)),
    };
    let mut lo = objective_value(objective, &best);
    let mut hi = upper;
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        let rhs = i64::try_from(mid).map_err(|_| overflow())?;
        let extended = instance.with_constraint(Constraint {
            coeffs: objective.to_vec(),
            rhs,
        })?;
        let step = solve_feasibility(&extended, domains, options)?;
        stats.absorb(&step.stats);
        match step.verdict {
            Verdict::Feasible(x) => {
                lo = objective_value(objective, &x);
                debug_assert!(lo >= mid);
                best = x;
            }
            Verdict::Infeasible => hi = mid - 1,
        }
    }
    Ok((
        OptimizeOutcome::Optimal {
            value: lo,
            assignment: best,
        },
        stats,
    ))
}
