use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Pow, Zero};

use crate::error::{contract, Result};

/// How vectors whose first coordinate equals the pivot are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Distribute ties so the weight below the split is as close as possible
    /// to half the total, never sending `A`-ties down while sending
    /// `B`-ties up. Keeps `|A-|/|A| = |B+|/|B|` exact whenever integer
    /// counts allow it (always when `|A| = |B|`).
    #[default]
    Balanced,
    /// `A`-ties always go to `A+`, `B`-ties always to `B-`.
    Fixed,
}

/// Knobs of the recursive domination search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverParams {
    /// Balance threshold: a split with `eps' >= epsilon` is balanced.
    pub epsilon: Ratio<BigUint>,
    /// Number of balanced splits allowed on any root-to-leaf path.
    pub t_initial: u32,
    /// Subproblems with at most this many pairs are scanned exhaustively.
    pub brute_pair_cutoff: u64,
    pub tie_rule: TieRule,
}

pub const DEFAULT_BRUTE_PAIR_CUTOFF: u64 = 4096;

impl SolverParams {
    pub fn new(epsilon: Ratio<BigUint>, t_initial: u32, brute_pair_cutoff: u64) -> Result<Self> {
        if epsilon.is_zero() || epsilon >= Ratio::one() {
            return contract(format!("epsilon must lie in (0, 1), got {epsilon}"));
        }
        if brute_pair_cutoff == 0 {
            return contract("brute_pair_cutoff must be at least 1");
        }
        Ok(SolverParams {
            epsilon,
            t_initial,
            brute_pair_cutoff,
            tie_rule: TieRule::Balanced,
        })
    }

    pub fn with_tie_rule(mut self, rule: TieRule) -> Self {
        self.tie_rule = rule;
        self
    }
}

/// Parameters from the ratio `c` of constraints to variables and the set
/// size `n`.
///
/// With `c' = max(c, 4)` and base-2 logarithms: `epsilon = c'^-15` exactly,
/// and `t = max(1, floor(log n / (15 log c')))`, computed exactly as the
/// largest `k` with `c'^(15k) <= n`.
pub fn default_params(c: Ratio<u64>, n: u128) -> SolverParams {
    let four = Ratio::from_integer(4u64);
    let c = if c < four { four } else { c };
    let p = BigUint::from(*c.numer());
    let q = BigUint::from(*c.denom());

    let epsilon = Ratio::new(Pow::pow(&q, 15u32), Pow::pow(&p, 15u32));

    let n = BigUint::from(n.max(1));
    let mut k = 0u32;
    loop {
        let e = 15 * (k + 1);
        if Pow::pow(&p, e) <= &n * Pow::pow(&q, e) {
            k += 1;
        } else {
            break;
        }
    }

    SolverParams {
        epsilon,
        t_initial: k.max(1),
        brute_pair_cutoff: DEFAULT_BRUTE_PAIR_CUTOFF,
        tie_rule: TieRule::Balanced,
    }
}

/// Desk-scale preset: `epsilon = 1/16`, `t = max(1, floor(log2 n / 4))`.
///
/// The formula-derived epsilon is so small that nearly every split counts as
/// balanced, which spends the whole budget `t` within a level or two.
pub fn practical_params(n: u128) -> SolverParams {
    let log2 = 127 - n.max(1).leading_zeros();
    SolverParams {
        epsilon: Ratio::new(BigUint::one(), BigUint::from(16u32)),
        t_initial: (log2 / 4).max(1),
        brute_pair_cutoff: DEFAULT_BRUTE_PAIR_CUTOFF,
        tie_rule: TieRule::Balanced,
    }
}
