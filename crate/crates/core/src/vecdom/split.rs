use std::cmp::Ordering;

use num_rational::Ratio;

use super::median;
use super::{TieRule, VectorSet};
use crate::error::{contract, Result};
use crate::scalar::Coord;

/// The four-way partition of `A` and `B` around the weighted median of
/// their first coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome<T> {
    pub pivot: T,
    pub a_plus: VectorSet<T>,
    pub a_minus: VectorSet<T>,
    pub b_plus: VectorSet<T>,
    pub b_minus: VectorSet<T>,
    /// `min(|A-|/|A|, |B+|/|B|)`.
    pub eps_prime: Ratio<u64>,
}

/// Splits with the default [`TieRule::Balanced`].
pub fn split_by_first_coord<T: Coord>(a: &VectorSet<T>, b: &VectorSet<T>) -> Result<SplitOutcome<T>> {
    split_by_first_coord_with(a, b, TieRule::Balanced)
}

pub fn split_by_first_coord_with<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    rule: TieRule,
) -> Result<SplitOutcome<T>> {
    if a.is_empty() || b.is_empty() {
        return contract("split requires non-empty sets");
    }
    if a.dim() != b.dim() {
        return contract(format!("dimension mismatch: {} vs {}", a.dim(), b.dim()));
    }
    if a.dim() == 0 {
        return contract("split requires at least one coordinate");
    }
    let s = split_indices(a, b, &a.all_indices()?, &b.all_indices()?, 0, rule);
    Ok(SplitOutcome {
        pivot: s.pivot,
        eps_prime: s.eps_prime(),
        a_plus: a.subset(&s.a_plus),
        a_minus: a.subset(&s.a_minus),
        b_plus: b.subset(&s.b_plus),
        b_minus: b.subset(&s.b_minus),
    })
}

pub(crate) struct IndexSplit<T> {
    pub pivot: T,
    pub a_plus: Vec<u32>,
    pub a_minus: Vec<u32>,
    pub b_plus: Vec<u32>,
    pub b_minus: Vec<u32>,
}

impl<T> IndexSplit<T> {
    pub fn a_len(&self) -> usize {
        self.a_plus.len() + self.a_minus.len()
    }

    pub fn b_len(&self) -> usize {
        self.b_plus.len() + self.b_minus.len()
    }

    pub fn eps_prime(&self) -> Ratio<u64> {
        let ra = Ratio::new(self.a_minus.len() as u64, self.a_len() as u64);
        let rb = Ratio::new(self.b_plus.len() as u64, self.b_len() as u64);
        ra.min(rb)
    }
}

/// Splits the given rows on coordinate `offset`. Both index lists must be
/// non-empty and the coordinate must exist.
pub(crate) fn split_indices<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    a_idx: &[u32],
    b_idx: &[u32],
    offset: usize,
    rule: TieRule,
) -> IndexSplit<T> {
    let key_a = |i: u32| a.row(i as usize)[offset];
    let key_b = |i: u32| b.row(i as usize)[offset];

    // A-values weigh |B|, B-values weigh |A|, so both sets carry equal total weight.
    let (wa, wb) = (b_idx.len() as u64, a_idx.len() as u64);
    let mut items: Vec<(T, u64)> = Vec::with_capacity(a_idx.len() + b_idx.len());
    items.extend(a_idx.iter().map(|&i| (key_a(i), wa)));
    items.extend(b_idx.iter().map(|&i| (key_b(i), wb)));
    let pivot = median::select(&mut items);
    drop(items);

    let count = |idx: &[u32], key: &dyn Fn(u32) -> T| {
        let (mut lt, mut eq) = (0u128, 0u128);
        for &i in idx {
            match key(i).cmp(&pivot) {
                Ordering::Less => lt += 1,
                Ordering::Equal => eq += 1,
                Ordering::Greater => {}
            }
        }
        [lt, eq]
    };

    let (down, up) = match rule {
        TieRule::Fixed => (0, 0),
        TieRule::Balanced => balance_ties(
            a_idx.len() as u128,
            b_idx.len() as u128,
            count(a_idx, &key_a),
            count(b_idx, &key_b),
        ),
    };

    // the first `down` A-ties join A-, the first `up` B-ties join B+;
    // every part keeps input order
    let (mut a_plus, mut a_minus) = (Vec::new(), Vec::new());
    let mut ties = 0;
    for &i in a_idx {
        let below = match key_a(i).cmp(&pivot) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                ties += 1;
                ties <= down
            }
        };
        if below {
            a_minus.push(i);
        } else {
            a_plus.push(i);
        }
    }
    let (mut b_plus, mut b_minus) = (Vec::new(), Vec::new());
    let mut ties = 0;
    for &i in b_idx {
        let above = match key_b(i).cmp(&pivot) {
            Ordering::Less => false,
            Ordering::Greater => true,
            Ordering::Equal => {
                ties += 1;
                ties <= up
            }
        };
        if above {
            b_plus.push(i);
        } else {
            b_minus.push(i);
        }
    }

    IndexSplit {
        pivot,
        a_plus,
        a_minus,
        b_plus,
        b_minus,
    }
}

/// Chooses how many `A`-ties move down (`x`) or `B`-ties move up (`y`),
/// never both, so that the weight below the split,
/// `|B|(a_lt + x) + |A|(b_lt + b_eq - y)`, is closest to `|A||B|`. Ties
/// between candidates prefer the smaller move.
fn balance_ties(na: u128, nb: u128, [a_lt, a_eq]: [u128; 2], [b_lt, b_eq]: [u128; 2]) -> (usize, usize) {
    let target = na * nb;
    let base = nb * a_lt + na * (b_lt + b_eq);
    if base >= target {
        let y = nearest_step(base - target, na, b_eq);
        (0, y as usize)
    } else {
        let x = nearest_step(target - base, nb, a_eq);
        (x as usize, 0)
    }
}

/// The `k` in `0..=max` minimizing `|gap - k*step|`, smallest on ties.
fn nearest_step(gap: u128, step: u128, max: u128) -> u128 {
    let lo = (gap / step).min(max);
    let hi = (lo + 1).min(max);
    let dist = |k: u128| (gap as i128 - (k * step) as i128).unsigned_abs();
    if dist(hi) < dist(lo) {
        hi
    } else {
        lo
    }
}
