use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;

use super::split::{split_indices, IndexSplit};
use super::{scan_pairs, PairWitness, SolverParams, Stats, VectorSet};
use crate::error::{contract, Result};
use crate::scalar::Coord;

/// Lexicographic progress measure of a call: total set size, then the
/// number of coordinates still to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub size: usize,
    pub dim: usize,
}

/// Which branch produced a call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallKind {
    Root,
    /// `(A+, B+)`, same coordinate.
    Upper,
    /// `(A-, B-)`, same coordinate.
    Lower,
    /// `(A+, B-)`, first coordinate dropped.
    Cross,
    /// Degenerate split: pivot-valued vectors removed from one side.
    Guard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CallInfo {
    pub kind: CallKind,
    pub depth: u64,
    pub measure: Measure,
    pub parent: Option<Measure>,
    pub budget: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitInfo {
    pub a_len: usize,
    pub b_len: usize,
    pub a_minus: usize,
    pub a_plus: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub eps_prime: Ratio<u64>,
    pub balanced: bool,
}

/// Hooks into the recursion, for instrumentation and tests.
pub trait SearchObserver {
    fn on_call(&mut self, _call: &CallInfo) {}
    fn on_split(&mut self, _split: &SplitInfo) {}
}

pub struct NoopObserver;

impl SearchObserver for NoopObserver {}

/// `ratio >= epsilon` tested as `part * den >= num * whole`.
enum Threshold {
    Small(u128, u128),
    Big(BigUint, BigUint),
}

impl Threshold {
    fn new(eps: &Ratio<BigUint>) -> Self {
        match (u64::try_from(eps.numer()), u64::try_from(eps.denom())) {
            (Ok(n), Ok(d)) => Threshold::Small(n as u128, d as u128),
            _ => Threshold::Big(eps.numer().clone(), eps.denom().clone()),
        }
    }

    fn reached(&self, part: usize, whole: usize) -> bool {
        match self {
            Threshold::Small(n, d) => part as u128 * d >= n * whole as u128,
            Threshold::Big(n, d) => BigUint::from(part) * d >= n * BigUint::from(whole),
        }
    }
}

struct Search<'a, T, O> {
    a: &'a VectorSet<T>,
    b: &'a VectorSet<T>,
    params: &'a SolverParams,
    threshold: Threshold,
    stats: Stats,
    observer: &'a mut O,
}

impl<T: Coord, O: SearchObserver> Search<'_, T, O> {
    #[allow(clippy::too_many_arguments)]
    fn run(
        &mut self,
        a_idx: &[u32],
        b_idx: &[u32],
        offset: usize,
        t: u32,
        depth: u64,
        kind: CallKind,
        parent: Option<Measure>,
    ) -> Option<(u32, u32)> {
        let dim = self.a.dim() - offset;
        let measure = Measure {
            size: a_idx.len() + b_idx.len(),
            dim,
        };
        self.stats.nodes_visited += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        self.observer.on_call(&CallInfo {
            kind,
            depth,
            measure,
            parent,
            budget: t,
        });

        if a_idx.is_empty() || b_idx.is_empty() {
            return None;
        }
        // every coordinate was settled on the way down
        if dim == 0 {
            return Some((a_idx[0], b_idx[0]));
        }
        let pairs = a_idx.len() as u128 * b_idx.len() as u128;
        if t == 0 || pairs <= self.params.brute_pair_cutoff as u128 {
            return scan_pairs(
                self.a,
                self.b,
                a_idx,
                b_idx,
                offset,
                &mut self.stats.brute_leaf_pairs_examined,
            );
        }

        let split = split_indices(self.a, self.b, a_idx, b_idx, offset, self.params.tie_rule);
        let balanced = self.threshold.reached(split.a_minus.len(), a_idx.len())
            && self.threshold.reached(split.b_plus.len(), b_idx.len());
        if balanced {
            self.stats.balanced_nodes += 1;
        } else {
            self.stats.unbalanced_nodes += 1;
        }
        self.observer.on_split(&SplitInfo {
            a_len: a_idx.len(),
            b_len: b_idx.len(),
            a_minus: split.a_minus.len(),
            a_plus: split.a_plus.len(),
            b_plus: split.b_plus.len(),
            b_minus: split.b_minus.len(),
            eps_prime: split.eps_prime(),
            balanced,
        });

        let depth = depth + 1;
        let here = Some(measure);

        if let Some(reduced) = self.degenerate(&split, a_idx, b_idx, offset) {
            self.stats.guard_activations += 1;
            let (ra, rb) = reduced;
            return self.run(&ra, &rb, offset, t, depth, CallKind::Guard, here);
        }

        let t = if balanced { t - 1 } else { t };
        let IndexSplit {
            a_plus,
            a_minus,
            b_plus,
            b_minus,
            ..
        } = split;
        if !a_plus.is_empty() && !b_plus.is_empty() {
            if let Some(w) = self.run(&a_plus, &b_plus, offset, t, depth, CallKind::Upper, here) {
                return Some(w);
            }
        }
        drop(b_plus);
        if !a_minus.is_empty() && !b_minus.is_empty() {
            if let Some(w) = self.run(&a_minus, &b_minus, offset, t, depth, CallKind::Lower, here) {
                return Some(w);
            }
        }
        drop(a_minus);
        if !a_plus.is_empty() && !b_minus.is_empty() {
            return self.run(&a_plus, &b_minus, offset + 1, t, depth, CallKind::Cross, here);
        }
        None
    }

    /// When one same-coordinate branch would repeat this exact problem,
    /// returns the problem with the pivot-valued vectors removed from the
    /// side where they cannot take part in any dominating pair.
    fn degenerate(
        &self,
        split: &IndexSplit<T>,
        a_idx: &[u32],
        b_idx: &[u32],
        offset: usize,
    ) -> Option<(Vec<u32>, Vec<u32>)> {
        let pivot = split.pivot;
        if split.a_minus.is_empty() && split.b_minus.is_empty() {
            // all of B lies above the pivot: A vectors at the pivot are useless
            debug_assert!(b_idx.iter().all(|&i| self.b.row(i as usize)[offset] > pivot));
            let a: Vec<u32> = a_idx
                .iter()
                .copied()
                .filter(|&i| self.a.row(i as usize)[offset] != pivot)
                .collect();
            Some((a, b_idx.to_vec()))
        } else if split.a_plus.is_empty() && split.b_plus.is_empty() {
            // all of A lies below the pivot: B vectors at the pivot are unreachable
            debug_assert!(a_idx.iter().all(|&i| self.a.row(i as usize)[offset] < pivot));
            let b: Vec<u32> = b_idx
                .iter()
                .copied()
                .filter(|&i| self.b.row(i as usize)[offset] != pivot)
                .collect();
            Some((a_idx.to_vec(), b))
        } else {
            None
        }
    }
}

fn check_dims<T: Coord>(a: &VectorSet<T>, b: &VectorSet<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return contract(format!("dimension mismatch: {} vs {}", a.dim(), b.dim()));
    }
    Ok(())
}

fn search_chunks<T: Coord, O: SearchObserver>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    a_chunks: &[&[u32]],
    params: &SolverParams,
    observer: &mut O,
) -> Result<(Option<PairWitness>, Stats)> {
    let started = Instant::now();
    let b_idx = b.all_indices()?;
    let mut search = Search {
        a,
        b,
        params,
        threshold: Threshold::new(&params.epsilon),
        stats: Stats::default(),
        observer,
    };
    let mut found = None;
    for chunk in a_chunks {
        if let Some((i, j)) = search.run(chunk, &b_idx, 0, params.t_initial, 0, CallKind::Root, None) {
            found = Some(PairWitness {
                a_tag: a.tag(i as usize),
                b_tag: b.tag(j as usize),
            });
            break;
        }
    }
    let mut stats = search.stats;
    stats.elapsed = started.elapsed();
    Ok((found, stats))
}

/// Recursive weighted-median search for `u` in `a`, `v` in `b` with `u >= v`.
///
/// Sub-cases run in a fixed order (upper pair, lower pair, crossing pair),
/// so the returned witness is deterministic for a given input.
pub fn find_dominating_pair<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    params: &SolverParams,
) -> Result<(Option<PairWitness>, Stats)> {
    find_dominating_pair_observed(a, b, params, &mut NoopObserver)
}

pub fn find_dominating_pair_observed<T: Coord, O: SearchObserver>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    params: &SolverParams,
    observer: &mut O,
) -> Result<(Option<PairWitness>, Stats)> {
    check_dims(a, b)?;
    let a_idx = a.all_indices()?;
    search_chunks(a, b, &[&a_idx], params, observer)
}

/// Search for `|A| >= |B|`: when `A` is more than twice as large it is cut,
/// in input order, into chunks of `|B|` vectors searched one at a time.
pub fn find_pair_unequal<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    params: &SolverParams,
) -> Result<(Option<PairWitness>, Stats)> {
    check_dims(a, b)?;
    if a.is_empty() || b.is_empty() {
        return contract("find_pair_unequal requires non-empty sets");
    }
    if a.len() < b.len() {
        return contract(format!(
            "find_pair_unequal requires |A| >= |B|, got {} < {}",
            a.len(),
            b.len()
        ));
    }
    let a_idx = a.all_indices()?;
    if a.len() <= 2 * b.len() {
        return search_chunks(a, b, &[&a_idx], params, &mut NoopObserver);
    }
    let chunks: Vec<&[u32]> = a_idx.chunks(b.len()).collect();
    search_chunks(a, b, &chunks, params, &mut NoopObserver)
}

/// Any sizes. When `B` is the larger side, both sets are negated and the
/// roles swapped (`-v >= -u` iff `u >= v`), then the witness is mapped back.
pub fn find_pair_any<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    params: &SolverParams,
) -> Result<(Option<PairWitness>, Stats)> {
    check_dims(a, b)?;
    if a.is_empty() || b.is_empty() {
        return Ok((None, Stats::default()));
    }
    if a.len() >= b.len() {
        return find_pair_unequal(a, b, params);
    }
    let has_min = |s: &VectorSet<T>| s.iter().any(|(_, r)| r.contains(&T::min_value()));
    if has_min(a) || has_min(b) {
        return contract("cannot negate a coordinate equal to the type minimum");
    }
    let (w, stats) = find_pair_unequal(&b.negated(), &a.negated(), params)?;
    Ok((
        w.map(|w| PairWitness {
            a_tag: w.b_tag,
            b_tag: w.a_tag,
        }),
        stats,
    ))
}
