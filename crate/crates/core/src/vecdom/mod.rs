//! Vector domination: find `u` in `A` and `v` in `B` with `u >= v` in every
//! coordinate.

mod median;
mod params;
mod search;
mod split;

use std::collections::HashSet;
use std::time::Duration;

use crate::error::{contract, Result};
use crate::scalar::Coord;

pub use median::weighted_median;
pub use params::{default_params, practical_params, SolverParams, TieRule};
pub use search::{
    find_dominating_pair, find_dominating_pair_observed, find_pair_any, find_pair_unequal,
    CallInfo, CallKind, Measure, NoopObserver, SearchObserver, SplitInfo,
};
pub use split::{split_by_first_coord, split_by_first_coord_with, SplitOutcome};

/// A point together with the identifier of whatever produced it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedVector<T> {
    pub tag: u64,
    pub coords: Vec<T>,
}

impl<T: Coord> TaggedVector<T> {
    pub fn new(tag: u64, coords: Vec<T>) -> Self {
        TaggedVector { tag, coords }
    }
}

/// A set of equal-dimension tagged vectors, stored row-major in one buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSet<T> {
    dim: usize,
    coords: Vec<T>,
    tags: Vec<u64>,
}

impl<T: Coord> VectorSet<T> {
    pub fn new(dim: usize) -> Self {
        VectorSet {
            dim,
            coords: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, len: usize) -> Self {
        VectorSet {
            dim,
            coords: Vec::with_capacity(dim * len),
            tags: Vec::with_capacity(len),
        }
    }

    /// Builds a set, checking coordinate counts and tag uniqueness.
    pub fn from_vectors(dim: usize, vectors: Vec<TaggedVector<T>>) -> Result<Self> {
        let mut set = VectorSet::with_capacity(dim, vectors.len());
        for v in vectors {
            set.push(v.tag, &v.coords)?;
        }
        set.check_unique_tags()?;
        Ok(set)
    }

    /// Convenience for tests and small fixtures: tags are the row positions.
    pub fn from_rows(dim: usize, rows: &[Vec<T>]) -> Result<Self> {
        let mut set = VectorSet::with_capacity(dim, rows.len());
        for (i, r) in rows.iter().enumerate() {
            set.push(i as u64, r)?;
        }
        Ok(set)
    }

    /// Appends a vector. Tags must stay unique; see [`Self::check_unique_tags`].
    pub fn push(&mut self, tag: u64, coords: &[T]) -> Result<()> {
        if coords.len() != self.dim {
            return contract(format!(
                "vector with tag {tag} has {} coordinates, set dimension is {}",
                coords.len(),
                self.dim
            ));
        }
        self.coords.extend_from_slice(coords);
        self.tags.push(tag);
        Ok(())
    }

    pub fn check_unique_tags(&self) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.tags.len());
        for &t in &self.tags {
            if !seen.insert(t) {
                return contract(format!("duplicate tag {t}"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn tag(&self, i: usize) -> u64 {
        self.tags[i]
    }

    pub fn tags(&self) -> &[u64] {
        &self.tags
    }

    pub fn get(&self, i: usize) -> TaggedVector<T> {
        TaggedVector::new(self.tags[i], self.row(i).to_vec())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &[T])> + '_ {
        self.tags.iter().enumerate().map(move |(i, &t)| (t, self.row(i)))
    }

    /// Pointwise negation, same tags. Callers guarantee no coordinate is
    /// the type's minimum.
    pub fn negated(&self) -> Self {
        VectorSet {
            dim: self.dim,
            coords: self.coords.iter().map(|&c| -c).collect(),
            tags: self.tags.clone(),
        }
    }

    pub(crate) fn subset(&self, idx: &[u32]) -> Self {
        let mut out = VectorSet::with_capacity(self.dim, idx.len());
        for &i in idx {
            out.coords.extend_from_slice(self.row(i as usize));
            out.tags.push(self.tags[i as usize]);
        }
        out
    }

    pub(crate) fn all_indices(&self) -> Result<Vec<u32>> {
        if self.len() > u32::MAX as usize {
            return contract("vector sets are limited to 2^32 - 1 members");
        }
        Ok((0..self.len() as u32).collect())
    }
}

/// The dominating pair found by a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairWitness {
    pub a_tag: u64,
    pub b_tag: u64,
}

/// Recursion counters for one search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes_visited: u64,
    pub balanced_nodes: u64,
    pub unbalanced_nodes: u64,
    pub guard_activations: u64,
    pub brute_leaf_pairs_examined: u64,
    pub max_depth: u64,
    pub elapsed: Duration,
}

impl Stats {
    pub fn absorb(&mut self, other: &Stats) {
        self.nodes_visited += other.nodes_visited;
        self.balanced_nodes += other.balanced_nodes;
        self.unbalanced_nodes += other.unbalanced_nodes;
        self.guard_activations += other.guard_activations;
        self.brute_leaf_pairs_examined += other.brute_leaf_pairs_examined;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.elapsed += other.elapsed;
    }
}

/// `u >= v` coordinatewise; vacuously true in dimension zero.
pub fn dominates<T: Coord>(u: &TaggedVector<T>, v: &TaggedVector<T>) -> Result<bool> {
    if u.coords.len() != v.coords.len() {
        return contract(format!(
            "cannot compare vectors of length {} and {}",
            u.coords.len(),
            v.coords.len()
        ));
    }
    Ok(dominates_coords(&u.coords, &v.coords))
}

#[inline]
pub fn dominates_coords<T: Coord>(u: &[T], v: &[T]) -> bool {
    u.iter().zip(v).all(|(x, y)| x >= y)
}

/// Exhaustive scan, `A` order outer and `B` order inner.
pub fn brute_force_pair<T: Coord>(a: &VectorSet<T>, b: &VectorSet<T>) -> Result<Option<PairWitness>> {
    if a.dim() != b.dim() {
        return contract(format!("dimension mismatch: {} vs {}", a.dim(), b.dim()));
    }
    let a_idx = a.all_indices()?;
    let b_idx = b.all_indices()?;
    let mut pairs = 0;
    Ok(scan_pairs(a, b, &a_idx, &b_idx, 0, &mut pairs).map(|(i, j)| PairWitness {
        a_tag: a.tag(i as usize),
        b_tag: b.tag(j as usize),
    }))
}

/// First dominating pair among the given rows, ignoring the first `offset`
/// coordinates; `A` order outer, `B` order inner. Adds the number of pairs
/// compared to `pairs`.
pub(crate) fn scan_pairs<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    a_idx: &[u32],
    b_idx: &[u32],
    offset: usize,
    pairs: &mut u64,
) -> Option<(u32, u32)> {
    let found = if a_idx.len() < 16 || b_idx.len() < 64 || offset == a.dim() {
        scan_direct(a, b, a_idx, b_idx, offset)
    } else {
        scan_sliced(a, b, a_idx, b_idx, offset)
    };
    *pairs += match found {
        Some((k, l)) => (k * b_idx.len() + l + 1) as u64,
        None => (a_idx.len() * b_idx.len()) as u64,
    };
    found.map(|(k, l)| (a_idx[k], b_idx[l]))
}

fn scan_direct<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    a_idx: &[u32],
    b_idx: &[u32],
    offset: usize,
) -> Option<(usize, usize)> {
    for (k, &i) in a_idx.iter().enumerate() {
        let u = &a.row(i as usize)[offset..];
        for (l, &j) in b_idx.iter().enumerate() {
            if dominates_coords(u, &b.row(j as usize)[offset..]) {
                return Some((k, l));
            }
        }
    }
    None
}

/// One coordinate's bit-sliced view of `B`: `masks[(v - lo) * blocks + k]`
/// has bit `r` set iff row `64k + r` has a value `<= v` there.
struct Slice {
    coord: usize,
    lo: i128,
    levels: usize,
    masks: Vec<u64>,
}

const SLICE_COORDS: usize = 12;
const SLICE_MAX_LEVELS: i128 = 1024;
const SLICE_BUDGET_WORDS: usize = 8 << 20;

/// Same scan, 64 `B` rows at a time. For each of up to [`SLICE_COORDS`]
/// coordinates with a small value range, an `A` row selects the mask of
/// `B` rows it matches there; the AND of those masks leaves the candidates,
/// which get a full comparison in `B` order.
fn scan_sliced<T: Coord>(
    a: &VectorSet<T>,
    b: &VectorSet<T>,
    a_idx: &[u32],
    b_idx: &[u32],
    offset: usize,
) -> Option<(usize, usize)> {
    let blocks = b_idx.len().div_ceil(64);
    let mut slices: Vec<Slice> = Vec::new();
    let mut budget = SLICE_BUDGET_WORDS;
    for coord in offset..a.dim() {
        if slices.len() == SLICE_COORDS {
            break;
        }
        let (lo, hi) = b_idx
            .iter()
            .map(|&j| b.row(j as usize)[coord].to_wide())
            .fold((i128::MAX, i128::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let levels = hi - lo + 1;
        if levels > SLICE_MAX_LEVELS || levels as usize * blocks > budget {
            continue;
        }
        let levels = levels as usize;
        budget -= levels * blocks;
        let mut masks = vec![0u64; levels * blocks];
        for (l, &j) in b_idx.iter().enumerate() {
            let v = (b.row(j as usize)[coord].to_wide() - lo) as usize;
            masks[v * blocks + l / 64] |= 1 << (l % 64);
        }
        for v in 1..levels {
            let (below, here) = masks.split_at_mut(v * blocks);
            for (h, p) in here[..blocks].iter_mut().zip(&below[(v - 1) * blocks..]) {
                *h |= p;
            }
        }
        slices.push(Slice {
            coord,
            lo,
            levels,
            masks,
        });
    }
    if slices.is_empty() {
        return scan_direct(a, b, a_idx, b_idx, offset);
    }

    let mut acc = vec![0u64; blocks];
    'rows: for (k, &i) in a_idx.iter().enumerate() {
        let row = a.row(i as usize);
        acc.fill(u64::MAX);
        for s in &slices {
            let v = row[s.coord].to_wide() - s.lo;
            if v < 0 {
                continue 'rows;
            }
            let v = (v as usize).min(s.levels - 1);
            for (x, m) in acc.iter_mut().zip(&s.masks[v * blocks..(v + 1) * blocks]) {
                *x &= m;
            }
        }
        let u = &row[offset..];
        for (blk, &mask) in acc.iter().enumerate() {
            let mut mask = mask;
            while mask != 0 {
                let l = blk * 64 + mask.trailing_zeros() as usize;
                if dominates_coords(u, &b.row(b_idx[l] as usize)[offset..]) {
                    return Some((k, l));
                }
                mask &= mask - 1;
            }
        }
    }
    None
}
