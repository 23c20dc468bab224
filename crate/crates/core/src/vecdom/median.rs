use crate::error::{contract, Result};
use crate::rng::SplitMix64;

/// Smallest occurring value `a` such that the items strictly below `a` and
/// the items strictly above `a` each carry at most half the total weight.
///
/// Equivalently, the smallest value whose cumulative weight (items `<= a`)
/// reaches half the total. Found by quickselect on the values with random
/// pivots, so the expected running time is linear; the result does not
/// depend on the pivot sequence.
pub fn weighted_median<T: Ord + Copy>(items: &[(T, u64)]) -> Result<T> {
    if items.is_empty() {
        return contract("weighted median of an empty collection");
    }
    if items.iter().any(|&(_, w)| w == 0) {
        return contract("weighted median requires positive weights");
    }
    let mut work = items.to_vec();
    Ok(select(&mut work))
}

/// Core selection over a scratch buffer the caller no longer needs.
pub(crate) fn select<T: Ord + Copy>(work: &mut [(T, u64)]) -> T {
    let total: u128 = work.iter().map(|&(_, w)| w as u128).sum();
    let mut rng = SplitMix64::new(work.len() as u64);
    // weight of items already known to lie below the current window
    let mut below: u128 = 0;
    let mut lo = 0usize;
    let mut hi = work.len();
    loop {
        debug_assert!(lo < hi);
        let pick = lo + rng.below((hi - lo) as u128) as usize;
        let pivot = work[pick].0;

        // three-way partition of work[lo..hi] around the pivot value
        let (mut lt, mut i, mut gt) = (lo, lo, hi);
        let (mut w_lt, mut w_eq) = (0u128, 0u128);
        while i < gt {
            let (v, w) = work[i];
            if v < pivot {
                work.swap(lt, i);
                lt += 1;
                i += 1;
                w_lt += w as u128;
            } else if v > pivot {
                gt -= 1;
                work.swap(i, gt);
            } else {
                i += 1;
                w_eq += w as u128;
            }
        }

        if 2 * (below + w_lt) >= total {
            hi = lt;
        } else if 2 * (below + w_lt + w_eq) >= total {
            return pivot;
        } else {
            below += w_lt + w_eq;
            lo = gt;
        }
    }
}
