use std::cmp::Ordering;

use super::model::{Assignment, DomainSpec, IlpInstance};
use crate::error::{contract, Error, Result};
use crate::scalar::Coord;
use crate::vecdom::VectorSet;

/// The two halves of the variable set. Both lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSplit {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

/// Halves the variables.
///
/// When every domain has the same size, `s1` is the first `ceil(n/2)`
/// variables. Otherwise variables are placed largest domain first onto the
/// side with the smaller assignment count so far (ties to `s1`).
pub fn split_variables(instance: &IlpInstance, domains: &DomainSpec) -> Result<VariableSplit> {
    domains.check_matches(instance)?;
    let n = instance.num_vars();
    let size = |i: usize| domains.values(i).len();
    if (1..n).all(|i| size(i) == size(0)) {
        let half = n.div_ceil(2);
        return Ok(VariableSplit {
            s1: (0..half).collect(),
            s2: (half..n).collect(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| size(y).cmp(&size(x)).then(x.cmp(&y)));
    let (mut s1, mut s2) = (Vec::new(), Vec::new());
    let (mut p1, mut p2) = (num_bigint::BigUint::from(1u32), num_bigint::BigUint::from(1u32));
    for i in order {
        if p1.cmp(&p2) != Ordering::Greater {
            s1.push(i);
            p1 *= size(i);
        } else {
            s2.push(i);
            p2 *= size(i);
        }
    }
    s1.sort_unstable();
    s2.sort_unstable();
    Ok(VariableSplit { s1, s2 })
}

fn check_split(instance: &IlpInstance, split: &VariableSplit) -> Result<()> {
    let n = instance.num_vars();
    let mut seen = vec![false; n];
    for &i in split.s1.iter().chain(&split.s2) {
        if i >= n || seen[i] {
            return contract(format!("variable split is not a partition of 0..{n}"));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return contract(format!("variable split does not cover 0..{n}"));
    }
    Ok(())
}

/// One vector per assignment `alpha` of `s1`: coordinate `j` is
/// `sum_{i in s1} M[j][i] * alpha(i)`. Tags are mixed-radix ranks of the
/// assignment, lowest variable index most significant.
pub fn enumerate_left<T: Coord>(
    instance: &IlpInstance,
    domains: &DomainSpec,
    split: &VariableSplit,
    max_vectors: u64,
) -> Result<VectorSet<T>> {
    check_split(instance, split)?;
    enumerate_side(instance, domains, &split.s1, false, max_vectors)
}

/// One vector per assignment `beta` of `s2`: coordinate `j` is
/// `r[j] - sum_{i in s2} M[j][i] * beta(i)`. Tags as in [`enumerate_left`].
pub fn enumerate_right<T: Coord>(
    instance: &IlpInstance,
    domains: &DomainSpec,
    split: &VariableSplit,
    max_vectors: u64,
) -> Result<VectorSet<T>> {
    check_split(instance, split)?;
    enumerate_side(instance, domains, &split.s2, true, max_vectors)
}

fn enumerate_side<T: Coord>(
    instance: &IlpInstance,
    domains: &DomainSpec,
    vars: &[usize],
    residual: bool,
    max_vectors: u64,
) -> Result<VectorSet<T>> {
    domains.check_matches(instance)?;
    let count = domains.product(vars.iter().copied());
    let count = match u64::try_from(&count) {
        Ok(c) if c <= max_vectors => c,
        _ => {
            return Err(Error::Capacity {
                what: if residual { "right half" } else { "left half" },
                requested: count.to_string(),
                budget: max_vectors,
            })
        }
    };
    let m = instance.num_constraints();
    let sign: i128 = if residual { -1 } else { 1 };

    // current coordinates, starting from every variable at its lowest value
    let mut value: Vec<i128> = instance
        .constraints()
        .iter()
        .map(|c| {
            let base = if residual { c.rhs as i128 } else { 0 };
            base + sign
                * vars
                    .iter()
                    .map(|&i| c.coeffs[i] as i128 * domains.values(i)[0] as i128)
                    .sum::<i128>()
        })
        .collect();

    // steps[p][k]: coordinate change when variable vars[p] moves from its
    // k-th value to the next one (cyclically)
    let steps: Vec<Vec<Vec<i128>>> = vars
        .iter()
        .map(|&i| {
            let d = domains.values(i);
            (0..d.len())
                .map(|k| {
                    let diff = d[(k + 1) % d.len()] as i128 - d[k] as i128;
                    (0..m)
                        .map(|j| sign * instance.coeff(j, i) as i128 * diff)
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut out = VectorSet::with_capacity(m, count as usize);
    let mut row: Vec<T> = vec![T::zero(); m];
    let mut digits = vec![0usize; vars.len()];
    for tag in 0..count {
        for (slot, &v) in row.iter_mut().zip(&value) {
            *slot = T::from_wide(v)
                .ok_or_else(|| Error::Contract(format!("coordinate {v} exceeds the storage width")))?;
        }
        out.push(tag, &row)?;

        // odometer step, last variable fastest
        for p in (0..vars.len()).rev() {
            let step = &steps[p][digits[p]];
            for (v, s) in value.iter_mut().zip(step) {
                *v += s;
            }
            digits[p] += 1;
            if digits[p] < domains.values(vars[p]).len() {
                break;
            }
            digits[p] = 0;
        }
    }
    Ok(out)
}

fn unrank(vars: &[usize], domains: &DomainSpec, mut tag: u64, values: &mut [i64]) -> Result<()> {
    for &i in vars.iter().rev() {
        let d = domains.values(i);
        values[i] = d[(tag % d.len() as u64) as usize];
        tag /= d.len() as u64;
    }
    if tag != 0 {
        return contract("tag exceeds the number of half assignments");
    }
    Ok(())
}

/// Rebuilds the full assignment from a left tag and a right tag.
pub fn merge_tags(
    split: &VariableSplit,
    domains: &DomainSpec,
    a_tag: u64,
    b_tag: u64,
) -> Result<Assignment> {
    let mut values = vec![0i64; domains.len()];
    unrank(&split.s1, domains, a_tag, &mut values)?;
    unrank(&split.s2, domains, b_tag, &mut values)?;
    Ok(Assignment(values))
}
