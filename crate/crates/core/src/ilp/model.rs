use num_bigint::BigUint;

use crate::error::{contract, Error, Result};

/// One row of `M x >= r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

/// `M x >= r` over `num_vars` variables, stored constraint-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IlpInstance {
    num_vars: usize,
    constraints: Vec<Constraint>,
}

impl IlpInstance {
    pub fn new(num_vars: usize, constraints: Vec<Constraint>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::Validation("num_vars must be positive".into()));
        }
        for (j, c) in constraints.iter().enumerate() {
            if c.coeffs.len() != num_vars {
                return Err(Error::Validation(format!("ragged row, constraint {j}")));
            }
        }
        Ok(IlpInstance {
            num_vars,
            constraints,
        })
    }

    /// Shorthand for fixtures: each row is `(coeffs, rhs)`.
    pub fn from_rows(num_vars: usize, rows: &[(&[i64], i64)]) -> Result<Self> {
        IlpInstance::new(
            num_vars,
            rows.iter()
                .map(|&(c, r)| Constraint {
                    coeffs: c.to_vec(),
                    rhs: r,
                })
                .collect(),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn coeff(&self, constraint: usize, var: usize) -> i64 {
        self.constraints[constraint].coeffs[var]
    }

    /// Copy with one more row appended.
    pub fn with_constraint(&self, extra: Constraint) -> Result<Self> {
        let mut rows = self.constraints.clone();
        rows.push(extra);
        IlpInstance::new(self.num_vars, rows)
    }
}

/// Allowed values per variable, each list non-empty, strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    domains: Vec<Vec<i64>>,
}

impl DomainSpec {
    pub fn boolean(num_vars: usize) -> Self {
        DomainSpec {
            domains: vec![vec![0, 1]; num_vars],
        }
    }

    pub fn uniform(num_vars: usize, values: &[i64]) -> Result<Self> {
        DomainSpec::new(vec![values.to_vec(); num_vars])
    }

    pub fn new(domains: Vec<Vec<i64>>) -> Result<Self> {
        for (i, d) in domains.iter().enumerate() {
            if d.is_empty() {
                return Err(Error::Validation(format!("empty domain, variable {i}")));
            }
            if d.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!(
                    "domain of variable {i} is not strictly ascending"
                )));
            }
        }
        Ok(DomainSpec { domains })
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn values(&self, var: usize) -> &[i64] {
        &self.domains[var]
    }

    pub fn all(&self) -> &[Vec<i64>] {
        &self.domains
    }

    pub fn is_boolean(&self) -> bool {
        self.domains.iter().all(|d| d == &[0, 1])
    }

    /// Number of assignments over the listed variables.
    pub fn product(&self, vars: impl IntoIterator<Item = usize>) -> BigUint {
        vars.into_iter()
            .fold(BigUint::from(1u32), |acc, i| acc * self.domains[i].len())
    }

    pub(crate) fn check_matches(&self, instance: &IlpInstance) -> Result<()> {
        if self.domains.len() != instance.num_vars() {
            return Err(Error::Validation(format!(
                "{} domains for {} variables",
                self.domains.len(),
                instance.num_vars()
            )));
        }
        Ok(())
    }
}

/// A full assignment, one value per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<i64>);

impl Assignment {
    pub fn values(&self) -> &[i64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Assignment),
    Infeasible,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            Verdict::Feasible(x) => Some(x),
            Verdict::Infeasible => None,
        }
    }
}

/// Whether `x` satisfies every constraint. `x` must lie in `domains`.
pub fn evaluate(instance: &IlpInstance, domains: &DomainSpec, x: &Assignment) -> Result<bool> {
    domains.check_matches(instance)?;
    if x.0.len() != instance.num_vars() {
        return contract(format!(
            "assignment has {} values for {} variables",
            x.0.len(),
            instance.num_vars()
        ));
    }
    for (i, &v) in x.0.iter().enumerate() {
        if domains.values(i).binary_search(&v).is_err() {
            return contract(format!("value {v} outside the domain of variable {i}"));
        }
    }
    for (j, c) in instance.constraints().iter().enumerate() {
        let mut sum: i128 = 0;
        for (&m, &v) in c.coeffs.iter().zip(&x.0) {
            sum = sum
                .checked_add(m as i128 * v as i128)
                .ok_or(Error::OverflowRisk { constraint: j })?;
        }
        if sum < c.rhs as i128 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|rhs| + sum of term magnitudes`, each term given with a multiplicity,
/// fits the i128 accumulator with a factor-two headroom.
pub fn accumulator_fits(rhs: i64, terms: impl IntoIterator<Item = (u128, u128)>) -> bool {
    let mut total = BigUint::from(rhs.unsigned_abs());
    for (magnitude, count) in terms {
        total += BigUint::from(magnitude) * BigUint::from(count);
    }
    total * 2u32 <= BigUint::from(i128::MAX as u128)
}

fn max_term(coeff: i64, domain: &[i64]) -> u128 {
    // the extremes of a sorted domain bound |coeff * v|
    let lo = domain[0].unsigned_abs() as u128;
    let hi = domain[domain.len() - 1].unsigned_abs() as u128;
    coeff.unsigned_abs() as u128 * lo.max(hi)
}

/// Refuses instances where some partial constraint sum could leave the
/// double-width accumulator; names the first offending constraint.
pub fn validate_no_overflow(instance: &IlpInstance, domains: &DomainSpec) -> Result<()> {
    domains.check_matches(instance)?;
    for (j, c) in instance.constraints().iter().enumerate() {
        let terms = c
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &m)| (max_term(m, domains.values(i)), 1u128));
        if !accumulator_fits(c.rhs, terms) {
            return Err(Error::OverflowRisk { constraint: j });
        }
    }
    Ok(())
}

/// Largest `|r_j| + sum_i max_v |M_ji v|` over constraints: every partial
/// sum and residual of the reduction has at most this magnitude. Only
/// meaningful after [`validate_no_overflow`].
pub fn coordinate_bound(instance: &IlpInstance, domains: &DomainSpec) -> u128 {
    instance
        .constraints()
        .iter()
        .map(|c| {
            c.coeffs
                .iter()
                .enumerate()
                .map(|(i, &m)| max_term(m, domains.values(i)))
                .sum::<u128>()
                + c.rhs.unsigned_abs() as u128
        })
        .max()
        .unwrap_or(0)
}
