use crate::error::{Error, Result};
use crate::ilp::{Constraint, DomainSpec, IlpInstance};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenMode {
    /// Right-hand sides uniform in `[coeff_min * n, coeff_max * n]`.
    #[default]
    Uniform,
    /// Right-hand sides set to `M x*` for a hidden uniform `x*`.
    Planted,
}

impl GenMode {
    pub fn name(self) -> &'static str {
        match self {
            GenMode::Uniform => "uniform",
            GenMode::Planted => "planted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub num_vars: usize,
    pub num_constraints: usize,
    pub seed: u64,
    pub coeff_min: i64,
    pub coeff_max: i64,
    pub mode: GenMode,
    /// Shared domain for every variable; Boolean when absent.
    pub domain: Option<Vec<i64>>,
}

impl GenSpec {
    pub fn new(num_vars: usize, num_constraints: usize, seed: u64) -> Self {
        GenSpec {
            num_vars,
            num_constraints,
            seed,
            coeff_min: -8,
            coeff_max: 8,
            mode: GenMode::Uniform,
            domain: None,
        }
    }

    pub fn planted(mut self) -> Self {
        self.mode = GenMode::Planted;
        self
    }

    pub fn coeffs(mut self, min: i64, max: i64) -> Self {
        self.coeff_min = min;
        self.coeff_max = max;
        self
    }
}

/// Deterministic instance from a spec.
///
/// One splitmix64 stream seeded with `spec.seed` supplies, in order: the
/// coefficients row by row, one right-hand side per row, and in planted mode
/// one domain index per variable. Planted mode then overwrites the
/// right-hand sides with `M x*`.
pub fn generate(spec: &GenSpec) -> Result<(IlpInstance, DomainSpec)> {
    if spec.coeff_min > spec.coeff_max {
        return Err(Error::InvalidRange(format!(
            "coeff_min {} exceeds coeff_max {}",
            spec.coeff_min, spec.coeff_max
        )));
    }
    if spec.num_vars == 0 || spec.num_constraints == 0 {
        return Err(Error::InvalidRange(
            "at least one variable and one constraint required".into(),
        ));
    }
    let (n, m) = (spec.num_vars, spec.num_constraints);
    let domains = match &spec.domain {
        Some(d) => DomainSpec::uniform(n, d)?,
        None => DomainSpec::boolean(n),
    };
    let to_i64 = |v: i128, what: &str| {
        i64::try_from(v).map_err(|_| Error::InvalidRange(format!("{what} {v} does not fit 64 bits")))
    };

    let mut rng = SplitMix64::new(spec.seed);
    let mut rows: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| rng.range_inclusive(spec.coeff_min, spec.coeff_max))
                .collect()
        })
        .collect();
    let rhs_lo = to_i64(spec.coeff_min as i128 * n as i128, "rhs bound")?;
    let rhs_hi = to_i64(spec.coeff_max as i128 * n as i128, "rhs bound")?;
    let mut rhs: Vec<i64> = (0..m).map(|_| rng.range_inclusive(rhs_lo, rhs_hi)).collect();

    if spec.mode == GenMode::Planted {
        let planted: Vec<i64> = (0..n)
            .map(|i| {
                let d = domains.values(i);
                d[rng.below(d.len() as u128) as usize]
            })
            .collect();
        for (j, row) in rows.iter().enumerate() {
            let value: i128 = row
                .iter()
                .zip(&planted)
                .map(|(&a, &x)| a as i128 * x as i128)
                .sum();
            rhs[j] = to_i64(value, "planted rhs")?;
        }
    }

    let constraints = rows
        .drain(..)
        .zip(rhs)
        .map(|(coeffs, rhs)| Constraint { coeffs, rhs })
        .collect();
    Ok((IlpInstance::new(n, constraints)?, domains))
}
