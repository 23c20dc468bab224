use num_bigint::BigUint;
use num_rational::Ratio;

/// Parses a non-negative rational written as `p/q`, an integer, or a
/// decimal such as `0.0625`.
pub fn parse_ratio(text: &str) -> Result<Ratio<BigUint>, String> {
    let text = text.trim();
    let bad = || format!("not a non-negative rational: {text:?}");
    let digits = |s: &str| -> Result<BigUint, String> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    if let Some((p, q)) = text.split_once('/') {
        let q = digits(q)?;
        if q == BigUint::ZERO {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(Ratio::new(digits(p)?, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let scale = BigUint::from(10u32).pow(frac.len() as u32);
        let whole = if whole.is_empty() {
            BigUint::ZERO
        } else {
            digits(whole)?
        };
        return Ok(Ratio::new(whole * &scale + digits(frac)?, scale));
    }
    Ok(Ratio::from_integer(digits(text)?))
}

pub fn parse_ratio_u64(text: &str) -> Result<Ratio<u64>, String> {
    let r = parse_ratio(text)?;
    match (u64::try_from(r.numer()), u64::try_from(r.denom())) {
        (Ok(n), Ok(d)) => Ok(Ratio::new(n, d)),
        _ => Err(format!("{text:?} is out of range")),
    }
}
