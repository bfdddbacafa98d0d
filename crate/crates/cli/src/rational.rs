//! Exact parsing of command-line numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Parses `p/q` (`q > 0`), an integer, or a finite decimal such as `0.25`, exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let bad = || format!("`{text}` is not a rational number (expected p/q, an integer or a decimal)");
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q <= BigInt::zero() {
            return Err(format!("`{text}` has a nonpositive denominator"));
        }
        return Ok(BigRational::new(p, q));
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numerator: BigInt = digits.parse().map_err(|_| bad())?;
    let denominator = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(numerator * sign, denominator))
}

/// `f64` value of a parsed rational.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
