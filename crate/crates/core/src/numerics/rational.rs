//! Arbitrary-precision rational scalars.
//!
//! Backed by [`num_rational::BigRational`], which keeps every value reduced
//! (positive denominator, gcd one) after each operation.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The scalar type used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer scalar.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a decimal-free signed integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("expected integer, got {t:?}")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Renders a rational as `"p/q"` (or `"p"` for integers), matching the
/// format accepted by [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Approximate `f64` value, for display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of lossy conversions for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Decimal rendering with `digits` fractional digits, rounded toward zero.
pub fn to_decimal_string(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * Rational::from_integer(scale.clone())).trunc();
    let scaled = scaled.numer().clone();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    let whole = &abs / &scale;
    let frac = &abs % &scale;
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{frac:0>width$}", width = digits as usize)
}

/// Dot product of two equal-length slices.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Componentwise sum.
pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Componentwise difference.
pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scalar multiple.
pub fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

/// Squared Euclidean norm.
pub fn norm_sq(a: &[Rational]) -> Rational {
    a.iter().map(|x| x * x).sum()
}

/// True if every component is zero.
pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Exact square root when the rational is a perfect square.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

/// True for 0/1, 1/1 and everything in between.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" 2/6 ").unwrap(), rat(1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn format_round_trips() {
        for r in [rat(3, 4), int(-2), rat(-5, 7), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&rat(1, 4), 6), "0.250000");
        assert_eq!(to_decimal_string(&rat(-1, 3), 4), "-0.3333");
        assert_eq!(to_decimal_string(&int(2), 2), "2.00");
    }

    #[test]
    fn exact_sqrt_detects_perfect_squares() {
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&rat(1, 2)), None);
        assert_eq!(exact_sqrt(&int(0)), Some(int(0)));
        assert_eq!(exact_sqrt(&int(-1)), None);
    }
}
