//! Exact values of the form `base + Σ coeff·√radicand`.
//!
//! Extremal values of effects on the ball backend are of this shape; sums of
//! them stay in this shape. Values are kept canonical: perfect-square
//! radicands collapse into the rational base, radicands whose ratio is a
//! rational square merge into one term, zero coefficients drop out. In
//! canonical form a value with at least one radical term is irrational, so
//! sign determination by adaptive-precision interval refinement terminates;
//! equality is decided from the canonical data alone.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::rational::{exact_sqrt, to_decimal_string, Rational};

/// One radical term `coeff·√radicand` with `coeff ≠ 0`, `radicand > 0` and
/// `radicand` not a perfect rational square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalTerm {
    pub coeff: Rational,
    pub radicand: Rational,
}

/// An exact scalar `base + Σ coeff·√radicand`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeValue {
    base: Rational,
    terms: Vec<RadicalTerm>,
}

impl ExtremeValue {
    pub fn exact(base: Rational) -> Self {
        ExtremeValue {
            base,
            terms: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    /// `base + coeff·√radicand`; requires `radicand ≥ 0`.
    pub fn surd(base: Rational, coeff: Rational, radicand: Rational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::Domain(format!(
                "negative radicand {radicand} in square root"
            )));
        }
        let mut v = ExtremeValue {
            base,
            terms: vec![RadicalTerm { coeff, radicand }],
        };
        v.normalize();
        Ok(v)
    }

    /// `√radicand`.
    pub fn sqrt(radicand: Rational) -> Result<Self> {
        Self::surd(Rational::zero(), Rational::one(), radicand)
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn terms(&self) -> &[RadicalTerm] {
        &self.terms
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.terms.is_empty().then_some(&self.base)
    }

    pub fn add(&self, other: &ExtremeValue) -> ExtremeValue {
        let mut v = ExtremeValue {
            base: &self.base + &other.base,
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        };
        v.normalize();
        v
    }

    pub fn sub(&self, other: &ExtremeValue) -> ExtremeValue {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExtremeValue {
        ExtremeValue {
            base: -&self.base,
            terms: self
                .terms
                .iter()
                .map(|t| RadicalTerm {
                    coeff: -&t.coeff,
                    radicand: t.radicand.clone(),
                })
                .collect(),
        }
    }

    pub fn add_rational(&self, q: &Rational) -> ExtremeValue {
        ExtremeValue {
            base: &self.base + q,
            terms: self.terms.clone(),
        }
    }

    pub fn scale(&self, q: &Rational) -> ExtremeValue {
        if q.is_zero() {
            return ExtremeValue::zero();
        }
        ExtremeValue {
            base: &self.base * q,
            terms: self
                .terms
                .iter()
                .map(|t| RadicalTerm {
                    coeff: &t.coeff * q,
                    radicand: t.radicand.clone(),
                })
                .collect(),
        }
    }

    /// Exact sign of the value.
    pub fn sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return self.base.cmp(&Rational::zero());
        }
        if self.terms.len() == 1 {
            return self.single_term_sign();
        }
        self.interval_sign()
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        self.sub(&ExtremeValue::exact(q.clone())).sign()
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        let mut v = self.base.to_f64().unwrap_or(f64::NAN);
        for t in &self.terms {
            let c = t.coeff.to_f64().unwrap_or(f64::NAN);
            let m = t.radicand.to_f64().unwrap_or(f64::NAN);
            v += c * m.sqrt();
        }
        v
    }

    /// Decimal rendering accurate to `digits` fractional digits.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        if self.terms.is_empty() {
            return to_decimal_string(&self.base, digits);
        }
        let tolerance = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 2));
        let mut bits = 32usize;
        loop {
            let (lo, hi) = self.enclosing_interval(bits);
            if &hi - &lo < tolerance {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                return to_decimal_string(&mid, digits);
            }
            bits *= 2;
        }
    }

    /// Restores the canonical-form invariants.
    fn normalize(&mut self) {
        let mut canonical: Vec<RadicalTerm> = Vec::new();
        for term in std::mem::take(&mut self.terms) {
            if term.coeff.is_zero() || term.radicand.is_zero() {
                continue;
            }
            if let Some(root) = exact_sqrt(&term.radicand) {
                self.base += &term.coeff * root;
                continue;
            }
            // Merge with an existing term when the radicand ratio is a
            // rational square: coeff·√m = coeff·ρ·√m' for ρ = √(m/m').
            let mut merged = false;
            for existing in &mut canonical {
                if let Some(rho) = exact_sqrt(&(&term.radicand / &existing.radicand)) {
                    existing.coeff += &term.coeff * rho;
                    merged = true;
                    break;
                }
            }
            if !merged {
                canonical.push(term);
            }
        }
        canonical.retain(|t| !t.coeff.is_zero());
        canonical.sort_by(|a, b| a.radicand.cmp(&b.radicand));
        self.terms = canonical;
    }

    /// Exact sign for `base + coeff·√radicand` by squaring.
    fn single_term_sign(&self) -> Ordering {
        let t = &self.terms[0];
        let radical_positive = t.coeff.is_positive();
        if self.base.is_zero() {
            return if radical_positive {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        // Compare |coeff|·√radicand against |base| on opposite sides of zero.
        if radical_positive == self.base.is_positive() {
            return if radical_positive {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        let radical_sq = &t.coeff * &t.coeff * &t.radicand;
        let base_sq = &self.base * &self.base;
        match radical_sq.cmp(&base_sq) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => {
                if radical_positive {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            Ordering::Less => self.base.cmp(&Rational::zero()),
        }
    }

    /// Sign by adaptive-precision interval refinement. A canonical value with
    /// radical terms is irrational, so the enclosure eventually excludes zero.
    fn interval_sign(&self) -> Ordering {
        let mut bits = 32usize;
        loop {
            let (lo, hi) = self.enclosing_interval(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Rational enclosure `[lo, hi]` with per-term error below `2^-bits`.
    fn enclosing_interval(&self, bits: usize) -> (Rational, Rational) {
        let mut lo = self.base.clone();
        let mut hi = self.base.clone();
        for t in &self.terms {
            // √(p/q) = √(p·q)/q with p, q > 0.
            let p = t.radicand.numer();
            let q = t.radicand.denom();
            let scaled: BigInt = (p * q) << (2 * bits);
            let root = scaled.sqrt();
            let denom = q * (BigInt::one() << bits);
            let sqrt_lo = Rational::new(root.clone(), denom.clone());
            let sqrt_hi = Rational::new(root + 1, denom);
            let (term_lo, term_hi) = if t.coeff.is_positive() {
                (&t.coeff * sqrt_lo, &t.coeff * sqrt_hi)
            } else {
                (&t.coeff * sqrt_hi, &t.coeff * sqrt_lo)
            };
            lo += term_lo;
            hi += term_hi;
        }
        (lo, hi)
    }
}

impl PartialOrd for ExtremeValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtremeValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

impl fmt::Display for ExtremeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", self.base);
        }
        if !self.base.is_zero() {
            write!(f, "{}", self.base)?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            let lead = self.base.is_zero() && i == 0;
            if t.coeff.is_negative() {
                write!(f, " - ")?;
            } else if !lead {
                write!(f, " + ")?;
            }
            let c = t.coeff.abs();
            if c.is_one() {
                write!(f, "sqrt({})", t.radicand)?;
            } else {
                write!(f, "{}*sqrt({})", c, t.radicand)?;
            }
        }
        Ok(())
    }
}
