//! Exact rational helpers and the extended scalar used for every `-log_p` value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for `num / den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `num/den` (or a bare integer) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Wire form: `num/den` in lowest terms with a positive denominator, e.g. `3/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering with `digits` fractional digits, rounding half to even.
pub fn to_decimal(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = rat(1, 2);
    let mut q = floor.to_integer();
    match frac.cmp(&half) {
        Ordering::Greater => q += 1,
        Ordering::Equal if q.is_odd() => q += 1,
        _ => {}
    }
    let negative = q.is_negative();
    let q = q.abs();
    let (whole, rest) = q.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        let rest = rest.to_string();
        out.push('.');
        for _ in rest.len()..digits as usize {
            out.push('0');
        }
        out.push_str(&rest);
    }
    out
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// p-adic valuation of a nonzero integer.
fn vp_int(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `+inf` for zero.
pub fn valuation(x: &Rational, p: &BigInt) -> LogScalar {
    if x.is_zero() {
        return LogScalar::PosInf;
    }
    LogScalar::from(int(vp_int(x.numer(), p) - vp_int(x.denom(), p)))
}

/// An exact extended rational. Kernel and diameter values are stored as
/// `-log_p` of the underlying quantity, so `PosInf` encodes the value 0
/// (a pole of the potential) and `NegInf` encodes the value `+inf` (the
/// kernel at its own pole).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LogScalar {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl LogScalar {
    pub fn zero() -> Self {
        LogScalar::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LogScalar::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LogScalar::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// The finite value or an error naming `what`.
    pub fn expect_finite(&self, what: &str) -> Result<Rational> {
        self.finite()
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("{what} is not finite ({self})")))
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Multiplication by an exact rational weight. `0 * inf` is taken as 0,
    /// the measure-theoretic convention for atoms of zero mass.
    pub fn scale(&self, w: &Rational) -> Self {
        if w.is_zero() {
            return LogScalar::zero();
        }
        match self {
            LogScalar::Finite(r) => LogScalar::Finite(r * w),
            LogScalar::PosInf if w.is_positive() => LogScalar::PosInf,
            LogScalar::PosInf => LogScalar::NegInf,
            LogScalar::NegInf if w.is_positive() => LogScalar::NegInf,
            LogScalar::NegInf => LogScalar::PosInf,
        }
    }

    /// Sum, `None` for the indeterminate form `inf - inf`.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        use LogScalar::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            LogScalar::NegInf => f64::NEG_INFINITY,
            LogScalar::PosInf => f64::INFINITY,
            LogScalar::Finite(r) => to_f64(r),
        }
    }

    /// Wire form: `num/den`, `+inf` or `-inf`.
    pub fn to_wire(&self) -> String {
        match self {
            LogScalar::NegInf => "-inf".to_string(),
            LogScalar::PosInf => "+inf".to_string(),
            LogScalar::Finite(r) => format_rational(r),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "+inf" | "inf" => Ok(LogScalar::PosInf),
            "-inf" => Ok(LogScalar::NegInf),
            other => parse_rational(other).map(LogScalar::Finite),
        }
    }

    /// Decimal rendering at fixed precision; infinities print as `+inf`/`-inf`.
    pub fn to_decimal(&self, digits: u32) -> String {
        match self {
            LogScalar::Finite(r) => to_decimal(r, digits),
            other => other.to_wire(),
        }
    }
}

impl From<Rational> for LogScalar {
    fn from(r: Rational) -> Self {
        LogScalar::Finite(r)
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wire())
    }
}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        use LogScalar::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
        }
    }
}

impl Add for LogScalar {
    type Output = LogScalar;

    /// Panics on `inf - inf`; use [`LogScalar::checked_add`] where that can occur.
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs)
            .unwrap_or_else(|| panic!("indeterminate sum {self} + {rhs}"))
    }
}

impl Neg for LogScalar {
    type Output = LogScalar;

    fn neg(self) -> Self {
        match self {
            LogScalar::NegInf => LogScalar::PosInf,
            LogScalar::PosInf => LogScalar::NegInf,
            LogScalar::Finite(r) => LogScalar::Finite(-r),
        }
    }
}

impl Sub for LogScalar {
    type Output = LogScalar;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<&Rational> for &LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: &Rational) -> LogScalar {
        self.scale(rhs)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&int(8), &p(2)), LogScalar::from(int(3)));
        assert_eq!(valuation(&int(0), &p(5)), LogScalar::PosInf);
        assert_eq!(valuation(&rat(3, 4), &p(2)), LogScalar::from(int(-2)));
        assert_eq!(valuation(&rat(-50, 3), &p(5)), LogScalar::from(int(2)));
    }

    #[test]
    fn infinity_is_absorbing() {
        let v = LogScalar::from(rat(7, 3));
        assert_eq!(LogScalar::PosInf + v.clone(), LogScalar::PosInf);
        assert_eq!(LogScalar::PosInf.min(v.clone()), v);
        assert!(LogScalar::NegInf < v && v < LogScalar::PosInf);
        assert_eq!(LogScalar::PosInf.checked_add(&LogScalar::NegInf), None);
        assert_eq!(LogScalar::PosInf.scale(&rat(-1, 2)), LogScalar::NegInf);
    }

    #[test]
    fn wire_and_decimal_forms() {
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(format_rational(&rat(2, -4)), "-1/2");
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
        assert_eq!(to_decimal(&rat(1, 2), 0), "0");
        assert_eq!(to_decimal(&rat(3, 2), 0), "2");
        assert_eq!(to_decimal(&rat(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal(&rat(5, 4), 12), "1.250000000000");
        assert_eq!(to_decimal(&rat(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&rat(3, 8), 2), "0.38");
    }
}
