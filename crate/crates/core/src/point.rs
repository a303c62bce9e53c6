//! Points of the Berkovich projective line over `Q_p` with rational data.
//!
//! A type I point is a rational number or `inf`. A type II point is the closed
//! disk `D(center, p^-log_radius)`. Disks are not reduced to a canonical
//! center, so equality of points depends on the prime and is decided by
//! [`PrimeContext::same_point`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, valuation, LogScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BerkPoint {
    /// A classical point of `Q_p`.
    TypeI(Rational),
    /// The classical point at infinity.
    Infinity,
    /// The disk `D(center, p^-log_radius)`.
    TypeII { center: Rational, log_radius: Rational },
}

impl BerkPoint {
    pub fn classical(x: Rational) -> Self {
        BerkPoint::TypeI(x)
    }

    pub fn disk(center: Rational, log_radius: Rational) -> Self {
        BerkPoint::TypeII { center, log_radius }
    }

    /// The Gauss point `D(0, 1)`.
    pub fn gauss() -> Self {
        BerkPoint::TypeII { center: Rational::zero(), log_radius: Rational::zero() }
    }

    pub fn is_type_i(&self) -> bool {
        !self.is_type_ii()
    }

    pub fn is_type_ii(&self) -> bool {
        matches!(self, BerkPoint::TypeII { .. })
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BerkPoint::Infinity)
    }

    /// Center of a finite point; `None` for infinity.
    pub fn center(&self) -> Option<&Rational> {
        match self {
            BerkPoint::TypeI(c) | BerkPoint::TypeII { center: c, .. } => Some(c),
            BerkPoint::Infinity => None,
        }
    }

    /// Log-radius, `+inf` for finite type I points and `-inf` for infinity.
    pub fn log_radius(&self) -> LogScalar {
        match self {
            BerkPoint::TypeI(_) => LogScalar::PosInf,
            BerkPoint::Infinity => LogScalar::NegInf,
            BerkPoint::TypeII { log_radius, .. } => LogScalar::Finite(log_radius.clone()),
        }
    }
}

impl fmt::Display for BerkPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BerkPoint::TypeI(c) => write!(f, "I:{}", format_rational(c)),
            BerkPoint::Infinity => f.write_str("I:inf"),
            BerkPoint::TypeII { center, log_radius } => {
                write!(f, "II:{}:{}", format_rational(center), format_rational(log_radius))
            }
        }
    }
}

impl FromStr for BerkPoint {
    type Err = Error;

    /// Accepts `I:<num>/<den>`, `I:inf` and `II:<num>/<den>:<num>/<den>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::Parse(format!("malformed point `{s}`: {why}"));
        let mut parts = s.split(':');
        let tag = parts.next().unwrap_or_default();
        let fields: Vec<&str> = parts.collect();
        match (tag, fields.as_slice()) {
            ("I", ["inf"]) => Ok(BerkPoint::Infinity),
            ("I", [c]) => Ok(BerkPoint::TypeI(parse_rational(c).map_err(|_| bad("bad center"))?)),
            ("II", [c, r]) => Ok(BerkPoint::TypeII {
                center: parse_rational(c).map_err(|_| bad("bad center"))?,
                log_radius: parse_rational(r).map_err(|_| bad("bad log-radius"))?,
            }),
            ("I", _) => Err(bad("type I takes one field")),
            ("II", _) => Err(bad("type II takes center and log-radius")),
            _ => Err(bad("expected tag I or II")),
        }
    }
}

/// The residue characteristic `p`, which is also the logarithm base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    p_big: BigInt,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::Precondition(format!("{p} is not a prime")));
        }
        Ok(PrimeContext { p, p_big: BigInt::from(p) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The p-adic valuation; `vp(0) = +inf`.
    pub fn vp(&self, x: &Rational) -> LogScalar {
        valuation(x, &self.p_big)
    }

    /// Equality of points: disks agree iff their log-radii agree and each
    /// center lies in the other disk.
    pub fn same_point(&self, x: &BerkPoint, y: &BerkPoint) -> bool {
        match (x, y) {
            (BerkPoint::Infinity, BerkPoint::Infinity) => true,
            (BerkPoint::TypeI(a), BerkPoint::TypeI(b)) => a == b,
            (
                BerkPoint::TypeII { center: a, log_radius: s },
                BerkPoint::TypeII { center: b, log_radius: t },
            ) => s == t && self.vp(&(a - b)) >= LogScalar::Finite(s.clone()),
            _ => false,
        }
    }
}
