//! Exact comparisons between rationals and rational powers `base^(p/q)`.
//!
//! Nothing here touches floating point: `a^(p/q)` against `b^(r/s)` is
//! decided by raising both sides to `lcm(q, s)`, which leaves two rationals
//! with integer exponents.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// `base^(num/den)` with `base > 0` and `den > 0`, exponent kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerExpr {
    base: BigRational,
    exponent: Ratio<i64>,
}

impl PowerExpr {
    pub fn new(base: BigRational, exponent: Ratio<i64>) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::InvalidInput(format!(
                "power base must be positive, got {base}"
            )));
        }
        Ok(PowerExpr { base, exponent })
    }

    /// `base^(num/den)` for a positive integer base.
    pub fn of_integer(base: &BigUint, num: i64, den: i64) -> Self {
        assert!(!base.is_zero(), "power base must be positive");
        assert!(den != 0, "zero exponent denominator");
        PowerExpr {
            base: BigRational::from_integer(BigInt::from(base.clone())),
            exponent: Ratio::new(num, den),
        }
    }

    /// `√r` for positive rational `r`.
    pub fn sqrt(r: BigRational) -> Result<Self> {
        Self::new(r, Ratio::new(1, 2))
    }

    pub fn from_rational(r: BigRational) -> Result<Self> {
        Self::new(r, Ratio::one())
    }

    pub fn base(&self) -> &BigRational {
        &self.base
    }

    pub fn exponent(&self) -> Ratio<i64> {
        self.exponent
    }

    /// Exact rational value when one exists (integer exponent, or a base that
    /// is a perfect power of the right order).
    pub fn to_rational(&self) -> Option<BigRational> {
        let den = *self.exponent.denom();
        let root = rational_root(&self.base, u32::try_from(den).ok()?)?;
        Some(rat_pow(&root, *self.exponent.numer()))
    }

    pub fn cmp_exact(&self, other: &PowerExpr) -> Ordering {
        let l = self.exponent.denom().lcm(other.exponent.denom());
        let a = rat_pow(&self.base, self.exponent.numer() * (l / self.exponent.denom()));
        let b = rat_pow(&other.base, other.exponent.numer() * (l / other.exponent.denom()));
        a.cmp(&b)
    }

    /// Approximate value, for display only.
    pub fn approx_f64(&self) -> f64 {
        let ln_base = ln_big(self.base.numer()) - ln_big(self.base.denom());
        (ln_base * self.exponent.to_f64().unwrap_or(f64::NAN)).exp()
    }
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().unwrap_or(f64::NAN).ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `r^e` for integer `e`, with `0^e` for `e < 0` left undefined by the caller.
pub fn rat_pow(r: &BigRational, e: i64) -> BigRational {
    let k = e.unsigned_abs() as usize;
    let numer = num_traits::pow(r.numer().clone(), k);
    let denom = num_traits::pow(r.denom().clone(), k);
    if e >= 0 {
        BigRational::new(numer, denom)
    } else {
        BigRational::new(denom, numer)
    }
}

/// Exact `k`-th root of a non-negative rational if it is a perfect `k`-th power.
pub fn rational_root(r: &BigRational, k: u32) -> Option<BigRational> {
    if k == 0 || r.is_negative() {
        return None;
    }
    let n = exact_root(&r.numer().magnitude().clone(), k)?;
    let d = exact_root(&r.denom().magnitude().clone(), k)?;
    Some(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn exact_root(x: &BigUint, k: u32) -> Option<BigUint> {
    let r = x.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *x).then_some(r)
}

impl fmt::Display for PowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.base.is_integer() {
            self.base.to_string()
        } else {
            format!("({})", self.base)
        };
        if self.exponent.is_integer() {
            write!(f, "{base}^{}", self.exponent)
        } else {
            write!(f, "{base}^({})", self.exponent)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PowerWire {
    base: String,
    num: i64,
    den: i64,
}

impl Serialize for PowerExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PowerWire {
            base: self.base.to_string(),
            num: *self.exponent.numer(),
            den: *self.exponent.denom(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = PowerWire::deserialize(d)?;
        let base: BigRational = w.base.parse().map_err(D::Error::custom)?;
        if w.den == 0 {
            return Err(D::Error::custom("zero exponent denominator"));
        }
        PowerExpr::new(base, Ratio::new(w.num, w.den)).map_err(D::Error::custom)
    }
}

/// One side of a certificate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    Rational(BigRational),
    Power(PowerExpr),
}

impl Quantity {
    pub fn int<T: Into<BigInt>>(x: T) -> Self {
        Quantity::Rational(BigRational::from_integer(x.into()))
    }

    pub fn ratio<T: Into<BigInt>>(n: T, d: T) -> Self {
        Quantity::Rational(BigRational::new(n.into(), d.into()))
    }

    /// Exact total order; powers are always positive.
    pub fn cmp_exact(&self, other: &Quantity) -> Ordering {
        use Quantity::*;
        match (self, other) {
            (Rational(a), Rational(b)) => a.cmp(b),
            (Power(a), Power(b)) => a.cmp_exact(b),
            (Rational(a), Power(b)) => {
                if !a.is_positive() {
                    Ordering::Less
                } else {
                    PowerExpr::from_rational(a.clone())
                        .expect("positive")
                        .cmp_exact(b)
                }
            }
            (Power(_), Rational(_)) => other.cmp_exact(self).reverse(),
        }
    }

    pub fn approx_f64(&self) -> f64 {
        match self {
            Quantity::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Quantity::Power(p) => p.approx_f64(),
        }
    }
}

impl From<PowerExpr> for Quantity {
    fn from(p: PowerExpr) -> Self {
        Quantity::Power(p)
    }
}

impl From<BigRational> for Quantity {
    fn from(r: BigRational) -> Self {
        Quantity::Rational(r)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Rational(r) => write!(f, "{r}"),
            Quantity::Power(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::Rational(r) => s.serialize_str(&r.to_string()),
            Quantity::Power(p) => p.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Power(PowerExpr),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s
                .parse::<BigRational>()
                .map(Quantity::Rational)
                .map_err(D::Error::custom),
            Raw::Power(p) => Ok(Quantity::Power(p)),
        }
    }
}
