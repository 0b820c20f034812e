//! Scalar backends and the extended scalar `ℝ ∪ {+∞}`.
//!
//! Two backends implement [`Scalar`]: exact rationals ([`Rational`], the
//! default for algebraic identities) and `f64` (needed for `exp`). Code in
//! the kernel is generic over the backend; only the transcendental functions
//! differ.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact arbitrary precision rational.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => f.write_str("rational"),
            Backend::Float => f.write_str("float"),
        }
    }
}

/// Number type of a finite coordinate.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Smallest integer `≥ self`, clamped below at 0.
    fn ceil_u64(&self) -> u64;

    fn exp(&self) -> Result<Self>;

    /// `self^r` for `self ≥ 0`. Integral `r` is exact on every backend.
    fn powf(&self, r: f64) -> Result<Self>;

    /// Equality up to `tol` on inexact backends; exact equality otherwise.
    fn close_to(&self, other: &Self, tol: f64) -> bool;

    /// `self ≤ other` up to `tol` on inexact backends.
    fn le_tol(&self, other: &Self, tol: f64) -> bool {
        *self <= *other || self.close_to(other, tol)
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

fn int_pow<S: Scalar>(base: &S, exp: u32) -> S {
    let mut acc = S::one();
    for _ in 0..exp {
        acc = acc * base.clone();
    }
    acc
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn ceil_u64(&self) -> u64 {
        if self.is_negative() {
            0
        } else {
            self.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
        }
    }

    fn exp(&self) -> Result<Self> {
        Err(Error::Backend {
            needed: Backend::Float,
        })
    }

    fn powf(&self, r: f64) -> Result<Self> {
        if r >= 0.0 && r.fract() == 0.0 && r <= u32::MAX as f64 {
            Ok(int_pow(self, r as u32))
        } else {
            Err(Error::Backend {
                needed: Backend::Float,
            })
        }
    }

    fn close_to(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(q: &Rational) -> Self {
        Scalar::to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn ceil_u64(&self) -> u64 {
        if *self <= 0.0 {
            0
        } else {
            self.ceil() as u64
        }
    }

    fn exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }

    fn powf(&self, r: f64) -> Result<Self> {
        if *self < 0.0 {
            return Err(Error::Domain(format!("power of negative base {self}")));
        }
        if r.fract() == 0.0 && (0.0..=64.0).contains(&r) {
            Ok(int_pow(self, r as u32))
        } else {
            Ok(f64::powf(*self, r))
        }
    }

    fn close_to(&self, other: &Self, tol: f64) -> bool {
        self == other || (self - other).abs() <= tol
    }
}

/// A value of `ℝ ∪ {+∞}`. There is no `−∞`: elements of the sup-completion
/// have finite negative parts.
#[derive(Debug, Clone, PartialEq)]
pub enum Ext<S> {
    Fin(S),
    Inf,
}

impl<S: Scalar> Ext<S> {
    pub fn zero() -> Self {
        Ext::Fin(S::zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ext::Inf)
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            Ext::Fin(v) => Some(v),
            Ext::Inf => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Fin(v) if v.is_zero())
    }

    /// Strictly positive (`+∞` counts).
    pub fn is_pos(&self) -> bool {
        match self {
            Ext::Fin(v) => *v > S::zero(),
            Ext::Inf => true,
        }
    }

    pub fn is_neg(&self) -> bool {
        matches!(self, Ext::Fin(v) if *v < S::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a.clone() + b.clone()),
            _ => Ext::Inf,
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(S::min_of(a, b)),
            (Ext::Inf, b) => b.clone(),
            (a, Ext::Inf) => a.clone(),
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(S::max_of(a, b)),
            _ => Ext::Inf,
        }
    }

    /// Product of two nonnegative values with `0·∞ = 0`.
    pub fn mul_nonneg(&self, other: &Self) -> Self {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a.clone() * b.clone()),
            (Ext::Inf, b) | (b, Ext::Inf) => {
                if b.is_zero() {
                    Ext::zero()
                } else {
                    Ext::Inf
                }
            }
        }
    }

    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.close_to(b, tol),
            (Ext::Inf, Ext::Inf) => true,
            _ => false,
        }
    }

    pub fn le_tol(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.le_tol(b, tol),
            (_, Ext::Inf) => true,
            (Ext::Inf, Ext::Fin(_)) => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Ext::Fin(v) => v.to_f64(),
            Ext::Inf => f64::INFINITY,
        }
    }
}

impl<S: Scalar> PartialOrd for Ext<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.partial_cmp(b),
            (Ext::Inf, Ext::Inf) => Some(Ordering::Equal),
            (Ext::Inf, Ext::Fin(_)) => Some(Ordering::Greater),
            (Ext::Fin(_), Ext::Inf) => Some(Ordering::Less),
        }
    }
}

impl<S: Scalar> From<S> for Ext<S> {
    fn from(v: S) -> Self {
        Ext::Fin(v)
    }
}

impl<S: Display> Display for Ext<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(v) => write!(f, "{v}"),
            Ext::Inf => f.write_str("inf"),
        }
    }
}

/// Environment variable overriding [`DEFAULT_FLOAT_TOL`].
pub const FLOAT_TOL_ENV: &str = "SUPCONE_FLOAT_TOL";

/// Absolute tolerance for identity checks on the float backend.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

/// The float tolerance in effect: `SUPCONE_FLOAT_TOL` if set to a positive
/// number, otherwise [`DEFAULT_FLOAT_TOL`].
pub fn float_tolerance() -> f64 {
    std::env::var(FLOAT_TOL_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(DEFAULT_FLOAT_TOL)
}

/// `num/den` as a [`Rational`].
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_dominates_every_finite_value() {
        let big = Ext::Fin(ratio(1_000_000, 1));
        assert!(big < Ext::Inf);
        assert_eq!(big.max(&Ext::Inf), Ext::Inf);
        assert_eq!(Ext::<Rational>::Inf.min(&big), big);
        assert_eq!(big.add(&Ext::Inf), Ext::Inf);
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        let z = Ext::<Rational>::zero();
        assert_eq!(z.mul_nonneg(&Ext::Inf), z);
        assert_eq!(Ext::Inf.mul_nonneg(&Ext::Fin(ratio(1, 3))), Ext::Inf);
    }

    #[test]
    fn rational_has_no_exp() {
        assert_eq!(
            ratio(1, 2).exp(),
            Err(Error::Backend {
                needed: Backend::Float
            })
        );
        assert_eq!(ratio(1, 2).powf(2.0).unwrap(), ratio(1, 4));
        assert_eq!(ratio(7, 2).ceil_u64(), 4);
        assert_eq!(ratio(-7, 2).ceil_u64(), 0);
    }
}
