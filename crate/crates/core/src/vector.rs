//! Elements of `X` ([`LatVec`]) and of the sup-completion `X^s` ([`ExtVec`])
//! over a finite set of atoms, with the lattice-cone operations.

use std::fmt;

use crate::band::Band;
use crate::error::{check_dim, Error, Result};
use crate::scalar::{Ext, Scalar};

/// An element of `X`: one finite coordinate per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct LatVec<S>(Vec<S>);

/// An element of `X^s`: one coordinate in `ℝ ∪ {+∞}` per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtVec<S>(Vec<Ext<S>>);

fn zip_with<A, B, C>(a: &[A], b: &[B], f: impl Fn(&A, &B) -> C) -> Result<Vec<C>> {
    check_dim(a.len(), b.len())?;
    Ok(a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
}

impl<S: Scalar> LatVec<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![S::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![S::one(); n])
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self(vec![c; n])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| S::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [S] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<S> {
        self.0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, |a, b| a.clone() + b.clone()).map(Self)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, |a, b| a.clone() - b.clone()).map(Self)
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self(self.0.iter().map(|a| factor.clone() * a.clone()).collect())
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, S::min_of).map(Self)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, S::max_of).map(Self)
    }

    /// Coordinatewise product (the f-algebra product with unit `e`).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, |a, b| a.clone() * b.clone()).map(Self)
    }

    pub fn abs(&self) -> Self {
        Self(self.0.iter().map(Scalar::abs).collect())
    }

    pub fn pos_part(&self) -> Self {
        Self(self.0.iter().map(|a| S::max_of(a, &S::zero())).collect())
    }

    pub fn neg_part(&self) -> Self {
        Self(self.0.iter().map(|a| S::max_of(&-a.clone(), &S::zero())).collect())
    }

    /// `|x|^r` coordinatewise; exact for integral `r`.
    pub fn abs_pow(&self, r: f64) -> Result<Self> {
        self.0
            .iter()
            .map(|a| a.abs().powf(r))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn exp(&self) -> Result<Self> {
        self.0.iter().map(Scalar::exp).collect::<Result<Vec<_>>>().map(Self)
    }

    pub fn le(&self, other: &Self) -> Result<bool> {
        check_dim(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    pub fn le_tol(&self, other: &Self, tol: f64) -> Result<bool> {
        check_dim(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a.le_tol(b, tol)))
    }

    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.close_to(b, tol))
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|a| *a >= S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    /// Band generated by the vector: atoms with a nonzero coordinate.
    pub fn support(&self) -> Band {
        Band::from_mask(self.0.iter().map(|a| !a.is_zero()).collect())
    }

    /// Atoms with a strictly positive coordinate, i.e. the band of `x^+`.
    pub fn positive_band(&self) -> Band {
        Band::from_mask(self.0.iter().map(|a| *a > S::zero()).collect())
    }

    pub fn to_ext(&self) -> ExtVec<S> {
        ExtVec(self.0.iter().cloned().map(Ext::Fin).collect())
    }

    pub fn sum(&self) -> S {
        self.0.iter().cloned().fold(S::zero(), |a, b| a + b)
    }
}

impl<S: Scalar> ExtVec<S> {
    pub fn new(coords: Vec<Ext<S>>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Ext::zero(); n])
    }

    /// The greatest element of `X^s`: `+∞` everywhere.
    pub fn greatest(n: usize) -> Self {
        Self(vec![Ext::Inf; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Ext<S>] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Ext<S>> {
        self.0
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, Ext::min).map(Self)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, Ext::max).map(Self)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        zip_with(&self.0, &other.0, Ext::add).map(Self)
    }

    /// Cone scalar multiplication. `0·x = 0` for every `x`, including
    /// infinite coordinates; negative factors are only allowed on finite
    /// vectors.
    pub fn scale(&self, factor: &S) -> Result<Self> {
        let zero = S::zero();
        if *factor < zero && !self.is_finite() {
            return Err(Error::Domain(format!(
                "cannot scale a vector with infinite coordinates by {factor}"
            )));
        }
        Ok(Self(
            self.0
                .iter()
                .map(|c| match c {
                    _ if factor.is_zero() => Ext::zero(),
                    Ext::Fin(v) => Ext::Fin(factor.clone() * v.clone()),
                    Ext::Inf => Ext::Inf,
                })
                .collect(),
        ))
    }

    /// `x − a` for a finite `a`; only elements of `X` are invertible.
    pub fn sub_finite(&self, a: &LatVec<S>) -> Result<Self> {
        zip_with(&self.0, a.coords(), |x, a| match x {
            Ext::Fin(v) => Ext::Fin(v.clone() - a.clone()),
            Ext::Inf => Ext::Inf,
        })
        .map(Self)
    }

    /// `x^+ = x ∨ 0`.
    pub fn pos_part(&self) -> Self {
        Self(self.0.iter().map(|c| c.max(&Ext::zero())).collect())
    }

    /// `x^- = −(x ∧ 0)`, always finite.
    pub fn neg_part(&self) -> LatVec<S> {
        LatVec(
            self.0
                .iter()
                .map(|c| match c {
                    Ext::Fin(v) if *v < S::zero() => -v.clone(),
                    _ => S::zero(),
                })
                .collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| !c.is_inf())
    }

    pub fn to_lat(&self) -> Option<LatVec<S>> {
        self.0
            .iter()
            .map(|c| c.finite().cloned())
            .collect::<Option<Vec<_>>>()
            .map(LatVec)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|c| !c.is_neg())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Ext::is_zero)
    }

    pub fn le(&self, other: &Self) -> Result<bool> {
        check_dim(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    pub fn le_tol(&self, other: &Self, tol: f64) -> Result<bool> {
        check_dim(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a.le_tol(b, tol)))
    }

    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.close_to(b, tol))
    }

    /// Atoms where the coordinate is `+∞`.
    pub fn infinite_band(&self) -> Band {
        Band::from_mask(self.0.iter().map(Ext::is_inf).collect())
    }

    /// Atoms with a nonzero coordinate.
    pub fn support(&self) -> Band {
        Band::from_mask(self.0.iter().map(|c| !c.is_zero()).collect())
    }

    /// Atoms with a strictly positive coordinate (`+∞` included).
    pub fn positive_band(&self) -> Band {
        Band::from_mask(self.0.iter().map(Ext::is_pos).collect())
    }

    /// Riesz decomposition: given `x ≤ y + z`, returns `(y₁, z₁)` with
    /// `y₁ ≤ y`, `z₁ ≤ z` and `y₁ + z₁ = x`.
    ///
    /// Coordinatewise: `y₁ = y ∧ (x + z^-)` and `z₁ = x − y₁`, except that
    /// `z₁ = −z^-` where `y₁ = x = +∞`. On nonnegative inputs this is the
    /// greedy rule `y₁ = x ∧ y`. Finite `x` yields finite parts.
    pub fn riesz_decompose(&self, y: &Self, z: &Self) -> Result<(Self, Self)> {
        check_dim(self.len(), y.len())?;
        check_dim(self.len(), z.len())?;
        if !self.le(&y.add(z)?)? {
            return Err(Error::Contract(
                "riesz_decompose requires x ≤ y + z".into(),
            ));
        }
        let mut y1 = Vec::with_capacity(self.len());
        let mut z1 = Vec::with_capacity(self.len());
        for ((x, y), z) in self.0.iter().zip(&y.0).zip(&z.0) {
            let z_neg = match z {
                Ext::Fin(v) if *v < S::zero() => -v.clone(),
                _ => S::zero(),
            };
            let cap = x.add(&Ext::Fin(z_neg.clone()));
            let a = y.min(&cap);
            let b = match (x, &a) {
                (Ext::Fin(xv), Ext::Fin(av)) => Ext::Fin(xv.clone() - av.clone()),
                (Ext::Inf, Ext::Fin(_)) => Ext::Inf,
                (Ext::Inf, Ext::Inf) => Ext::Fin(-z_neg),
                (Ext::Fin(_), Ext::Inf) => {
                    return Err(Error::Internal("finite x produced an infinite part".into()))
                }
            };
            y1.push(a);
            z1.push(b);
        }
        Ok((Self(y1), Self(z1)))
    }

    /// Product on `X^s_+`: coordinatewise with `0·∞ = 0`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if !self.is_nonneg() || !other.is_nonneg() {
            return Err(Error::Domain("multiplication is defined on X^s_+ only".into()));
        }
        zip_with(&self.0, &other.0, Ext::mul_nonneg).map(Self)
    }

    /// `x·∞_B = ∞_{P_B x}`: `+∞` on the atoms of `B` where `x > 0`.
    pub fn mul_infinity_band(&self, band: &Band) -> Result<Self> {
        if !self.is_nonneg() {
            return Err(Error::Domain("mul_infinity_band needs x ≥ 0".into()));
        }
        check_dim(self.len(), band.len())?;
        Ok(Self(
            self.0
                .iter()
                .zip(band.mask())
                .map(|(c, &inside)| if inside && c.is_pos() { Ext::Inf } else { Ext::zero() })
                .collect(),
        ))
    }

    /// `exp(−x)` for `x ≥ 0` with `exp(−∞) = 0`. Float backend only.
    pub fn exp_neg(&self) -> Result<LatVec<S>> {
        if !self.is_nonneg() {
            return Err(Error::Domain("exp_neg needs x ≥ 0".into()));
        }
        self.0
            .iter()
            .map(|c| match c {
                Ext::Fin(v) => (-v.clone()).exp(),
                Ext::Inf => {
                    // Keep the backend check even for all-infinite input.
                    S::zero().exp().map(|_| S::zero())
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(LatVec)
    }

    /// `x ∧ k·e`, always finite.
    pub fn truncate(&self, k: &S) -> Result<LatVec<S>> {
        if !self.is_nonneg() {
            return Err(Error::Domain("truncate needs x ≥ 0".into()));
        }
        if *k <= S::zero() {
            return Err(Error::Domain(format!("truncation level {k} must be positive")));
        }
        Ok(LatVec(
            self.0
                .iter()
                .map(|c| match c {
                    Ext::Fin(v) => S::min_of(v, k),
                    Ext::Inf => k.clone(),
                })
                .collect(),
        ))
    }
}

impl<S: Scalar> From<LatVec<S>> for ExtVec<S> {
    fn from(v: LatVec<S>) -> Self {
        v.to_ext()
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    f.write_str("[")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str("]")
}

impl<S: fmt::Display> fmt::Display for LatVec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

impl<S: fmt::Display> fmt::Display for ExtVec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// Builds an [`ExtVec`] from integers, with `None` standing for `+∞`.
pub fn ext_ints<S: Scalar>(values: &[Option<i64>]) -> ExtVec<S> {
    ExtVec(
        values
            .iter()
            .map(|v| match v {
                Some(n) => Ext::Fin(S::from_int(*n)),
                None => Ext::Inf,
            })
            .collect(),
    )
}
