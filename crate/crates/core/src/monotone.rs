//! Order continuous increasing maps `X → X` and their extension to `X^s`.
//!
//! A [`MonotoneMap`] is an expression tree. Its extension `f^s` is evaluated
//! structurally: leaves use extended arithmetic and the declared limit of
//! scalar functions at `+∞`, and composite nodes recurse, since extension
//! commutes with sums, composition, `∧` and `∨`.

use std::fmt;
use std::sync::Arc;

use crate::band::Band;
use crate::error::{check_dim, Error, Result};
use crate::expectation::CondExp;
use crate::scalar::{Ext, Scalar};
use crate::vector::{ExtVec, LatVec};

/// Value of a scalar function at `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum Limit<S> {
    Finite(S),
    Infinite,
    /// No limit declared; extending at an infinite coordinate is an error.
    Missing,
}

/// Continuous increasing function `ℝ → ℝ`, applied coordinatewise.
#[derive(Clone)]
pub enum ScalarFn<S> {
    Identity,
    /// `t ↦ slope·t + offset`, `slope ≥ 0`.
    Affine { slope: S, offset: S },
    /// `t ↦ t ∧ c`.
    CapAt(S),
    /// `t ↦ t ∨ c`.
    FloorAt(S),
    Custom {
        name: String,
        f: Arc<dyn Fn(&S) -> S + Send + Sync>,
        limit: Limit<S>,
    },
}

impl<S: Scalar> ScalarFn<S> {
    pub fn affine(slope: S, offset: S) -> Result<Self> {
        if slope < S::zero() {
            return Err(Error::Domain(format!("slope {slope} must be positive")));
        }
        Ok(ScalarFn::Affine { slope, offset })
    }

    pub fn eval(&self, t: &S) -> S {
        match self {
            ScalarFn::Identity => t.clone(),
            ScalarFn::Affine { slope, offset } => slope.clone() * t.clone() + offset.clone(),
            ScalarFn::CapAt(c) => S::min_of(t, c),
            ScalarFn::FloorAt(c) => S::max_of(t, c),
            ScalarFn::Custom { f, .. } => f(t),
        }
    }

    pub fn limit(&self) -> Limit<S> {
        match self {
            ScalarFn::Identity | ScalarFn::FloorAt(_) => Limit::Infinite,
            ScalarFn::Affine { slope, offset } => {
                if slope.is_zero() {
                    Limit::Finite(offset.clone())
                } else {
                    Limit::Infinite
                }
            }
            ScalarFn::CapAt(c) => Limit::Finite(c.clone()),
            ScalarFn::Custom { limit, .. } => limit.clone(),
        }
    }

    pub fn eval_ext(&self, t: &Ext<S>) -> Result<Ext<S>> {
        match t {
            Ext::Fin(v) => Ok(Ext::Fin(self.eval(v))),
            Ext::Inf => match self.limit() {
                Limit::Finite(v) => Ok(Ext::Fin(v)),
                Limit::Infinite => Ok(Ext::Inf),
                Limit::Missing => Err(Error::Domain(format!(
                    "scalar function {self:?} has no declared limit at +∞"
                ))),
            },
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for ScalarFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Identity => f.write_str("id"),
            ScalarFn::Affine { slope, offset } => write!(f, "{slope:?}·t + {offset:?}"),
            ScalarFn::CapAt(c) => write!(f, "t ∧ {c:?}"),
            ScalarFn::FloorAt(c) => write!(f, "t ∨ {c:?}"),
            ScalarFn::Custom { name, .. } => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone)]
pub enum MonotoneMap<S> {
    /// `x ↦ A x` for a square matrix with nonnegative entries (rows).
    Linear(Vec<Vec<S>>),
    Project(Band),
    Expect(CondExp<S>),
    Pointwise(ScalarFn<S>),
    /// `outer ∘ inner`.
    Compose(Box<MonotoneMap<S>>, Box<MonotoneMap<S>>),
    Sum(Box<MonotoneMap<S>>, Box<MonotoneMap<S>>),
    Meet(Box<MonotoneMap<S>>, Box<MonotoneMap<S>>),
    Join(Box<MonotoneMap<S>>, Box<MonotoneMap<S>>),
}

impl<S: Scalar> MonotoneMap<S> {
    pub fn linear(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            check_dim(n, row.len())?;
            if row.iter().any(|c| *c < S::zero()) {
                return Err(Error::Domain("matrix entries must be positive".into()));
            }
        }
        Ok(MonotoneMap::Linear(rows))
    }

    pub fn compose(outer: Self, inner: Self) -> Self {
        MonotoneMap::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn sum(a: Self, b: Self) -> Self {
        MonotoneMap::Sum(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Self, b: Self) -> Self {
        MonotoneMap::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Self, b: Self) -> Self {
        MonotoneMap::Join(Box::new(a), Box::new(b))
    }

    /// Bound on the magnitude of the constants in the tree. Beyond it, cap
    /// and floor nodes no longer switch branches.
    pub fn constant_bound(&self) -> u64 {
        match self {
            MonotoneMap::Linear(_) | MonotoneMap::Project(_) | MonotoneMap::Expect(_) => 0,
            MonotoneMap::Pointwise(f) => match f {
                ScalarFn::Identity | ScalarFn::Custom { .. } => 0,
                ScalarFn::CapAt(c) | ScalarFn::FloorAt(c) => c.abs().ceil_u64(),
                ScalarFn::Affine { slope, offset } => {
                    let scaled = if slope.is_zero() {
                        S::zero()
                    } else {
                        offset.abs() / slope.clone()
                    };
                    S::max_of(&offset.abs(), &scaled).ceil_u64()
                }
            },
            MonotoneMap::Compose(a, b)
            | MonotoneMap::Sum(a, b)
            | MonotoneMap::Meet(a, b)
            | MonotoneMap::Join(a, b) => a.constant_bound().max(b.constant_bound()),
        }
    }

    pub fn apply(&self, x: &LatVec<S>) -> Result<LatVec<S>> {
        match self {
            MonotoneMap::Linear(rows) => {
                check_dim(rows.len(), x.len())?;
                Ok(LatVec::new(
                    rows.iter()
                        .map(|row| {
                            row.iter()
                                .zip(x.coords())
                                .fold(S::zero(), |acc, (a, v)| acc + a.clone() * v.clone())
                        })
                        .collect(),
                ))
            }
            MonotoneMap::Project(b) => b.project_lat(x),
            MonotoneMap::Expect(t) => t.apply(x),
            MonotoneMap::Pointwise(f) => Ok(LatVec::new(x.coords().iter().map(|t| f.eval(t)).collect())),
            MonotoneMap::Compose(outer, inner) => outer.apply(&inner.apply(x)?),
            MonotoneMap::Sum(a, b) => a.apply(x)?.add(&b.apply(x)?),
            MonotoneMap::Meet(a, b) => a.apply(x)?.meet(&b.apply(x)?),
            MonotoneMap::Join(a, b) => a.apply(x)?.join(&b.apply(x)?),
        }
    }

    /// The left order continuous extension `f^s: X^s → X^s`.
    pub fn extend(&self, x: &ExtVec<S>) -> Result<ExtVec<S>> {
        match self {
            MonotoneMap::Linear(rows) => {
                check_dim(rows.len(), x.len())?;
                // Entries of x may be negative only where finite, so each row
                // sum is well defined: 0·∞ = 0, a·∞ = ∞ for a > 0.
                Ok(ExtVec::new(
                    rows.iter()
                        .map(|row| {
                            let mut acc = Ext::Fin(S::zero());
                            for (a, v) in row.iter().zip(x.coords()) {
                                let term = match v {
                                    Ext::Fin(v) => Ext::Fin(a.clone() * v.clone()),
                                    Ext::Inf if a.is_zero() => Ext::Fin(S::zero()),
                                    Ext::Inf => Ext::Inf,
                                };
                                acc = acc.add(&term);
                            }
                            acc
                        })
                        .collect(),
                ))
            }
            MonotoneMap::Project(b) => b.project(x),
            MonotoneMap::Expect(t) => t.extend(x),
            MonotoneMap::Pointwise(f) => Ok(ExtVec::new(
                x.coords().iter().map(|t| f.eval_ext(t)).collect::<Result<_>>()?,
            )),
            MonotoneMap::Compose(outer, inner) => outer.extend(&inner.extend(x)?),
            MonotoneMap::Sum(a, b) => a.extend(x)?.add(&b.extend(x)?),
            MonotoneMap::Meet(a, b) => a.extend(x)?.meet(&b.extend(x)?),
            MonotoneMap::Join(a, b) => a.extend(x)?.join(&b.extend(x)?),
        }
    }
}

/// `f^s(x)` for a map given as a tree.
pub fn extend_map<S: Scalar>(f: &MonotoneMap<S>, x: &ExtVec<S>) -> Result<ExtVec<S>> {
    f.extend(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::truncation_limit;
    use crate::scalar::Rational;
    use crate::vector::ext_ints;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
            .collect()
    }

    #[test]
    fn triangular_matrix_example() {
        let f = MonotoneMap::linear(ints(&[&[1, 1], &[0, 1]])).unwrap();
        let x = ext_ints(&[None, Some(2)]);
        assert_eq!(f.extend(&x).unwrap(), ext_ints(&[None, Some(2)]));
        assert_eq!(truncation_limit(&f, &x).unwrap(), f.extend(&x).unwrap());
    }

    #[test]
    fn projection_node_matches_project() {
        let b = Band::from_indices(3, &[0, 2]);
        let f = MonotoneMap::<Rational>::Project(b.clone());
        let x = ext_ints(&[None, None, Some(4)]);
        assert_eq!(f.extend(&x).unwrap(), b.project(&x).unwrap());
        let twice = MonotoneMap::compose(f.clone(), f.clone());
        assert_eq!(twice.extend(&x).unwrap(), f.extend(&x).unwrap());
    }

    #[test]
    fn scalar_limits() {
        let cap = MonotoneMap::<Rational>::Pointwise(ScalarFn::CapAt(Rational::from_int(3)));
        assert_eq!(
            cap.extend(&ext_ints(&[None, Some(1)])).unwrap(),
            ext_ints(&[Some(3), Some(1)])
        );
        let missing = MonotoneMap::<Rational>::Pointwise(ScalarFn::Custom {
            name: "cube".into(),
            f: Arc::new(|t: &Rational| t.clone() * t.clone() * t.clone()),
            limit: Limit::Missing,
        });
        assert!(missing.extend(&ext_ints(&[Some(2)])).is_ok());
        assert!(matches!(
            missing.extend(&ext_ints(&[None])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn negative_entries_rejected() {
        assert!(MonotoneMap::linear(ints(&[&[1, -1], &[0, 1]])).is_err());
    }
}
