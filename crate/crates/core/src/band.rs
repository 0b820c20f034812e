//! Bands of the atomic model, their projections, and the finite/infinite
//! part decomposition of positive elements of `X^s`.

use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::scalar::{Ext, Scalar};
use crate::seq::{TailRule, VecSeq};
use crate::vector::{ExtVec, LatVec};

/// A projection band: the set of atoms it contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Band {
    mask: Vec<bool>,
}

impl Band {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    pub fn from_indices(n: usize, atoms: &[usize]) -> Self {
        let mut mask = vec![false; n];
        for &a in atoms {
            mask[a] = true;
        }
        Self { mask }
    }

    pub fn full(n: usize) -> Self {
        Self {
            mask: vec![true; n],
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            mask: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.mask[atom]
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    /// The disjoint complement `B^d`.
    pub fn complement(&self) -> Self {
        Self {
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        Ok(Self {
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect(),
        })
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        Ok(Self {
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect(),
        })
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        check_dim(self.len(), other.len())?;
        Ok(self.mask.iter().zip(&other.mask).all(|(a, b)| !a || *b))
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        check_dim(self.len(), other.len())?;
        Ok(self.mask.iter().zip(&other.mask).all(|(a, b)| !(*a && *b)))
    }

    /// `P_B e`.
    pub fn indicator<S: Scalar>(&self) -> LatVec<S> {
        LatVec::new(
            self.mask
                .iter()
                .map(|&b| if b { S::one() } else { S::zero() })
                .collect(),
        )
    }

    /// `P_B^s x`: keeps the coordinates on `B`, zeroes the rest.
    pub fn project<S: Scalar>(&self, x: &ExtVec<S>) -> Result<ExtVec<S>> {
        check_dim(self.len(), x.len())?;
        Ok(ExtVec::new(
            x.coords()
                .iter()
                .zip(&self.mask)
                .map(|(c, &keep)| if keep { c.clone() } else { Ext::zero() })
                .collect(),
        ))
    }

    pub fn project_lat<S: Scalar>(&self, x: &LatVec<S>) -> Result<LatVec<S>> {
        check_dim(self.len(), x.len())?;
        Ok(LatVec::new(
            x.coords()
                .iter()
                .zip(&self.mask)
                .map(|(c, &keep)| if keep { c.clone() } else { S::zero() })
                .collect(),
        ))
    }

    /// `∞_B`, the greatest element of `B^s`.
    pub fn infinity_of<S: Scalar>(&self) -> ExtVec<S> {
        ExtVec::new(
            self.mask
                .iter()
                .map(|&b| if b { Ext::Inf } else { Ext::zero() })
                .collect(),
        )
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.atoms().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Splits `x ≥ 0` as `x = ∞_B + u` with `u ⊥ B`; returns `(B, u)`.
///
/// `B` is the set of atoms where `x` is infinite and `u` is the finite part.
pub fn split_parts<S: Scalar>(x: &ExtVec<S>) -> Result<(Band, LatVec<S>)> {
    if !x.is_nonneg() {
        return Err(Error::Domain("split_parts needs x ≥ 0".into()));
    }
    let band = x.infinite_band();
    let finite = LatVec::new(
        x.coords()
            .iter()
            .map(|c| c.finite().cloned().unwrap_or_else(S::zero))
            .collect(),
    );
    Ok((band, finite))
}

/// `x^∞` as an element of `X^s`.
pub fn infinite_part<S: Scalar>(x: &ExtVec<S>) -> Result<ExtVec<S>> {
    split_parts(x).map(|(b, _)| b.infinity_of())
}

/// `x^f`.
pub fn finite_part<S: Scalar>(x: &ExtVec<S>) -> Result<LatVec<S>> {
    split_parts(x).map(|(_, u)| u)
}

/// The band `⋀_k P_{(x − k·u)^+}`, computed as the infimum of the
/// decreasing masks `{x > k·u}`.
///
/// Beyond `k* = 1 + ⌈max finite x / min positive u⌉` the mask is constant,
/// which is checked rather than assumed. `u` defaults to `e`.
pub fn infinite_band_by_truncation<S: Scalar>(
    x: &ExtVec<S>,
    u: Option<&LatVec<S>>,
) -> Result<Band> {
    if !x.is_nonneg() {
        return Err(Error::Domain("x must be positive".into()));
    }
    let n = x.len();
    let unit = LatVec::ones(n);
    let u = u.unwrap_or(&unit);
    check_dim(n, u.len())?;
    if !u.is_nonneg() {
        return Err(Error::Domain("u must be positive".into()));
    }
    let max_finite = x
        .coords()
        .iter()
        .filter_map(Ext::finite)
        .fold(S::zero(), |a, b| S::max_of(&a, b));
    let min_pos = u
        .coords()
        .iter()
        .filter(|c| **c > S::zero())
        .fold(None::<S>, |acc, c| {
            Some(match acc {
                Some(m) => S::min_of(&m, c),
                None => c.clone(),
            })
        });
    let k_star = match min_pos {
        Some(m) => 1 + (max_finite / m).ceil_u64(),
        None => 1,
    };

    let mask_at = |k: u64| -> Band {
        let k = S::from_int(k as i64);
        Band::from_mask(
            x.coords()
                .iter()
                .zip(u.coords())
                .map(|(xc, uc)| match xc {
                    Ext::Inf => true,
                    Ext::Fin(v) => *v > k.clone() * uc.clone(),
                })
                .collect(),
        )
    };
    let mut acc = Band::full(n);
    for k in 1..=k_star {
        acc = acc.meet(&mask_at(k))?;
    }
    if mask_at(k_star + 1) != acc || mask_at(2 * k_star + 1) != acc {
        return Err(Error::Internal(format!(
            "truncation masks did not stabilize by k = {k_star}"
        )));
    }
    Ok(acc)
}

/// `lim_n (y ∧ R_n)` where `R_n = Σ_{k≥n} x_k`; equals `P_B y` for the
/// infinite band `B` of `Σ x_n`.
pub fn band_residual_limit<S: Scalar>(xs: &VecSeq<S>, y: &LatVec<S>) -> Result<LatVec<S>> {
    check_dim(xs.dim(), y.len())?;
    if !y.is_nonneg() {
        return Err(Error::Domain("y must be positive".into()));
    }
    if !xs.is_nonneg() {
        return Err(Error::Domain("series terms must be positive".into()));
    }
    let first_tail = xs.tail_start();
    let remainder = xs.remainder(first_tail)?;
    let meet = y.to_ext().meet(&remainder)?;
    match xs.tail() {
        // Remainders inside the tail are constant for these rules.
        TailRule::Zero | TailRule::Constant(_) | TailRule::Periodic(_) => meet
            .to_lat()
            .ok_or_else(|| Error::Internal("y ∧ R_n must be finite".into())),
        // R_{N+k} = r^k R_N is finite and decays to zero.
        TailRule::Geometric { .. } => {
            if !remainder.is_finite() {
                return Err(Error::Internal("geometric remainder is infinite".into()));
            }
            Ok(LatVec::zeros(y.len()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use crate::vector::ext_ints;

    const INF: Option<i64> = None;

    fn ev(values: &[Option<i64>]) -> ExtVec<Rational> {
        ext_ints(values)
    }

    #[test]
    fn projections() {
        let x = ev(&[INF, Some(3)]);
        let b = Band::from_indices(2, &[0]);
        assert_eq!(b.project(&x).unwrap(), ev(&[INF, Some(0)]));
        assert_eq!(Band::full(2).project(&x).unwrap(), x);
        assert!(Band::empty(2).project(&x).unwrap().is_zero());
        let sum = b
            .project(&x)
            .unwrap()
            .add(&b.complement().project(&x).unwrap())
            .unwrap();
        assert_eq!(sum, x);
    }

    #[test]
    fn infinity_elements() {
        let b = Band::from_indices(3, &[1]);
        assert_eq!(b.infinity_of::<Rational>(), ev(&[Some(0), INF, Some(0)]));
        assert!(Band::empty(3).infinity_of::<Rational>().is_zero());
        let c = Band::from_indices(3, &[1, 2]);
        let bi: ExtVec<Rational> = b.infinity_of();
        let ci = c.infinity_of();
        assert_eq!(bi.meet(&ci).unwrap(), b.meet(&c).unwrap().infinity_of());
        assert_eq!(bi.add(&ci).unwrap(), b.join(&c).unwrap().infinity_of());
    }

    #[test]
    fn split_examples() {
        let (b, u) = split_parts(&ev(&[INF, Some(3), INF])).unwrap();
        assert_eq!(b, Band::from_indices(3, &[0, 2]));
        assert_eq!(u, LatVec::from_ints(&[0, 3, 0]));
        let (b, u) = split_parts(&ev(&[Some(1), Some(2)])).unwrap();
        assert!(b.is_empty());
        assert_eq!(u, LatVec::from_ints(&[1, 2]));
        let (b, u) = split_parts(&ExtVec::<Rational>::greatest(2)).unwrap();
        assert!(b.is_full() && u.is_zero());
        assert!(split_parts(&ev(&[Some(-1)])).is_err());
    }

    #[test]
    fn truncation_band() {
        let x = ev(&[INF, Some(3), Some(0)]);
        assert_eq!(
            infinite_band_by_truncation(&x, None).unwrap(),
            Band::from_indices(3, &[0])
        );
        assert!(infinite_band_by_truncation(&ev(&[Some(7), Some(2)]), None)
            .unwrap()
            .is_empty());
        // u vanishes at atom 1: atom 1 belongs iff x_1 > 0.
        let u = LatVec::new(vec![ratio(1, 2), ratio(0, 1), ratio(0, 1)]);
        let x = ev(&[Some(9), Some(2), Some(0)]);
        assert_eq!(
            infinite_band_by_truncation(&x, Some(&u)).unwrap(),
            Band::from_indices(3, &[1])
        );
    }

    #[test]
    fn residual_limit() {
        let xs = VecSeq::new(
            2,
            vec![LatVec::from_ints(&[3, 0])],
            TailRule::Constant(LatVec::from_ints(&[0, 1])),
        )
        .unwrap();
        let y = LatVec::from_ints(&[2, 5]);
        assert_eq!(
            band_residual_limit(&xs, &y).unwrap(),
            LatVec::from_ints(&[0, 5])
        );
        let zero = VecSeq::<Rational>::new(2, vec![], TailRule::Zero).unwrap();
        assert!(band_residual_limit(&zero, &y).unwrap().is_zero());
        let geo = VecSeq::new(
            2,
            vec![],
            TailRule::Geometric {
                v: LatVec::from_ints(&[1, 2]),
                ratio: ratio(1, 2),
            },
        )
        .unwrap();
        assert!(band_residual_limit(&geo, &y).unwrap().is_zero());
    }
}
