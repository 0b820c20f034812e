use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::LatVec;

/// Tolerance used to validate that float weights sum to one.
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A finite set of atoms carrying strictly positive weights that sum to one.
///
/// This is the concrete Dedekind complete space `X = ℝ^Ω`; the weak order
/// unit is the all-ones vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicSpace<S> {
    weights: Vec<S>,
}

impl<S: Scalar> AtomicSpace<S> {
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("a space needs at least one atom".into()));
        }
        if let Some(i) = weights.iter().position(|w| *w <= S::zero()) {
            return Err(Error::Invalid(format!(
                "weight of atom {i} is {} but must be positive",
                weights[i]
            )));
        }
        let total = weights.iter().cloned().fold(S::zero(), |a, b| a + b);
        if !total.close_to(&S::one(), WEIGHT_SUM_TOL) {
            return Err(Error::Invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(atoms: usize) -> Result<Self> {
        let n = i64::try_from(atoms).map_err(|_| Error::Size {
            size: atoms,
            limit: i64::MAX as usize,
        })?;
        if n == 0 {
            return Err(Error::Invalid("a space needs at least one atom".into()));
        }
        Self::new(vec![S::from_ratio(1, n); atoms])
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// The weak order unit `e`.
    pub fn unit(&self) -> LatVec<S> {
        LatVec::ones(self.atom_count())
    }

    pub fn zero(&self) -> LatVec<S> {
        LatVec::zeros(self.atom_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn rejects_bad_weights() {
        assert!(AtomicSpace::new(vec![ratio(1, 2), ratio(2, 5)]).is_err());
        assert!(AtomicSpace::new(vec![ratio(1, 1), ratio(0, 1)]).is_err());
        assert!(AtomicSpace::<Rational>::new(vec![]).is_err());
        assert!(AtomicSpace::new(vec![ratio(1, 1)]).is_ok());
    }

    #[test]
    fn unit_is_a_weak_order_unit() {
        let space = AtomicSpace::<Rational>::uniform(3).unwrap();
        let e = space.unit();
        // x ≥ 0 with x ∧ e = 0 forces x = 0, atom by atom.
        for i in 0..3 {
            let mut x = space.zero();
            x.coords_mut()[i] = ratio(1, 7);
            assert!(!x.meet(&e).unwrap().is_zero());
        }
    }
}
