//! Conditional expectations on the atomic model.
//!
//! A [`CondExp`] is determined by a partition of the atoms: `T x` replaces
//! `x` on each block by its weighted average. Such a `T` is a strictly
//! positive order continuous projection with `Te = e`, and every
//! conditional expectation on a finite atomic space has this form.

use crate::band::Band;
use crate::error::{check_dim, Error, Result};
use crate::scalar::{Ext, Scalar};
use crate::seq::VecSeq;
use crate::space::AtomicSpace;
use crate::vector::{ExtVec, LatVec};

/// Default cap on the family size accepted by [`CondExp::check_independence`].
pub const INDEPENDENCE_LIMIT: usize = 20;

/// An atom `a` with `T P_B e_a` and `P_B T e_a`, in that order.
pub type Witness<S> = (usize, LatVec<S>, LatVec<S>);

#[derive(Debug, Clone, PartialEq)]
pub struct CondExp<S> {
    weights: Vec<S>,
    /// Blocks in canonical order: atoms sorted, blocks sorted by first atom.
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    block_weight: Vec<S>,
}

/// ε values used by the definitional convergence-in-T-probability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TpConfig {
    /// Grid `1, 1/2, …, 2^-depth`.
    pub dyadic_depth: u32,
    /// Also test `ε = d/2` for every positive eventual deviation `d`, which
    /// makes the grid decisive.
    pub adaptive: bool,
}

impl Default for TpConfig {
    fn default() -> Self {
        Self {
            dyadic_depth: 12,
            adaptive: true,
        }
    }
}

/// A subfamily and complement choice on which factorization fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceViolation {
    /// Index of the partition block where the two sides differ.
    pub block: usize,
    /// `(band index, complemented)` for each member of the subfamily.
    pub choice: Vec<(usize, bool)>,
}

impl std::fmt::Display for IndependenceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .choice
            .iter()
            .map(|(i, c)| if *c { format!("P{i}^d") } else { format!("P{i}") })
            .collect();
        write!(f, "[{}] on block {}", parts.join(", "), self.block)
    }
}

impl<S: Scalar> CondExp<S> {
    pub fn new(space: &AtomicSpace<S>, partition: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.atom_count();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks = partition;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::Invalid("partition has an empty block".into()));
            }
            block.sort_unstable();
        }
        blocks.sort();
        for (b, block) in blocks.iter().enumerate() {
            for &a in block {
                if a >= n {
                    return Err(Error::Invalid(format!("atom {a} out of range 0..{n}")));
                }
                if block_of[a] != usize::MAX {
                    return Err(Error::Invalid(format!("atom {a} lies in two blocks")));
                }
                block_of[a] = b;
            }
        }
        if let Some(a) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::Invalid(format!("atom {a} is not covered by the partition")));
        }
        let weights = space.weights().to_vec();
        let block_weight = blocks
            .iter()
            .map(|block| block.iter().fold(S::zero(), |acc, &a| acc + weights[a].clone()))
            .collect();
        Ok(Self {
            weights,
            blocks,
            block_of,
            block_weight,
        })
    }

    /// Partition given by a block label per atom.
    pub fn from_labels(space: &AtomicSpace<S>, labels: &[usize]) -> Result<Self> {
        check_dim(space.atom_count(), labels.len())?;
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (a, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(a);
        }
        Self::new(space, groups.into_values().collect())
    }

    /// `T = I`: every atom its own block.
    pub fn identity(space: &AtomicSpace<S>) -> Self {
        Self::new(space, (0..space.atom_count()).map(|a| vec![a]).collect())
            .expect("singletons partition the atoms")
    }

    /// `T x = (Σ w_i x_i) e`: a single block.
    pub fn trivial(space: &AtomicSpace<S>) -> Self {
        Self::new(space, vec![(0..space.atom_count()).collect()])
            .expect("one block covers the atoms")
    }

    pub fn dim(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    fn average(&self, b: usize, f: impl Fn(usize) -> S) -> S {
        let total = self.blocks[b]
            .iter()
            .fold(S::zero(), |acc, &a| acc + self.weights[a].clone() * f(a));
        total / self.block_weight[b].clone()
    }

    fn spread(&self, per_block: &[S]) -> LatVec<S> {
        LatVec::new(self.block_of.iter().map(|&b| per_block[b].clone()).collect())
    }

    pub fn apply(&self, x: &LatVec<S>) -> Result<LatVec<S>> {
        check_dim(self.dim(), x.len())?;
        let avg: Vec<S> = (0..self.blocks.len())
            .map(|b| self.average(b, |a| x.coords()[a].clone()))
            .collect();
        Ok(self.spread(&avg))
    }

    /// `T P_B e`: the conditional probability of the band on each block.
    pub fn apply_indicator(&self, band: &Band) -> Result<LatVec<S>> {
        check_dim(self.dim(), band.len())?;
        let probs: Vec<S> = (0..self.blocks.len())
            .map(|b| {
                let inside = self.blocks[b]
                    .iter()
                    .filter(|&&a| band.contains(a))
                    .fold(S::zero(), |acc, &a| acc + self.weights[a].clone());
                inside / self.block_weight[b].clone()
            })
            .collect();
        Ok(self.spread(&probs))
    }

    /// The extension `T^s`, valid for any element of `X^s`: `+∞` on every
    /// block meeting the infinite band, the weighted average elsewhere.
    pub fn extend(&self, x: &ExtVec<S>) -> Result<ExtVec<S>> {
        check_dim(self.dim(), x.len())?;
        let per_block: Vec<Ext<S>> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(b, block)| {
                if block.iter().any(|&a| x.coords()[a].is_inf()) {
                    Ext::Inf
                } else {
                    Ext::Fin(self.average(b, |a| x.coords()[a].finite().expect("finite").clone()))
                }
            })
            .collect();
        Ok(ExtVec::new(
            self.block_of.iter().map(|&b| per_block[b].clone()).collect(),
        ))
    }

    /// `T^s x` for `x ≥ 0`.
    pub fn apply_ext(&self, x: &ExtVec<S>) -> Result<ExtVec<S>> {
        if !x.is_nonneg() {
            return Err(Error::Domain("T^s is applied to positive elements".into()));
        }
        self.extend(x)
    }

    /// `x ∈ R(T^s)`: constant on every block.
    pub fn in_range(&self, x: &ExtVec<S>) -> bool {
        x.len() == self.dim()
            && self.blocks.iter().all(|block| {
                let first = &x.coords()[block[0]];
                block.iter().all(|&a| &x.coords()[a] == first)
            })
    }

    pub fn in_range_lat(&self, x: &LatVec<S>) -> bool {
        x.len() == self.dim()
            && self.blocks.iter().all(|block| {
                let first = &x.coords()[block[0]];
                block.iter().all(|&a| &x.coords()[a] == first)
            })
    }

    /// The band is a union of blocks, i.e. `P_B e ∈ R(T)`.
    pub fn is_block_union(&self, band: &Band) -> bool {
        band.len() == self.dim()
            && self.blocks.iter().all(|block| {
                let first = band.contains(block[0]);
                block.iter().all(|&a| band.contains(a) == first)
            })
    }

    /// `TP_B = P_B T`.
    pub fn commutes(&self, band: &Band) -> bool {
        self.is_block_union(band)
    }

    /// A basis vector `e_a` with `T P_B e_a ≠ P_B T e_a`, together with both
    /// sides, if one exists.
    pub fn commutation_witness(
        &self,
        band: &Band,
    ) -> Result<Option<Witness<S>>> {
        check_dim(self.dim(), band.len())?;
        for a in 0..self.dim() {
            let basis = Band::from_indices(self.dim(), &[a]).indicator::<S>();
            let tp = self.apply(&band.project_lat(&basis)?)?;
            let pt = band.project_lat(&self.apply(&basis)?)?;
            if tp != pt {
                return Ok(Some((a, tp, pt)));
            }
        }
        Ok(None)
    }

    /// Every block of `self` lies inside a block of `coarser`, so that
    /// `self ∘ coarser = coarser ∘ self = coarser`.
    pub fn refines(&self, coarser: &Self) -> bool {
        self.dim() == coarser.dim()
            && self.blocks.iter().all(|block| {
                let target = coarser.block_of[block[0]];
                block.iter().all(|&a| coarser.block_of[a] == target)
            })
    }

    /// `n ↦ T P_{(|x_n − x| − εe)^+} e` for one ε.
    pub fn exceed_probabilities(
        &self,
        xs: &VecSeq<S>,
        target: &LatVec<S>,
        eps: &S,
    ) -> Result<VecSeq<S>> {
        check_dim(self.dim(), xs.dim())?;
        xs.exceed_masks(target, eps)?
            .indicators::<S>()
            .map_positive(|v| self.apply(v))
    }

    /// ε values tested by [`Self::tp_definitional`].
    pub fn tp_grid(&self, xs: &VecSeq<S>, target: &LatVec<S>, cfg: TpConfig) -> Result<Vec<S>> {
        let mut grid = Vec::new();
        let two = S::from_int(2);
        let mut eps = S::one();
        for _ in 0..=cfg.dyadic_depth {
            grid.push(eps.clone());
            eps = eps / two.clone();
        }
        if cfg.adaptive {
            for p in xs.limit_points() {
                for d in p.sub(target)?.abs().coords() {
                    if *d > S::zero() && !grid.contains(&(d.clone() / two.clone())) {
                        grid.push(d.clone() / two.clone());
                    }
                }
            }
        }
        Ok(grid)
    }

    /// Convergence in T-conditional probability from the definition: for
    /// every ε on the grid, `T P_{(|x_n − x| − εe)^+} e` order converges
    /// to 0.
    pub fn tp_definitional(&self, xs: &VecSeq<S>, target: &LatVec<S>, cfg: TpConfig) -> Result<bool> {
        for eps in self.tp_grid(xs, target, cfg)? {
            let probs = self.exceed_probabilities(xs, target, &eps)?;
            match probs.order_limit() {
                Some(l) if l.is_zero() => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// `T(|x_n − x| ∧ u)` order converges to 0.
    pub fn tp_truncated(&self, xs: &VecSeq<S>, target: &LatVec<S>, u: &LatVec<S>) -> Result<bool> {
        check_dim(self.dim(), xs.dim())?;
        check_dim(self.dim(), u.len())?;
        let ls = xs.tail_limsup_map(|v| self.apply(&v.sub(target)?.abs().meet(u)?))?;
        Ok(ls.is_zero())
    }

    /// The truncated form for `u` ranging over the atom indicators, a family
    /// whose band is the whole space.
    pub fn tp_spanning(&self, xs: &VecSeq<S>, target: &LatVec<S>) -> Result<bool> {
        for a in 0..self.dim() {
            let u = Band::from_indices(self.dim(), &[a]).indicator();
            if !self.tp_truncated(xs, target, &u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Convergence in T-conditional probability. Evaluates both the
    /// definitional form and `T(|x_n − x| ∧ e) → 0`, which must agree.
    pub fn tp_converges(&self, xs: &VecSeq<S>, target: &LatVec<S>) -> Result<bool> {
        let by_definition = self.tp_definitional(xs, target, TpConfig::default())?;
        let truncated = self.tp_truncated(xs, target, &LatVec::ones(self.dim()))?;
        if by_definition != truncated {
            return Err(Error::Internal(format!(
                "T-probability forms disagree: definitional {by_definition}, truncated {truncated}"
            )));
        }
        Ok(by_definition)
    }

    /// T-independence of `bands`: for every subfamily and every choice of
    /// `P_i` or `P_i^d`, `T(∏ Q_i e) = ∏ T(Q_i e)`.
    pub fn check_independence(&self, bands: &[Band]) -> Result<bool> {
        Ok(self.independence_violation(bands, INDEPENDENCE_LIMIT)?.is_none())
    }

    /// The first subfamily violating factorization, if any. Families larger
    /// than `limit` are rejected.
    pub fn independence_violation(
        &self,
        bands: &[Band],
        limit: usize,
    ) -> Result<Option<IndependenceViolation>> {
        if bands.len() > limit {
            return Err(Error::Size {
                size: bands.len(),
                limit,
            });
        }
        for b in bands {
            check_dim(self.dim(), b.len())?;
        }
        for (index, block) in self.blocks.iter().enumerate() {
            let wb = self.block_weight[index].clone();
            // Conditional probability of each band and its complement on this block.
            let probs: Vec<[S; 2]> = bands
                .iter()
                .map(|band| {
                    let inside = block
                        .iter()
                        .filter(|&&a| band.contains(a))
                        .fold(S::zero(), |acc, &a| acc + self.weights[a].clone());
                    let p = inside / wb.clone();
                    [p.clone(), S::one() - p]
                })
                .collect();
            let mut search = IndependenceSearch {
                weights: &self.weights,
                block_weight: &wb,
                bands,
                probs: &probs,
                choice: Vec::new(),
            };
            if let Some(choice) = search.run(0, block.clone(), S::one()) {
                return Ok(Some(IndependenceViolation { block: index, choice }));
            }
        }
        Ok(None)
    }
}

struct IndependenceSearch<'a, S> {
    weights: &'a [S],
    block_weight: &'a S,
    bands: &'a [Band],
    probs: &'a [[S; 2]],
    choice: Vec<(usize, bool)>,
}

impl<S: Scalar> IndependenceSearch<'_, S> {
    /// Depth-first over (absent, `P_i`, `P_i^d`) for `i ≥ next`. `cell` is
    /// the intersection chosen so far, `product` the product of the chosen
    /// conditional probabilities.
    fn run(&mut self, next: usize, cell: Vec<usize>, product: S) -> Option<Vec<(usize, bool)>> {
        let mass = cell
            .iter()
            .fold(S::zero(), |acc, &a| acc + self.weights[a].clone())
            / self.block_weight.clone();
        let tol = crate::scalar::float_tolerance();
        if !mass.close_to(&product, tol) {
            return Some(self.choice.clone());
        }
        // An empty cell with zero product stays that way for every extension.
        if cell.is_empty() || next == self.bands.len() {
            return None;
        }
        for i in next..self.bands.len() {
            for complemented in [false, true] {
                let narrowed: Vec<usize> = cell
                    .iter()
                    .copied()
                    .filter(|&a| self.bands[i].contains(a) != complemented)
                    .collect();
                let p = self.probs[i][usize::from(complemented)].clone();
                self.choice.push((i, complemented));
                let found = self.run(i + 1, narrowed, product.clone() * p);
                self.choice.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }
}
