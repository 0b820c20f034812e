//! Sequences described by a finite prefix and a symbolic tail rule.
//!
//! Every limit, `limsup`/`liminf`, oscillation and series over such a
//! sequence has a closed form, so convergence questions are decided exactly
//! rather than by truncation. Indices are 1-based: `term(1)` is the first
//! term, and the tail starts at `tail_start()`.

use crate::band::Band;
use crate::error::{check_dim, Error, Result};
use crate::scalar::{Ext, Scalar};
use crate::vector::{ExtVec, LatVec};

/// Bound on the search for the index where a geometric tail settles.
const MAX_SETTLE_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum TailRule<S> {
    Zero,
    Constant(LatVec<S>),
    /// Repeats the listed terms forever.
    Periodic(Vec<LatVec<S>>),
    /// Tail term `k` (counting from 0) is `ratio^k · v`.
    Geometric { v: LatVec<S>, ratio: S },
}

impl<S: Scalar> TailRule<S> {
    /// Tail term at offset `k ≥ 0`.
    pub fn term(&self, k: usize, dim: usize) -> LatVec<S> {
        match self {
            TailRule::Zero => LatVec::zeros(dim),
            TailRule::Constant(v) => v.clone(),
            TailRule::Periodic(vs) => vs[k % vs.len()].clone(),
            TailRule::Geometric { v, ratio } => v.scale(&pow(ratio, k)),
        }
    }

    pub fn period(&self) -> usize {
        match self {
            TailRule::Periodic(vs) => vs.len(),
            _ => 1,
        }
    }

    /// The set of limit points of the tail (each attained or approached).
    pub fn limit_points(&self, dim: usize) -> Vec<LatVec<S>> {
        match self {
            TailRule::Zero | TailRule::Geometric { .. } => vec![LatVec::zeros(dim)],
            TailRule::Constant(v) => vec![v.clone()],
            TailRule::Periodic(vs) => vs.clone(),
        }
    }

    /// The rule describing the tail from offset `k0` on.
    pub fn shifted(&self, k0: usize) -> Self {
        match self {
            TailRule::Zero | TailRule::Constant(_) => self.clone(),
            TailRule::Periodic(vs) => {
                let p = vs.len();
                TailRule::Periodic((0..p).map(|i| vs[(k0 + i) % p].clone()).collect())
            }
            TailRule::Geometric { v, ratio } => TailRule::Geometric {
                v: v.scale(&pow(ratio, k0)),
                ratio: ratio.clone(),
            },
        }
    }

    fn is_nonneg(&self) -> bool {
        match self {
            TailRule::Zero => true,
            TailRule::Constant(v) | TailRule::Geometric { v, .. } => v.is_nonneg(),
            TailRule::Periodic(vs) => vs.iter().all(LatVec::is_nonneg),
        }
    }
}

fn pow<S: Scalar>(base: &S, k: usize) -> S {
    let mut acc = S::one();
    let mut b = base.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        e >>= 1;
    }
    acc
}

fn fold_coords<S: Scalar>(vs: &[LatVec<S>], dim: usize, pick: fn(&S, &S) -> S) -> LatVec<S> {
    let mut iter = vs.iter();
    let Some(first) = iter.next() else {
        return LatVec::zeros(dim);
    };
    let mut acc = first.coords().to_vec();
    for v in iter {
        for (a, b) in acc.iter_mut().zip(v.coords()) {
            *a = pick(a, b);
        }
    }
    LatVec::new(acc)
}

/// A sequence of elements of `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct VecSeq<S> {
    dim: usize,
    prefix: Vec<LatVec<S>>,
    tail: TailRule<S>,
}

impl<S: Scalar> VecSeq<S> {
    pub fn new(dim: usize, prefix: Vec<LatVec<S>>, tail: TailRule<S>) -> Result<Self> {
        for v in &prefix {
            check_dim(dim, v.len())?;
        }
        match &tail {
            TailRule::Zero => {}
            TailRule::Constant(v) => check_dim(dim, v.len())?,
            TailRule::Periodic(vs) => {
                if vs.is_empty() {
                    return Err(Error::Invalid("periodic tail needs at least one term".into()));
                }
                for v in vs {
                    check_dim(dim, v.len())?;
                }
            }
            TailRule::Geometric { v, ratio } => {
                check_dim(dim, v.len())?;
                if !(*ratio > S::zero() && *ratio < S::one()) {
                    return Err(Error::Invalid(format!(
                        "geometric ratio {ratio} must lie in (0, 1)"
                    )));
                }
                if !v.is_nonneg() {
                    return Err(Error::Invalid("geometric tail vector must be positive".into()));
                }
            }
        }
        Ok(Self { dim, prefix, tail })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            prefix: Vec::new(),
            tail: TailRule::Zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prefix(&self) -> &[LatVec<S>] {
        &self.prefix
    }

    pub fn tail(&self) -> &TailRule<S> {
        &self.tail
    }

    /// Index of the first tail term.
    pub fn tail_start(&self) -> usize {
        self.prefix.len() + 1
    }

    pub fn period(&self) -> usize {
        self.tail.period()
    }

    /// Last index worth inspecting: the prefix, one full period of the tail
    /// and one more term.
    pub fn horizon(&self) -> usize {
        self.prefix.len() + self.period() + 1
    }

    /// The `n`-th term, `n ≥ 1`.
    pub fn term(&self, n: usize) -> LatVec<S> {
        assert!(n >= 1, "sequences are indexed from 1");
        if n <= self.prefix.len() {
            self.prefix[n - 1].clone()
        } else {
            self.tail.term(n - self.tail_start(), self.dim)
        }
    }

    /// The tail rule seen from index `n0 ≥ tail_start()`.
    pub fn tail_from(&self, n0: usize) -> TailRule<S> {
        assert!(n0 >= self.tail_start());
        self.tail.shifted(n0 - self.tail_start())
    }

    /// Same sequence with the prefix extended to `len` terms.
    pub fn with_prefix_len(&self, len: usize) -> Self {
        if len <= self.prefix.len() {
            return self.clone();
        }
        Self {
            dim: self.dim,
            prefix: (1..=len).map(|n| self.term(n)).collect(),
            tail: self.tail_from(len + 1),
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.prefix.iter().all(LatVec::is_nonneg) && self.tail.is_nonneg()
    }

    /// Applies a positive linear map termwise.
    pub fn map_positive(&self, f: impl Fn(&LatVec<S>) -> Result<LatVec<S>>) -> Result<Self> {
        let prefix = self.prefix.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let tail = match &self.tail {
            TailRule::Zero => TailRule::Zero,
            TailRule::Constant(v) => TailRule::Constant(f(v)?),
            TailRule::Periodic(vs) => TailRule::Periodic(vs.iter().map(&f).collect::<Result<_>>()?),
            TailRule::Geometric { v, ratio } => TailRule::Geometric {
                v: f(v)?,
                ratio: ratio.clone(),
            },
        };
        let dim = prefix
            .first()
            .map(LatVec::len)
            .unwrap_or_else(|| match &tail {
                TailRule::Constant(v) | TailRule::Geometric { v, .. } => v.len(),
                TailRule::Periodic(vs) => vs[0].len(),
                TailRule::Zero => self.dim,
            });
        Self::new(dim, prefix, tail)
    }

    /// `n ↦ P_B x_n`.
    pub fn project(&self, band: &Band) -> Result<Self> {
        check_dim(self.dim, band.len())?;
        self.map_positive(|v| band.project_lat(v))
    }

    pub fn limit_points(&self) -> Vec<LatVec<S>> {
        self.tail.limit_points(self.dim)
    }

    /// The order limit, if the sequence order converges. In the atomic model
    /// this is coordinatewise convergence.
    pub fn order_limit(&self) -> Option<LatVec<S>> {
        match &self.tail {
            TailRule::Zero | TailRule::Geometric { .. } => Some(LatVec::zeros(self.dim)),
            TailRule::Constant(v) => Some(v.clone()),
            TailRule::Periodic(vs) => vs.iter().all(|v| v == &vs[0]).then(|| vs[0].clone()),
        }
    }

    /// `limsup_n f(x_n)` for a continuous coordinatewise-monotone-free `f`,
    /// evaluated at the limit points of the tail.
    pub fn tail_limsup_map(
        &self,
        f: impl Fn(&LatVec<S>) -> Result<LatVec<S>>,
    ) -> Result<LatVec<S>> {
        let values = self
            .limit_points()
            .iter()
            .map(f)
            .collect::<Result<Vec<_>>>()?;
        let dim = values.first().map(LatVec::len).unwrap_or(self.dim);
        Ok(fold_coords(&values, dim, S::max_of))
    }

    /// `x_n → target` in the uo sense: `|x_n − target| ∧ e` order
    /// converges to 0, i.e. its `limsup` vanishes.
    pub fn uo_limit(&self, target: &LatVec<S>) -> Result<bool> {
        check_dim(self.dim, target.len())?;
        let e = LatVec::ones(self.dim);
        let ls = self.tail_limsup_map(|v| v.sub(target)?.abs().meet(&e))?;
        Ok(ls.is_zero())
    }

    pub fn limsup_seq(&self) -> ExtVec<S> {
        fold_coords(&self.limit_points(), self.dim, S::max_of).to_ext()
    }

    pub fn liminf_seq(&self) -> LatVec<S> {
        fold_coords(&self.limit_points(), self.dim, S::min_of)
    }

    /// `sup_n x_n`.
    pub fn sup_terms(&self) -> ExtVec<S> {
        let mut values = self.prefix.clone();
        match &self.tail {
            TailRule::Zero => values.push(LatVec::zeros(self.dim)),
            TailRule::Constant(v) | TailRule::Geometric { v, .. } => values.push(v.clone()),
            TailRule::Periodic(vs) => values.extend(vs.iter().cloned()),
        }
        fold_coords(&values, self.dim, S::max_of).to_ext()
    }

    /// `x_{n+1} − x_n` for `n = 1 .. horizon − 1`. Every increment of the
    /// sequence either appears here or (geometric tails) is a positive
    /// multiple `r^k` of the first tail increment.
    pub fn increments(&self) -> Vec<LatVec<S>> {
        (1..self.horizon())
            .map(|n| {
                self.term(n + 1)
                    .sub(&self.term(n))
                    .expect("terms share the dimension")
            })
            .collect()
    }

    /// `sup_n |x_{n+1} − x_n|`.
    pub fn sup_abs_increment(&self) -> LatVec<S> {
        let abs: Vec<_> = self.increments().iter().map(LatVec::abs).collect();
        fold_coords(&abs, self.dim, S::max_of)
    }

    /// `sup_n (x_{n+1} − x_n)^+`.
    pub fn sup_pos_increment(&self) -> LatVec<S> {
        let pos: Vec<_> = self.increments().iter().map(LatVec::pos_part).collect();
        fold_coords(&pos, self.dim, S::max_of)
    }

    pub fn partial_sum(&self, n: usize) -> LatVec<S> {
        (1..=n).fold(LatVec::zeros(self.dim), |acc, k| {
            acc.add(&self.term(k)).expect("terms share the dimension")
        })
    }

    fn tail_sum(&self, tail: &TailRule<S>) -> ExtVec<S> {
        let inf_on = |band: Band| -> ExtVec<S> { band.infinity_of() };
        match tail {
            TailRule::Zero => ExtVec::zeros(self.dim),
            TailRule::Constant(v) => inf_on(v.support()),
            TailRule::Periodic(vs) => inf_on(
                vs.iter()
                    .map(LatVec::support)
                    .reduce(|a, b| a.join(&b).expect("same dimension"))
                    .unwrap_or_else(|| Band::empty(self.dim)),
            ),
            TailRule::Geometric { v, ratio } => {
                let denom = S::one() - ratio.clone();
                v.scale(&(S::one() / denom)).to_ext()
            }
        }
    }

    fn require_nonneg(&self) -> Result<()> {
        if self.is_nonneg() {
            Ok(())
        } else {
            Err(Error::Domain("series terms must be positive".into()))
        }
    }

    /// `Σ_{n≥1} x_n` in `X^s`, for positive terms.
    pub fn series_sum(&self) -> Result<ExtVec<S>> {
        self.remainder(1)
    }

    /// `R_n = Σ_{k≥n} x_k`.
    pub fn remainder(&self, n: usize) -> Result<ExtVec<S>> {
        assert!(n >= 1, "sequences are indexed from 1");
        self.require_nonneg()?;
        if n >= self.tail_start() {
            return Ok(self.tail_sum(&self.tail_from(n)));
        }
        let head = (n..=self.prefix.len()).fold(LatVec::zeros(self.dim), |acc, k| {
            acc.add(&self.prefix[k - 1]).expect("same dimension")
        });
        head.to_ext().add(&self.tail_sum(&self.tail))
    }

    /// `n ↦ sup_{p,q≥n} |x_p − x_q|`, i.e. coordinatewise `sup − inf` of
    /// the terms from `n` on.
    pub fn tail_oscillation(&self) -> VecSeq<S> {
        // Closure of the tail's values: (sup, inf) per coordinate.
        let (tail_sup, tail_inf) = match &self.tail {
            TailRule::Zero => (LatVec::zeros(self.dim), LatVec::zeros(self.dim)),
            TailRule::Constant(v) => (v.clone(), v.clone()),
            TailRule::Periodic(vs) => (
                fold_coords(vs, self.dim, S::max_of),
                fold_coords(vs, self.dim, S::min_of),
            ),
            TailRule::Geometric { v, .. } => (v.clone(), LatVec::zeros(self.dim)),
        };
        let mut prefix = Vec::with_capacity(self.prefix.len());
        let (mut hi, mut lo) = (tail_sup.clone(), tail_inf.clone());
        for v in self.prefix.iter().rev() {
            hi = hi.join(v).expect("same dimension");
            lo = lo.meet(v).expect("same dimension");
            prefix.push(hi.sub(&lo).expect("same dimension"));
        }
        prefix.reverse();
        let tail = match &self.tail {
            TailRule::Zero | TailRule::Constant(_) => TailRule::Zero,
            TailRule::Periodic(_) => {
                TailRule::Constant(tail_sup.sub(&tail_inf).expect("same dimension"))
            }
            TailRule::Geometric { v, ratio } => TailRule::Geometric {
                v: v.clone(),
                ratio: ratio.clone(),
            },
        };
        VecSeq {
            dim: self.dim,
            prefix,
            tail,
        }
    }

    /// The sequence is uo-Cauchy: its tail oscillation order converges to 0.
    pub fn uo_cauchy(&self) -> bool {
        self.tail_oscillation()
            .limit_points()
            .iter()
            .all(LatVec::is_zero)
    }

    /// Atoms on which the coordinate sequence converges.
    pub fn convergence_band(&self) -> Band {
        let points = self.limit_points();
        Band::from_mask(
            (0..self.dim)
                .map(|j| points.iter().all(|p| p.coords()[j] == points[0].coords()[j]))
                .collect(),
        )
    }

    /// `n ↦ {|x_n − target| > ε}`, the bands `P_{(|x_n − target| − εe)^+}`.
    pub fn exceed_masks(&self, target: &LatVec<S>, eps: &S) -> Result<ProjSeq> {
        check_dim(self.dim, target.len())?;
        if *eps <= S::zero() {
            return Err(Error::Domain(format!("ε = {eps} must be positive")));
        }
        let mask = |v: &LatVec<S>| -> Band {
            Band::from_mask(
                v.coords()
                    .iter()
                    .zip(target.coords())
                    .map(|(a, t)| (a.clone() - t.clone()).abs() > *eps)
                    .collect(),
            )
        };
        let mut prefix: Vec<Band> = self.prefix.iter().map(mask).collect();
        let tail = match &self.tail {
            TailRule::Zero => ProjTail::Constant(mask(&LatVec::zeros(self.dim))),
            TailRule::Constant(v) => ProjTail::Constant(mask(v)),
            TailRule::Periodic(vs) => ProjTail::Periodic(vs.iter().map(mask).collect()),
            TailRule::Geometric { v, ratio } => {
                let settle = (0..self.dim)
                    .map(|j| geometric_settle(&v.coords()[j], ratio, &target.coords()[j], eps))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .max()
                    .unwrap_or(0);
                for k in 0..settle {
                    prefix.push(mask(&self.tail.term(k, self.dim)));
                }
                ProjTail::Constant(mask(&self.tail.term(settle, self.dim)))
            }
        };
        ProjSeq::new(self.dim, prefix, tail)
    }

    /// `Σ_n |x_n − target|^r` in `X^s`.
    pub fn abs_dev_pow_series(&self, target: &LatVec<S>, r: f64) -> Result<ExtVec<S>> {
        check_dim(self.dim, target.len())?;
        if r <= 0.0 {
            return Err(Error::Domain(format!("exponent {r} must be positive")));
        }
        let mut head = LatVec::zeros(self.dim);
        for v in &self.prefix {
            head = head.add(&v.sub(target)?.abs_pow(r)?)?;
        }
        let inf_where_nonzero = |dev: LatVec<S>| dev.support().infinity_of::<S>();
        let tail = match &self.tail {
            TailRule::Zero => inf_where_nonzero(target.abs()),
            TailRule::Constant(v) => inf_where_nonzero(v.sub(target)?.abs()),
            TailRule::Periodic(vs) => {
                let devs = vs
                    .iter()
                    .map(|v| v.sub(target).map(|d| d.abs()))
                    .collect::<Result<Vec<_>>>()?;
                inf_where_nonzero(fold_coords(&devs, self.dim, S::max_of))
            }
            TailRule::Geometric { v, ratio } => {
                let factor = S::one() / (S::one() - ratio.powf(r)?);
                let coords = v
                    .coords()
                    .iter()
                    .zip(target.coords())
                    .map(|(vj, tj)| {
                        if !tj.is_zero() {
                            Ok(Ext::Inf)
                        } else {
                            Ok(Ext::Fin(vj.powf(r)? * factor.clone()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                ExtVec::new(coords)
            }
        };
        head.to_ext().add(&tail)
    }
}

/// First tail offset from which `{|r^k v − t| > ε}` keeps its eventual value.
fn geometric_settle<S: Scalar>(v: &S, r: &S, t: &S, eps: &S) -> Result<usize> {
    if v.is_zero() {
        return Ok(0);
    }
    let lo = t.clone() - eps.clone();
    let hi = t.clone() + eps.clone();
    let first = |below: &dyn Fn(&S) -> bool| -> Result<usize> {
        let mut a = v.clone();
        for k in 0..MAX_SETTLE_STEPS {
            if below(&a) {
                return Ok(k);
            }
            a = a * r.clone();
        }
        Err(Error::Size {
            size: MAX_SETTLE_STEPS,
            limit: MAX_SETTLE_STEPS,
        })
    };
    if hi <= S::zero() {
        // Every positive term exceeds t + ε.
        Ok(0)
    } else if lo > S::zero() {
        first(&|a| *a < lo)
    } else {
        first(&|a| *a <= hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProjTail {
    Constant(Band),
    Periodic(Vec<Band>),
}

/// A sequence of band projections.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjSeq {
    dim: usize,
    prefix: Vec<Band>,
    tail: ProjTail,
}

impl ProjSeq {
    pub fn new(dim: usize, prefix: Vec<Band>, tail: ProjTail) -> Result<Self> {
        for b in &prefix {
            check_dim(dim, b.len())?;
        }
        match &tail {
            ProjTail::Constant(b) => check_dim(dim, b.len())?,
            ProjTail::Periodic(bs) => {
                if bs.is_empty() {
                    return Err(Error::Invalid("periodic tail needs at least one band".into()));
                }
                for b in bs {
                    check_dim(dim, b.len())?;
                }
            }
        }
        Ok(Self { dim, prefix, tail })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prefix(&self) -> &[Band] {
        &self.prefix
    }

    pub fn tail(&self) -> &ProjTail {
        &self.tail
    }

    pub fn tail_start(&self) -> usize {
        self.prefix.len() + 1
    }

    pub fn period(&self) -> usize {
        match &self.tail {
            ProjTail::Constant(_) => 1,
            ProjTail::Periodic(bs) => bs.len(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.prefix.len() + self.period() + 1
    }

    pub fn tail_masks(&self) -> &[Band] {
        match &self.tail {
            ProjTail::Constant(b) => std::slice::from_ref(b),
            ProjTail::Periodic(bs) => bs,
        }
    }

    pub fn term(&self, n: usize) -> &Band {
        assert!(n >= 1, "sequences are indexed from 1");
        if n <= self.prefix.len() {
            &self.prefix[n - 1]
        } else {
            let masks = self.tail_masks();
            &masks[(n - self.tail_start()) % masks.len()]
        }
    }

    pub fn tail_from(&self, n0: usize) -> ProjTail {
        assert!(n0 >= self.tail_start());
        match &self.tail {
            ProjTail::Constant(b) => ProjTail::Constant(b.clone()),
            ProjTail::Periodic(bs) => {
                let p = bs.len();
                let k0 = n0 - self.tail_start();
                ProjTail::Periodic((0..p).map(|i| bs[(k0 + i) % p].clone()).collect())
            }
        }
    }

    /// `limsup P_n`: atoms lying in infinitely many `P_n`.
    pub fn limsup(&self) -> Band {
        self.tail_masks()
            .iter()
            .cloned()
            .reduce(|a, b| a.join(&b).expect("same dimension"))
            .unwrap_or_else(|| Band::empty(self.dim))
    }

    /// `liminf P_n`: atoms lying in all but finitely many `P_n`.
    pub fn liminf(&self) -> Band {
        self.tail_masks()
            .iter()
            .cloned()
            .reduce(|a, b| a.meet(&b).expect("same dimension"))
            .unwrap_or_else(|| Band::full(self.dim))
    }

    /// `n ↦ P_n^d`.
    pub fn complement(&self) -> Self {
        Self {
            dim: self.dim,
            prefix: self.prefix.iter().map(Band::complement).collect(),
            tail: match &self.tail {
                ProjTail::Constant(b) => ProjTail::Constant(b.complement()),
                ProjTail::Periodic(bs) => ProjTail::Periodic(bs.iter().map(Band::complement).collect()),
            },
        }
    }

    /// `n ↦ P_n e`.
    pub fn indicators<S: Scalar>(&self) -> VecSeq<S> {
        let prefix = self.prefix.iter().map(Band::indicator).collect();
        let tail = match &self.tail {
            ProjTail::Constant(b) => TailRule::Constant(b.indicator()),
            ProjTail::Periodic(bs) => TailRule::Periodic(bs.iter().map(Band::indicator).collect()),
        };
        VecSeq {
            dim: self.dim,
            prefix,
            tail,
        }
    }

    pub fn is_increasing(&self) -> bool {
        (1..self.horizon()).all(|n| {
            self.term(n)
                .is_subset(self.term(n + 1))
                .expect("same dimension")
        })
    }

    /// Distinct bands of the sequence, in order of first appearance, with
    /// a flag telling whether the band occurs more than once.
    pub fn distinct_masks(&self) -> Vec<(Band, bool)> {
        let mut out: Vec<(Band, bool)> = Vec::new();
        let tail_masks = self.tail_masks();
        let all = self.prefix.iter().chain(tail_masks);
        for b in all {
            match out.iter_mut().find(|(seen, _)| seen == b) {
                Some(entry) => entry.1 = true,
                None => out.push((b.clone(), false)),
            }
        }
        // Tail bands recur forever.
        for (b, repeated) in &mut out {
            if tail_masks.contains(b) {
                *repeated = true;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    fn lv(values: &[i64]) -> LatVec<Rational> {
        LatVec::from_ints(values)
    }

    fn geometric(v: &[i64], r: Rational) -> TailRule<Rational> {
        TailRule::Geometric { v: lv(v), ratio: r }
    }

    #[test]
    fn order_limits() {
        let g = VecSeq::new(2, vec![], geometric(&[1, 2], ratio(1, 2))).unwrap();
        assert_eq!(g.order_limit(), Some(lv(&[0, 0])));
        let p = VecSeq::new(1, vec![], TailRule::Periodic(vec![lv(&[1]), lv(&[2])])).unwrap();
        assert_eq!(p.order_limit(), None);
        let c = VecSeq::new(2, vec![lv(&[9, 9])], TailRule::Constant(lv(&[3, 3]))).unwrap();
        assert_eq!(c.order_limit(), Some(lv(&[3, 3])));
    }

    #[test]
    fn uo_limits() {
        let g = VecSeq::new(2, vec![], geometric(&[1, 2], ratio(1, 2))).unwrap();
        assert!(g.uo_limit(&lv(&[0, 0])).unwrap());
        assert!(!g.uo_limit(&lv(&[0, 1])).unwrap());
        let p = VecSeq::new(1, vec![], TailRule::Periodic(vec![lv(&[1]), lv(&[2])])).unwrap();
        assert!(!p.uo_limit(&lv(&[1])).unwrap());
    }

    #[test]
    fn limsup_liminf() {
        let p = VecSeq::new(
            2,
            vec![lv(&[50, -50])],
            TailRule::Periodic(vec![lv(&[1, 0]), lv(&[0, 1])]),
        )
        .unwrap();
        assert_eq!(p.limsup_seq(), lv(&[1, 1]).to_ext());
        assert_eq!(p.liminf_seq(), lv(&[0, 0]));
        let c = VecSeq::new(2, vec![], TailRule::Constant(lv(&[4, -1]))).unwrap();
        assert_eq!(c.limsup_seq(), lv(&[4, -1]).to_ext());
        assert_eq!(c.liminf_seq(), lv(&[4, -1]));
    }

    #[test]
    fn series_closed_forms() {
        // Σ_{n≥1} (1/2)^n [1, 2] = [1, 2].
        let g = VecSeq::new(
            2,
            vec![],
            TailRule::Geometric {
                v: LatVec::new(vec![ratio(1, 2), ratio(1, 1)]),
                ratio: ratio(1, 2),
            },
        )
        .unwrap();
        assert_eq!(g.series_sum().unwrap(), lv(&[1, 2]).to_ext());
        let p = VecSeq::new(2, vec![], TailRule::Periodic(vec![lv(&[1, 0]), lv(&[0, 1])])).unwrap();
        assert_eq!(p.series_sum().unwrap(), ExtVec::greatest(2));
        assert!(VecSeq::<Rational>::zero(3).series_sum().unwrap().is_zero());
        let neg = VecSeq::new(1, vec![lv(&[-1])], TailRule::Zero).unwrap();
        assert!(matches!(neg.series_sum(), Err(Error::Domain(_))));
    }

    #[test]
    fn remainders_shift_geometric_tails() {
        let g = VecSeq::new(1, vec![lv(&[5])], geometric(&[4], ratio(1, 2))).unwrap();
        assert_eq!(g.remainder(1).unwrap(), lv(&[13]).to_ext());
        assert_eq!(g.remainder(2).unwrap(), lv(&[8]).to_ext());
        assert_eq!(g.remainder(4).unwrap(), lv(&[2]).to_ext());
    }

    #[test]
    fn projection_sequences() {
        let a = Band::from_indices(2, &[0]);
        let b = Band::from_indices(2, &[1]);
        let ps = ProjSeq::new(2, vec![], ProjTail::Periodic(vec![a.clone(), b])).unwrap();
        assert!(ps.limsup().is_full());
        assert!(ps.liminf().is_empty());
        let c = ProjSeq::new(2, vec![Band::full(2)], ProjTail::Constant(a.clone())).unwrap();
        assert_eq!(c.limsup(), a);
        assert_eq!(c.liminf(), a);
        assert_eq!(ps.complement().liminf(), ps.limsup().complement());
    }

    #[test]
    fn oscillation_and_cauchy() {
        let g = VecSeq::new(1, vec![lv(&[3])], geometric(&[2], ratio(1, 3))).unwrap();
        let osc = g.tail_oscillation();
        assert_eq!(osc.term(1), lv(&[3]));
        assert_eq!(osc.term(2), lv(&[2]));
        assert_eq!(osc.term(3), LatVec::new(vec![ratio(2, 3)]));
        assert!(g.uo_cauchy());
        let p = VecSeq::new(1, vec![], TailRule::Periodic(vec![lv(&[1]), lv(&[2])])).unwrap();
        assert!(!p.uo_cauchy());
        let c = VecSeq::new(1, vec![lv(&[7])], TailRule::Constant(lv(&[1]))).unwrap();
        assert_eq!(c.tail_oscillation().term(1), lv(&[6]));
        assert!(c.tail_oscillation().term(2).is_zero());
    }

    #[test]
    fn exceed_masks_settle_on_geometric_tails() {
        // |8·(1/2)^k − 1| > 1/2 for k = 0, 1, 2 and fails from k = 3 on (value 1).
        let g = VecSeq::new(1, vec![], geometric(&[8], ratio(1, 2))).unwrap();
        let masks = g.exceed_masks(&lv(&[1]), &ratio(1, 2)).unwrap();
        for n in 1..=3 {
            assert!(masks.term(n).is_full(), "n = {n}");
        }
        // k = 3 → value 1, deviation 0; k = 4 → 1/2, deviation 1/2 (not > 1/2);
        // k ≥ 5 → deviation > 1/2 again since values approach 0 < 1 − 1/2.
        assert!(masks.term(4).is_empty());
        assert!(masks.term(5).is_empty());
        assert!(masks.term(6).is_full());
        assert!(masks.limsup().is_full());
    }

    #[test]
    fn abs_dev_series() {
        let g = VecSeq::new(2, vec![lv(&[1, 1])], geometric(&[2, 2], ratio(1, 2))).unwrap();
        let s = g.abs_dev_pow_series(&lv(&[0, 1]), 2.0).unwrap();
        // atom 0: 1 + Σ 4·(1/4)^k = 1 + 16/3; atom 1: limit deviation 1 → ∞.
        assert_eq!(s.coords()[0], Ext::Fin(ratio(19, 3)));
        assert_eq!(s.coords()[1], Ext::Inf);
    }
}
