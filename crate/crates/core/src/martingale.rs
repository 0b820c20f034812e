//! Filtrations, adapted processes, stopping times and the martingale
//! convergence statements built on them.
//!
//! On a finite atomic space every refining chain of partitions stabilizes,
//! so a [`Filtration`] is a finite prefix followed by a constant operator.
//! Together with the tail rules of [`VecSeq`] this bounds every check to a
//! finite horizon.

use crate::band::{infinite_band_by_truncation, Band};
use crate::error::{check_dim, Error, Result};
use crate::expectation::{CondExp, TpConfig};
use crate::report::{band_witness, Report, Status};
use crate::scalar::{float_tolerance, Scalar};
use crate::seq::{ProjSeq, ProjTail, TailRule, VecSeq};
use crate::vector::{ExtVec, LatVec};

/// `T_1, T_2, …` with `T_n = tail` from `prefix.len() + 1` on, and the
/// global `T` with `T_n T = T T_n = T`. `at(0)` is `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration<S> {
    prefix: Vec<CondExp<S>>,
    tail: CondExp<S>,
    global: CondExp<S>,
}

impl<S: Scalar> Filtration<S> {
    pub fn new(prefix: Vec<CondExp<S>>, tail: CondExp<S>, global: CondExp<S>) -> Result<Self> {
        let dim = global.dim();
        check_dim(dim, tail.dim())?;
        for t in &prefix {
            check_dim(dim, t.dim())?;
        }
        let chain: Vec<&CondExp<S>> = prefix.iter().chain(std::iter::once(&tail)).collect();
        for (i, pair) in chain.windows(2).enumerate() {
            if !pair[1].refines(pair[0]) {
                return Err(Error::Invalid(format!(
                    "T_{} does not refine T_{}",
                    i + 2,
                    i + 1
                )));
            }
        }
        if !chain[0].refines(&global) {
            return Err(Error::Invalid("T_1 does not refine the global T".into()));
        }
        Ok(Self {
            prefix,
            tail,
            global,
        })
    }

    pub fn constant(t: CondExp<S>, global: CondExp<S>) -> Result<Self> {
        Self::new(Vec::new(), t, global)
    }

    pub fn dim(&self) -> usize {
        self.global.dim()
    }

    pub fn prefix(&self) -> &[CondExp<S>] {
        &self.prefix
    }

    pub fn tail(&self) -> &CondExp<S> {
        &self.tail
    }

    pub fn global(&self) -> &CondExp<S> {
        &self.global
    }

    /// First index from which `T_n` is constant.
    pub fn stable_from(&self) -> usize {
        self.prefix.len() + 1
    }

    pub fn at(&self, n: usize) -> &CondExp<S> {
        match n {
            0 => &self.global,
            n if n <= self.prefix.len() => &self.prefix[n - 1],
            _ => &self.tail,
        }
    }
}

/// A sequence with `x_n ∈ R(T_n)` for every `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedProcess<S> {
    xs: VecSeq<S>,
    filtration: Filtration<S>,
}

impl<S: Scalar> AdaptedProcess<S> {
    pub fn new(xs: VecSeq<S>, filtration: Filtration<S>) -> Result<Self> {
        check_dim(filtration.dim(), xs.dim())?;
        let proc = Self { xs, filtration };
        for n in 1..=proc.horizon() {
            if !proc.filtration.at(n).in_range_lat(&proc.xs.term(n)) {
                return Err(Error::Contract(format!("x_{n} is not in R(T_{n})")));
            }
        }
        Ok(proc)
    }

    pub fn xs(&self) -> &VecSeq<S> {
        &self.xs
    }

    pub fn filtration(&self) -> &Filtration<S> {
        &self.filtration
    }

    /// Index range covering every distinct (operator, term) configuration:
    /// beyond it both the filtration and the tail repeat.
    pub fn horizon(&self) -> usize {
        self.xs.prefix().len().max(self.filtration.prefix.len()) + 2 * self.xs.period() + 1
    }

    /// First `(i, j)` with `i ≤ j` violating `T_i x_j = x_i` (martingale)
    /// or `T_i x_j ≥ x_i` (submartingale). `j = 0` stands for the limit of
    /// a geometric tail.
    pub fn violation(&self, sub: bool) -> Result<Option<(usize, usize)>> {
        let h = self.horizon();
        let ok = |lhs: &LatVec<S>, rhs: &LatVec<S>| -> Result<bool> {
            Ok(if sub { rhs.le(lhs)? } else { lhs == rhs })
        };
        for i in 1..=h {
            let ti = self.filtration.at(i);
            let xi = self.xs.term(i);
            for j in i..=h {
                if !ok(&ti.apply(&self.xs.term(j))?, &xi)? {
                    return Ok(Some((i, j)));
                }
            }
            // Geometric tails decrease to 0, which constrains every x_i.
            if matches!(self.xs.tail(), TailRule::Geometric { .. })
                && !ok(&LatVec::zeros(self.xs.dim()), &xi)?
            {
                return Ok(Some((i, 0)));
            }
        }
        Ok(None)
    }

    pub fn is_martingale(&self) -> Result<bool> {
        Ok(self.violation(false)?.is_none())
    }

    pub fn is_submartingale(&self) -> Result<bool> {
        Ok(self.violation(true)?.is_none())
    }

    /// The process stopped at `tau`.
    pub fn stop(&self, tau: &StoppingTime) -> Result<Self> {
        Self::new(stop_process(&self.xs, tau.bands())?, self.filtration.clone())
    }
}

/// An increasing sequence of bands `P_i` with `P_i T_j = T_j P_i` for
/// `i ≤ j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingTime {
    bands: ProjSeq,
}

impl StoppingTime {
    pub fn new<S: Scalar>(bands: ProjSeq, filtration: &Filtration<S>) -> Result<Self> {
        check_dim(filtration.dim(), bands.dim())?;
        if !bands.is_increasing() {
            return Err(Error::Contract("stopping time bands must increase".into()));
        }
        // T_j refines T_i for j ≥ i, so commuting with T_i suffices.
        let h = bands.horizon().max(filtration.stable_from() + 1);
        for i in 1..=h {
            if !filtration.at(i).commutes(bands.term(i)) {
                return Err(Error::Contract(format!("P_{i} does not commute with T_{i}")));
            }
        }
        Ok(Self { bands })
    }

    pub fn bands(&self) -> &ProjSeq {
        &self.bands
    }
}

/// `(J, B)` with `P_n = B` for all `n ≥ J`, for an increasing sequence.
fn settle(ps: &ProjSeq) -> Result<(usize, Band)> {
    if !ps.is_increasing() {
        return Err(Error::Contract("stopping time bands must increase".into()));
    }
    let last = ps.tail_masks()[0].clone();
    let mut j = ps.tail_start();
    while j > 1 && ps.term(j - 1) == &last {
        j -= 1;
    }
    Ok((j, last))
}

/// `z_n = Σ_{j<n} (P_j − P_{j−1}) x_j + P_{n−1}^d x_n` with `P_0 = 0`.
pub fn stop_process<S: Scalar>(xs: &VecSeq<S>, tau: &ProjSeq) -> Result<VecSeq<S>> {
    check_dim(xs.dim(), tau.dim())?;
    let dim = xs.dim();
    let (settled_at, last) = settle(tau)?;
    let band = |n: usize| -> Band {
        if n == 0 {
            Band::empty(dim)
        } else {
            tau.term(n).clone()
        }
    };
    let first_tail = (settled_at + 1).max(xs.tail_start());
    let mut prefix = Vec::with_capacity(first_tail - 1);
    let mut stopped = LatVec::zeros(dim);
    for n in 1..first_tail {
        let live = band(n - 1).complement().project_lat(&xs.term(n))?;
        prefix.push(stopped.add(&live)?);
        let newly = band(n).meet(&band(n - 1).complement())?;
        stopped = stopped.add(&newly.project_lat(&xs.term(n))?)?;
    }
    // From here on P_{n−1} = B and nothing new stops.
    let keep = last.complement();
    let tail = match xs.tail_from(first_tail) {
        TailRule::Zero => TailRule::Constant(stopped),
        TailRule::Constant(v) => TailRule::Constant(stopped.add(&keep.project_lat(&v)?)?),
        TailRule::Periodic(vs) => TailRule::Periodic(
            vs.iter()
                .map(|v| stopped.add(&keep.project_lat(v)?))
                .collect::<Result<_>>()?,
        ),
        TailRule::Geometric { v, ratio } => {
            let live = keep.project_lat(&v)?;
            if live.is_zero() {
                TailRule::Constant(stopped)
            } else if stopped.is_zero() {
                TailRule::Geometric { v: live, ratio }
            } else {
                return Err(Error::Domain(
                    "stopped value plus a live geometric tail has no tail rule".into(),
                ));
            }
        }
    };
    VecSeq::new(dim, prefix, tail)
}

/// First-passage bands of a process above `K e`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauK {
    /// `B_{K,n}` for `n = 1 ..= passage.len()`; empty beyond.
    pub passage: Vec<Band>,
    /// `B_{K,∞}`: atoms never above `K`.
    pub never: Band,
    /// `τ^K_n = Σ_{j≤n} P_{K,j}`.
    pub time: ProjSeq,
}

impl TauK {
    pub fn passage_at(&self, n: usize) -> Band {
        self.passage
            .get(n - 1)
            .cloned()
            .unwrap_or_else(|| Band::empty(self.never.len()))
    }

    /// The bands `B_{K,n}` together with `B_{K,∞}` are pairwise disjoint and
    /// cover every atom.
    pub fn is_partition(&self) -> bool {
        let n = self.never.len();
        let mut seen = self.never.clone();
        for b in &self.passage {
            if !b.is_disjoint(&seen).unwrap_or(false) {
                return false;
            }
            seen = seen.join(b).expect("same dimension");
        }
        seen == Band::full(n)
    }
}

/// `B_{K,n} = {x_1 ≤ K, …, x_{n−1} ≤ K, x_n > K}` and the stopping time
/// `τ^K` they generate.
pub fn tau_k<S: Scalar>(xs: &VecSeq<S>, k: &S) -> Result<TauK> {
    if *k <= S::zero() {
        return Err(Error::Domain(format!("K = {k} must be positive")));
    }
    let dim = xs.dim();
    // Every value the tail takes appears among its first `period` terms,
    // except for geometric tails, whose first term dominates the rest.
    let scan = xs.prefix().len() + xs.period();
    let mut passed = Band::empty(dim);
    let mut passage = Vec::with_capacity(scan);
    let mut cumulative = Vec::with_capacity(scan);
    for n in 1..=scan {
        let above = xs.term(n).coords().iter().map(|c| *c > *k).collect();
        let first = Band::from_mask(above).meet(&passed.complement())?;
        passed = passed.join(&first)?;
        passage.push(first);
        cumulative.push(passed.clone());
    }
    let tail_sup = xs.tail_from(xs.tail_start());
    let tail_max = VecSeq::new(dim, Vec::new(), tail_sup)?.sup_terms();
    let k_ext = LatVec::constant(dim, k.clone()).to_ext();
    let never = passed.complement();
    let beyond = never.project(&tail_max)?;
    if !beyond.le(&k_ext)? {
        return Err(Error::Internal(
            "an atom first exceeds K after one full period of the tail".into(),
        ));
    }
    let time = ProjSeq::new(dim, cumulative, ProjTail::Constant(passed))?;
    Ok(TauK {
        passage,
        never,
        time,
    })
}

/// Stage bound for the process stopped at `τ^K`:
/// `T|x̃_n| ≤ 2K e + 2 T sup_n (x_{n+1} − x_n)^+ − T x_1` for every `n`.
pub fn stopped_stage_bound<S: Scalar>(proc: &AdaptedProcess<S>, k: &S) -> Result<Report> {
    if !proc.is_submartingale()? {
        return Err(Error::Contract("stage bound needs a submartingale".into()));
    }
    let t = proc.filtration().global();
    let xs = proc.xs();
    let dim = xs.dim();
    // The increment sup starts from x_0 = 0, so x_1^+ is included. Without
    // it the bound fails whenever x_1 already exceeds K.
    let v = xs.sup_pos_increment();
    let v0 = v.join(&xs.term(1).pos_part())?;
    let two = S::from_int(2);
    let base = LatVec::constant(dim, two.clone() * k.clone()).sub(&t.apply(&xs.term(1))?)?;
    let literal = base.add(&t.apply(&v)?.scale(&two))?;
    let bound = base.add(&t.apply(&v0)?.scale(&two))?;
    let tau = tau_k(xs, k)?;
    let stopped = stop_process(xs, &tau.time)?;
    let tol = float_tolerance();
    let mut report = Report::new("stopped-stage-bound", Status::Pass)
        .with_band("never_above", &tau.never)
        .with_metric("bound", &bound);
    let mut literal_holds = true;
    for n in 1..=stopped.horizon() {
        let lhs = t.apply(&stopped.term(n).abs())?;
        literal_holds &= lhs.le_tol(&literal, tol)?;
        if !lhs.le_tol(&bound, tol)? {
            report.status = Status::Fail;
            report.witness = Some(n);
            report.detail = format!("T|x̃_{n}| = {lhs} exceeds {bound}");
            break;
        }
    }
    Ok(report.with_metric("without_first_jump", literal_holds))
}

/// The martingale has divergence band equal to the infinite band of
/// `sup_n x_n`, where the divergence band is the complement of the band on
/// which the coordinate sequence converges.
pub fn divergence_band_check<S: Scalar>(proc: &AdaptedProcess<S>) -> Result<Report> {
    if !proc.is_martingale()? {
        return Err(Error::Contract("divergence band check needs a martingale".into()));
    }
    let xs = proc.xs();
    let t = proc.filtration().global();
    let increments = t.apply(&xs.sup_abs_increment())?;
    let converging = xs.convergence_band();
    let sup = xs.sup_terms();
    let infinite = sup.infinite_band();
    // Same band through the truncation route over the positive part.
    let by_truncation = infinite_band_by_truncation(&sup.pos_part(), None)?;
    let k = sup
        .coords()
        .iter()
        .filter_map(|c| c.finite())
        .fold(S::zero(), |a, b| S::max_of(&a, b))
        .ceil_u64()
        + 1;
    let never = tau_k(xs, &S::from_int(k as i64))?.never;
    let divergent = converging.complement();
    let consistent = by_truncation == infinite && never.complement().is_subset(&infinite)?;
    let status = if divergent == infinite && consistent {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Report::new("divergence-band", status)
        .with_band("divergent", &divergent)
        .with_band("sup_infinite", &infinite)
        .with_band("never_above_k", &never)
        .with_metric("t_sup_abs_increment", &increments)
        .with_metric("k", k)
        .with_witness(band_witness(&divergent, &infinite)))
}

/// `n ↦ T_{n−1} P_n e` with `T_0 = T`.
pub fn predictable_compensator<S: Scalar>(
    filtration: &Filtration<S>,
    ps: &ProjSeq,
) -> Result<VecSeq<S>> {
    check_dim(filtration.dim(), ps.dim())?;
    let len = ps.prefix().len().max(filtration.stable_from());
    let prefix = (1..=len)
        .map(|n| filtration.at(n - 1).apply_indicator(ps.term(n)))
        .collect::<Result<Vec<_>>>()?;
    let t = filtration.tail();
    let tail = match ps.tail_from(len + 1) {
        ProjTail::Constant(b) => TailRule::Constant(t.apply_indicator(&b)?),
        ProjTail::Periodic(bs) => TailRule::Periodic(
            bs.iter()
                .map(|b| t.apply_indicator(b))
                .collect::<Result<_>>()?,
        ),
    };
    VecSeq::new(ps.dim(), prefix, tail)
}

/// `Σ P_n e` and `Σ T_{n−1} P_n e` have the same infinite band.
pub fn same_infinite_part_check<S: Scalar>(
    filtration: &Filtration<S>,
    ps: &ProjSeq,
) -> Result<Report> {
    check_dim(filtration.dim(), ps.dim())?;
    let h = ps.horizon().max(filtration.stable_from() + 1);
    for n in 1..=h {
        if !filtration.at(n).commutes(ps.term(n)) {
            return Err(Error::Contract(format!("P_{n} does not commute with T_{n}")));
        }
    }
    let direct = ps.indicators::<S>().series_sum()?.infinite_band();
    let compensated = predictable_compensator(filtration, ps)?
        .series_sum()?
        .infinite_band();
    let status = if direct == compensated {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Report::new("same-infinite-part", status)
        .with_band("sum_p", &direct)
        .with_band("sum_t_prev_p", &compensated)
        .with_witness(band_witness(&direct, &compensated)))
}

/// If `P_γ x_n` converges for every band of the family, then so does `P x_n`
/// for `P` the supremum of the family. Bands on which the sequence does
/// not converge are dropped from the family first.
pub fn band_family_convergence<S: Scalar>(xs: &VecSeq<S>, family: &[Band]) -> Result<Report> {
    let dim = xs.dim();
    let mut sup = Band::empty(dim);
    let mut used = 0usize;
    for b in family {
        if xs.project(b)?.order_limit().is_some() {
            sup = sup.join(b)?;
            used += 1;
        }
    }
    let status = if xs.project(&sup)?.order_limit().is_some() {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Report::new("band-family-convergence", status)
        .with_band("sup", &sup)
        .with_metric("converging_members", used))
}

/// `Σ_n T P_{(|x_n − x| − εe)^+} e`.
pub fn exceed_series<S: Scalar>(
    t: &CondExp<S>,
    xs: &VecSeq<S>,
    target: &LatVec<S>,
    eps: &S,
) -> Result<ExtVec<S>> {
    t.exceed_probabilities(xs, target, eps)?.series_sum()
}

/// `Σ_n T |x_n − x|^r`.
pub fn abs_pow_series<S: Scalar>(
    t: &CondExp<S>,
    xs: &VecSeq<S>,
    target: &LatVec<S>,
    r: f64,
) -> Result<ExtVec<S>> {
    t.apply_ext(&xs.abs_dev_pow_series(target, r)?)
}

/// Summable exceedance probabilities for every ε imply `x_n → x` (uo).
pub fn summable_exceedance_check<S: Scalar>(
    t: &CondExp<S>,
    xs: &VecSeq<S>,
    target: &LatVec<S>,
) -> Result<Report> {
    let mut summable = true;
    for eps in t.tp_grid(xs, target, TpConfig::default())? {
        if !exceed_series(t, xs, target, &eps)?.is_finite() {
            summable = false;
            break;
        }
    }
    let converges = xs.uo_limit(target)?;
    Ok(implication_report("summable-exceedance", summable, converges))
}

/// `Σ T|x_n − x|^r` finite implies `x_n → x` (uo).
pub fn summable_moment_check<S: Scalar>(
    t: &CondExp<S>,
    xs: &VecSeq<S>,
    target: &LatVec<S>,
    r: f64,
) -> Result<Report> {
    let summable = abs_pow_series(t, xs, target, r)?.is_finite();
    let converges = xs.uo_limit(target)?;
    Ok(implication_report("summable-moment", summable, converges).with_metric("r", r))
}

fn implication_report(check: &str, hypothesis: bool, conclusion: bool) -> Report {
    let status = match (hypothesis, conclusion) {
        (false, _) => Status::Vacuous,
        (true, true) => Status::Pass,
        (true, false) => Status::Fail,
    };
    Report::new(check, status)
        .with_metric("hypothesis", hypothesis)
        .with_metric("conclusion", conclusion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use crate::space::AtomicSpace;

    fn lv(values: &[i64]) -> LatVec<Rational> {
        LatVec::from_ints(values)
    }

    fn space(n: usize) -> AtomicSpace<Rational> {
        AtomicSpace::uniform(n).unwrap()
    }

    fn identity_filtration(n: usize) -> Filtration<Rational> {
        let s = space(n);
        Filtration::constant(CondExp::identity(&s), CondExp::trivial(&s)).unwrap()
    }

    #[test]
    fn tau_k_example() {
        let xs = VecSeq::new(2, vec![lv(&[1, 5]), lv(&[3, 1])], TailRule::Zero).unwrap();
        let tau = tau_k(&xs, &ratio(2, 1)).unwrap();
        assert_eq!(tau.passage_at(1), Band::from_indices(2, &[1]));
        assert_eq!(tau.passage_at(2), Band::from_indices(2, &[0]));
        assert_eq!(tau.time.term(1), &Band::from_indices(2, &[1]));
        assert_eq!(tau.time.term(2), &Band::full(2));
        assert!(tau.never.is_empty());
        assert!(tau.is_partition());
        let low = tau_k(&xs, &ratio(10, 1)).unwrap();
        assert!(low.never.is_full());
        assert!(low.passage.iter().all(Band::is_empty));
    }

    #[test]
    fn stopping_examples() {
        let xs = VecSeq::new(
            2,
            vec![lv(&[1, 2]), lv(&[3, 4])],
            TailRule::Periodic(vec![lv(&[5, 6]), lv(&[7, 8])]),
        )
        .unwrap();
        let at_one = ProjSeq::new(2, vec![], ProjTail::Constant(Band::full(2))).unwrap();
        let z = stop_process(&xs, &at_one).unwrap();
        for n in 1..8 {
            assert_eq!(z.term(n), lv(&[1, 2]), "n = {n}");
        }
        let at_two =
            ProjSeq::new(2, vec![Band::empty(2)], ProjTail::Constant(Band::full(2))).unwrap();
        let z = stop_process(&xs, &at_two).unwrap();
        assert_eq!(z.term(1), lv(&[1, 2]));
        for n in 2..8 {
            assert_eq!(z.term(n), lv(&[3, 4]), "n = {n}");
        }
    }

    #[test]
    fn stopped_by_tau_matches_second_form() {
        // z_n = Σ_j P_{K,j} x_{j∧n} + P_{K,∞} x_n.
        let xs = VecSeq::new(
            3,
            vec![lv(&[1, 5, 0]), lv(&[3, 1, 0])],
            TailRule::Periodic(vec![lv(&[0, 9, 1]), lv(&[4, 4, 1])]),
        )
        .unwrap();
        let tau = tau_k(&xs, &ratio(2, 1)).unwrap();
        let z = stop_process(&xs, &tau.time).unwrap();
        for n in 1..10 {
            let mut expected = tau.never.project_lat(&xs.term(n)).unwrap();
            for (j, b) in tau.passage.iter().enumerate() {
                let j = j + 1;
                expected = expected.add(&b.project_lat(&xs.term(j.min(n))).unwrap()).unwrap();
            }
            assert_eq!(z.term(n), expected, "n = {n}");
        }
    }

    #[test]
    fn doob_martingale_and_running_max() {
        let s = space(4);
        let t1 = CondExp::new(&s, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let t2 = CondExp::identity(&s);
        let f = Filtration::new(vec![t1.clone()], t2.clone(), CondExp::trivial(&s)).unwrap();
        let y = lv(&[4, 0, 2, 6]);
        let xs = VecSeq::new(4, vec![t1.apply(&y).unwrap()], TailRule::Constant(y.clone())).unwrap();
        let proc = AdaptedProcess::new(xs, f.clone()).unwrap();
        assert!(proc.is_martingale().unwrap());
        // Running maximum of the martingale: a submartingale, not a martingale.
        let m1 = t1.apply(&y).unwrap();
        let m2 = m1.join(&y).unwrap();
        let run = VecSeq::new(4, vec![m1], TailRule::Constant(m2)).unwrap();
        let proc = AdaptedProcess::new(run, f).unwrap();
        assert!(proc.is_submartingale().unwrap());
        assert!(!proc.is_martingale().unwrap());
    }

    #[test]
    fn adaptedness_is_enforced() {
        let s = space(2);
        let f = Filtration::constant(CondExp::trivial(&s), CondExp::trivial(&s)).unwrap();
        let xs = VecSeq::new(2, vec![], TailRule::Constant(lv(&[1, 2]))).unwrap();
        assert!(matches!(AdaptedProcess::new(xs, f), Err(Error::Contract(_))));
    }

    #[test]
    fn same_infinite_part_examples() {
        let s = space(4);
        let t = CondExp::new(&s, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let f = Filtration::constant(t.clone(), t).unwrap();
        let p = Band::from_indices(4, &[2, 3]);
        let ps = ProjSeq::new(
            4,
            vec![Band::full(4), Band::from_indices(4, &[0, 1])],
            ProjTail::Constant(p.clone()),
        )
        .unwrap();
        let r = same_infinite_part_check(&f, &ps).unwrap();
        assert!(r.passed());
        assert_eq!(r.bands["sum_p"], p.atoms());
        let none = ProjSeq::new(4, vec![], ProjTail::Constant(Band::empty(4))).unwrap();
        let r = same_infinite_part_check(&f, &none).unwrap();
        assert!(r.passed() && r.bands["sum_p"].is_empty());
    }

    #[test]
    fn divergence_band_on_constant_martingale() {
        let f = identity_filtration(2);
        let xs = VecSeq::new(2, vec![], TailRule::Constant(lv(&[3, -1]))).unwrap();
        let proc = AdaptedProcess::new(xs, f.clone()).unwrap();
        let r = divergence_band_check(&proc).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.bands["divergent"].is_empty());
        let osc = VecSeq::new(2, vec![], TailRule::Periodic(vec![lv(&[0, 0]), lv(&[1, 0])])).unwrap();
        let proc = AdaptedProcess::new(osc.clone(), f).unwrap();
        assert!(matches!(divergence_band_check(&proc), Err(Error::Contract(_))));
        assert_eq!(osc.convergence_band(), Band::from_indices(2, &[1]));
    }

    #[test]
    fn stage_bound_on_submartingale() {
        let f = identity_filtration(2);
        let xs = VecSeq::new(
            2,
            vec![lv(&[-1, 0]), lv(&[1, 3]), lv(&[2, 3])],
            TailRule::Constant(lv(&[5, 4])),
        )
        .unwrap();
        let proc = AdaptedProcess::new(xs, f).unwrap();
        assert!(proc.is_submartingale().unwrap());
        let r = stopped_stage_bound(&proc, &ratio(2, 1)).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
