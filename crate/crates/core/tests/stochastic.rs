mod common;

use common::*;
use proptest::prelude::*;
use supcone::martingale::{
    band_family_convergence, divergence_band_check, same_infinite_part_check,
    stopped_stage_bound, summable_exceedance_check, summable_moment_check,
};
use supcone::{
    bcl1, bcl2, product_harness, stop_process, tau_k, AdaptedProcess, AtomicSpace, Band,
    CondExp, Filtration, LatVec, ProjSeq, ProjTail, Rational, Status, StoppingTime, TailRule,
    VecSeq,
};

/// A refining chain: global labels, then each step splits blocks by a bit.
fn filtration(n: usize) -> impl Strategy<Value = Filtration<Rational>> {
    (
        space(n),
        prop::collection::vec(0usize..2, n),
        prop::collection::vec(prop::collection::vec(0usize..2, n), 1..=3),
    )
        .prop_map(|(s, global, splits)| {
            let t = CondExp::from_labels(&s, &global).unwrap();
            let mut labels = global;
            let mut chain = Vec::new();
            for bits in splits {
                labels = labels.iter().zip(&bits).map(|(l, b)| l * 2 + b).collect();
                chain.push(CondExp::from_labels(&s, &labels).unwrap());
            }
            let tail = chain.pop().unwrap();
            Filtration::new(chain, tail, t).unwrap()
        })
}

fn doob(f: &Filtration<Rational>, y: &LatVec<Rational>) -> VecSeq<Rational> {
    let prefix = (1..f.stable_from()).map(|n| f.at(n).apply(y).unwrap()).collect();
    VecSeq::new(y.len(), prefix, TailRule::Constant(f.tail().apply(y).unwrap())).unwrap()
}

/// `M_n + A_n` with `A_n = Σ_{k≤n} T_k w_k` increasing and adapted.
fn submartingale(f: &Filtration<Rational>, y: &LatVec<Rational>, ws: &[LatVec<Rational>]) -> VecSeq<Rational> {
    let m = doob(f, y);
    let len = f.stable_from();
    let mut acc = LatVec::zeros(y.len());
    let mut prefix = Vec::new();
    for n in 1..=len {
        if let Some(w) = ws.get(n - 1) {
            acc = acc.add(&f.at(n).apply(w).unwrap()).unwrap();
        }
        prefix.push(m.term(n).add(&acc).unwrap());
    }
    let last = prefix.pop().unwrap();
    VecSeq::new(y.len(), prefix, TailRule::Constant(last)).unwrap()
}

/// `P_i = P_{i−1} ∪` (random union of blocks of `T_i`), ending at the full band.
fn stopping_bands(f: &Filtration<Rational>, picks: &[Vec<bool>]) -> ProjSeq {
    let n = f.dim();
    let mut current = Band::empty(n);
    let mut prefix = Vec::new();
    for (i, pick) in picks.iter().enumerate() {
        let t = f.at(i + 1);
        let add = Band::from_mask((0..n).map(|a| pick[t.block_of(a) % pick.len()]).collect());
        current = current.join(&add).unwrap();
        prefix.push(current.clone());
    }
    ProjSeq::new(n, prefix, ProjTail::Constant(Band::full(n))).unwrap()
}

type Setup = (Filtration<Rational>, LatVec<Rational>, Vec<LatVec<Rational>>, Vec<Vec<bool>>);

fn setup(n: usize) -> impl Strategy<Value = Setup> {
    (
        filtration(n),
        lat(n),
        prop::collection::vec(nonneg_lat(n), 0..=4),
        prop::collection::vec(prop::collection::vec(any::<bool>(), 8), 0..=4),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn doob_martingales_and_stopping((f, y, ws, picks) in sized(setup)) {
        let proc = AdaptedProcess::new(doob(&f, &y), f.clone()).unwrap();
        prop_assert!(proc.is_martingale().unwrap());
        let tau = StoppingTime::new(stopping_bands(&f, &picks), &f).unwrap();
        prop_assert!(proc.stop(&tau).unwrap().is_martingale().unwrap());
        let sub = AdaptedProcess::new(submartingale(&f, &y, &ws), f.clone()).unwrap();
        prop_assert!(sub.is_submartingale().unwrap());
        prop_assert!(sub.stop(&tau).unwrap().is_submartingale().unwrap());
        // Increments after the first stage make the inequality strict.
        if ws.iter().take(f.stable_from()).skip(1).any(|w| !w.is_zero()) {
            prop_assert!(!sub.is_martingale().unwrap());
        }
    }

    #[test]
    fn stage_bound_and_first_passage((f, y, ws, _p) in sized(setup), k in 1i64..=12) {
        let sub = AdaptedProcess::new(submartingale(&f, &y, &ws), f.clone()).unwrap();
        let k = q(k, 2);
        let report = stopped_stage_bound(&sub, &k).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        let tau = tau_k(sub.xs(), &k).unwrap();
        prop_assert!(tau.is_partition());
        // Coordinate histories: first index above K.
        for a in 0..f.dim() {
            let first = (1..=sub.xs().horizon()).find(|&n| sub.xs().term(n).coords()[a] > k);
            match first {
                Some(n) => prop_assert!(tau.passage_at(n).contains(a)),
                None => prop_assert!(tau.never.contains(a)),
            }
        }
        // τ^K is a stopping time for the filtration.
        prop_assert!(StoppingTime::new(tau.time.clone(), &f).is_ok());
    }

    #[test]
    fn stopped_sequence_second_form((xs, k) in sized(|n| (seq(n, false), 1i64..=10))) {
        let tau = tau_k(&xs, &q(k, 2)).unwrap();
        if let Ok(z) = stop_process(&xs, &tau.time) {
            for n in 1..=xs.horizon() + 3 {
                let mut expected = tau.never.project_lat(&xs.term(n)).unwrap();
                for (j, b) in tau.passage.iter().enumerate() {
                    expected = expected.add(&b.project_lat(&xs.term((j + 1).min(n))).unwrap()).unwrap();
                }
                prop_assert_eq!(z.term(n), expected);
            }
        } else {
            let geometric = matches!(xs.tail(), TailRule::Geometric { .. });
            prop_assert!(geometric);
        }
    }

    #[test]
    fn compensator_has_same_infinite_part((f, picks) in sized(|n| (filtration(n), prop::collection::vec(prop::collection::vec(any::<bool>(), 8), 1..=6)))) {
        let n = f.dim();
        let measurable = |i: usize, pick: &Vec<bool>| {
            let t = f.at(i);
            Band::from_mask((0..n).map(|a| pick[t.block_of(a) % pick.len()]).collect())
        };
        let mut prefix: Vec<Band> = picks.iter().enumerate().map(|(i, p)| measurable(i + 1, p)).collect();
        let tail_band = prefix.pop().unwrap();
        // Tail bands must commute with the tail operator.
        let tail_band = measurable(prefix.len() + 1, &tail_band.mask().to_vec());
        let ps = ProjSeq::new(n, prefix, ProjTail::Constant(tail_band)).unwrap();
        let report = same_infinite_part_check(&f, &ps).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn divergence_band_for_martingales((f, y, _w, _p) in sized(setup)) {
        let proc = AdaptedProcess::new(doob(&f, &y), f).unwrap();
        let report = divergence_band_check(&proc).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn convergence_on_band_families((xs, fam) in sized(|n| (seq(n, false), prop::collection::vec(band(n), 0..=4)))) {
        prop_assert!(band_family_convergence(&xs, &fam).unwrap().passed());
    }

    #[test]
    fn summability_implies_convergence((t, xs, x) in sized(|n| (cond_exp(n), seq(n, false), lat(n)))) {
        let target = xs.order_limit().unwrap_or(x);
        prop_assert!(summable_exceedance_check(&t, &xs, &target).unwrap().holds());
        prop_assert!(summable_moment_check(&t, &xs, &target, 1.0).unwrap().holds());
        prop_assert!(summable_moment_check(&t, &xs, &target, 2.0).unwrap().holds());
    }

    #[test]
    fn first_lemma((t, xs) in sized(|n| (cond_exp(n), seq(n, true)))) {
        let bound = xs.sup_terms().to_lat().unwrap();
        let report = bcl1(&t, &xs, &bound).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
        if report.status == Status::Pass {
            prop_assert!(xs.limsup_seq().is_zero());
        }
    }

    #[test]
    fn second_lemma_block_union_tails((t, prefix, picks) in sized(|n| (cond_exp(n), prop::collection::vec(band(n), 0..=1), prop::collection::vec(any::<bool>(), 3)))) {
        let n = t.dim();
        let tail = Band::from_mask((0..n).map(|a| picks[t.block_of(a) % 3]).collect());
        let ps = ProjSeq::new(n, prefix, ProjTail::Constant(tail)).unwrap();
        match bcl2(&t, &ps) {
            Ok(report) => {
                prop_assert!(report.passed(), "{:?}", report);
                prop_assert!(t.commutes(&Band::from_indices(n, &report.bands["series_infinite"])));
            }
            Err(supcone::Error::Contract(_)) => {
                // A prefix band dependent on the others is rejected, never misjudged.
                let fam: Vec<Band> = ps.distinct_masks().into_iter().map(|(b, _)| b).collect();
                prop_assert!(!t.check_independence(&fam).unwrap());
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn product_harness_grid() {
    for m in 2..=10usize {
        let probs: Vec<Rational> = (0..m).map(|k| q(1 + (k as i64 % 4), 5)).collect();
        let r = product_harness(&probs).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn product_space_weights_sum_to_one() {
    let (space, bands) = supcone::product_space(&[q(1, 3), q(1, 1), q(1, 2)]).unwrap();
    assert_eq!(space.atom_count(), 4);
    assert!(bands[1].is_full());
    let t = CondExp::trivial(&space);
    assert_eq!(t.apply_indicator(&bands[0]).unwrap().coords()[0], q(1, 3));
    let _ = AtomicSpace::<Rational>::uniform(1).unwrap();
}

#[test]
fn stage_bound_counts_first_jump() {
    // x_n = 7 everywhere, K = 1/2: stopped at once, T|x̃_1| = 7 while
    // 2K − T x_1 + 2T sup_{n≥1}(x_{n+1} − x_n)^+ = −6.
    let s = AtomicSpace::<Rational>::uniform(1).unwrap();
    let t = CondExp::trivial(&s);
    let f = Filtration::constant(t.clone(), t).unwrap();
    let xs = VecSeq::new(1, vec![], TailRule::Constant(LatVec::from_ints(&[7]))).unwrap();
    let proc = AdaptedProcess::new(xs, f).unwrap();
    let report = stopped_stage_bound(&proc, &q(1, 2)).unwrap();
    assert!(report.passed());
    assert_eq!(report.metrics["without_first_jump"], "false");
}
