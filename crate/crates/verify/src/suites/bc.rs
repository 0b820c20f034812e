//! Both Borel–Cantelli lemmas and the product-space harness.

use rand::Rng;
use supcone::{bcl1, bcl1_off_band, bcl2, product_harness, Band, Error, ProjTail, Scalar, Status};

use super::prop;
use crate::mutation::Mutation;
use crate::suite::{skip, Ctx, Needs, Property, Step, Suite};

pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let p = |name, needs, check| prop(Suite::BorelCantelli, name, needs, check);
    vec![
        p("bcl1", Needs::Any, first_lemma::<S>),
        p("bcl1-off-band", Needs::Any, first_lemma_off_band::<S>),
        p("bcl2", Needs::Exact, second_lemma::<S>),
        p("product-harness", Needs::Exact, harness::<S>),
    ]
}

fn first_lemma<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, xs) = (cx.cond_exp("T")?, cx.seq("xs", |s| s.is_nonneg())?);
    let bound = xs.sup_terms().to_lat().expect("terms of a sequence are finite");
    let report = bcl1(&t, &xs, &bound)?;
    cx.ensure("Σ T x_n finite ⇒ limsup x_n = 0", report.holds(), &report.detail, "holds")?;
    if report.status == Status::Pass {
        cx.ensure("limsup x_n = 0", xs.limsup_seq().is_zero(), xs.limsup_seq(), 0)?;
    }
    Ok(())
}

fn first_lemma_off_band<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, xs) = (cx.cond_exp("T")?, cx.seq("xs", |s| s.is_nonneg())?);
    let bound = xs.sup_terms().to_lat().expect("terms of a sequence are finite");
    let report = bcl1_off_band(&t, &xs, &bound)?;
    cx.ensure("limsup x_n = 0 off the divergence band", report.holds(), &report.detail, "holds")
}

fn second_lemma<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let f = cx.filtration("F")?;
    let t = f.global().clone();
    let ps = cx.proj("P", |p| {
        let tail = match p.tail() {
            ProjTail::Constant(b) => vec![b.clone()],
            ProjTail::Periodic(bs) => bs.clone(),
        };
        tail.iter().all(|b| t.is_block_union(b))
    })?;
    let report = match bcl2(&t, &ps) {
        Ok(r) => r,
        Err(Error::Contract(reason)) => return skip(&reason),
        Err(e) => return Err(e.into()),
    };
    let n = t.dim();
    let infinite = Band::from_indices(n, &report.bands["series_infinite"]);
    // Σ T P_n e diverges exactly where some recurring band has mass.
    let mut oracle = vec![false; n];
    for b in ps.tail_masks() {
        for (a, v) in t.apply_indicator(b)?.coords().iter().enumerate() {
            oracle[a] |= *v > S::zero();
        }
    }
    let oracle = Band::from_mask(oracle);
    cx.eq("divergence band of Σ T P_n e", &infinite, &oracle)?;
    let rhs = if cx.mutated(Mutation::Bcl2Liminf) { ps.liminf() } else { ps.limsup() };
    cx.eq("P_B = limsup P_n", &infinite, &rhs)?;
    cx.ensure("P_B commutes with T", t.commutes(&infinite), &infinite, "commutes")?;
    cx.ensure("bcl2 report", report.passed(), &report.detail, "pass")
}

fn harness<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let m = cx.int("m", 2, 8) as usize;
    let fifths: Vec<i64> = (0..m).map(|_| cx.rng().gen_range(1..=5)).collect();
    cx.record("5p", format!("{fifths:?}"));
    let probs: Vec<S> = fifths.iter().map(|&k| S::from_ratio(k, 5)).collect();
    let report = product_harness(&probs)?;
    cx.ensure("T(∏P_k^d)e = ∏(e − TP_k e) ≤ exp(−Σ TP_k e)", report.passed(), &report.detail, "pass")?;
    let total: f64 = fifths.iter().map(|&k| k as f64 / 5.0).sum();
    let product: f64 = report.metrics["product_f64"].parse().expect("numeric metric");
    if total >= 5.0 {
        cx.ensure("Σp ≥ 5 ⇒ T(∏P_k^d)e < 0.01", product < 0.01, product, 0.01)?;
    }
    Ok(())
}
