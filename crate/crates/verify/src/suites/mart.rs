//! Martingales on a filtration: stopping, first passage above `K`, the
//! stage bound, and the convergence theorems.

use rand::Rng;
use supcone::martingale::{
    divergence_band_check, same_infinite_part_check, stopped_stage_bound,
    summable_exceedance_check, summable_moment_check,
};
use supcone::{
    stop_process, tau_k, Band, Error, Filtration, LatVec, ProjSeq, ProjTail, Scalar, StoppingTime,
    VecSeq,
};

use super::prop;
use crate::model::ProcessKind;
use crate::mutation::Mutation;
use crate::suite::{skip, Ctx, Needs, Property, Step, Stop, Suite};

pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let p = |name, check| prop(Suite::Martingales, name, Needs::Exact, check);
    vec![
        p("stage-bound", stage_bound::<S>),
        p("stopped-martingale", stopped_martingale::<S>),
        p("stopped-submartingale", stopped_submartingale::<S>),
        p("tau-k-partition", tau_k_partition::<S>),
        p("stopped-second-form", stopped_second_form::<S>),
        p("compensator-infinite-part", compensator_infinite_part::<S>),
        p("divergence-band", divergence_band::<S>),
        p("divergence-rejects-non-martingale", divergence_rejects_non_martingale::<S>),
        p("summability-implies-convergence", summability_implies_convergence::<S>),
    ]
}

/// A level: half-integers, or a value some term actually takes.
fn level<S: Scalar>(cx: &mut Ctx<S>, xs: &VecSeq<S>) -> S {
    if cx.rng().gen_bool(0.5) {
        let n = cx.rng().gen_range(1..=xs.horizon());
        let j = cx.rng().gen_range(0..xs.dim());
        let v = xs.term(n).coords()[j].clone();
        if v > S::zero() {
            cx.record("K", &v);
            return v;
        }
    }
    S::from_ratio(cx.int("2K", 1, 24), 2)
}

fn stopping_time<S: Scalar>(cx: &mut Ctx<S>, f: &Filtration<S>) -> Result<StoppingTime, Stop> {
    let ps = cx.proj("τ", |p| {
        matches!(p.tail(), ProjTail::Constant(b) if b.is_full()) && StoppingTime::new(p.clone(), f).is_ok()
    })?;
    Ok(StoppingTime::new(ps, f)?)
}

fn stage_bound<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let proc = cx.process("x", &[ProcessKind::Submartingale, ProcessKind::Martingale])?;
    let k = level(cx, proc.xs());
    let report = stopped_stage_bound(&proc, &k)?;
    cx.ensure("T|x̃_n| ≤ 2Ke + 2T sup (x_(n+1) − x_n)⁺ − T x_1", report.passed(), &report.detail, "pass")
}

fn stopped_martingale<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let proc = cx.process("x", &[ProcessKind::Martingale])?;
    let tau = stopping_time(cx, proc.filtration())?;
    let stopped = proc.stop(&tau)?;
    cx.ensure("stopped martingale is a martingale", stopped.is_martingale()?, format!("{:?}", stopped.violation(false)?), "none")
}

fn stopped_submartingale<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let proc = cx.process("x", &[ProcessKind::Submartingale])?;
    let tau = stopping_time(cx, proc.filtration())?;
    let stopped = proc.stop(&tau)?;
    cx.ensure("stopped submartingale is a submartingale", stopped.is_submartingale()?, format!("{:?}", stopped.violation(true)?), "none")
}

fn tau_k_partition<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |_| true)?;
    let k = level(cx, &xs);
    let tau = match tau_k(&xs, &k) {
        Ok(t) => t,
        Err(Error::Domain(reason)) => return skip(&reason),
        Err(e) => return Err(e.into()),
    };
    cx.ensure("B_(K,n) and B_(K,∞) partition the atoms", tau.is_partition(), format!("{:?}", tau.passage), &tau.never)?;
    let at_level = cx.mutated(Mutation::PassageAtLevel);
    for a in 0..xs.dim() {
        let above = |n: usize| {
            let v = xs.term(n).coords()[a].clone();
            if at_level { v >= k } else { v > k }
        };
        match (1..=xs.horizon()).find(|&n| above(n)) {
            Some(n) => cx.ensure(&format!("atom {a} first exceeds K at n = {n}"), tau.passage_at(n).contains(a), tau.passage_at(n), a)?,
            None => cx.ensure(&format!("atom {a} never exceeds K"), tau.never.contains(a), &tau.never, a)?,
        }
    }
    Ok(())
}

fn stopped_second_form<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |_| true)?;
    let k = level(cx, &xs);
    let tau = match tau_k(&xs, &k) {
        Ok(t) => t,
        Err(Error::Domain(reason)) => return skip(&reason),
        Err(e) => return Err(e.into()),
    };
    let z = match stop_process(&xs, &tau.time) {
        Ok(z) => z,
        // Constant plus geometric tails are not representable.
        Err(Error::Domain(reason)) => return skip(&reason),
        Err(e) => return Err(e.into()),
    };
    for n in 1..=xs.horizon() + 3 {
        let mut second = tau.never.project_lat(&xs.term(n))?;
        for (j, b) in tau.passage.iter().enumerate() {
            second = second.add(&b.project_lat(&xs.term((j + 1).min(n)))?)?;
        }
        let first = if cx.mutated(Mutation::StopLiveBandTypo) {
            // Σ_{j<n} P_(K,j) x_j + P_(K,n−1)^d x_n.
            let mut acc = LatVec::zeros(xs.dim());
            for j in 1..n {
                acc = acc.add(&tau.passage_at(j).project_lat(&xs.term(j))?)?;
            }
            let previous = if n > 1 { tau.passage_at(n - 1) } else { Band::empty(xs.dim()) };
            acc.add(&previous.complement().project_lat(&xs.term(n))?)?
        } else {
            z.term(n)
        };
        cx.eq(&format!("x̃_{n} = Σ_j P_(K,j) x_(j∧{n}) + P_(K,∞) x_{n}"), &first, &second)?;
    }
    Ok(())
}

fn commutes_with_chain<S: Scalar>(f: &Filtration<S>, ps: &ProjSeq) -> bool {
    (1..=ps.horizon().max(f.stable_from() + 1)).all(|n| f.at(n).commutes(ps.term(n)))
}

fn compensator_infinite_part<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let f = cx.filtration("F")?;
    let ps = cx.proj("P", |p| commutes_with_chain(&f, p))?;
    let report = same_infinite_part_check(&f, &ps)?;
    cx.ensure("(Σ P_n e)^∞ = (Σ T_(n−1) P_n e)^∞", report.passed(), &report.detail, "pass")
}

fn divergence_band<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let proc = cx.process("x", &[ProcessKind::Martingale])?;
    let report = divergence_band_check(&proc)?;
    cx.ensure("divergence band = (sup x_n)^∞", report.passed(), &report.detail, "pass")
}

fn divergence_rejects_non_martingale<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let proc = cx.process("x", &[ProcessKind::Submartingale, ProcessKind::Adapted])?;
    if proc.is_martingale()? {
        return Ok(());
    }
    let rejected = matches!(divergence_band_check(&proc), Err(Error::Contract(_)));
    cx.ensure("non-martingale input is rejected", rejected, rejected, true)
}

fn summability_implies_convergence<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, xs) = (cx.cond_exp("T")?, cx.seq("xs", |_| true)?);
    let target = match xs.order_limit() {
        Some(l) if cx.rng().gen_bool(0.5) => l,
        _ => cx.lat("x")?,
    };
    let r = summable_exceedance_check(&t, &xs, &target)?;
    cx.ensure("Σ T P_(|x_n − x| − εe)⁺ e finite ⇒ x_n → x (uo)", r.holds(), &r.detail, "holds")?;
    for p in [1.0, 2.0] {
        let r = summable_moment_check(&t, &xs, &target, p)?;
        cx.ensure(&format!("Σ T|x_n − x|^{p} finite ⇒ x_n → x (uo)"), r.holds(), &r.detail, "holds")?;
    }
    Ok(())
}
