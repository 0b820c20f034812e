//! Limits, series and oscillation of eventually periodic sequences, checked
//! against term-by-term oracles.

use rand::Rng;
use supcone::martingale::band_family_convergence;
use supcone::oracle::{partial_sums_f64, window_extrema};
use supcone::{Backend, Band, Ext, LatVec, Scalar, TailRule, TpConfig, VecSeq};

use super::prop;
use crate::mutation::Mutation;
use crate::suite::{Ctx, Needs, Property, Step, Suite};

/// Partial sums are taken this far for the series oracle.
pub const BRUTE_TERMS: usize = 10_000;

pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let p = |name, needs, check| prop(Suite::Convergence, name, needs, check);
    vec![
        p("limit-oracles", Needs::Any, limit_oracles::<S>),
        p("limsup-window", Needs::Any, limsup_window::<S>),
        p("series-brute-force", Needs::Any, series_brute_force::<S>),
        p("decreasing-limit", Needs::Exact, decreasing_limit::<S>),
        p("uo-three-way", Needs::Exact, uo_three_way::<S>),
        p("oscillation-window", Needs::Any, oscillation_window::<S>),
        p("exceed-masks", Needs::Any, exceed_masks::<S>),
        p("de-morgan", Needs::Any, de_morgan::<S>),
        p("band-family-convergence", Needs::Any, band_family::<S>),
    ]
}

/// Start of a late window where geometric terms are below `1e-9`.
fn late<S: Scalar>(xs: &VecSeq<S>) -> usize {
    xs.tail_start() + 100 * xs.period()
}

fn limit_oracles<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |_| true)?;
    let limit = xs.order_limit();
    cx.eq("order limit exists ⇔ uo-Cauchy", &limit.is_some(), &xs.uo_cauchy())?;
    // A coordinate converges iff a late window of two periods is flat.
    let window = window_extrema(&xs, late(&xs), 2 * xs.period());
    let flat = Band::from_mask(window.iter().map(|(lo, hi)| hi - lo < 1e-9).collect());
    cx.eq("convergence band = flat late coordinates", &xs.convergence_band(), &flat)?;
    cx.eq("order limit exists ⇔ all coordinates flat", &limit.is_some(), &flat.is_full())?;
    if let Some(l) = &limit {
        cx.eq("uo limit = order limit", &xs.uo_limit(l)?, &true)?;
        cx.eq("limsup = order limit", &xs.limsup_seq(), &l.to_ext())?;
        cx.eq("liminf = order limit", &xs.liminf_seq(), l)?;
    }
    let zero = LatVec::zeros(xs.dim());
    cx.eq("uo limit 0 ⇔ order limit 0", &xs.uo_limit(&zero)?, &(limit.as_ref() == Some(&zero)))?;
    cx.le_ext("liminf ≤ limsup", &xs.liminf_seq().to_ext(), &xs.limsup_seq())
}

fn limsup_window<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |_| true)?;
    let window = window_extrema(&xs, late(&xs), 2 * xs.period());
    let pick_hi = !cx.mutated(Mutation::LimsupAsLiminf);
    let oracle_sup: Vec<f64> = window.iter().map(|&(lo, hi)| if pick_hi { hi } else { lo }).collect();
    let oracle_inf: Vec<f64> = window.iter().map(|&(lo, _)| lo).collect();
    let sup: Vec<f64> = xs.limsup_seq().coords().iter().map(Ext::to_f64).collect();
    let inf: Vec<f64> = xs.liminf_seq().coords().iter().map(Scalar::to_f64).collect();
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9);
    cx.ensure("limsup = max of late window", close(&sup, &oracle_sup), format!("{sup:?}"), format!("{oracle_sup:?}"))?;
    cx.ensure("liminf = min of late window", close(&inf, &oracle_inf), format!("{inf:?}"), format!("{oracle_inf:?}"))
}

fn series_brute_force<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |s| s.is_nonneg())?;
    let mut sum = xs.series_sum()?;
    if cx.mutated(Mutation::SeriesSkipFirstTerm) {
        sum = sum.sub_finite(&xs.term(1))?;
    }
    let at_n = partial_sums_f64(&xs, BRUTE_TERMS);
    let at_2n = partial_sums_f64(&xs, 2 * BRUTE_TERMS);
    // Divergent coordinates gain at least one positive term per period.
    let divergent = Band::from_mask(at_n.iter().zip(&at_2n).map(|(a, b)| b - a > 1.0).collect());
    cx.eq("divergence band of Σx_n = growing partial sums", &sum.infinite_band(), &divergent)?;
    for (j, (s, brute)) in sum.coords().iter().zip(&at_n).enumerate() {
        if let Ext::Fin(v) = s {
            if (v.to_f64() - brute).abs() >= 1e-9 {
                return cx.fail(&format!("Σx_n = partial sum at N = 10⁴ (atom {j})"), v, brute);
            }
        }
    }
    Ok(())
}

fn decreasing_limit<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let t = cx.cond_exp("T")?;
    let v = cx.nonneg_lat("v")?;
    let c = cx.nonneg_lat("c")?.meet(&v)?;
    let tail = match cx.int("tail", 0, 2) {
        0 => TailRule::Geometric { v: v.clone(), ratio: S::from_ratio(cx.int("r·4", 1, 3), 4) },
        1 => TailRule::Constant(c),
        _ => TailRule::Zero,
    };
    let xs = VecSeq::new(v.len(), vec![v.scale(&S::from_int(3)), v.scale(&S::from_int(2))], tail)?;
    let zero = LatVec::zeros(xs.dim());
    let tp_null = t.tp_converges(&xs, &zero)?;
    let order_null = xs.order_limit().as_ref() == Some(&zero);
    cx.ensure("x_n ↓, x_n → 0 in T-probability ⇒ x_n → 0 in order", !tp_null || order_null, tp_null, order_null)?;
    cx.ensure("x_n ↓ 0 in order ⇒ x_n → 0 in T-probability", !order_null || tp_null, order_null, tp_null)
}

fn uo_three_way<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let t = cx.cond_exp("T")?;
    let xs = cx.seq("xs", |_| true)?;
    let target = match xs.order_limit() {
        Some(l) if cx.rng().gen_bool(0.5) => l,
        _ => cx.lat("x")?,
    };
    let definitional = t.tp_definitional(&xs, &target, TpConfig::default())?;
    let spanning = t.tp_spanning(&xs, &target)?;
    let unit = t.tp_truncated(&xs, &target, &LatVec::ones(t.dim()))?;
    cx.eq("definitional ⇔ T(|x_n − x| ∧ u) → 0 on atoms", &definitional, &spanning)?;
    cx.eq("definitional ⇔ T(|x_n − x| ∧ e) → 0", &definitional, &unit)?;
    cx.eq("T-probability ⇔ uo on atomic models", &definitional, &xs.uo_limit(&target)?)
}

fn oscillation_window<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |_| true)?;
    let osc = xs.tail_oscillation();
    let geometric = matches!(xs.tail(), TailRule::Geometric { .. });
    for n in 1..=xs.horizon() {
        let window = window_extrema(&xs, n, 200 * xs.period());
        for (j, (lo, hi)) in window.into_iter().enumerate() {
            let lo = if geometric { lo.min(0.0) } else { lo };
            let value = osc.term(n).coords()[j].to_f64();
            if (hi - lo - value).abs() >= 1e-9 {
                return cx.fail(&format!("sup_(k≥{n}) |x_k − x_l| (atom {j})"), value, hi - lo);
            }
        }
    }
    Ok(())
}

fn exceed_masks<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (xs, target) = (cx.seq("xs", |_| true)?, cx.lat("x")?);
    let eps = S::from_ratio(cx.int("ε·4", 1, 8), 4);
    let masks = xs.exceed_masks(&target, &eps)?;
    for n in 1..=xs.horizon() + 60 {
        let dev: Vec<S> = xs.term(n).coords().iter().zip(target.coords()).map(|(a, b)| (a.clone() - b.clone()).abs()).collect();
        // Atoms within rounding of ε have no well-defined float mask.
        let clear = Band::from_mask(dev.iter().map(|d| !d.close_to(&eps, cx.tol()) || S::BACKEND == Backend::Rational).collect());
        let expected = Band::from_mask(dev.iter().map(|d| *d > eps).collect());
        cx.eq(&format!("P_(|x_{n} − x| − εe)⁺"), &masks.term(n).meet(&clear)?, &expected.meet(&clear)?)?;
    }
    Ok(())
}

fn de_morgan<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let ps = cx.proj("P", |_| true)?;
    cx.eq("liminf P_n^d = (limsup P_n)^d", &ps.complement().liminf(), &ps.limsup().complement())?;
    cx.eq("limsup P_n^d = (liminf P_n)^d", &ps.complement().limsup(), &ps.liminf().complement())?;
    cx.ensure("liminf ≤ limsup", ps.liminf().is_subset(&ps.limsup())?, ps.liminf(), ps.limsup())
}

fn band_family<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |_| true)?;
    let k = cx.int("family size", 0, 4);
    let family: Vec<Band> = (0..k).map(|i| cx.band(&format!("P{i}"))).collect();
    let report = band_family_convergence(&xs, &family)?;
    cx.ensure("P_γ x_n converges for all γ ⇒ (sup P_γ) x_n converges", report.passed(), &report.detail, "pass")
}
