//! Independent oracles computing suprema of increasing sequences by finite
//! evaluation only. Used to cross-check the closed forms elsewhere.

use crate::error::{Error, Result};
use crate::monotone::MonotoneMap;
use crate::scalar::{float_tolerance, Ext, Scalar};
use crate::seq::{TailRule, VecSeq};
use crate::vector::{ExtVec, LatVec};

/// Evaluations beyond this many doublings are treated as non-stabilizing.
const MAX_DOUBLINGS: u32 = 40;

/// Sampling begins at `start · 2^LEAD_IN`. Piecewise-linear families can sit
/// on a plateau well past `start` before a slowly growing piece overtakes it.
const LEAD_IN: u32 = 16;

/// Consecutive windows that must agree before a coordinate is classified.
const PERSIST: usize = 3;

/// `sup_k g(k)` for an increasing family that is, on each coordinate,
/// eventually constant or eventually a polynomial in `k` of positive degree.
///
/// `g` is sampled at `k, 2k, 4k, 8k` for `k = start · 2^16, …`. A coordinate
/// constant over the window has converged; one whose increments at least
/// double with each doubling of `k` grows without bound. A verdict counts
/// once it holds over three consecutive windows, and sampling continues
/// until every coordinate has one.
pub fn sup_of_increasing<S: Scalar>(
    start: u64,
    g: impl Fn(u64) -> Result<LatVec<S>>,
) -> Result<ExtVec<S>> {
    let two = S::from_int(2);
    let mut k = start.max(1) << LEAD_IN;
    let mut window = vec![g(k)?, g(2 * k)?, g(4 * k)?];
    let mut streak: Vec<(Option<Ext<S>>, usize)> = vec![(None, 0); window[0].len()];
    for _ in 0..MAX_DOUBLINGS {
        window.push(g(8 * k)?);
        for (j, (last, count)) in streak.iter_mut().enumerate() {
            let v: Vec<&S> = window.iter().map(|w| &w.coords()[j]).collect();
            let d: Vec<S> = v.windows(2).map(|p| p[1].clone() - p[0].clone()).collect();
            // Rounding in g grows with the magnitude of its values.
            let tol = float_tolerance() * (1.0 + v[3].to_f64().abs());
            let zero = S::zero();
            let verdict = if d.iter().all(|x| x.close_to(&zero, tol)) {
                Some(Ext::Fin(v[3].clone()))
            } else if d[0] > zero
                && (d[0].clone() * two.clone()).le_tol(&d[1], tol)
                && (d[1].clone() * two.clone()).le_tol(&d[2], tol)
            {
                Some(Ext::Inf)
            } else {
                None
            };
            let same = match (&verdict, &*last) {
                (Some(Ext::Inf), Some(Ext::Inf)) => true,
                (Some(Ext::Fin(a)), Some(Ext::Fin(b))) => a.close_to(b, tol),
                _ => false,
            };
            *count = if same { *count + 1 } else { usize::from(verdict.is_some()) };
            *last = verdict;
        }
        if streak.iter().all(|(_, c)| *c >= PERSIST) {
            return Ok(ExtVec::new(streak.into_iter().map(|(v, _)| v.expect("classified")).collect()));
        }
        k *= 2;
        window.remove(0);
    }
    Err(Error::Internal(
        "increasing family did not settle within the doubling budget".into(),
    ))
}

/// `lim_k f(x ∧ k e)` for `x` with finite negative part, computed from the
/// finite map alone. Sampling starts above every finite coordinate of `x`
/// and every constant of `f`.
pub fn truncation_limit<S: Scalar>(f: &MonotoneMap<S>, x: &ExtVec<S>) -> Result<ExtVec<S>> {
    let max_finite = x
        .coords()
        .iter()
        .filter_map(Ext::finite)
        .map(|v| v.abs().ceil_u64())
        .max()
        .unwrap_or(0);
    sup_of_increasing(max_finite.max(f.constant_bound()) + 1, |k| {
        let cap = S::from_int(k as i64);
        let truncated = LatVec::new(
            x.coords()
                .iter()
                .map(|c| match c {
                    Ext::Fin(v) => S::min_of(v, &cap),
                    Ext::Inf => cap.clone(),
                })
                .collect(),
        );
        f.apply(&truncated)
    })
}

/// Partial sums `Σ_{k≤n} x_k` in floating point, term by term. Geometric
/// tails are advanced by repeated multiplication, never by closed form.
pub fn partial_sums_f64<S: Scalar>(xs: &VecSeq<S>, n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; xs.dim()];
    let mut geometric = match xs.tail() {
        TailRule::Geometric { v, ratio } => Some((to_f64(v), ratio.to_f64())),
        _ => None,
    };
    for k in 1..=n {
        let term = match &mut geometric {
            Some((v, r)) if k >= xs.tail_start() => {
                let cur = v.clone();
                v.iter_mut().for_each(|c| *c *= *r);
                cur
            }
            _ => to_f64(&xs.term(k)),
        };
        for (a, b) in acc.iter_mut().zip(term) {
            *a += b;
        }
    }
    acc
}

/// Coordinatewise `(min, max)` of `x_from, …, x_{from+len−1}` in floating
/// point.
pub fn window_extrema<S: Scalar>(xs: &VecSeq<S>, from: usize, len: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(f64::INFINITY, f64::NEG_INFINITY); xs.dim()];
    for n in from..from + len {
        for (o, v) in out.iter_mut().zip(to_f64(&xs.term(n))) {
            *o = (o.0.min(v), o.1.max(v));
        }
    }
    out
}

fn to_f64<S: Scalar>(v: &LatVec<S>) -> Vec<f64> {
    v.coords().iter().map(Scalar::to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn classifies_bounded_and_unbounded_coordinates() {
        let sup = sup_of_increasing::<Rational>(1, |k| {
            Ok(LatVec::new(vec![
                Rational::from_int(5),
                Rational::from_int(3 * k as i64 + 1),
                Rational::from_int((k as i64).min(6)),
            ]))
        })
        .unwrap();
        assert_eq!(
            sup,
            ExtVec::new(vec![Ext::Fin(Rational::from_int(5)), Ext::Inf, Ext::Fin(Rational::from_int(6))])
        );
    }

    #[test]
    fn sees_past_a_plateau() {
        // Flat at 8/3 until k/22 overtakes it near k = 64, then capped at 4.
        for scale in [1, 1000] {
            let sup = sup_of_increasing::<f64>(5, |k| {
                let slow = k as f64 / (22.0 * scale as f64) - 0.25;
                Ok(LatVec::new(vec![slow.clamp(8.0 / 3.0, 4.0)]))
            })
            .unwrap();
            assert_eq!(sup, ExtVec::new(vec![Ext::Fin(4.0)]));
        }
    }

    #[test]
    fn partial_sums_follow_the_terms() {
        let xs = VecSeq::new(
            1,
            vec![LatVec::from_ints(&[3])],
            TailRule::Geometric {
                v: LatVec::from_ints(&[1]),
                ratio: Rational::from_ratio(1, 2),
            },
        )
        .unwrap();
        assert_eq!(partial_sums_f64(&xs, 3), vec![4.5]);
        assert_eq!(window_extrema(&xs, 1, 3), vec![(0.5, 3.0)]);
    }
}
