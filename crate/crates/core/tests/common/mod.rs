#![allow(dead_code)]

use proptest::prelude::*;
use supcone::{AtomicSpace, Band, CondExp, Ext, ExtVec, LatVec, ProjSeq, ProjTail, Rational, Scalar, TailRule, VecSeq};

pub fn rat() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=3).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

pub fn nonneg_rat() -> impl Strategy<Value = Rational> {
    (0i64..=12, 1i64..=3).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

pub fn lat(n: usize) -> impl Strategy<Value = LatVec<Rational>> {
    prop::collection::vec(rat(), n).prop_map(LatVec::new)
}

pub fn nonneg_lat(n: usize) -> impl Strategy<Value = LatVec<Rational>> {
    prop::collection::vec(nonneg_rat(), n).prop_map(LatVec::new)
}

fn ext_from(value: Rational, inf: bool) -> Ext<Rational> {
    if inf {
        Ext::Inf
    } else {
        Ext::Fin(value)
    }
}

pub fn ext(n: usize) -> impl Strategy<Value = ExtVec<Rational>> {
    prop::collection::vec((rat(), prop::bool::weighted(0.25)), n)
        .prop_map(|cs| ExtVec::new(cs.into_iter().map(|(v, i)| ext_from(v, i)).collect()))
}

pub fn nonneg_ext(n: usize) -> impl Strategy<Value = ExtVec<Rational>> {
    prop::collection::vec((nonneg_rat(), prop::bool::weighted(0.25)), n)
        .prop_map(|cs| ExtVec::new(cs.into_iter().map(|(v, i)| ext_from(v, i)).collect()))
}

pub fn band(n: usize) -> impl Strategy<Value = Band> {
    prop::collection::vec(any::<bool>(), n).prop_map(Band::from_mask)
}

pub fn space(n: usize) -> impl Strategy<Value = AtomicSpace<Rational>> {
    prop::collection::vec(1i64..=5, n).prop_map(|raw| {
        let total: i64 = raw.iter().sum();
        AtomicSpace::new(raw.iter().map(|&w| Rational::from_ratio(w, total)).collect()).unwrap()
    })
}

pub fn labels(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..3, n)
}

pub fn cond_exp(n: usize) -> impl Strategy<Value = CondExp<Rational>> {
    (space(n), labels(n)).prop_map(|(s, l)| CondExp::from_labels(&s, &l).unwrap())
}

pub fn tail_rule(n: usize, nonneg: bool) -> BoxedStrategy<TailRule<Rational>> {
    let vec = move || -> BoxedStrategy<LatVec<Rational>> {
        if nonneg {
            nonneg_lat(n).boxed()
        } else {
            lat(n).boxed()
        }
    };
    prop_oneof![
        Just(TailRule::Zero),
        vec().prop_map(TailRule::Constant),
        prop::collection::vec(vec(), 1..=3).prop_map(TailRule::Periodic),
        (nonneg_lat(n), 1i64..=3).prop_map(|(v, k)| TailRule::Geometric {
            v,
            ratio: Rational::from_ratio(k, 4)
        }),
    ]
    .boxed()
}

pub fn seq(n: usize, nonneg: bool) -> impl Strategy<Value = VecSeq<Rational>> {
    let term = if nonneg { nonneg_lat(n).boxed() } else { lat(n).boxed() };
    (prop::collection::vec(term, 0..=4), tail_rule(n, nonneg))
        .prop_map(move |(prefix, tail)| VecSeq::new(n, prefix, tail).unwrap())
}

pub fn proj_seq(n: usize) -> impl Strategy<Value = ProjSeq> {
    (
        prop::collection::vec(band(n), 0..=4),
        prop_oneof![
            band(n).prop_map(ProjTail::Constant),
            prop::collection::vec(band(n), 1..=3).prop_map(ProjTail::Periodic),
        ],
    )
        .prop_map(move |(prefix, tail)| ProjSeq::new(n, prefix, tail).unwrap())
}

/// Space dimension and a value built for it.
pub fn sized<T: std::fmt::Debug, St: Strategy<Value = T>>(
    f: impl Fn(usize) -> St + Clone + 'static,
) -> impl Strategy<Value = T> {
    (1usize..=6).prop_flat_map(f)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn to_f64_vec(v: &LatVec<Rational>) -> Vec<f64> {
    v.coords().iter().map(Scalar::to_f64).collect()
}
