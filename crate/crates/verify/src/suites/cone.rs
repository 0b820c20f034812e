//! Cone axioms of the sup-completion: translation, order, truncation,
//! Birkhoff, sums and meets of nets, disjointness, sumsets, Riesz.

use supcone::oracle::sup_of_increasing;
use supcone::{Ext, ExtVec, Scalar};

use super::{prop, start_above};
use crate::mutation::Mutation;
use crate::suite::{Ctx, Needs, Property, Step, Suite};

pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let p = |name, check| prop(Suite::ConeAxioms, name, Needs::Any, check);
    vec![
        p("translation-meet", translation_meet::<S>),
        p("below-finite", below_finite::<S>),
        p("greatest-element", greatest_element::<S>),
        p("truncation-sup", truncation_sup::<S>),
        p("birkhoff-inequality", birkhoff_inequality::<S>),
        p("sup-of-operations", sup_of_operations::<S>),
        p("disjoint-sum", disjoint_sum::<S>),
        p("sum-join-meet", sum_join_meet::<S>),
        p("translation-lattice", translation_lattice::<S>),
        p("meet-subadditive", meet_subadditive::<S>),
        p("meet-disjoint-equality", meet_disjoint_equality::<S>),
        p("meet-absorb", meet_absorb::<S>),
        p("disjoint-pairs", disjoint_pairs::<S>),
        p("disjoint-sumsets", disjoint_sumsets::<S>),
        p("riesz-decomposition", riesz_decomposition::<S>),
        p("positive-negative-parts", positive_negative_parts::<S>),
        p("scaling", scaling::<S>),
    ]
}

fn translation_meet<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, a) = (cx.ext("x")?, cx.ext("y")?, cx.lat("a")?.to_ext());
    let lhs = x.add(&a.meet(&y)?)?;
    let (xa, xy) = (x.add(&a)?, x.add(&y)?);
    let rhs = if cx.mutated(Mutation::MeetAsJoin) { xa.join(&xy)? } else { xa.meet(&xy)? };
    cx.eq("x + (a ∧ y) = (x + a) ∧ (x + y)", &lhs, &rhs)
}

fn below_finite<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (a, z) = (cx.lat("a")?.to_ext(), cx.ext("z")?);
    let y = a.meet(&z)?;
    cx.le_ext("a ∧ z ≤ a", &y, &a)?;
    cx.ensure("y ≤ a finite ⇒ y finite", y.is_finite(), &y, "finite")
}

fn greatest_element<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.ext("x")?;
    let top = ExtVec::greatest(x.len());
    cx.le_ext("x ≤ ∞e", &x, &top)?;
    cx.eq("x ∨ ∞e = ∞e", &x.join(&top)?, &top)
}

fn truncation_sup<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.nonneg("x")?;
    let sup = sup_of_increasing(start_above(&[&x]), |k| x.truncate(&S::from_int(k as i64)))?;
    cx.eq("sup_k (ke ∧ x) = x", &sup, &x)
}

fn birkhoff_inequality<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (a, b, c) = (cx.lat("a")?, cx.lat("b")?, cx.ext("c")?);
    let ac = a.to_ext().meet(&c)?.to_lat().expect("below a finite vector");
    let bc = b.to_ext().meet(&c)?.to_lat().expect("below a finite vector");
    let diff = a.sub(&b)?;
    let rhs = if cx.mutated(Mutation::BirkhoffSigned) { diff } else { diff.abs() };
    cx.le_lat("|a ∧ c − b ∧ c| ≤ |a − b|", &ac.sub(&bc)?.abs(), &rhs)
}

fn sup_of_operations<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    let start = start_above(&[&x, &y]);
    let tr = |v: &ExtVec<S>, k: u64| v.truncate(&S::from_int(k as i64));
    let sum = sup_of_increasing(start, |k| tr(&x, k)?.add(&tr(&y, k)?))?;
    cx.eq("sup (x_k + y_k) = x + y", &sum, &x.add(&y)?)?;
    let join = sup_of_increasing(start, |k| tr(&x, k)?.join(&tr(&y, k)?))?;
    cx.eq("sup (x_k ∨ y_k) = x ∨ y", &join, &x.join(&y)?)?;
    let meet = sup_of_increasing(start, |k| tr(&x, k)?.meet(&tr(&y, k)?))?;
    cx.eq("sup (x_k ∧ y_k) = x ∧ y", &meet, &x.meet(&y)?)
}

fn disjoint_sum<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, b) = (cx.nonneg("x")?, cx.nonneg("y")?, cx.band("B"));
    let (x, y) = (b.project(&x)?, b.complement().project(&y)?);
    cx.ensure("x ∧ y = 0", x.meet(&y)?.is_zero(), x.meet(&y)?, 0)?;
    cx.eq("x ∧ y = 0 ⇒ x + y = x ∨ y", &x.add(&y)?, &x.join(&y)?)
}

fn sum_join_meet<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    cx.eq("x + y = x ∨ y + x ∧ y", &x.add(&y)?, &x.join(&y)?.add(&x.meet(&y)?)?)
}

fn translation_lattice<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (a, x, y) = (cx.nonneg("a")?, cx.nonneg("x")?, cx.nonneg("y")?);
    let (ax, ay) = (a.add(&x)?, a.add(&y)?);
    cx.eq("a + x ∧ y = (a + x) ∧ (a + y)", &a.add(&x.meet(&y)?)?, &ax.meet(&ay)?)?;
    cx.eq("a + x ∨ y = (a + x) ∨ (a + y)", &a.add(&x.join(&y)?)?, &ax.join(&ay)?)
}

fn meet_subadditive<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, z) = (cx.nonneg("x")?, cx.nonneg("y")?, cx.nonneg("z")?);
    let lhs = x.meet(&y.add(&z)?)?;
    let rhs = x.meet(&y)?.add(&x.meet(&z)?)?;
    if cx.mutated(Mutation::SubadditiveEquality) {
        return cx.eq("x ∧ (y + z) = x ∧ y + x ∧ z", &lhs, &rhs);
    }
    cx.le_ext("x ∧ (y + z) ≤ x ∧ y + x ∧ z", &lhs, &rhs)
}

fn meet_disjoint_equality<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, z, b) = (cx.nonneg("x")?, cx.nonneg("y")?, cx.nonneg("z")?, cx.band("B"));
    let (y, z) = (b.project(&y)?, b.complement().project(&z)?);
    let lhs = x.meet(&y.add(&z)?)?;
    cx.eq("y ⊥ z ⇒ x ∧ (y + z) = x ∧ y + x ∧ z", &lhs, &x.meet(&y)?.add(&x.meet(&z)?)?)
}

fn meet_absorb<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, z, b) = (cx.nonneg("x")?, cx.nonneg("y")?, cx.nonneg("z")?, cx.band("B"));
    let (x, z) = (b.project(&x)?, b.complement().project(&z)?);
    cx.eq("x ∧ z = 0 ⇒ x ∧ (y + z) = x ∧ y", &x.meet(&y.add(&z)?)?, &x.meet(&y)?)
}

fn disjoint_pairs<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (p, q, b, c) = (cx.nonneg("x")?, cx.nonneg("v")?, cx.band("B"), cx.band("C"));
    let (x, y) = (b.project(&p)?, b.complement().project(&q)?);
    let (v, w) = (c.project(&q)?, c.complement().project(&p)?);
    let lhs = x.add(&v)?.meet(&y.add(&w)?)?;
    let rhs = x.meet(&w)?.add(&y.meet(&v)?)?;
    cx.eq("x ⊥ y, v ⊥ w ⇒ (x + v) ∧ (y + w) = x ∧ w + y ∧ v", &lhs, &rhs)
}

fn disjoint_sumsets<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let draw = |cx: &mut Ctx<S>, set: &str| -> Result<Vec<ExtVec<S>>, crate::suite::Stop> {
        let k = cx.int(&format!("|{set}|"), 1, 4);
        (0..k).map(|i| cx.ext(&format!("{set}{i}"))).collect()
    };
    let a = draw(cx, "A")?;
    let b = draw(cx, "B")?;
    let sup = |v: &[ExtVec<S>]| v[1..].iter().try_fold(v[0].clone(), |acc, x| acc.join(x));
    let mut sums = Vec::new();
    for x in &a {
        for y in &b {
            sums.push(x.add(y)?);
        }
    }
    cx.eq("sup (A + B) = sup A + sup B", &sup(&sums)?, &sup(&a)?.add(&sup(&b)?)?)
}

/// `y₁ = x ∧ y`, `z₁ = x − y₁` (0 where `y₁ = ∞`).
fn greedy<S: Scalar>(x: &ExtVec<S>, y: &ExtVec<S>) -> supcone::Result<(ExtVec<S>, ExtVec<S>)> {
    let y1 = x.meet(y)?;
    let z1 = x
        .coords()
        .iter()
        .zip(y1.coords())
        .map(|(xc, yc)| match (xc, yc) {
            (_, Ext::Inf) => Ext::Fin(S::zero()),
            (Ext::Inf, Ext::Fin(_)) => Ext::Inf,
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a.clone() - b.clone()),
        })
        .collect();
    Ok((y1, ExtVec::new(z1)))
}

fn riesz_decomposition<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, z) = (cx.ext("x")?, cx.ext("y")?, cx.ext("z")?);
    let x = x.meet(&y.add(&z)?)?;
    let (y1, z1) = if cx.mutated(Mutation::GreedyRiesz) { greedy(&x, &y)? } else { x.riesz_decompose(&y, &z)? };
    cx.le_ext("y₁ ≤ y", &y1, &y)?;
    cx.le_ext("z₁ ≤ z", &z1, &z)?;
    cx.eq("y₁ + z₁ = x", &y1.add(&z1)?, &x)?;
    if x.is_finite() {
        cx.ensure("x finite ⇒ y₁, z₁ finite", y1.is_finite() && z1.is_finite(), &y1, &z1)?;
    }
    Ok(())
}

fn positive_negative_parts<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.ext("x")?;
    let (p, m) = (x.pos_part(), x.neg_part());
    cx.eq("x⁺ ∧ x⁻ = 0", &p.meet(&m.to_ext())?, &ExtVec::zeros(x.len()))?;
    cx.eq("x = x⁺ − x⁻", &p.sub_finite(&m)?, &x)
}

fn scaling<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.ext("x")?, cx.ext("y")?);
    let lam = S::from_ratio(cx.int("λ·4", 0, 12), 4);
    cx.eq("0·x = 0", &x.scale(&S::zero())?, &ExtVec::zeros(x.len()))?;
    let lhs = x.add(&y)?.scale(&lam)?;
    cx.eq("λ(x + y) = λx + λy", &lhs, &x.scale(&lam)?.add(&y.scale(&lam)?)?)?;
    let neg = x.scale(&-S::one());
    cx.ensure("−x defined ⇔ x finite", neg.is_ok() == x.is_finite(), neg.is_ok(), x.is_finite())
}
