//! Multiplication on the positive cone and the exponential.

use supcone::oracle::sup_of_increasing;
use supcone::{split_parts, Ext, ExtVec, LatVec, Scalar};

use super::{prop, start_above};
use crate::mutation::Mutation;
use crate::suite::{Ctx, Needs, Property, Step, Suite};

pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let p = |name, needs, check| prop(Suite::Multiplication, name, needs, check);
    vec![
        p("product-distributes-sum", Needs::Any, product_distributes_sum::<S>),
        p("product-distributes-meet", Needs::Any, product_distributes_meet::<S>),
        p("product-distributes-join", Needs::Any, product_distributes_join::<S>),
        p("unit", Needs::Any, unit::<S>),
        p("product-finite-part", Needs::Any, product_finite_part::<S>),
        p("product-infinite-part", Needs::Any, product_infinite_part::<S>),
        p("infinity-times-band", Needs::Any, infinity_times_band::<S>),
        p("infinities", Needs::Any, infinities::<S>),
        p("exp-lower-bound", Needs::Float, exp_lower_bound::<S>),
        p("exp-inverse", Needs::Float, exp_inverse::<S>),
    ]
}

fn product_distributes_sum<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, z) = (cx.nonneg("x")?, cx.nonneg("y")?, cx.nonneg("z")?);
    cx.eq("x(y + z) = xy + xz", &x.multiply(&y.add(&z)?)?, &x.multiply(&y)?.add(&x.multiply(&z)?)?)
}

fn product_distributes_meet<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, z) = (cx.nonneg("x")?, cx.nonneg("y")?, cx.nonneg("z")?);
    let (xy, xz) = (x.multiply(&y)?, x.multiply(&z)?);
    let rhs = if cx.mutated(Mutation::ProductMeetAsJoin) { xy.join(&xz)? } else { xy.meet(&xz)? };
    cx.eq("x(y ∧ z) = xy ∧ xz", &x.multiply(&y.meet(&z)?)?, &rhs)
}

fn product_distributes_join<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y, z) = (cx.nonneg("x")?, cx.nonneg("y")?, cx.nonneg("z")?);
    cx.eq("x(y ∨ z) = xy ∨ xz", &x.multiply(&y.join(&z)?)?, &x.multiply(&y)?.join(&x.multiply(&z)?)?)
}

fn unit<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.nonneg("x")?;
    let e = ExtVec::from(LatVec::ones(x.len()));
    cx.eq("xe = x", &x.multiply(&e)?, &x)?;
    cx.eq("x·0 = 0", &x.multiply(&ExtVec::zeros(x.len()))?, &ExtVec::zeros(x.len()))
}

fn product_finite_part<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    let ((_, fx), (_, fy)) = (split_parts(&x)?, split_parts(&y)?);
    let (_, fxy) = split_parts(&x.multiply(&y)?)?;
    cx.eq("(xy)^f = x^f y^f", &fxy, &fx.mul(&fy)?)
}

fn product_infinite_part<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    let ((bx, fx), (by, fy)) = (split_parts(&x)?, split_parts(&y)?);
    let (ix, iy) = (bx.infinity_of::<S>(), by.infinity_of::<S>());
    let (fx, fy) = (fx.to_ext(), fy.to_ext());
    let mut rhs = ix.multiply(&iy)?.add(&fx.multiply(&iy)?)?;
    if !cx.mutated(Mutation::DropCrossTerm) {
        rhs = rhs.add(&ix.multiply(&fy)?)?;
    }
    let (bxy, _) = split_parts(&x.multiply(&y)?)?;
    cx.eq("(xy)^∞ = x^∞y^∞ + x^∞y^f + x^fy^∞", &bxy.infinity_of::<S>(), &rhs)
}

fn infinity_times_band<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, b) = (cx.nonneg("x")?, cx.band("B"));
    // sup_k (x ∧ ke)·(k 1_B), from finite products only.
    let by_sup = sup_of_increasing(start_above(&[&x]), |k| {
        let k = S::from_int(k as i64);
        x.truncate(&k)?.mul(&b.indicator::<S>().scale(&k))
    })?;
    cx.eq("∞_B · x = sup_k (x ∧ ke)(k1_B)", &x.mul_infinity_band(&b)?, &by_sup)
}

fn infinities<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (b, c) = (cx.band("B"), cx.band("C"));
    let (bi, ci) = (b.infinity_of::<S>(), c.infinity_of::<S>());
    let bc = b.meet(&c)?.infinity_of::<S>();
    cx.eq("∞_B ∧ ∞_C = ∞_(B∩C)", &bi.meet(&ci)?, &bc)?;
    cx.eq("∞_B · ∞_C = ∞_(B∩C)", &bi.multiply(&ci)?, &bc)?;
    cx.eq("∞_B + ∞_C = ∞_(B∪C)", &bi.add(&ci)?, &b.join(&c)?.infinity_of::<S>())
}

fn exp_lower_bound<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.nonneg("x")?;
    let ex = x.exp_neg()?;
    let tol = cx.tol();
    for (c, v) in x.coords().iter().zip(ex.coords()) {
        let ok = match c {
            Ext::Inf => v.close_to(&S::zero(), tol),
            Ext::Fin(t) => (S::one() - t.clone()).le_tol(v, tol) && v.le_tol(&S::one(), tol),
        };
        if !ok {
            return cx.fail("e − x ≤ exp(−x) ≤ e", &ex, &x);
        }
    }
    Ok(())
}

fn exp_inverse<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let a = cx.lat("a")?;
    let n = a.len();
    let lhs = a.exp()?.mul(&a.scale(&-S::one()).exp()?)?;
    cx.eq("exp(x) exp(−x) = e", &lhs, &LatVec::ones(n))
}
