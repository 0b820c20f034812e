//! Band decomposition: the split `x = ∞_B + u`, the truncation band, the
//! algebra of infinite parts, and extension of monotone maps.

use rand::Rng;
use supcone::oracle::truncation_limit;
use supcone::{
    band_residual_limit, infinite_band_by_truncation, split_parts, Band, ExtVec, LatVec,
    MonotoneMap, Scalar, ScalarFn,
};

use super::prop;
use crate::mutation::Mutation;
use crate::suite::{Ctx, Needs, Property, Step, Stop, Suite};

pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let p = |name, check| prop(Suite::BandsDecomposition, name, Needs::Any, check);
    vec![
        p("split-unique", split_unique::<S>),
        p("truncation-band", truncation_band::<S>),
        p("truncation-band-general-u", truncation_band_general_u::<S>),
        p("infinite-part-sum", infinite_part_sum::<S>),
        p("infinite-part-scale", infinite_part_scale::<S>),
        p("infinite-part-monotone", infinite_part_monotone::<S>),
        p("infinite-part-join", infinite_part_join::<S>),
        p("infinite-part-meet", infinite_part_meet::<S>),
        p("finite-projection", finite_projection::<S>),
        p("extend-map-truncation", extend_map_truncation::<S>),
        p("extend-map-idempotent", extend_map_idempotent::<S>),
        p("extend-map-monotone", extend_map_monotone::<S>),
        p("residual-limit", residual_limit::<S>),
    ]
}

fn inf_band<S: Scalar>(x: &ExtVec<S>) -> Result<Band, Stop> {
    Ok(split_parts(x)?.0)
}

fn split_unique<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, c) = (cx.nonneg("x")?, cx.band("C"));
    let (b, u) = split_parts(&x)?;
    cx.eq("∞_B + u = x", &b.infinity_of().add(&u.to_ext())?, &x)?;
    cx.ensure("u ⊥ B", b.project_lat(&u)?.is_zero(), &u, &b)?;
    if c != b {
        let v = c.complement().project(&x)?;
        let rebuilt = c.infinity_of().add(&v)?;
        cx.ensure("x = ∞_C + v with v ⊥ C finite ⇒ C = B", rebuilt != x || !v.is_finite(), &c, &b)?;
    }
    Ok(())
}

fn truncation_band<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.nonneg("x")?;
    let band = if cx.mutated(Mutation::TruncationFirstMask) {
        Band::from_mask(x.coords().iter().map(|c| c.finite().is_none_or(|v| *v > S::one())).collect())
    } else {
        infinite_band_by_truncation(&x, None)?
    };
    cx.eq("⋀_k P_(x − ke)⁺ = P_x^∞", &band, &inf_band(&x)?)
}

fn truncation_band_general_u<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, u) = (cx.nonneg("x")?, cx.nonneg_lat("u")?);
    let b = inf_band(&x)?;
    // P_u P_x^∞ + P_u^d P_x, atom by atom.
    let expected = Band::from_mask(
        (0..x.len())
            .map(|j| if u.coords()[j] > S::zero() { b.contains(j) } else { x.coords()[j].is_pos() })
            .collect(),
    );
    cx.eq("⋀_k P_(x − ku)⁺ = P_u P_x^∞ + P_u^d P_x", &infinite_band_by_truncation(&x, Some(&u))?, &expected)
}

fn infinite_part_sum<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    let (bx, by) = (inf_band(&x)?, inf_band(&y)?);
    let rhs = if cx.mutated(Mutation::InfinitePartOfSumAsMeet) { bx.meet(&by)? } else { bx.join(&by)? };
    cx.eq("(x + y)^∞ = x^∞ + y^∞", &inf_band(&x.add(&y)?)?, &rhs)
}

fn infinite_part_scale<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.nonneg("x")?;
    let lam = S::from_ratio(cx.int("λ·4", 1, 20), 4);
    let scaled = x.scale(&lam)?;
    cx.eq("(λx)^∞ = λx^∞", &inf_band(&scaled)?.infinity_of::<S>(), &inf_band(&x)?.infinity_of::<S>().scale(&lam)?)
}

fn infinite_part_monotone<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    let lower = x.meet(&y)?;
    let (bl, by) = (inf_band(&lower)?, inf_band(&y)?);
    cx.ensure("x ≤ y ⇒ x^∞ ≤ y^∞", bl.is_subset(&by)?, &bl, &by)
}

fn infinite_part_join<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    cx.eq("(x ∨ y)^∞ = x^∞ ∨ y^∞", &inf_band(&x.join(&y)?)?, &inf_band(&x)?.join(&inf_band(&y)?)?)
}

fn infinite_part_meet<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, y) = (cx.nonneg("x")?, cx.nonneg("y")?);
    cx.eq("(x ∧ y)^∞ = x^∞ ∧ y^∞", &inf_band(&x.meet(&y)?)?, &inf_band(&x)?.meet(&inf_band(&y)?)?)
}

fn finite_projection<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, p) = (cx.nonneg("x")?, cx.band("P"));
    let b = inf_band(&x)?;
    let disjoint = p.is_disjoint(&b)?;
    let finite = p.project(&x)?.is_finite();
    cx.eq("P ⊥ P_x^∞ ⇔ Px finite", &disjoint, &finite)
}

/// A random monotone map of depth at most `depth`.
fn tree<S: Scalar>(cx: &mut Ctx<S>, depth: u32) -> Result<MonotoneMap<S>, Stop> {
    let n = cx.dim();
    let composite = depth > 0 && cx.rng().gen_bool(0.4);
    if composite {
        let (a, b) = (tree(cx, depth - 1)?, tree(cx, depth - 1)?);
        return Ok(match cx.rng().gen_range(0..4) {
            0 => MonotoneMap::compose(a, b),
            1 => MonotoneMap::sum(a, b),
            2 => MonotoneMap::meet(a, b),
            _ => MonotoneMap::join(a, b),
        });
    }
    let leaf = match cx.rng().gen_range(0..6) {
        0 => {
            let rows = (0..n)
                .map(|_| (0..n).map(|_| S::from_int(cx.rng().gen_range(0..=2))).collect())
                .collect();
            MonotoneMap::linear(rows)?
        }
        1 => {
            let mask = (0..n).map(|_| cx.rng().gen_bool(0.5)).collect();
            MonotoneMap::Project(Band::from_mask(mask))
        }
        2 => MonotoneMap::Expect(cx.cond_exp("T")?),
        3 => MonotoneMap::Pointwise(ScalarFn::CapAt(S::from_int(cx.rng().gen_range(-4..=4)))),
        4 => MonotoneMap::Pointwise(ScalarFn::FloorAt(S::from_int(cx.rng().gen_range(-4..=4)))),
        _ => {
            let (a, b) = (cx.rng().gen_range(0..=3), cx.rng().gen_range(-4..=4));
            MonotoneMap::Pointwise(ScalarFn::affine(S::from_int(a), S::from_int(b))?)
        }
    };
    Ok(leaf)
}

fn extend_map_truncation<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.ext("x")?;
    let f = tree(cx, 2)?;
    cx.record("f", format!("{f:?}"));
    cx.eq("f^s(x) = lim_k f(x ∧ ke)", &f.extend(&x)?, &truncation_limit(&f, &x)?)
}

fn extend_map_idempotent<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (x, b) = (cx.ext("x")?, cx.band("P"));
    let p = MonotoneMap::<S>::Project(b);
    let pp = MonotoneMap::compose(p.clone(), p.clone());
    cx.eq("(P∘P)^s = P^s", &pp.extend(&x)?, &p.extend(&x)?)
}

fn extend_map_monotone<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let x = cx.nonneg("x")?;
    let f = tree(cx, 2)?;
    let g = MonotoneMap::compose(MonotoneMap::Pointwise(ScalarFn::FloorAt(S::zero())), tree(cx, 1)?);
    cx.record("f", format!("{f:?}"));
    cx.record("g", format!("{g:?}"));
    let bigger = MonotoneMap::sum(f.clone(), g);
    cx.le_ext("f ≤ f + g⁺ ⇒ f^s ≤ (f + g⁺)^s", &f.extend(&x)?, &bigger.extend(&x)?)
}

fn residual_limit<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let xs = cx.seq("xs", |s| s.is_nonneg())?;
    let y = cx.nonneg_lat("y")?;
    let b = inf_band(&xs.series_sum()?)?;
    let lhs: LatVec<S> = band_residual_limit(&xs, &y)?;
    cx.eq("lim (y ∧ R_n) = P_B y", &lhs, &b.project_lat(&y)?)
}
