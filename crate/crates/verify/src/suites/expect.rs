//! Conditional expectation operators: averaging, extension to the cone,
//! commutation with bands, independence and Chebyshev.

use supcone::oracle::sup_of_increasing;
use supcone::{split_parts, Band, LatVec, Scalar};

use super::{prop, start_above};
use crate::mutation::Mutation;
use crate::suite::{Ctx, Needs, Property, Step, Suite};

pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let p = |name, needs, check| prop(Suite::Expectation, name, needs, check);
    vec![
        p("block-average", Needs::Any, block_average::<S>),
        p("averaging-basics", Needs::Any, averaging_basics::<S>),
        p("extension-oracle", Needs::Any, extension_oracle::<S>),
        p("commutation-witness", Needs::Any, commutation_witness::<S>),
        p("independence-enumeration", Needs::Exact, independence_enumeration::<S>),
        p("chebyshev", Needs::Any, chebyshev::<S>),
    ]
}

fn block_average<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, x) = (cx.cond_exp("T")?, cx.lat("x")?);
    let w = cx.model.space.weights();
    let unweighted = cx.mutated(Mutation::UnweightedAverage);
    let mut expected = vec![S::zero(); x.len()];
    for block in t.blocks() {
        let (mut mass, mut total) = (S::zero(), S::zero());
        for &a in block {
            let wa = if unweighted { S::one() } else { w[a].clone() };
            mass = mass + wa.clone();
            total = total + wa * x.coords()[a].clone();
        }
        for &a in block {
            expected[a] = total.clone() / mass.clone();
        }
    }
    cx.eq("Tx = weighted block average", &t.apply(&x)?, &LatVec::new(expected))
}

fn averaging_basics<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, x) = (cx.cond_exp("T")?, cx.lat("x")?);
    let n = t.dim();
    cx.eq("Te = e", &t.apply(&LatVec::ones(n))?, &LatVec::ones(n))?;
    let tx = t.apply(&x)?;
    cx.eq("T(Tx) = Tx", &t.apply(&tx)?, &tx)?;
    let pos = x.abs();
    let tpos = t.apply(&pos)?;
    cx.eq("T strictly positive", &tpos.is_zero(), &pos.is_zero())?;
    cx.le_lat("|Tx| ≤ T|x|", &tx.abs(), &tpos)
}

fn extension_oracle<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, y) = (cx.cond_exp("T")?, cx.nonneg("y")?);
    let n = t.dim();
    let ty = t.apply_ext(&y)?;
    let by_sup = sup_of_increasing(start_above(&[&y]), |k| t.apply(&y.truncate(&S::from_int(k as i64))?))?;
    cx.eq("T^s y = sup_k T(y ∧ ke)", &ty, &by_sup)?;
    cx.eq("y ∈ R(T^s) ⇔ T^s y = y", &t.in_range(&y), &ty.close_to(&y, cx.tol()))?;
    let (by, _) = split_parts(&y)?;
    let (bty, _) = split_parts(&ty)?;
    let expected = Band::from_mask((0..n).map(|a| t.blocks()[t.block_of(a)].iter().any(|&b| by.contains(b))).collect());
    cx.eq("(T^s y)^∞ = blocks meeting y^∞", &bty, &expected)
}

fn commutation_witness<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, b, x) = (cx.cond_exp("T")?, cx.band("P"), cx.lat("x")?);
    let witness = t.commutation_witness(&b)?;
    cx.eq("commutes ⇔ no witness", &t.commutes(&b), &witness.is_none())?;
    let tp = t.apply(&b.project_lat(&x)?)?;
    let pt = b.project_lat(&t.apply(&x)?)?;
    if t.commutes(&b) {
        cx.eq("TPx = PTx", &tp, &pt)?;
    }
    if let Some((atom, _, _)) = witness {
        let e = LatVec::ones(t.dim());
        let (tpe, pte) = (t.apply(&b.project_lat(&e)?)?, b.project_lat(&t.apply(&e)?)?);
        cx.ensure("witness atom separates TP and PT", tpe.coords()[atom] != pte.coords()[atom], &tpe, &pte)?;
    }
    Ok(())
}

fn independence_enumeration<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let t = cx.cond_exp("T")?;
    let k = cx.int("family size", 0, 4) as usize;
    let bands: Vec<Band> = (0..k).map(|i| cx.band(&format!("P{i}"))).collect();
    // All 3^k choices (absent, P, P^d), evaluated with vectors.
    let mut naive = true;
    for code in 0..3usize.pow(k as u32) {
        let mut c = code;
        let mut cell = Band::full(t.dim());
        let mut product = LatVec::ones(t.dim());
        for b in &bands {
            let q = match c % 3 {
                0 => None,
                1 => Some(b.clone()),
                _ => Some(b.complement()),
            };
            c /= 3;
            if let Some(q) = q {
                cell = cell.meet(&q)?;
                product = product.mul(&t.apply_indicator(&q)?)?;
            }
        }
        naive &= t.apply_indicator(&cell)? == product;
    }
    cx.eq("independence = factorization over all choices", &t.check_independence(&bands)?, &naive)
}

fn chebyshev<S: Scalar>(cx: &mut Ctx<S>) -> Step {
    let (t, x) = (cx.cond_exp("T")?, cx.lat("x")?);
    let eps = S::from_ratio(cx.int("ε·4", 1, 16), 4);
    let band = Band::from_mask(x.coords().iter().map(|c| c.abs() > eps).collect());
    let lhs = t.apply_indicator(&band)?;
    for r in [1.0, 2.0] {
        let scale = S::one() / eps.powf(r)?;
        let rhs = t.apply(&x.abs_pow(r)?)?.scale(&scale);
        cx.le_lat("T P_(|x| − εe)⁺ e ≤ ε^(−r) T|x|^r", &lhs, &rhs)?;
    }
    Ok(())
}
