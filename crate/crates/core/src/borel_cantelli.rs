//! Both Borel–Cantelli lemmas and the product-space harness exercising the
//! factorization step of the second one.

use crate::band::Band;
use crate::error::{check_dim, Error, Result};
use crate::expectation::{CondExp, INDEPENDENCE_LIMIT};
use crate::report::{band_witness, Report, Status};
use crate::scalar::Scalar;
use crate::seq::{ProjSeq, VecSeq};
use crate::space::AtomicSpace;
use crate::vector::LatVec;

/// Largest number of coordinates accepted by [`product_harness`].
pub const PRODUCT_HARNESS_LIMIT: usize = 20;

/// First lemma: for `0 ≤ x_n ≤ bound`, if `Σ T x_n` is finite then
/// `limsup x_n = 0`. Reported vacuous when the series has an infinite part.
pub fn bcl1<S: Scalar>(t: &CondExp<S>, xs: &VecSeq<S>, bound: &LatVec<S>) -> Result<Report> {
    check_dim(t.dim(), xs.dim())?;
    check_dim(t.dim(), bound.len())?;
    if !xs.is_nonneg() || !xs.sup_terms().le(&bound.to_ext())? {
        return Err(Error::Contract("terms must satisfy 0 ≤ x_n ≤ bound".into()));
    }
    let series = xs.map_positive(|v| t.apply(v))?.series_sum()?;
    let infinite = series.infinite_band();
    let limsup = xs.limsup_seq();
    let report = Report::new("bcl1", Status::Vacuous)
        .with_band("series_infinite", &infinite)
        .with_band("limsup_support", &limsup.support())
        .with_metric("series", &series);
    if !infinite.is_empty() {
        return Ok(report);
    }
    let witness = limsup.support().atoms().first().copied();
    Ok(Report {
        status: if witness.is_none() {
            Status::Pass
        } else {
            Status::Fail
        },
        witness,
        ..report
    })
}

/// The first lemma applied off the infinite band `B` of `Σ T x_n`: the
/// projected series is finite there, so `limsup x_n` vanishes off `B`.
pub fn bcl1_off_band<S: Scalar>(
    t: &CondExp<S>,
    xs: &VecSeq<S>,
    bound: &LatVec<S>,
) -> Result<Report> {
    let series = xs.map_positive(|v| t.apply(v))?.series_sum()?;
    let off = series.infinite_band().complement();
    let mut report = bcl1(t, &xs.project(&off)?, &off.project_lat(bound)?)?;
    report.check = "bcl1-off-band".into();
    Ok(report.with_band("restricted_to", &off))
}

/// Second lemma: for T-independent `P_n` with `Σ T P_n e = ∞_B + u`,
/// `P_B = limsup P_n` and `P_B` commutes with `T`.
///
/// Independence is required of the distinct bands of the sequence; a band
/// that occurs more than once must be a union of blocks of `T`, the only
/// way a band is independent of itself.
pub fn bcl2<S: Scalar>(t: &CondExp<S>, ps: &ProjSeq) -> Result<Report> {
    check_dim(t.dim(), ps.dim())?;
    let distinct = ps.distinct_masks();
    for (band, repeated) in &distinct {
        if *repeated && !t.is_block_union(band) {
            return Err(Error::Contract(format!(
                "band {band} recurs but is not a union of blocks of T"
            )));
        }
    }
    let family: Vec<Band> = distinct.into_iter().map(|(b, _)| b).collect();
    if let Some(v) = t.independence_violation(&family, INDEPENDENCE_LIMIT)? {
        let named: Vec<String> = v
            .choice
            .iter()
            .map(|(i, c)| format!("{}{}", family[*i], if *c { "^d" } else { "" }))
            .collect();
        return Err(Error::Contract(format!(
            "bands are not T-independent: [{}] on block {}",
            named.join(", "),
            v.block
        )));
    }
    let series = ps
        .indicators::<S>()
        .map_positive(|v| t.apply(v))?
        .series_sum()?;
    let infinite = series.infinite_band();
    let limsup = ps.limsup();
    let commutes = t.commutes(&infinite);
    let status = if infinite == limsup && commutes {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Report::new("bcl2", status)
        .with_band("series_infinite", &infinite)
        .with_band("limsup", &limsup)
        .with_metric("commutes", commutes)
        .with_witness(band_witness(&infinite, &limsup)))
}

/// The product space `{0,1}^m` with independent coordinates: atom `ω`
/// carries weight `∏ p_k^{ω_k} (1 − p_k)^{1 − ω_k}`. Atoms of weight zero
/// (when some `p_k = 1`) are left out. Returns the space and the
/// coordinate bands `P_k = {ω_k = 1}`.
pub fn product_space<S: Scalar>(probs: &[S]) -> Result<(AtomicSpace<S>, Vec<Band>)> {
    if probs.len() > PRODUCT_HARNESS_LIMIT {
        return Err(Error::Size {
            size: probs.len(),
            limit: PRODUCT_HARNESS_LIMIT,
        });
    }
    for p in probs {
        if !(*p > S::zero() && *p <= S::one()) {
            return Err(Error::Domain(format!("probability {p} must lie in (0, 1]")));
        }
    }
    let mut weights = vec![S::one()];
    let mut bits: Vec<u32> = vec![0];
    for (k, p) in probs.iter().enumerate() {
        let q = S::one() - p.clone();
        let mut next_w = Vec::with_capacity(weights.len() * 2);
        let mut next_b = Vec::with_capacity(bits.len() * 2);
        if !q.is_zero() {
            next_w.extend(weights.iter().map(|w| w.clone() * q.clone()));
            next_b.extend(bits.iter().copied());
        }
        next_w.extend(weights.iter().map(|w| w.clone() * p.clone()));
        next_b.extend(bits.iter().map(|b| b | (1 << k)));
        weights = next_w;
        bits = next_b;
    }
    let bands = (0..probs.len())
        .map(|k| Band::from_mask(bits.iter().map(|b| b & (1 << k) != 0).collect()))
        .collect();
    Ok((AtomicSpace::new(weights)?, bands))
}

/// Checks on the product space under the trivial `T`, for all
/// `1 ≤ n ≤ n' ≤ m`:
/// `T(P_n^d ⋯ P_{n'}^d e) = ∏_{k=n}^{n'} (e − T P_k e)` exactly, and the
/// bound `≤ exp(−Σ_{k=n}^{n'} T P_k e)` in floating point.
pub fn product_harness<S: Scalar>(probs: &[S]) -> Result<Report> {
    let (space, bands) = product_space(probs)?;
    let t = CondExp::trivial(&space);
    let m = probs.len();
    let scalar = |v: LatVec<S>| v.coords()[0].clone();
    let marginals = bands
        .iter()
        .map(|b| t.apply_indicator(b).map(scalar))
        .collect::<Result<Vec<S>>>()?;
    let mut status = Status::Pass;
    let mut detail = String::new();
    let mut final_value = S::one();
    let mut final_bound = 1.0f64;
    'outer: for n in 0..m {
        let mut cell = Band::full(space.atom_count());
        let mut product = S::one();
        let mut mass = 0.0f64;
        for k in n..m {
            cell = cell.meet(&bands[k].complement())?;
            product = product * (S::one() - marginals[k].clone());
            mass += marginals[k].to_f64();
            let value = t.apply_indicator(&cell)?;
            if value.coords().iter().any(|c| *c != product) {
                status = Status::Fail;
                detail = format!("factorization fails for n = {}, n' = {}", n + 1, k + 1);
                break 'outer;
            }
            let bound = (-mass).exp();
            if product.to_f64() > bound + 1e-12 {
                status = Status::Fail;
                detail = format!("exponential bound fails for n = {}, n' = {}", n + 1, k + 1);
                break 'outer;
            }
            if n == 0 && k + 1 == m {
                final_value = product.clone();
                final_bound = bound;
            }
        }
    }
    let total: f64 = marginals.iter().map(Scalar::to_f64).sum();
    Ok(Report::new("product-harness", status)
        .with_metric("m", m)
        .with_metric("atoms", space.atom_count())
        .with_metric("sum_p", total)
        .with_metric("product", &final_value)
        .with_metric("product_f64", final_value.to_f64())
        .with_metric("exp_bound", final_bound)
        .with_detail(detail))
}
