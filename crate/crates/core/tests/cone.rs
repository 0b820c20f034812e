mod common;

use common::*;
use proptest::prelude::*;
use supcone::oracle::sup_of_increasing;
use supcone::{
    infinite_band_by_truncation, split_parts, Band, Error, Ext, ExtVec, LatVec, Rational, Scalar,
};

/// A sampling start above every finite coordinate, past which truncation
/// at `k` only affects infinite coordinates.
fn start_above(xs: &[&ExtVec<Rational>]) -> u64 {
    xs.iter()
        .flat_map(|x| x.coords().iter())
        .filter_map(Ext::finite)
        .map(|v| v.ceil_u64())
        .max()
        .unwrap_or(0)
        + 1
}

fn truncations(x: &ExtVec<Rational>, k: u64) -> LatVec<Rational> {
    // ke ∧ x for x ≥ 0; an increasing net with supremum x.
    x.truncate(&Rational::from_int(k as i64)).unwrap()
}

proptest! {
    #[test]
    fn finite_translation_distributes_over_meet(
        (x, y, a) in sized(|n| (ext(n), ext(n), lat(n)))
    ) {
        let lhs = x.add(&a.to_ext().meet(&y).unwrap()).unwrap();
        let rhs = x.add(&a.to_ext()).unwrap().meet(&x.add(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn below_finite_is_finite((x, z) in sized(|n| (lat(n), ext(n)))) {
        let y = x.to_ext().meet(&z).unwrap();
        prop_assert!(y.le(&x.to_ext()).unwrap());
        prop_assert!(y.is_finite());
    }

    #[test]
    fn all_infinite_is_greatest(x in sized(ext)) {
        let top = ExtVec::greatest(x.len());
        prop_assert!(x.le(&top).unwrap());
        prop_assert_eq!(x.join(&top).unwrap(), top);
    }

    #[test]
    fn truncations_recover_positive_elements(x in sized(nonneg_ext)) {
        let sup = sup_of_increasing(start_above(&[&x]), |k| Ok(truncations(&x, k))).unwrap();
        prop_assert_eq!(sup, x);
    }

    #[test]
    fn birkhoff_inequality((a, b, c) in sized(|n| (lat(n), lat(n), ext(n)))) {
        let ac = a.to_ext().meet(&c).unwrap().to_lat().unwrap();
        let bc = b.to_ext().meet(&c).unwrap().to_lat().unwrap();
        prop_assert!(ac.sub(&bc).unwrap().abs().le(&a.sub(&b).unwrap().abs()).unwrap());
    }

    #[test]
    fn sums_meets_and_joins_of_nets((x, y) in sized(|n| (nonneg_ext(n), nonneg_ext(n)))) {
        let start = start_above(&[&x, &y]);
        let sum = sup_of_increasing(start, |k| truncations(&x, k).add(&truncations(&y, k))).unwrap();
        prop_assert_eq!(sum, x.add(&y).unwrap());
        let join = sup_of_increasing(start, |k| truncations(&x, k).join(&truncations(&y, k))).unwrap();
        prop_assert_eq!(join, x.join(&y).unwrap());
        let meet = sup_of_increasing(start, |k| truncations(&x, k).meet(&truncations(&y, k))).unwrap();
        prop_assert_eq!(meet, x.meet(&y).unwrap());
    }

    #[test]
    fn sum_splits_into_join_and_meet((x, y, a) in sized(|n| (nonneg_ext(n), nonneg_ext(n), nonneg_ext(n)))) {
        let (xy_join, xy_meet) = (x.join(&y).unwrap(), x.meet(&y).unwrap());
        prop_assert_eq!(x.add(&y).unwrap(), xy_join.add(&xy_meet).unwrap());
        if xy_meet.is_zero() {
            prop_assert_eq!(x.add(&y).unwrap(), xy_join.clone());
        }
        let ax = a.add(&x).unwrap();
        let ay = a.add(&y).unwrap();
        prop_assert_eq!(a.add(&xy_meet).unwrap(), ax.meet(&ay).unwrap());
        prop_assert_eq!(a.add(&xy_join).unwrap(), ax.join(&ay).unwrap());
    }

    #[test]
    fn meet_with_sum((x, y, z) in sized(|n| (nonneg_ext(n), nonneg_ext(n), nonneg_ext(n)))) {
        let lhs = x.meet(&y.add(&z).unwrap()).unwrap();
        let rhs = x.meet(&y).unwrap().add(&x.meet(&z).unwrap()).unwrap();
        prop_assert!(lhs.le(&rhs).unwrap());
        if y.meet(&z).unwrap().is_zero() {
            prop_assert_eq!(&lhs, &rhs);
        }
        if x.meet(&z).unwrap().is_zero() {
            prop_assert_eq!(lhs, x.meet(&y).unwrap());
        }
    }

    #[test]
    fn disjoint_pairs((x, v, b, c) in sized(|n| (nonneg_ext(n), nonneg_ext(n), band(n), band(n)))) {
        // x ⊥ y and v ⊥ w by projecting onto complementary bands.
        let (x, y) = (b.project(&x).unwrap(), b.complement().project(&v).unwrap());
        let (v, w) = (c.project(&v).unwrap(), c.complement().project(&x).unwrap());
        let lhs = x.add(&v).unwrap().meet(&y.add(&w).unwrap()).unwrap();
        let rhs = x.meet(&w).unwrap().add(&y.meet(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn supremum_of_sumsets(
        (a, b) in sized(|n| (prop::collection::vec(ext(n), 1..=4), prop::collection::vec(ext(n), 1..=4)))
    ) {
        let sup = |v: &[ExtVec<Rational>]| v.iter().skip(1).fold(v[0].clone(), |acc, x| acc.join(x).unwrap());
        let sums: Vec<_> = a.iter().flat_map(|x| b.iter().map(move |y| x.add(y).unwrap())).collect();
        prop_assert_eq!(sup(&sums), sup(&a).add(&sup(&b)).unwrap());
    }

    #[test]
    fn riesz_decomposition((x, y, z) in sized(|n| (ext(n), ext(n), ext(n)))) {
        // Force x ≤ y + z.
        let x = x.meet(&y.add(&z).unwrap()).unwrap();
        let (y1, z1) = x.riesz_decompose(&y, &z).unwrap();
        prop_assert!(y1.le(&y).unwrap());
        prop_assert!(z1.le(&z).unwrap());
        prop_assert_eq!(y1.add(&z1).unwrap(), x.clone());
        if x.is_finite() {
            prop_assert!(y1.is_finite() && z1.is_finite());
        }
    }

    #[test]
    fn positive_and_negative_parts(x in sized(ext)) {
        let (p, m) = (x.pos_part(), x.neg_part());
        prop_assert!(p.meet(&m.to_ext()).unwrap().is_zero());
        prop_assert_eq!(p.sub_finite(&m).unwrap(), x);
    }

    #[test]
    fn split_is_unique((x, c) in sized(|n| (nonneg_ext(n), band(n)))) {
        let (b, u) = split_parts(&x).unwrap();
        prop_assert_eq!(b.infinity_of().add(&u.to_ext()).unwrap(), x.clone());
        prop_assert!(b.project_lat(&u).unwrap().is_zero());
        // Any other band C fails to decompose x as ∞_C + v with v ⊥ C.
        if c != b {
            let v = c.complement().project(&x).unwrap();
            let rebuilt = c.infinity_of().add(&v).unwrap();
            prop_assert!(rebuilt != x || !v.is_finite());
        }
    }

    #[test]
    fn truncation_band_matches_split((x, u) in sized(|n| (nonneg_ext(n), nonneg_lat(n)))) {
        let (b, _) = split_parts(&x).unwrap();
        prop_assert_eq!(infinite_band_by_truncation(&x, None).unwrap(), b.clone());
        // P_u P_{x^∞} + P_u^d P_x, evaluated atom by atom.
        let expected = Band::from_mask(
            (0..x.len())
                .map(|j| {
                    let u_pos = u.coords()[j] > Rational::from_int(0);
                    if u_pos { b.contains(j) } else { x.coords()[j].is_pos() }
                })
                .collect(),
        );
        prop_assert_eq!(infinite_band_by_truncation(&x, Some(&u)).unwrap(), expected);
    }

    #[test]
    fn infinite_part_identities(
        (x, y, lam) in sized(|n| (nonneg_ext(n), nonneg_ext(n), 1i64..=5))
    ) {
        let inf = |v: &ExtVec<Rational>| split_parts(v).unwrap().0;
        let (bx, by) = (inf(&x), inf(&y));
        prop_assert_eq!(inf(&x.add(&y).unwrap()), bx.join(&by).unwrap());
        prop_assert_eq!(inf(&x.scale(&Rational::from_int(lam)).unwrap()), bx.clone());
        prop_assert_eq!(inf(&x.join(&y).unwrap()), bx.join(&by).unwrap());
        prop_assert_eq!(inf(&x.meet(&y).unwrap()), bx.meet(&by).unwrap());
        let lower = x.meet(&y).unwrap();
        prop_assert!(inf(&lower).is_subset(&inf(&y)).unwrap());
    }

    #[test]
    fn finite_projection_iff_disjoint_from_infinite_part((x, p) in sized(|n| (nonneg_ext(n), band(n)))) {
        let (b, _) = split_parts(&x).unwrap();
        prop_assert_eq!(p.is_disjoint(&b).unwrap(), p.project(&x).unwrap().is_finite());
    }

    #[test]
    fn multiplication_laws((x, y, z) in sized(|n| (nonneg_ext(n), nonneg_ext(n), nonneg_ext(n)))) {
        let xy = x.multiply(&y).unwrap();
        let xz = x.multiply(&z).unwrap();
        prop_assert_eq!(x.multiply(&y.add(&z).unwrap()).unwrap(), xy.add(&xz).unwrap());
        prop_assert_eq!(x.multiply(&y.meet(&z).unwrap()).unwrap(), xy.meet(&xz).unwrap());
        prop_assert_eq!(x.multiply(&y.join(&z).unwrap()).unwrap(), xy.join(&xz).unwrap());
        prop_assert_eq!(x.multiply(&ExtVec::from(LatVec::ones(x.len()))).unwrap(), x.clone());
    }

    #[test]
    fn product_parts((x, y) in sized(|n| (nonneg_ext(n), nonneg_ext(n)))) {
        let (bx, fx) = split_parts(&x).unwrap();
        let (by, fy) = split_parts(&y).unwrap();
        let (ix, iy) = (bx.infinity_of::<Rational>(), by.infinity_of::<Rational>());
        let (bxy, fxy) = split_parts(&x.multiply(&y).unwrap()).unwrap();
        prop_assert_eq!(fxy, fx.mul(&fy).unwrap());
        let expected = ix.multiply(&iy).unwrap()
            .add(&ix.multiply(&fy.to_ext()).unwrap()).unwrap()
            .add(&fx.to_ext().multiply(&iy).unwrap()).unwrap();
        prop_assert_eq!(bxy.infinity_of::<Rational>(), expected);
    }

    #[test]
    fn infinity_times_band((x, b, c) in sized(|n| (nonneg_ext(n), band(n), band(n)))) {
        let direct = x.mul_infinity_band(&b).unwrap();
        // sup_k (x ∧ ke)·(k 1_B), from finite products only.
        let by_sup = sup_of_increasing(start_above(&[&x]), |k| {
            let kb = b.indicator::<Rational>().scale(&Rational::from_int(k as i64));
            truncations(&x, k).mul(&kb)
        })
        .unwrap();
        prop_assert_eq!(&direct, &by_sup);
        prop_assert_eq!(direct, b.project(&x).unwrap().support().infinity_of());
        let (bi, ci) = (b.infinity_of::<Rational>(), c.infinity_of::<Rational>());
        let bc = b.meet(&c).unwrap().infinity_of::<Rational>();
        prop_assert_eq!(bi.meet(&ci).unwrap(), bc.clone());
        prop_assert_eq!(bi.multiply(&ci).unwrap(), bc);
        prop_assert_eq!(bi.add(&ci).unwrap(), b.join(&c).unwrap().infinity_of::<Rational>());
    }

    #[test]
    fn scaling_rules(x in sized(ext)) {
        prop_assert!(x.scale(&Rational::from_int(0)).unwrap().is_zero());
        let neg = x.scale(&Rational::from_int(-1));
        prop_assert_eq!(neg.is_ok(), x.is_finite());
        if let Err(e) = neg {
            prop_assert!(matches!(e, Error::Domain(_)));
        }
    }
}

#[test]
fn riesz_examples() {
    use supcone::ext_ints;
    let (y1, z1) = ext_ints::<Rational>(&[Some(5), None, Some(1)])
        .riesz_decompose(&ext_ints(&[Some(3), None, Some(0)]), &ext_ints(&[Some(4), Some(2), Some(1)]))
        .unwrap();
    assert_eq!(y1, ext_ints(&[Some(3), None, Some(0)]));
    assert_eq!(z1, ext_ints(&[Some(2), Some(0), Some(1)]));
    let (y1, z1) = ext_ints::<Rational>(&[None])
        .riesz_decompose(&ext_ints(&[Some(2)]), &ext_ints(&[None]))
        .unwrap();
    assert_eq!(y1, ext_ints(&[Some(2)]));
    assert_eq!(z1, ext_ints(&[None]));
}

#[test]
fn exp_on_float_backend() {
    let x: ExtVec<f64> = ExtVec::new(vec![Ext::Fin(0.5)]);
    let v = x.exp_neg().unwrap().coords()[0];
    assert!((v - 0.6065306597126334).abs() < 1e-12);
    assert!(1.0 - 0.5 <= v);
    let r: ExtVec<Rational> = ExtVec::new(vec![Ext::Fin(q(1, 2))]);
    assert!(matches!(r.exp_neg(), Err(Error::Backend { .. })));
}
