use proptest::prelude::*;
use proptest::sample::select;

use rsset::bounds::{best_upper_bound, pigeonhole_bound, rao_bound};
use rsset::cli::{read_point_set, write_point_set};
use rsset::gf::{ExtensionSpec, FieldSpec};
use rsset::projgeom::{all_points, field_reduction_spread, rank, PointSet, ProjPoint};
use rsset::randomized::cleanup;
use rsset::verifier::{max_in_s_space, oracle_max_in_s_space};

const SMALL_ORDERS: [u64; 14] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32, 49, 64];

fn field_and_elems(count: usize) -> impl Strategy<Value = (FieldSpec, Vec<u64>)> {
    select(SMALL_ORDERS.to_vec()).prop_flat_map(move |q| {
        (Just(FieldSpec::with_order(q).unwrap()), prop::collection::vec(0..q, count))
    })
}

fn random_set(n: usize, q: u64, max: usize) -> impl Strategy<Value = PointSet> {
    let f = FieldSpec::with_order(q).unwrap();
    let pts: Vec<ProjPoint> = all_points(n, &f).unwrap().collect();
    prop::sample::subsequence(pts, 0..=max).prop_map(move |ps| PointSet::new(f.clone(), n, ps).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((f, xs) in field_and_elems(3)) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.div(f.mul(b, a), a).unwrap(), b);
        }
        prop_assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn frobenius_is_additive((f, xs) in field_and_elems(2)) {
        let p = f.p();
        prop_assert_eq!(f.pow(f.add(xs[0], xs[1]), p), f.add(f.pow(xs[0], p), f.pow(xs[1], p)));
    }

    #[test]
    fn extension_coordinates_are_linear(
        (q, nn) in select(vec![(2u64, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2)]),
        seed in any::<(u64, u64, u64)>(),
    ) {
        let base = FieldSpec::with_order(q).unwrap();
        let ext = ExtensionSpec::new(&base, nn).unwrap();
        let big = ext.field();
        let a = seed.0 % big.order();
        let b = seed.1 % big.order();
        let lam = seed.2 % q;
        let ca = ext.coordinates(a);
        let cb = ext.coordinates(b);
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(&x, &y)| base.add(x, y)).collect();
        prop_assert_eq!(ext.coordinates(big.add(a, b)), sum);
        let scaled: Vec<u64> = ca.iter().map(|&x| base.mul(lam, x)).collect();
        prop_assert_eq!(ext.coordinates(big.mul(ext.embed(lam).unwrap(), a)), scaled);
        prop_assert_eq!(ext.from_coordinates(&ca).unwrap(), a);
        let mu = seed.0 % q;
        prop_assert_eq!(ext.embed(base.mul(lam, mu)).unwrap(), big.mul(ext.embed(lam).unwrap(), ext.embed(mu).unwrap()));
        prop_assert_eq!(ext.embed(base.add(lam, mu)).unwrap(), big.add(ext.embed(lam).unwrap(), ext.embed(mu).unwrap()));
    }

    #[test]
    fn normalization_is_scale_invariant((f, v) in field_and_elems(4), lam in 1u64..64) {
        prop_assume!(v.iter().any(|&c| c != 0));
        let lam = 1 + lam % (f.order() - 1);
        let scaled: Vec<u64> = v.iter().map(|&c| f.mul(lam, c)).collect();
        let p = ProjPoint::normalize(&f, &v).unwrap();
        prop_assert_eq!(&ProjPoint::normalize(&f, &scaled).unwrap(), &p);
        prop_assert_eq!(p.coords().iter().find(|&&c| c != 0).copied(), Some(1));
    }

    #[test]
    fn rank_ignores_order_and_scaling(x in random_set(3, 3, 6), shift in 0usize..6, lam in 1u64..3) {
        let f = x.field();
        let pts = x.points().to_vec();
        let r = rank(f, &pts).unwrap();
        let mut rotated = pts.clone();
        if !rotated.is_empty() {
            let k = shift % rotated.len();
            rotated.rotate_left(k);
        }
        prop_assert_eq!(rank(f, &rotated).unwrap(), r);
        let scaled: Vec<ProjPoint> = pts
            .iter()
            .map(|p| ProjPoint::normalize(f, &p.coords().iter().map(|&c| f.mul(lam, c)).collect::<Vec<_>>()).unwrap())
            .collect();
        prop_assert_eq!(rank(f, &scaled).unwrap(), r);
        prop_assert!(r <= pts.len().min(4));
    }

    #[test]
    fn spread_elements_are_disjoint(
        (q, nn, m) in select(vec![(2u64, 2u32, 2usize), (2, 3, 2), (3, 2, 2), (2, 2, 3), (4, 2, 2)]),
        i in any::<usize>(),
        j in any::<usize>(),
    ) {
        let base = FieldSpec::with_order(q).unwrap();
        let ext = ExtensionSpec::new(&base, nn).unwrap();
        let pts: Vec<ProjPoint> = all_points(m - 1, ext.field()).unwrap().collect();
        let (a, b) = (&pts[i % pts.len()], &pts[j % pts.len()]);
        let sa = field_reduction_spread(a, &ext).unwrap();
        let sb = field_reduction_spread(b, &ext).unwrap();
        prop_assert_eq!(sa.rank(), nn as usize);
        if a == b {
            prop_assert_eq!(sa.meet_rank(&sb), nn as usize);
        } else {
            prop_assert_eq!(sa.meet_rank(&sb), 0);
        }
    }

    #[test]
    fn verifier_agrees_with_oracle(x in random_set(3, 2, 8), s in 1usize..3) {
        prop_assert_eq!(max_in_s_space(&x, s).unwrap().max_count, oracle_max_in_s_space(&x, s).unwrap());
    }

    #[test]
    fn witnesses_are_consistent(x in random_set(2, 3, 9)) {
        if let Some(w) = max_in_s_space(&x, 1).unwrap().witness {
            prop_assert!(w.is_consistent(&x));
            prop_assert_eq!(w.span_dim, w.generating_points.len() - 1);
        }
    }

    #[test]
    fn cleanup_only_removes(x in random_set(3, 3, 14), r in 2usize..4, s in 1usize..3) {
        let y = cleanup(&x, r, s).unwrap();
        prop_assert!(rsset::verifier::is_rs_set(&y, r, s).unwrap().is_valid());
        prop_assert!(y.iter().all(|p| x.contains(p.coords())));
        for t in 0..=s {
            prop_assert!(max_in_s_space(&y, t).unwrap().max_count <= max_in_s_space(&x, t).unwrap().max_count);
        }
        if rsset::verifier::is_rs_set(&x, r, s).unwrap().is_valid() {
            prop_assert_eq!(&y, &x);
        }
    }

    #[test]
    fn json_round_trip(x in random_set(3, 4, 12)) {
        let text = write_point_set(&x, Some(2), None).unwrap();
        let back = read_point_set(&text).unwrap();
        prop_assert_eq!(&back.set, &x);
        prop_assert_eq!(back.r, Some(2));
        prop_assert_eq!(back.s, None);
        prop_assert_eq!(write_point_set(&back.set, back.r, back.s).unwrap(), text);
    }

    #[test]
    fn best_bound_never_exceeds_pigeonhole(n in 2usize..9, q in select(vec![2u64, 3, 4, 5, 7, 9, 64]), s in 1usize..6, gap in 1usize..6) {
        prop_assume!(s < n);
        let r = s + gap;
        let rep = best_upper_bound(n, q, r, s).unwrap();
        let pig = pigeonhole_bound(n, q, r, s).unwrap();
        prop_assert!(rep.best_value().to_f64() <= num_traits::ToPrimitive::to_f64(&pig).unwrap());
    }

    #[test]
    fn rao_bound_is_monotone(n in 2usize..12, q in 7u64..200) {
        let here = rao_bound(n, q, 3, 2).unwrap();
        prop_assert!(here < rao_bound(n + 1, q, 3, 2).unwrap());
        prop_assert!(here < rao_bound(n, q + 1, 3, 2).unwrap());
    }
}

#[test]
fn spread_partitions_the_space() {
    let base = FieldSpec::with_order(2).unwrap();
    let ext = ExtensionSpec::new(&base, 2).unwrap();
    let mut covered: Vec<ProjPoint> = Vec::new();
    for pt in all_points(1, ext.field()).unwrap() {
        covered.extend(field_reduction_spread(&pt, &ext).unwrap().points());
    }
    covered.sort();
    let all: Vec<ProjPoint> = all_points(3, &base).unwrap().collect();
    assert_eq!(covered, all);
}
