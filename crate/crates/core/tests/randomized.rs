use std::collections::HashMap;

use rsset::gf::FieldSpec;
use rsset::projgeom::{all_points, point_count, Echelon, ProjPoint};
use rsset::randomized::{
    common_zeros, cubic_92_construction, cubic_92_construction_with, cleanup, gv_construction, hypersurface_points,
    monomials, quadric_42_construction, random_irreducible_quadric, CubicOptions, HomogeneousForm, Prng,
};
use rsset::verifier::is_rs_set;

fn gf(q: u64) -> FieldSpec {
    FieldSpec::with_order(q).unwrap()
}

/// Dense coefficient vector of a ternary form in the order of `monomials`.
fn dense(f: &HomogeneousForm) -> Vec<u64> {
    monomials(3, f.degree()).iter().map(|m| f.coefficient(m)).collect()
}

fn product(field: &FieldSpec, a: &[(Vec<u32>, u64)], b: &[(Vec<u32>, u64)], degree: u32) -> Vec<u64> {
    let index: HashMap<Vec<u32>, usize> = monomials(3, degree).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = vec![0; index.len()];
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = &mut out[index[&e]];
            *slot = field.add(*slot, field.mul(*ca, *cb));
        }
    }
    out
}

/// Whether the ternary form with coefficients `d` (degree `dd`) divides the
/// cubic `c`: `c` must lie in the span of `{d * m : deg m = 3 - dd}`.
fn divides(field: &FieldSpec, d: &[u64], dd: u32, c: &[u64]) -> bool {
    let d_terms: Vec<(Vec<u32>, u64)> = monomials(3, dd).into_iter().zip(d.iter().copied()).filter(|(_, x)| *x != 0).collect();
    let mut ech = Echelon::new();
    for m in monomials(3, 3 - dd) {
        ech.insert(field, &product(field, &d_terms, &[(m, 1)], 3));
    }
    ech.contains(field, c)
}

/// Exhaustive search for a common factor of degree 1 or 2, or proportionality.
fn shares_component(field: &FieldSpec, c1: &HomogeneousForm, c2: &HomogeneousForm) -> bool {
    let (a, b) = (dense(c1), dense(c2));
    let mut ech = Echelon::new();
    ech.insert(field, &a);
    if ech.contains(field, &b) {
        return true;
    }
    for dd in [1u32, 2] {
        let width = monomials(3, dd).len();
        let candidates = all_points(width - 1, field).unwrap();
        for cand in candidates {
            if divides(field, cand.coords(), dd, &a) && divides(field, cand.coords(), dd, &b) {
                return true;
            }
        }
    }
    false
}

#[test]
fn plane_cubic_intersections_obey_bezout() {
    let f7 = gf(7);
    let mut flagged = 0usize;
    let mut rng = Prng::new(2024);
    let mut pairs = 0;
    while pairs < 50 {
        let c1 = HomogeneousForm::random(&f7, 2, 3, &mut rng).unwrap();
        let c2 = HomogeneousForm::random(&f7, 2, 3, &mut rng).unwrap();
        if c1 == c2 {
            continue;
        }
        pairs += 1;
        let meet = common_zeros(&[c1.clone(), c2.clone()]).unwrap().len();
        let shared = meet > 9 && shares_component(&f7, &c1, &c2);
        if meet > 9 {
            assert!(shared, "pair {pairs} meets in {meet} points without a common component");
            flagged += 1;
        }
    }
    eprintln!("{flagged} of 50 pairs exceeded 9 common points");
}

#[test]
fn planted_common_line_is_detected() {
    let f7 = gf(7);
    let line = vec![(vec![1, 0, 0], 1), (vec![0, 1, 0], 3), (vec![0, 0, 1], 5)];
    let mut rng = Prng::new(5);
    let q1 = HomogeneousForm::random(&f7, 2, 2, &mut rng).unwrap();
    let q2 = HomogeneousForm::random(&f7, 2, 2, &mut rng).unwrap();
    let as_terms = |q: &HomogeneousForm| q.coefficients().iter().map(|(e, &c)| (e.clone(), c)).collect::<Vec<_>>();
    let mk = |q: &HomogeneousForm| {
        let dense = product(&f7, &line, &as_terms(q), 3);
        HomogeneousForm::new(f7.clone(), 2, 3, monomials(3, 3).into_iter().zip(dense)).unwrap()
    };
    let (c1, c2) = (mk(&q1), mk(&q2));
    assert!(common_zeros(&[c1.clone(), c2.clone()]).unwrap().len() >= 8);
    assert!(shares_component(&f7, &c1, &c2));

    let other = HomogeneousForm::new(
        f7.clone(),
        2,
        3,
        [(vec![3, 0, 0], 1), (vec![0, 3, 0], 1), (vec![0, 0, 3], 1)],
    )
    .unwrap();
    let fermat_y = HomogeneousForm::new(f7.clone(), 2, 3, [(vec![3, 0, 0], 1), (vec![0, 3, 0], 2), (vec![0, 0, 3], 4)]).unwrap();
    assert!(!shares_component(&f7, &other, &fermat_y));
}

#[test]
fn nondegenerate_quadric_point_counts() {
    for (n, q) in [(2usize, 5u64), (2, 7), (3, 5), (3, 7), (4, 3), (5, 3), (4, 5)] {
        let f = gf(q);
        let mut rng = Prng::new(n as u64 * 100 + q);
        let mut seen = 0;
        while seen < 4 {
            let form = random_irreducible_quadric(n, &f, &mut rng).unwrap();
            if form.quadric_rank().unwrap() != n + 1 {
                continue;
            }
            seen += 1;
            let count = hypersurface_points(&form).unwrap().len() as i64;
            // |Q| = [n]_q + e q^{(n-1)/2} with e = 0 for even n, e = ±1 for odd n.
            let dev = count - point_count(n - 1, q).unwrap() as i64;
            if n % 2 == 0 {
                assert_eq!(dev, 0, "n={n} q={q}");
            } else {
                assert_eq!(dev.abs(), (q as i64).pow(((n - 1) / 2) as u32), "n={n} q={q}");
            }
        }
    }
}

#[test]
fn seeded_constructions_are_reproducible() {
    let f7 = gf(7);
    let a = quadric_42_construction(2, &f7, &mut Prng::new(9)).unwrap();
    let b = quadric_42_construction(2, &f7, &mut Prng::new(9)).unwrap();
    assert_eq!(a, b);
    let c = cubic_92_construction(&gf(5), &mut Prng::new(9)).unwrap();
    assert_eq!(c, cubic_92_construction(&gf(5), &mut Prng::new(9)).unwrap());
    let g = gv_construction(3, &f7, 3, 2, &mut Prng::new(9)).unwrap();
    assert_eq!(g, gv_construction(3, &f7, 3, 2, &mut Prng::new(9)).unwrap());
    let q1 = random_irreducible_quadric(3, &f7, &mut Prng::new(1)).unwrap();
    let q2 = random_irreducible_quadric(3, &f7, &mut Prng::new(1)).unwrap();
    assert_eq!(q1.to_json(), q2.to_json());
}

#[test]
fn unfiltered_cubics_still_clean_up() {
    let f5 = gf(5);
    let x = cubic_92_construction_with(&f5, CubicOptions { reject_hyperplane_factors: false }, &mut Prng::new(3)).unwrap();
    assert!(is_rs_set(&x, 9, 2).unwrap().is_valid());
}

#[test]
fn identical_cubics_are_handled() {
    let f5 = gf(5);
    let c = HomogeneousForm::random(&f5, 4, 3, &mut Prng::new(17)).unwrap();
    let surface = hypersurface_points(&c).unwrap();
    let both = common_zeros(&[c.clone(), c]).unwrap();
    assert_eq!(both, surface);
    let cleaned = cleanup(&both, 9, 2).unwrap();
    assert!(is_rs_set(&cleaned, 9, 2).unwrap().is_valid());
    assert!(cleaned.len() < both.len());
}

#[test]
fn quadric_forms_vanish_on_their_points() {
    let f5 = gf(5);
    let form = random_irreducible_quadric(3, &f5, &mut Prng::new(4)).unwrap();
    let pts: Vec<ProjPoint> = hypersurface_points(&form).unwrap().into_points();
    assert!(pts.iter().all(|p| form.eval(p.coords()) == 0));
    let others = all_points(3, &f5).unwrap().filter(|p| !pts.contains(p));
    assert!(others.into_iter().all(|p| form.eval(p.coords()) != 0));
}
