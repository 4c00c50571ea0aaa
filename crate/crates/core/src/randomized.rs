//! Seeded randomized constructions and the cleanup pass that turns an
//! arbitrary point set into an (r, s)-set.
//!
//! All randomness comes from [`Prng`], a ChaCha8 stream keyed by a 64-bit
//! seed, so every output is a pure function of its parameters and seed.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::projgeom::{all_points, point_count, Echelon, PointSet, ProjPoint};
use crate::verifier::{Verdict, Verifier};

/// Cap on the number of points of PG(n, q) a construction may enumerate.
pub const ENUM_BUDGET: u64 = 10_000_000;

/// Cap on rejection-sampling attempts.
pub const REJECTION_CAP: u64 = 10_000;

/// Seeded ChaCha8 generator.
#[derive(Clone, Debug)]
pub struct Prng {
    seed: u64,
    rng: ChaCha8Rng,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Prng {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform real in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.rng.gen_range(0..bound)
    }

    pub fn element(&mut self, field: &FieldSpec) -> Elem {
        self.below(field.order())
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

/// All exponent vectors of length `vars` summing to `degree`, in decreasing
/// lexicographic order (`x_0^d` first).
pub fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn go(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == vars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(vars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        go(vars, degree, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

/// A nonzero homogeneous polynomial in `n + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousForm {
    field: FieldSpec,
    n: usize,
    degree: u32,
    coeffs: BTreeMap<Vec<u32>, Elem>,
}

impl HomogeneousForm {
    /// Zero coefficients are dropped.
    pub fn new(
        field: FieldSpec,
        n: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Elem)>,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::param("form degree must be positive"));
        }
        let mut coeffs = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != n + 1 || exp.iter().sum::<u32>() != degree {
                return Err(Error::param(format!(
                    "exponent vector {exp:?} is not a degree-{degree} monomial in {} variables",
                    n + 1
                )));
            }
            field.check(c)?;
            let slot: &mut Elem = coeffs.entry(exp).or_insert(0);
            *slot = field.add(*slot, c);
        }
        coeffs.retain(|_, c| *c != 0);
        if coeffs.is_empty() {
            return Err(Error::param("the zero polynomial is not a form"));
        }
        Ok(HomogeneousForm {
            field,
            n,
            degree,
            coeffs,
        })
    }

    /// Uniform coefficients on every monomial, resampled if all vanish.
    pub fn random(field: &FieldSpec, n: usize, degree: u32, rng: &mut Prng) -> Result<Self> {
        let mons = monomials(n + 1, degree);
        for _ in 0..REJECTION_CAP {
            let terms: Vec<_> = mons.iter().map(|m| (m.clone(), rng.element(field))).collect();
            if terms.iter().any(|(_, c)| *c != 0) {
                return Self::new(field.clone(), n, degree, terms);
            }
        }
        Err(Error::RejectionCapExceeded(REJECTION_CAP))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, Elem> {
        &self.coeffs
    }

    pub fn coefficient(&self, exp: &[u32]) -> Elem {
        self.coeffs.get(exp).copied().unwrap_or(0)
    }

    pub fn eval(&self, v: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = 0;
        for (exp, &c) in &self.coeffs {
            let mut t = c;
            for (&x, &e) in v.iter().zip(exp) {
                if e > 0 {
                    t = f.mul(t, f.pow(x, e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// For a quadratic form, the matrix with `a_ii` on the diagonal and
    /// `a_ij / 2` off it.
    pub fn symmetric_matrix(&self) -> Result<Vec<Vec<Elem>>> {
        let f = &self.field;
        if self.degree != 2 {
            return Err(Error::param("symmetric matrix needs a quadratic form"));
        }
        if f.p() == 2 {
            return Err(Error::param("symmetric matrix undefined in characteristic 2"));
        }
        let half = f.inv(2 % f.p())?;
        let k = self.n + 1;
        let mut m = vec![vec![0; k]; k];
        for (exp, &c) in &self.coeffs {
            let idx: Vec<usize> = exp
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[i][i] = c;
            } else {
                m[i][j] = f.mul(c, half);
                m[j][i] = m[i][j];
            }
        }
        Ok(m)
    }

    pub fn quadric_rank(&self) -> Result<usize> {
        let mut ech = Echelon::new();
        for row in self.symmetric_matrix()? {
            ech.insert(&self.field, &row);
        }
        Ok(ech.rank())
    }

    /// `{"e_0,...,e_n": coefficient, ...}` with keys in sorted order.
    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, Elem> = self
            .coeffs
            .iter()
            .map(|(exp, &c)| {
                let key: Vec<String> = exp.iter().map(u32::to_string).collect();
                (key.join(","), c)
            })
            .collect();
        serde_json::to_string(&map).expect("string-keyed map serializes")
    }

    pub fn from_json(field: &FieldSpec, text: &str) -> Result<Self> {
        let map: BTreeMap<String, Elem> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut terms = Vec::with_capacity(map.len());
        for (key, c) in map {
            let exp = key
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("exponent key {key:?}: {e}")))?;
            terms.push((exp, c));
        }
        let (n, degree) = match terms.first() {
            Some((exp, _)) if !exp.is_empty() => (exp.len() - 1, exp.iter().sum()),
            _ => return Err(Error::Parse("empty form".into())),
        };
        Self::new(field.clone(), n, degree, terms)
    }
}

fn enumerable(n: usize, field: &FieldSpec) -> Result<()> {
    let count = point_count(n, field.order())?;
    if count > ENUM_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "points of PG(n, q)",
            needed: count as u128,
            budget: ENUM_BUDGET as u128,
        });
    }
    Ok(())
}

/// Common zeros of `forms`, which must share field and ambient dimension.
pub fn common_zeros(forms: &[HomogeneousForm]) -> Result<PointSet> {
    let Some(first) = forms.first() else {
        return Err(Error::param("need at least one form"));
    };
    let (field, n) = (first.field(), first.n());
    if forms.iter().any(|f| f.field() != field || f.n() != n) {
        return Err(Error::AmbientMismatch("forms over different spaces".into()));
    }
    enumerable(n, field)?;
    let pts: Vec<ProjPoint> = all_points(n, field)?
        .filter(|p| forms.iter().all(|f| f.eval(p.coords()) == 0))
        .collect();
    Ok(PointSet::from_sorted_unchecked(field.clone(), n, pts))
}

pub fn hypersurface_points(form: &HomogeneousForm) -> Result<PointSet> {
    common_zeros(std::slice::from_ref(form))
}

/// Rejection-samples a quadratic form whose symmetric matrix has rank at
/// least 3. Odd `q` only.
pub fn random_irreducible_quadric(n: usize, field: &FieldSpec, rng: &mut Prng) -> Result<HomogeneousForm> {
    if field.p() == 2 {
        return Err(Error::param("random quadrics need odd q"));
    }
    if n < 2 {
        return Err(Error::param("a quadric of rank 3 needs n >= 2"));
    }
    for _ in 0..REJECTION_CAP {
        let form = HomogeneousForm::random(field, n, 2, rng)?;
        if form.quadric_rank()? >= 3 {
            return Ok(form);
        }
    }
    Err(Error::RejectionCapExceeded(REJECTION_CAP))
}

/// Deletes the whole intersection of the first violating subspace until
/// `X` is an (r, s)-set.
pub fn cleanup_with(verifier: &Verifier, x: &PointSet, r: usize, s: usize) -> Result<PointSet> {
    let mut cur = x.clone();
    while let Verdict::Violated(w) = verifier.is_rs_set(&cur, r, s)? {
        let doomed: BTreeSet<&ProjPoint> = w.intersection.iter().collect();
        cur = cur.filtered(|p| !doomed.contains(p));
    }
    Ok(cur)
}

pub fn cleanup(x: &PointSet, r: usize, s: usize) -> Result<PointSet> {
    cleanup_with(&Verifier::new(), x, r, s)
}

/// Whether `(r, s)` satisfies `s + 1 >= r >= 3`.
pub fn gv_in_regime(r: usize, s: usize) -> bool {
    r >= 3 && s + 1 >= r
}

/// `q^{-s - s(n-s)/r}`.
pub fn gv_probability(n: usize, q: u64, r: usize, s: usize) -> Result<f64> {
    if r == 0 || s > n {
        return Err(Error::param(format!("need r >= 1 and s <= n, got r={r}, s={s}, n={n}")));
    }
    let exponent = s as f64 + (s * (n - s)) as f64 / r as f64;
    Ok((q as f64).powf(-exponent))
}

/// Keeps each point of PG(n, q) with probability [`gv_probability`], then
/// runs [`cleanup`].
pub fn gv_construction(n: usize, field: &FieldSpec, r: usize, s: usize, rng: &mut Prng) -> Result<PointSet> {
    if r < 2 || s < 1 || s >= n {
        return Err(Error::param(format!("need r >= 2 and 1 <= s < n, got r={r}, s={s}, n={n}")));
    }
    enumerable(n, field)?;
    let p = gv_probability(n, field.order(), r, s)?;
    let kept: Vec<ProjPoint> = all_points(n, field)?.filter(|_| rng.bernoulli(p)).collect();
    cleanup(&PointSet::from_sorted_unchecked(field.clone(), n, kept), r, s)
}

/// Intersection of `m` random irreducible quadrics of PG(2m-1, q), cleaned
/// to a (4,2)-set.
pub fn quadric_42_construction(m: usize, field: &FieldSpec, rng: &mut Prng) -> Result<PointSet> {
    if m < 2 {
        return Err(Error::param("quadric construction needs m >= 2"));
    }
    let n = 2 * m - 1;
    enumerable(n, field)?;
    let forms = (0..m)
        .map(|_| random_irreducible_quadric(n, field, rng))
        .collect::<Result<Vec<_>>>()?;
    cleanup(&common_zeros(&forms)?, 4, 2)
}

/// Whether the form vanishes at every point of some hyperplane.
pub fn vanishes_on_hyperplane(form: &HomogeneousForm) -> Result<bool> {
    let (field, n) = (form.field(), form.n());
    let zeros = hypersurface_points(form)?;
    let per_plane = point_count(n - 1, field.order())? as usize;
    if zeros.len() < per_plane {
        return Ok(false);
    }
    let on = |h: &ProjPoint, p: &ProjPoint| {
        h.coords()
            .iter()
            .zip(p.coords())
            .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            == 0
    };
    for h in all_points(n, field)? {
        if zeros.iter().filter(|p| on(&h, p)).count() == per_plane {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Options for [`cubic_92_construction`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubicOptions {
    /// Resample cubics that vanish on a whole hyperplane.
    pub reject_hyperplane_factors: bool,
}

impl Default for CubicOptions {
    fn default() -> Self {
        CubicOptions {
            reject_hyperplane_factors: true,
        }
    }
}

pub fn random_cubic(field: &FieldSpec, n: usize, opts: CubicOptions, rng: &mut Prng) -> Result<HomogeneousForm> {
    for _ in 0..REJECTION_CAP {
        let form = HomogeneousForm::random(field, n, 3, rng)?;
        if !opts.reject_hyperplane_factors || !vanishes_on_hyperplane(&form)? {
            return Ok(form);
        }
    }
    Err(Error::RejectionCapExceeded(REJECTION_CAP))
}

/// Intersection of two random cubics of PG(4, q), cleaned to a (9,2)-set.
pub fn cubic_92_construction(field: &FieldSpec, rng: &mut Prng) -> Result<PointSet> {
    cubic_92_construction_with(field, CubicOptions::default(), rng)
}

pub fn cubic_92_construction_with(field: &FieldSpec, opts: CubicOptions, rng: &mut Prng) -> Result<PointSet> {
    enumerable(4, field)?;
    let c1 = random_cubic(field, 4, opts, rng)?;
    let c2 = random_cubic(field, 4, opts, rng)?;
    cleanup(&common_zeros(&[c1, c2])?, 9, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::elliptic_ovoid;
    use crate::verifier::is_rs_set;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn form(f: &FieldSpec, n: usize, d: u32, terms: &[(&[u32], u64)]) -> HomogeneousForm {
        HomogeneousForm::new(f.clone(), n, d, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(5, 3).len(), 35);
        assert_eq!(monomials(3, 2)[0], vec![2, 0, 0]);
        assert_eq!(monomials(3, 2)[5], vec![0, 0, 2]);
    }

    #[test]
    fn prng_is_stable() {
        let mut a = Prng::new(7);
        let mut b = Prng::new(7);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, (0..8).map(|_| Prng::new(8).next_u64()).collect::<Vec<_>>());
        let u = Prng::new(1).uniform();
        assert!((0.0..1.0).contains(&u));
    }

    #[test]
    fn hypersurface_examples() {
        let f3 = gf(3);
        assert_eq!(hypersurface_points(&form(&f3, 2, 2, &[(&[2, 0, 0], 1)])).unwrap().len(), 4);
        let conic = form(&f3, 2, 2, &[(&[1, 0, 1], 1), (&[0, 2, 0], 2)]);
        assert_eq!(hypersurface_points(&conic).unwrap().len(), 4);

        let f2 = gf(2);
        // x0 x1 + x2^2 + x2 x3 + x3^2, the form behind the ovoid.
        let ell = form(&f2, 3, 2, &[(&[1, 1, 0, 0], 1), (&[0, 0, 2, 0], 1), (&[0, 0, 1, 1], 1), (&[0, 0, 0, 2], 1)]);
        assert_eq!(hypersurface_points(&ell).unwrap(), elliptic_ovoid(&f2));
    }

    #[test]
    fn quadric_rank_filter() {
        let f5 = gf(5);
        assert_eq!(form(&f5, 2, 2, &[(&[1, 1, 0], 1)]).quadric_rank().unwrap(), 2);
        let mut rng = Prng::new(3);
        let q = random_irreducible_quadric(2, &f5, &mut rng).unwrap();
        assert!(q.quadric_rank().unwrap() >= 3);
        assert_eq!(q, random_irreducible_quadric(2, &f5, &mut Prng::new(3)).unwrap());
        assert!(random_irreducible_quadric(2, &gf(4), &mut rng).is_err());
    }

    #[test]
    fn form_json_round_trip() {
        let f7 = gf(7);
        let c = HomogeneousForm::random(&f7, 4, 3, &mut Prng::new(11)).unwrap();
        let text = c.to_json();
        let back = HomogeneousForm::from_json(&f7, &text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
        assert_eq!(form(&f7, 1, 2, &[(&[1, 1], 3)]).to_json(), r#"{"1,1":3}"#);
        assert!(HomogeneousForm::from_json(&f7, "{}").is_err());
        assert!(HomogeneousForm::new(f7.clone(), 1, 2, [(vec![2, 1], 1)]).is_err());
    }

    #[test]
    fn cleanup_examples() {
        let f3 = gf(3);
        let line_plus = PointSet::from_coords(
            f3.clone(),
            2,
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![0, 1, 2], vec![1, 0, 0]],
        )
        .unwrap();
        let out = cleanup(&line_plus, 2, 1).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out.contains(&[1, 0, 0]));
        let o = elliptic_ovoid(&f3);
        assert_eq!(cleanup(&o, 2, 1).unwrap(), o);
    }

    #[test]
    fn gv_probability_formula() {
        assert!((gv_probability(3, 5, 2, 1).unwrap() - 1.0 / 25.0).abs() < 1e-15);
        assert!(gv_in_regime(3, 2));
        assert!(!gv_in_regime(2, 1));
        assert!(!gv_in_regime(4, 2));
    }

    #[test]
    fn small_random_constructions() {
        let f5 = gf(5);
        let x = gv_construction(3, &f5, 3, 2, &mut Prng::new(1)).unwrap();
        assert!(is_rs_set(&x, 3, 2).unwrap().is_valid());
        assert_eq!(x, gv_construction(3, &f5, 3, 2, &mut Prng::new(1)).unwrap());

        let y = quadric_42_construction(2, &f5, &mut Prng::new(2)).unwrap();
        assert!(is_rs_set(&y, 4, 2).unwrap().is_valid());

        let z = cubic_92_construction(&gf(3), &mut Prng::new(4)).unwrap();
        assert!(is_rs_set(&z, 9, 2).unwrap().is_valid());
    }

    #[test]
    fn hyperplane_detection() {
        let f3 = gf(3);
        // x0 * (x1^2 + x2 x3): contains the hyperplane x0 = 0.
        let reducible = form(&f3, 4, 3, &[(&[1, 2, 0, 0, 0], 1), (&[1, 0, 1, 1, 0], 1)]);
        assert!(vanishes_on_hyperplane(&reducible).unwrap());
        let fermat = form(&gf(5), 4, 3, &[(&[3, 0, 0, 0, 0], 1), (&[0, 3, 0, 0, 0], 1), (&[0, 0, 3, 0, 0], 1), (&[0, 0, 0, 3, 0], 1), (&[0, 0, 0, 0, 3], 1)]);
        assert!(!vanishes_on_hyperplane(&fermat).unwrap());
    }
}
