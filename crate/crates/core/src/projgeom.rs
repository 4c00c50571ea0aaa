//! Points and subspaces of PG(n, q).
//!
//! A point is stored by its normalized homogeneous coordinates: the first
//! nonzero coordinate is 1. Subspaces are stored as reduced row echelon
//! bases with rows ordered by pivot column, so equal subspaces have equal
//! bases.

use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, ExtensionSpec, FieldSpec};

/// A point of PG(n, q) in normalized homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ProjPoint(Vec<Elem>);

impl ProjPoint {
    /// Scales `raw` so that its first nonzero coordinate is 1.
    pub fn normalize(field: &FieldSpec, raw: &[Elem]) -> Result<Self> {
        for &c in raw {
            field.check(c)?;
        }
        let lead = raw.iter().copied().find(|&c| c != 0).ok_or(Error::ZeroVector)?;
        if lead == 1 {
            return Ok(ProjPoint(raw.to_vec()));
        }
        let s = field.inv(lead)?;
        Ok(ProjPoint(raw.iter().map(|&c| field.mul(c, s)).collect()))
    }

    /// Wraps coordinates already known to be normalized.
    pub(crate) fn from_normalized(coords: Vec<Elem>) -> Self {
        debug_assert_eq!(coords.iter().find(|&&c| c != 0), Some(&1));
        ProjPoint(coords)
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.0
    }

    /// Projective dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.0.len() - 1
    }

    fn is_normalized(&self) -> bool {
        self.0.iter().find(|&&c| c != 0) == Some(&1)
    }
}

impl AsRef<[Elem]> for ProjPoint {
    fn as_ref(&self) -> &[Elem] {
        &self.0
    }
}

/// A sorted, deduplicated set of points of PG(n, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: FieldSpec,
    n: usize,
    points: Vec<ProjPoint>,
}

impl PointSet {
    /// Collects normalized points; sorts and removes duplicates.
    pub fn new(field: FieldSpec, n: usize, points: Vec<ProjPoint>) -> Result<Self> {
        for pt in &points {
            check_ambient(&field, n, pt.coords())?;
            if !pt.is_normalized() {
                return Err(Error::param(format!("point {:?} is not normalized", pt.coords())));
            }
        }
        Ok(Self::from_sorted_unchecked(field, n, points))
    }

    /// Normalizes raw coordinate vectors, then sorts and deduplicates.
    pub fn from_coords<I>(field: FieldSpec, n: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut points = Vec::new();
        for row in rows {
            check_ambient(&field, n, &row)?;
            points.push(ProjPoint::normalize(&field, &row)?);
        }
        Ok(Self::from_sorted_unchecked(field, n, points))
    }

    pub fn empty(field: FieldSpec, n: usize) -> Self {
        PointSet {
            field,
            n,
            points: Vec::new(),
        }
    }

    pub(crate) fn from_sorted_unchecked(field: FieldSpec, n: usize, mut points: Vec<ProjPoint>) -> Self {
        points.sort_unstable();
        points.dedup();
        PointSet { field, n, points }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Projective dimension of the ambient space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ProjPoint> {
        self.points.iter()
    }

    pub fn contains(&self, coords: &[Elem]) -> bool {
        self.points
            .binary_search_by(|p| p.coords().cmp(coords))
            .is_ok()
    }

    /// The points satisfying `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&ProjPoint) -> bool) -> PointSet {
        PointSet {
            field: self.field.clone(),
            n: self.n,
            points: self.points.iter().filter(|p| keep(p)).cloned().collect(),
        }
    }

    /// The first `k` points in sorted order.
    pub fn truncated(&self, k: usize) -> PointSet {
        PointSet {
            field: self.field.clone(),
            n: self.n,
            points: self.points.iter().take(k).cloned().collect(),
        }
    }

    pub fn into_points(self) -> Vec<ProjPoint> {
        self.points
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a ProjPoint;
    type IntoIter = std::slice::Iter<'a, ProjPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

fn check_ambient(field: &FieldSpec, n: usize, coords: &[Elem]) -> Result<()> {
    if coords.len() != n + 1 {
        return Err(Error::AmbientMismatch(format!(
            "point has {} coordinates, PG({n}, q) needs {}",
            coords.len(),
            n + 1
        )));
    }
    for &c in coords {
        field.check(c)?;
    }
    Ok(())
}

/// Incrementally maintained reduced row echelon basis.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Tests `v` for membership in the row space without allocating.
    pub fn contains(&self, field: &FieldSpec, v: &[Elem]) -> bool {
        // With a reduced basis, v is in the span iff v = sum v[p_i] * row_i.
        for c in 0..v.len() {
            let mut expect = 0;
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                let coeff = v[p];
                if coeff != 0 && row[c] != 0 {
                    expect = field.add(expect, field.mul(coeff, row[c]));
                }
            }
            if expect != v[c] {
                return false;
            }
        }
        true
    }

    /// Adds `v` to the basis; returns false when `v` was already spanned.
    pub fn insert(&mut self, field: &FieldSpec, v: &[Elem]) -> bool {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let coeff = r[p];
            if coeff != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    if y != 0 {
                        *x = field.sub(*x, field.mul(coeff, y));
                    }
                }
            }
        }
        let Some(pivot) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let s = field.inv(r[pivot]).expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = field.mul(*x, s);
        }
        for row in self.rows.iter_mut() {
            let coeff = row[pivot];
            if coeff != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    if y != 0 {
                        *x = field.sub(*x, field.mul(coeff, y));
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, r);
        true
    }
}

/// A subspace of PG(n, q) in canonical reduced row echelon form.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    field: FieldSpec,
    n: usize,
    rows: Vec<Vec<Elem>>,
}

impl SubspaceBasis {
    /// The span of the given vectors.
    pub fn span<V: AsRef<[Elem]>>(field: &FieldSpec, n: usize, vectors: &[V]) -> Result<Self> {
        let mut ech = Echelon::new();
        for v in vectors {
            check_ambient(field, n, v.as_ref())?;
            ech.insert(field, v.as_ref());
        }
        Ok(Self::from_echelon(field, n, ech))
    }

    pub(crate) fn from_echelon(field: &FieldSpec, n: usize, ech: Echelon) -> Self {
        SubspaceBasis {
            field: field.clone(),
            n,
            rows: ech.rows,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Vector-space dimension (number of basis rows).
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let ech = Echelon {
            rows: self.rows.clone(),
            pivots: self.pivots(),
        };
        ech.contains(&self.field, v)
    }

    fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&c| c != 0).expect("basis rows are nonzero"))
            .collect()
    }

    /// Every point of the subspace. Rows have unit pivots in increasing
    /// columns, so a combination whose first nonzero coefficient is 1 is
    /// already normalized.
    pub fn points(&self) -> Vec<ProjPoint> {
        let mut out = Vec::new();
        for_each_combination(&self.field, &self.rows, self.n + 1, |v| {
            out.push(ProjPoint::from_normalized(v.to_vec()))
        });
        out.sort_unstable();
        out
    }

    /// Intersection dimension (as a vector space) with another subspace.
    pub fn meet_rank(&self, other: &SubspaceBasis) -> usize {
        let mut ech = Echelon::new();
        for r in self.rows.iter().chain(&other.rows) {
            ech.insert(&self.field, r);
        }
        self.rank() + other.rank() - ech.rank()
    }
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl Eq for SubspaceBasis {}

impl Hash for SubspaceBasis {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rows.hash(state);
    }
}

/// Calls `visit` with every normalized combination of `rows` (assumed to
/// have unit pivots in increasing columns).
pub(crate) fn for_each_combination(
    field: &FieldSpec,
    rows: &[Vec<Elem>],
    width: usize,
    mut visit: impl FnMut(&[Elem]),
) {
    let j = rows.len();
    let q = field.order();
    let mut coeffs = vec![0u64; j];
    let mut v = vec![0u64; width];
    for lead in 0..j {
        coeffs.iter_mut().for_each(|c| *c = 0);
        coeffs[lead] = 1;
        loop {
            v.iter_mut().for_each(|x| *x = 0);
            for (row, &c) in rows.iter().zip(&coeffs).skip(lead) {
                if c == 0 {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(row) {
                    if y != 0 {
                        *x = field.add(*x, field.mul(c, y));
                    }
                }
            }
            visit(&v);
            // Odometer over the coefficients after the leading one.
            let mut i = j;
            let mut done = true;
            while i > lead + 1 {
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < q {
                    done = false;
                    break;
                }
                coeffs[i] = 0;
            }
            if done {
                break;
            }
        }
    }
}

/// Number of points of PG(n, q), if it fits in a `u64`.
pub fn point_count(n: usize, q: u64) -> Result<u64> {
    let total = gaussian_binomial(n as u64 + 1, 1, q);
    u64::try_from(total).map_err(|_| Error::Overflow(format!("|PG({n}, {q})| exceeds u64")))
}

/// All points of PG(n, q) in ascending order.
pub fn all_points(n: usize, field: &FieldSpec) -> Result<AllPoints> {
    let remaining = point_count(n, field.order())?;
    Ok(AllPoints {
        q: field.order(),
        current: Some({
            let mut v = vec![0; n + 1];
            v[n] = 1;
            v
        }),
        lead: n,
        remaining,
    })
}

/// Iterator returned by [`all_points`].
#[derive(Clone, Debug)]
pub struct AllPoints {
    q: u64,
    current: Option<Vec<Elem>>,
    lead: usize,
    remaining: u64,
}

impl Iterator for AllPoints {
    type Item = ProjPoint;

    fn next(&mut self) -> Option<ProjPoint> {
        let cur = self.current.take()?;
        let out = cur.clone();
        let mut next = cur;
        let width = next.len();
        // Advance the free coordinates after the lead, last one fastest.
        let mut i = width;
        let mut carried = true;
        while i > self.lead + 1 {
            i -= 1;
            next[i] += 1;
            if next[i] < self.q {
                carried = false;
                break;
            }
            next[i] = 0;
        }
        if !carried {
            self.current = Some(next);
        } else if self.lead > 0 {
            self.lead -= 1;
            let mut v = vec![0; width];
            v[self.lead] = 1;
            self.current = Some(v);
        }
        self.remaining -= 1;
        Some(ProjPoint::from_normalized(out))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// Rank over GF(q) of the given points.
pub fn rank(field: &FieldSpec, points: &[ProjPoint]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Ok(0);
    };
    let width = first.coords().len();
    let mut ech = Echelon::new();
    for p in points {
        if p.coords().len() != width {
            return Err(Error::AmbientMismatch("points of different lengths".into()));
        }
        ech.insert(field, p.coords());
    }
    Ok(ech.rank())
}

/// Result of [`span_count`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCount {
    pub count: usize,
    pub members: Vec<ProjPoint>,
}

/// The points of `x` lying in the span of `basis_pts`.
pub fn span_count(basis_pts: &[ProjPoint], x: &PointSet) -> Result<SpanCount> {
    let field = x.field();
    let mut ech = Echelon::new();
    for p in basis_pts {
        check_ambient(field, x.n(), p.coords())?;
        ech.insert(field, p.coords());
    }
    let members: Vec<ProjPoint> = x
        .iter()
        .filter(|p| ech.contains(field, p.coords()))
        .cloned()
        .collect();
    Ok(SpanCount {
        count: members.len(),
        members,
    })
}

/// Gaussian binomial coefficient `[a choose b]_q`: the number of
/// b-dimensional subspaces of GF(q)^a. At `q = 1` this is the ordinary
/// binomial coefficient; for `b > a` it is 0.
pub fn gaussian_binomial(a: u64, b: u64, q: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    if q == 1 {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for i in 0..b {
            num *= a - i;
            den *= i + 1;
        }
        return num / den;
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..b {
        num *= q.pow((a - i) as u32) - 1u32;
        den *= q.pow((b - i) as u32) - 1u32;
    }
    num / den
}

/// The (N-1)-space of PG(NM-1, q) that field reduction assigns to a point
/// of PG(M-1, q^N): the GF(q)-span of `b^i * pt` for `0 <= i < N`, each
/// coordinate expanded in the power basis of the extension generator `b`.
pub fn field_reduction_spread(pt: &ProjPoint, ext: &ExtensionSpec) -> Result<SubspaceBasis> {
    let big = ext.field();
    let base = ext.base();
    let nn = ext.degree() as usize;
    let m = pt.coords().len();
    for &c in pt.coords() {
        big.check(c)?;
    }
    let beta = ext.generator();
    let mut scale = 1;
    let mut rows = Vec::with_capacity(nn);
    for _ in 0..nn {
        let mut row = Vec::with_capacity(nn * m);
        for &c in pt.coords() {
            row.extend(ext.coordinates(big.mul(scale, c)));
        }
        rows.push(row);
        scale = big.mul(scale, beta);
    }
    let basis = SubspaceBasis::span(base, nn * m - 1, &rows)?;
    debug_assert_eq!(basis.rank(), nn);
    Ok(basis)
}

/// Image of `x` under the linear map sending the i-th unit vector to the
/// i-th basis row of `spread_elt`.
pub fn embed_copy(x: &PointSet, spread_elt: &SubspaceBasis) -> Result<PointSet> {
    if x.n() + 1 != spread_elt.rank() {
        return Err(Error::AmbientMismatch(format!(
            "cannot embed PG({}, q) into a subspace of projective dimension {}",
            x.n(),
            spread_elt.dim()
        )));
    }
    if x.field() != spread_elt.field() {
        return Err(Error::AmbientMismatch("field mismatch".into()));
    }
    let field = x.field();
    let width = spread_elt.n() + 1;
    let points = x
        .iter()
        .map(|p| {
            let mut v = vec![0; width];
            for (&c, row) in p.coords().iter().zip(spread_elt.rows()) {
                if c == 0 {
                    continue;
                }
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = field.add(*a, field.mul(c, b));
                }
            }
            ProjPoint::from_normalized(v)
        })
        .collect();
    Ok(PointSet::from_sorted_unchecked(
        field.clone(),
        spread_elt.n(),
        points,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(ProjPoint::normalize(&gf(5), &[0, 2, 4]).unwrap().coords(), &[0, 1, 2]);
        assert_eq!(ProjPoint::normalize(&gf(3), &[2, 1, 0]).unwrap().coords(), &[1, 2, 0]);
        assert_eq!(ProjPoint::normalize(&gf(4), &[3, 3, 0]).unwrap().coords(), &[1, 1, 0]);
        assert!(matches!(ProjPoint::normalize(&gf(3), &[0, 0]), Err(Error::ZeroVector)));
        assert!(ProjPoint::normalize(&gf(3), &[0, 3]).is_err());
    }

    #[test]
    fn point_counts() {
        assert_eq!(all_points(2, &gf(2)).unwrap().count(), 7);
        assert_eq!(all_points(1, &gf(3)).unwrap().count(), 4);
        assert_eq!(all_points(3, &gf(2)).unwrap().count(), 15);
        assert!(all_points(70, &gf(2)).is_err());
    }

    #[test]
    fn all_points_sorted_and_normalized() {
        let f = gf(4);
        let pts: Vec<_> = all_points(3, &f).unwrap().collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts.iter().all(|p| p.is_normalized()));
        assert_eq!(pts.len(), 85);
    }

    #[test]
    fn rank_examples() {
        let f3 = gf(3);
        let line: Vec<_> = [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
            .iter()
            .map(|v| ProjPoint::normalize(&f3, v).unwrap())
            .collect();
        assert_eq!(rank(&f3, &line).unwrap(), 2);

        let f5 = gf(5);
        let cubic: Vec<_> = (0..4u64)
            .map(|t| ProjPoint::normalize(&f5, &[1, t, t * t % 5, t * t * t % 5]).unwrap())
            .collect();
        assert_eq!(rank(&f5, &cubic).unwrap(), 4);

        assert_eq!(rank(&f3, &[line[0].clone(), line[0].clone()]).unwrap(), 1);
        assert_eq!(rank(&f3, &[]).unwrap(), 0);
        let short = ProjPoint::normalize(&f3, &[1, 0]).unwrap();
        assert!(rank(&f3, &[line[0].clone(), short]).is_err());
    }

    #[test]
    fn span_count_full_line() {
        let f3 = gf(3);
        let x = PointSet::from_coords(f3.clone(), 2, all_points(2, &f3).unwrap().filter(|p| p.coords()[2] == 0).map(ProjPoint::into_coords)).unwrap();
        assert_eq!(x.len(), 4);
        let sc = span_count(&x.points()[..2], &x).unwrap();
        assert_eq!(sc.count, 4);
        let one = span_count(&x.points()[..1], &x).unwrap();
        assert_eq!(one.members, vec![x.points()[0].clone()]);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 1, 2), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(9, 0, 7), BigUint::one());
        assert_eq!(gaussian_binomial(2, 3, 7), BigUint::zero());
        assert_eq!(gaussian_binomial(6, 3, 1), BigUint::from(20u32));
    }

    #[test]
    fn gaussian_binomial_recurrence() {
        // [a, b]_q = [a-1, b-1]_q + q^b [a-1, b]_q
        for q in 1..=5u64 {
            for a in 1..=8u64 {
                for b in 1..=a {
                    let lhs = gaussian_binomial(a, b, q);
                    let rhs = gaussian_binomial(a - 1, b - 1, q)
                        + BigUint::from(q).pow(b as u32) * gaussian_binomial(a - 1, b, q);
                    assert_eq!(lhs, rhs, "a={a} b={b} q={q}");
                }
            }
        }
    }

    #[test]
    fn lines_of_pg32_by_enumeration() {
        let f = gf(2);
        let pts: Vec<_> = all_points(3, &f).unwrap().collect();
        let mut lines = std::collections::HashSet::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                lines.insert(SubspaceBasis::span(&f, 3, &[&pts[i], &pts[j]]).unwrap());
            }
        }
        assert_eq!(lines.len(), 35);
    }

    #[test]
    fn subspace_points_enumeration() {
        let f = gf(3);
        let s = SubspaceBasis::span(&f, 3, &[vec![1, 2, 0, 1], vec![0, 1, 1, 1], vec![0, 0, 1, 2]]).unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 13);
        assert!(pts.iter().all(|p| s.contains(p.coords())));
        let all: Vec<_> = all_points(3, &f).unwrap().filter(|p| s.contains(p.coords())).collect();
        assert_eq!(pts, all);
        let one = SubspaceBasis::span(&f, 3, &[vec![0, 2, 0, 1]]).unwrap();
        assert_eq!(one.points().len(), 1);
    }

    #[test]
    fn trivial_field_reduction() {
        let f3 = gf(3);
        // N = 1 is the identity on points.
        let ext1 = ExtensionSpec::new(&f3, 1).unwrap();
        let p = ProjPoint::normalize(&f3, &[0, 1, 2]).unwrap();
        let s = field_reduction_spread(&p, &ext1).unwrap();
        assert_eq!(s.rows(), &[p.coords().to_vec()]);
        // M = 1 fills the whole space.
        let ext2 = ExtensionSpec::new(&f3, 2).unwrap();
        let one = ProjPoint::normalize(ext2.field(), &[1]).unwrap();
        let s = field_reduction_spread(&one, &ext2).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.points().len(), 4);
    }

    #[test]
    fn embed_copy_checks_dimension() {
        let f2 = gf(2);
        let x = PointSet::from_coords(f2.clone(), 1, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let plane = SubspaceBasis::span(&f2, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert!(embed_copy(&x, &plane).is_err());
        let line = SubspaceBasis::span(&f2, 3, &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        let img = embed_copy(&x, &line).unwrap();
        assert_eq!(img.len(), 2);
        assert!(img.contains(&[1, 0, 1, 0]));
    }
}
