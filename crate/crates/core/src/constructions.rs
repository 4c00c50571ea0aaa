//! Explicit constructions of (r, s)-sets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf::{Elem, ExtensionSpec, FieldSpec};
use crate::projgeom::{all_points, embed_copy, field_reduction_spread, PointSet, ProjPoint};
use crate::verifier::{Verdict, Verifier};

/// Iterates `(F_q^*)^len` in lexicographic order.
fn nonzero_tuples(q: u64, len: usize) -> impl Iterator<Item = Vec<Elem>> {
    let mut cur = Some(vec![1u64; len]);
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        let mut i = len;
        while i > 0 {
            i -= 1;
            next[i] += 1;
            if next[i] < q {
                cur = Some(next);
                break;
            }
            next[i] = 1;
        }
        Some(out)
    })
}

/// `{(1, F_0(x), x_1 F_0(x), ..., x_{n-1} F_0(x)) : x in (F_q^*)^{n-1}}` with
/// `F_0(x) = x_1 ... x_{n-1}`: an (n, 1)-set of PG(n, q) with `(q-1)^{n-1}`
/// points.
pub fn monomial_curve(n: usize, field: &FieldSpec) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::param("monomial curve needs n >= 2"));
    }
    let pts = nonzero_tuples(field.order(), n - 1).map(|x| {
        let f0 = x.iter().fold(1, |acc, &xi| field.mul(acc, xi));
        let mut v = Vec::with_capacity(n + 1);
        v.push(1);
        v.push(f0);
        v.extend(x.iter().map(|&xi| field.mul(xi, f0)));
        ProjPoint::from_normalized(v)
    });
    Ok(PointSet::from_sorted_unchecked(field.clone(), n, pts.collect()))
}

/// The affine part `{(1, 1/(x_1...x_{n-1}), x_1, ..., x_{n-1})}` of the curve
/// `X_0^n = X_1 ... X_n`.
pub fn monomial_curve_affine_variant(n: usize, field: &FieldSpec) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::param("monomial curve needs n >= 2"));
    }
    let mut pts = Vec::new();
    for x in nonzero_tuples(field.order(), n - 1) {
        let prod = x.iter().fold(1, |acc, &xi| field.mul(acc, xi));
        let mut v = Vec::with_capacity(n + 1);
        v.push(1);
        v.push(field.inv(prod)?);
        v.extend_from_slice(&x);
        pts.push(ProjPoint::from_normalized(v));
    }
    Ok(PointSet::from_sorted_unchecked(field.clone(), n, pts))
}

/// `{(1, t, ..., t^c)} ∪ {(0, ..., 0, 1)}` in PG(c, q).
pub fn rational_normal_curve(c: usize, field: &FieldSpec) -> Result<PointSet> {
    if c < 2 {
        return Err(Error::param("rational normal curve needs c >= 2"));
    }
    let mut pts: Vec<ProjPoint> = field
        .elements()
        .map(|t| {
            let mut v = Vec::with_capacity(c + 1);
            let mut x = 1;
            for _ in 0..=c {
                v.push(x);
                x = field.mul(x, t);
            }
            ProjPoint::from_normalized(v)
        })
        .collect();
    let mut inf = vec![0; c + 1];
    inf[c] = 1;
    pts.push(ProjPoint::from_normalized(inf));
    Ok(PointSet::from_sorted_unchecked(field.clone(), c, pts))
}

/// Smallest `(b, c)` in lexicographic order with `u^2 + b u v + c v^2`
/// irreducible, i.e. `t^2 + b t + c` without roots in GF(q).
pub fn elliptic_form(field: &FieldSpec) -> (Elem, Elem) {
    for b in field.elements() {
        for c in field.elements() {
            let has_root = field
                .elements()
                .any(|t| field.add(field.add(field.mul(t, t), field.mul(b, t)), c) == 0);
            if !has_root {
                return (b, c);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

/// Points of the elliptic quadric `x_0 x_1 = f(x_2, x_3)` in PG(3, q):
/// `{(1, f(s, t), s, t)} ∪ {(0, 1, 0, 0)}`, a cap of size `q^2 + 1`.
pub fn elliptic_ovoid(field: &FieldSpec) -> PointSet {
    let (b, c) = elliptic_form(field);
    let f = |s: Elem, t: Elem| {
        let uu = field.mul(s, s);
        let uv = field.mul(b, field.mul(s, t));
        let vv = field.mul(c, field.mul(t, t));
        field.add(field.add(uu, uv), vv)
    };
    let mut pts = Vec::with_capacity((field.order() * field.order() + 1) as usize);
    for s in field.elements() {
        for t in field.elements() {
            pts.push(ProjPoint::from_normalized(vec![1, f(s, t), s, t]));
        }
    }
    pts.push(ProjPoint::from_normalized(vec![0, 1, 0, 0]));
    PointSet::from_sorted_unchecked(field.clone(), 3, pts)
}

/// A bipartite graph with integer-labelled sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: u64,
    right: u64,
    edges: Vec<(u64, u64)>,
}

impl BipartiteGraph {
    pub fn new(left: u64, right: u64, edges: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let edges: BTreeSet<(u64, u64)> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= left || b >= right) {
            return Err(Error::param(format!(
                "edge ({a}, {b}) outside a {left} x {right} bipartition"
            )));
        }
        Ok(BipartiteGraph {
            left,
            right,
            edges: edges.into_iter().collect(),
        })
    }

    pub fn left_size(&self) -> u64 {
        self.left
    }

    pub fn right_size(&self) -> u64 {
        self.right
    }

    pub fn edges(&self) -> &[(u64, u64)] {
        &self.edges
    }

    /// Two left vertices with two common right neighbours, if any, as
    /// `(x1, x2, y1, y2)`.
    pub fn quadrangle(&self) -> Option<(u64, u64, u64, u64)> {
        let mut nbrs: Vec<Vec<u64>> = vec![Vec::new(); self.left as usize];
        for &(a, b) in &self.edges {
            nbrs[a as usize].push(b);
        }
        for a in 0..nbrs.len() {
            for b in a + 1..nbrs.len() {
                let common: Vec<u64> = nbrs[a]
                    .iter()
                    .filter(|y| nbrs[b].binary_search(y).is_ok())
                    .copied()
                    .take(2)
                    .collect();
                if common.len() == 2 {
                    return Some((a as u64, b as u64, common[0], common[1]));
                }
            }
        }
        None
    }

    pub fn is_c4_free(&self) -> bool {
        self.quadrangle().is_none()
    }
}

/// Incidence graph of PG(2, q0) minus the points of the smallest line `L`
/// and minus the lines through the smallest point `P` of `L`. Both sides end
/// up with `q0^2` vertices, labelled `0..q0^2` in sorted order of the
/// remaining points (left) and lines (right). Lines are stored by their
/// normalized dual coordinates.
pub fn trimmed_incidence_graph(q0: u64) -> Result<BipartiteGraph> {
    let field = FieldSpec::with_order(q0)?;
    let plane: Vec<ProjPoint> = all_points(2, &field)?.collect();
    let incident = |pt: &ProjPoint, ln: &ProjPoint| {
        pt.coords()
            .iter()
            .zip(ln.coords())
            .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            == 0
    };
    let l = &plane[0];
    let p = plane
        .iter()
        .find(|pt| incident(pt, l))
        .expect("every line has points");
    let points: Vec<&ProjPoint> = plane.iter().filter(|pt| !incident(pt, l)).collect();
    let lines: Vec<&ProjPoint> = plane.iter().filter(|ln| !incident(p, ln)).collect();
    let mut edges = Vec::new();
    for (i, pt) in points.iter().enumerate() {
        for (j, ln) in lines.iter().enumerate() {
            if incident(pt, ln) {
                edges.push((i as u64, j as u64));
            }
        }
    }
    BipartiteGraph::new(points.len() as u64, lines.len() as u64, edges)
}

/// `{(1, x, x^2, x^3, y, y^2, y^3) : xy an edge of G}` in PG(6, q). A (3,2)-set
/// whenever `G` has no quadrangle.
pub fn graph_curve_32(g: &BipartiteGraph, field: &FieldSpec) -> Result<PointSet> {
    let q = field.order();
    if g.left_size() > q || g.right_size() > q {
        return Err(Error::param(format!(
            "graph sides {} x {} do not fit in GF({q})",
            g.left_size(),
            g.right_size()
        )));
    }
    let pts = g
        .edges()
        .iter()
        .map(|&(x, y)| {
            let x2 = field.mul(x, x);
            let y2 = field.mul(y, y);
            ProjPoint::from_normalized(vec![1, x, x2, field.mul(x2, x), y, y2, field.mul(y2, y)])
        })
        .collect();
    Ok(PointSet::from_sorted_unchecked(field.clone(), 6, pts))
}

/// The graph curve for `q = q0^2` built from [`trimmed_incidence_graph`].
pub fn graph_curve_32_square(q0: u64) -> Result<PointSet> {
    let q = q0
        .checked_mul(q0)
        .ok_or_else(|| Error::Overflow(format!("{q0}^2")))?;
    let field = FieldSpec::with_order(q)?;
    graph_curve_32(&trimmed_incidence_graph(q0)?, &field)
}

/// Field-reduction product: given a proper (r, r-1)-set `X` of PG(N-1, q)
/// and an (r, s)-set `Y` of PG(M-1, q^N), places the canonical copy of `X`
/// in the spread element of every point of `Y`, giving an (r, s)-set of
/// PG(NM-1, q) with `|X| |Y|` points.
///
/// With `check = Some(verifier)` both hypotheses are verified first.
pub fn product_construction(
    x: &PointSet,
    r: usize,
    y: &PointSet,
    s: usize,
    ext: &ExtensionSpec,
    check: Option<&Verifier>,
) -> Result<PointSet> {
    let nn = ext.degree() as usize;
    if x.field() != ext.base() || x.n() + 1 != nn {
        return Err(Error::AmbientMismatch(format!(
            "X must live in PG({}, {})",
            nn - 1,
            ext.base()
        )));
    }
    if y.field() != ext.field() {
        return Err(Error::AmbientMismatch(
            "Y must live over the extension field".into(),
        ));
    }
    let m = y.n() + 1;
    let dim = nn
        .checked_mul(m)
        .ok_or_else(|| Error::Overflow("N * M".into()))?
        - 1;
    if let Some(v) = check {
        if r < 2 {
            return Err(Error::param("product construction needs r >= 2"));
        }
        if let Some((mm, w)) = v.proper_violation(x, r, r - 1)? {
            return Err(Error::Precondition {
                reason: format!("X is not a proper ({r},{})-set: a {mm}-space holds {} points", r - 1, w.intersection.len()),
                witness: Some(Box::new(w)),
            });
        }
        if let Verdict::Violated(w) = v.is_rs_set(y, r, s)? {
            return Err(Error::Precondition {
                reason: format!("Y is not an ({r},{s})-set"),
                witness: Some(Box::new(w)),
            });
        }
    }
    let mut pts = Vec::with_capacity(x.len() * y.len());
    for yp in y.iter() {
        let spread = field_reduction_spread(yp, ext)?;
        pts.extend(embed_copy(x, &spread)?.into_points());
    }
    Ok(PointSet::from_sorted_unchecked(x.field().clone(), dim, pts))
}

/// A factor of an iterated product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductFactor {
    /// Elliptic quadric of PG(3, q).
    Ovoid,
    /// Rational normal curve of PG(c, q).
    RationalNormalCurve(usize),
    /// [`graph_curve_32_square`] in PG(6, q); needs `q` to be a square.
    GraphCurve32,
}

impl ProductFactor {
    /// Vector-space dimension of the factor's ambient space.
    pub fn width(&self) -> usize {
        match self {
            ProductFactor::Ovoid => 4,
            ProductFactor::RationalNormalCurve(c) => c + 1,
            ProductFactor::GraphCurve32 => 7,
        }
    }

    fn build(&self, field: &FieldSpec) -> Result<PointSet> {
        match *self {
            ProductFactor::Ovoid => Ok(elliptic_ovoid(field)),
            ProductFactor::RationalNormalCurve(c) => rational_normal_curve(c, field),
            ProductFactor::GraphCurve32 => {
                let q = field.order();
                let q0 = (q as f64).sqrt().round() as u64;
                if q0 * q0 != q || field.is_tower() {
                    return Err(Error::param(format!(
                        "graph curve needs a square order presented over GF(p), got {field}"
                    )));
                }
                graph_curve_32(&trimmed_incidence_graph(q0)?, field)
            }
        }
    }
}

/// An iterated product `F_1 x F_2 x ... x F_m` yielding an (r, s)-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRecipe {
    pub factors: Vec<ProductFactor>,
    pub r: usize,
    pub s: usize,
}

impl ProductRecipe {
    /// Caps from `m` elliptic quadrics.
    pub fn ovoid_caps(m: usize) -> Self {
        ProductRecipe {
            factors: vec![ProductFactor::Ovoid; m],
            r: 2,
            s: 1,
        }
    }

    /// (3,2)-sets from `m` rational normal curves of PG(4, q).
    pub fn rnc_planes(m: usize) -> Self {
        ProductRecipe {
            factors: vec![ProductFactor::RationalNormalCurve(4); m],
            r: 3,
            s: 2,
        }
    }

    /// (3,2)-sets from the graph curve followed by `m - 1` rational normal
    /// curves of PG(4, q).
    pub fn graph_then_rnc(m: usize) -> Self {
        let mut factors = vec![ProductFactor::GraphCurve32];
        factors.extend(std::iter::repeat_n(ProductFactor::RationalNormalCurve(4), m.saturating_sub(1)));
        ProductRecipe { factors, r: 3, s: 2 }
    }

    /// (r, r-1)-sets from `m` rational normal curves of PG(c, q), `r <= c`.
    pub fn rnc_generalized_caps(c: usize, m: usize, r: usize) -> Self {
        ProductRecipe {
            factors: vec![ProductFactor::RationalNormalCurve(c); m],
            r,
            s: r.saturating_sub(1),
        }
    }

    /// Projective dimension of the result: `prod width_i - 1`.
    pub fn ambient_dim(&self) -> Result<usize> {
        self.factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.width()))
            .map(|w| w - 1)
            .ok_or_else(|| Error::Overflow("product dimension".into()))
    }

    /// Builds the product over `base`. Factor `i` lives over
    /// `GF(q^(N_1 ... N_{i-1}))`; the last factor is multiplied in first.
    pub fn build(&self, base: &FieldSpec, check: Option<&Verifier>) -> Result<PointSet> {
        let Some((last, init)) = self.factors.split_last() else {
            return Err(Error::param("a product needs at least one factor"));
        };
        let mut fields = vec![base.clone()];
        let mut exts = Vec::new();
        for f in init {
            let ext = ExtensionSpec::new(fields.last().expect("nonempty"), f.width() as u32)?;
            fields.push(ext.field().clone());
            exts.push(ext);
        }
        let mut z = last.build(fields.last().expect("nonempty"))?;
        for (i, f) in init.iter().enumerate().rev() {
            let x = f.build(&fields[i])?;
            z = product_construction(&x, self.r, &z, self.s, &exts[i], check)?;
        }
        Ok(z)
    }
}
