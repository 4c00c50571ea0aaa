//! Brute-force decision procedures for the (r, s) property.
//!
//! Every s-space S with `|X ∩ S| >= 1` has `X ∩ S` contained in the span of
//! an independent subset of `X ∩ S` of size at most `s + 1`. Enlarging an
//! independent subset never loses points from its span, so it suffices to
//! look at independent subsets of size exactly `min(s + 1, rank X)`.
//! Subsets are walked in lexicographic order of the sorted point list, which
//! makes every reported witness the lexicographically smallest one.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::projgeom::{all_points, for_each_combination, Echelon, PointSet, ProjPoint, SubspaceBasis};

/// Default cap on `C(|X|, s + 1)`.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Default cap on `C(|PG(n, q)|, s + 1)` for the exhaustive oracle.
pub const ORACLE_BUDGET: u128 = 20_000_000;

/// A subspace together with every point of `X` it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationWitness {
    /// Independent points of `X` spanning the subspace.
    pub generating_points: Vec<ProjPoint>,
    /// Projective dimension of the span.
    pub span_dim: usize,
    /// All points of `X` in the span.
    pub intersection: Vec<ProjPoint>,
}

impl ViolationWitness {
    /// Re-derives the witness invariants from scratch.
    pub fn is_consistent(&self, x: &PointSet) -> bool {
        let field = x.field();
        let Ok(span) = SubspaceBasis::span(field, x.n(), &self.generating_points) else {
            return false;
        };
        let members: Vec<ProjPoint> = x.iter().filter(|p| span.contains(p.coords())).cloned().collect();
        span.rank() == self.span_dim + 1
            && span.rank() == self.generating_points.len()
            && members == self.intersection
            && self.generating_points.iter().all(|g| self.intersection.contains(g))
    }
}

/// Largest intersection of `X` with an s-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxIntersection {
    pub max_count: usize,
    /// `None` only when `X` is empty.
    pub witness: Option<ViolationWitness>,
}

/// Outcome of an (r, s) check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Violated(ViolationWitness),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&ViolationWitness> {
        match self {
            Verdict::Valid => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

/// Configurable brute-force verifier.
#[derive(Clone, Debug)]
pub struct Verifier {
    budget: u128,
    parallel: bool,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    /// Maximum of `|X ∩ S|` over all s-spaces `S`, with the lexicographically
    /// smallest witness attaining it.
    pub fn max_in_s_space(&self, x: &PointSet, s: usize) -> Result<MaxIntersection> {
        check_dim(x, s)?;
        if x.is_empty() {
            return Ok(MaxIntersection {
                max_count: 0,
                witness: None,
            });
        }
        let search = Search::new(x, s, self.budget)?;
        let per_root = |i: usize| {
            let mut best: Option<(usize, Vec<usize>)> = None;
            search.walk_root(i, &mut |chosen, ech| {
                let c = search.count(ech);
                if best.as_ref().is_none_or(|(b, _)| c > *b) {
                    best = Some((c, chosen.to_vec()));
                }
                false
            });
            best
        };
        let results: Vec<Option<(usize, Vec<usize>)>> = if self.parallel {
            (0..x.len()).into_par_iter().map(per_root).collect()
        } else {
            (0..x.len()).map(per_root).collect()
        };
        let mut best: Option<(usize, Vec<usize>)> = None;
        for r in results.into_iter().flatten() {
            if best.as_ref().is_none_or(|(b, _)| r.0 > *b) {
                best = Some(r);
            }
        }
        let (max_count, chosen) = best.expect("nonempty X has an independent subset");
        Ok(MaxIntersection {
            max_count,
            witness: Some(search.witness(&chosen)),
        })
    }

    /// Whether every s-space meets `X` in at most `r` points. Stops at the
    /// lexicographically first violation.
    pub fn is_rs_set(&self, x: &PointSet, r: usize, s: usize) -> Result<Verdict> {
        if r < 1 {
            return Err(Error::param("r must be at least 1"));
        }
        check_dim(x, s)?;
        if x.len() <= r {
            return Ok(Verdict::Valid);
        }
        let search = Search::new(x, s, self.budget)?;
        let per_root = |i: usize| {
            let mut hit = None;
            search.walk_root(i, &mut |chosen, ech| {
                if search.count(ech) > r {
                    hit = Some(chosen.to_vec());
                    true
                } else {
                    false
                }
            });
            hit
        };
        let hit = if self.parallel {
            (0..x.len()).into_par_iter().find_map_first(per_root)
        } else {
            (0..x.len()).find_map(per_root)
        };
        Ok(match hit {
            None => Verdict::Valid,
            Some(chosen) => Verdict::Violated(search.witness(&chosen)),
        })
    }

    /// First failure of properness: an m-space (`0 <= m <= s`) holding
    /// `m + 1 + r - s` or more points, reported as `(m, witness)`.
    pub fn proper_violation(&self, x: &PointSet, r: usize, s: usize) -> Result<Option<(usize, ViolationWitness)>> {
        if s < 1 || r <= s {
            return Err(Error::param(format!("properness needs r > s >= 1, got r={r}, s={s}")));
        }
        check_dim(x, s)?;
        for m in 0..=s {
            if let Verdict::Violated(w) = self.is_rs_set(x, m + r - s, m)? {
                return Ok(Some((m, w)));
            }
        }
        Ok(None)
    }

    pub fn is_proper(&self, x: &PointSet, r: usize, s: usize) -> Result<bool> {
        Ok(self.proper_violation(x, r, s)?.is_none())
    }
}

pub fn max_in_s_space(x: &PointSet, s: usize) -> Result<MaxIntersection> {
    Verifier::default().max_in_s_space(x, s)
}

pub fn is_rs_set(x: &PointSet, r: usize, s: usize) -> Result<Verdict> {
    Verifier::default().is_rs_set(x, r, s)
}

pub fn is_proper(x: &PointSet, r: usize, s: usize) -> Result<bool> {
    Verifier::default().is_proper(x, r, s)
}

fn check_dim(x: &PointSet, s: usize) -> Result<()> {
    if s >= x.n() {
        return Err(Error::param(format!(
            "subspace dimension s={s} must be below the ambient dimension n={}",
            x.n()
        )));
    }
    Ok(())
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct Search<'a> {
    field: &'a FieldSpec,
    points: &'a [ProjPoint],
    index: HashSet<&'a [Elem]>,
    target: usize,
    width: usize,
}

impl<'a> Search<'a> {
    fn new(x: &'a PointSet, s: usize, budget: u128) -> Result<Self> {
        let needed = binomial(x.len() as u128, s as u128 + 1);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "subset enumeration",
                needed,
                budget,
            });
        }
        let field = x.field();
        let mut ech = Echelon::new();
        for p in x.iter() {
            if ech.rank() > s {
                break;
            }
            ech.insert(field, p.coords());
        }
        Ok(Search {
            field,
            points: x.points(),
            index: x.iter().map(|p| p.coords()).collect(),
            target: ech.rank().min(s + 1),
            width: x.n() + 1,
        })
    }

    /// `|X ∩ span|`, either by scanning `X` or by listing the span's points,
    /// whichever touches fewer vectors.
    fn count(&self, ech: &Echelon) -> usize {
        let q = self.field.order() as u128;
        let j = ech.rank() as u32;
        let span_size = q
            .checked_pow(j)
            .map(|v| (v - 1) / (q - 1))
            .unwrap_or(u128::MAX);
        if span_size <= self.points.len() as u128 {
            let mut hits = 0;
            for_each_combination(self.field, ech.rows(), self.width, |v| {
                if self.index.contains(v) {
                    hits += 1;
                }
            });
            hits
        } else {
            self.points
                .iter()
                .filter(|p| ech.contains(self.field, p.coords()))
                .count()
        }
    }

    /// Visits every independent subset of size `target` whose smallest
    /// element is `root`, in lexicographic order. `visit` returns true to stop.
    fn walk_root(&self, root: usize, visit: &mut dyn FnMut(&[usize], &Echelon) -> bool) -> bool {
        let mut ech = Echelon::new();
        ech.insert(self.field, self.points[root].coords());
        let mut chosen = vec![root];
        if self.target == 1 {
            return visit(&chosen, &ech);
        }
        self.walk(&mut chosen, &ech, root + 1, visit)
    }

    fn walk(
        &self,
        chosen: &mut Vec<usize>,
        ech: &Echelon,
        next: usize,
        visit: &mut dyn FnMut(&[usize], &Echelon) -> bool,
    ) -> bool {
        for i in next..self.points.len() {
            let p = self.points[i].coords();
            if ech.contains(self.field, p) {
                continue;
            }
            let mut grown = ech.clone();
            grown.insert(self.field, p);
            chosen.push(i);
            let stop = if chosen.len() == self.target {
                visit(chosen, &grown)
            } else {
                self.walk(chosen, &grown, i + 1, visit)
            };
            chosen.pop();
            if stop {
                return true;
            }
        }
        false
    }

    fn witness(&self, chosen: &[usize]) -> ViolationWitness {
        let mut ech = Echelon::new();
        for &i in chosen {
            ech.insert(self.field, self.points[i].coords());
        }
        let intersection = self
            .points
            .iter()
            .filter(|p| ech.contains(self.field, p.coords()))
            .cloned()
            .collect();
        ViolationWitness {
            generating_points: chosen.iter().map(|&i| self.points[i].clone()).collect(),
            span_dim: chosen.len() - 1,
            intersection,
        }
    }
}

/// Every s-space of PG(n, q), listed explicitly. Only for tiny instances.
#[derive(Clone, Debug)]
pub struct SubspaceOracle {
    field: FieldSpec,
    n: usize,
    subspaces: Vec<SubspaceBasis>,
}

impl SubspaceOracle {
    pub fn new(field: &FieldSpec, n: usize, s: usize) -> Result<Self> {
        Self::with_budget(field, n, s, ORACLE_BUDGET)
    }

    pub fn with_budget(field: &FieldSpec, n: usize, s: usize, budget: u128) -> Result<Self> {
        if s >= n {
            return Err(Error::param(format!("s={s} must be below n={n}")));
        }
        let pts: Vec<ProjPoint> = all_points(n, field)?.collect();
        let needed = binomial(pts.len() as u128, s as u128 + 1);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "oracle subspace enumeration",
                needed,
                budget,
            });
        }
        let mut seen = HashSet::new();
        // Depth-first over (s+1)-subsets of independent points.
        fn rec(
            field: &FieldSpec,
            pts: &[ProjPoint],
            start: usize,
            ech: &Echelon,
            want: usize,
            n: usize,
            seen: &mut HashSet<SubspaceBasis>,
        ) {
            if ech.rank() == want {
                seen.insert(SubspaceBasis::from_echelon(field, n, ech.clone()));
                return;
            }
            for i in start..pts.len() {
                if ech.contains(field, pts[i].coords()) {
                    continue;
                }
                let mut e = ech.clone();
                e.insert(field, pts[i].coords());
                rec(field, pts, i + 1, &e, want, n, seen);
            }
        }
        rec(field, &pts, 0, &Echelon::new(), s + 1, n, &mut seen);
        let mut subspaces: Vec<SubspaceBasis> = seen.into_iter().collect();
        subspaces.sort_by(|a, b| a.rows().cmp(b.rows()));
        Ok(SubspaceOracle {
            field: field.clone(),
            n,
            subspaces,
        })
    }

    pub fn subspaces(&self) -> &[SubspaceBasis] {
        &self.subspaces
    }

    pub fn max_in(&self, x: &PointSet) -> Result<usize> {
        if x.n() != self.n || x.field() != &self.field {
            return Err(Error::AmbientMismatch("oracle built for a different space".into()));
        }
        Ok(self
            .subspaces
            .iter()
            .map(|sub| x.iter().filter(|p| sub.contains(p.coords())).count())
            .max()
            .unwrap_or(0))
    }
}

/// Exhaustive oracle: enumerate every s-space of the ambient space.
pub fn oracle_max_in_s_space(x: &PointSet, s: usize) -> Result<usize> {
    SubspaceOracle::new(x.field(), x.n(), s)?.max_in(x)
}
