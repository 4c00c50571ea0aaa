//! Upper bounds and the Gilbert–Varshamov lower size for (r, s)-sets.
//!
//! Real values are evaluated from exact rationals: the argument of every
//! e-th root is a `BigRational`, rescaled by a power of two, rooted in
//! floating point and polished with Newton steps.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::projgeom::gaussian_binomial;

/// Reason a bound does not apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absent(pub String);

impl fmt::Display for Absent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Exact(BigUint),
    Real(f64),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            BoundValue::Real(v) => *v,
        }
    }

    fn plus(&self, m: usize) -> BoundValue {
        match self {
            BoundValue::Exact(v) => BoundValue::Exact(v + BigUint::from(m)),
            BoundValue::Real(v) => BoundValue::Real(v + m as f64),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::Real(v) => f.write_str(&format_real(*v)),
        }
    }
}

/// Twelve significant digits, plain notation when the exponent is small.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else { "Infinity".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Which argument produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Pigeonhole,
    Projection,
    Rao,
    Trivial,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Pigeonhole => "pigeonhole",
            Provenance::Projection => "projection",
            Provenance::Rao => "rao",
            Provenance::Trivial => "trivial",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry {
    pub label: String,
    pub provenance: Provenance,
    /// Auxiliary parameters such as `d`, `e` or `m`.
    pub params: Vec<(&'static str, usize)>,
    pub value: std::result::Result<BoundValue, Absent>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub q: u64,
    pub r: usize,
    pub s: usize,
    pub entries: Vec<BoundEntry>,
}

impl BoundsReport {
    /// The smallest present entry; ties go to the earliest label.
    pub fn best(&self) -> &BoundEntry {
        self.entries
            .iter()
            .filter_map(|e| e.value.as_ref().ok().map(|v| (e, v.to_f64())))
            .min_by(|(a, x), (b, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal).then_with(|| a.label.cmp(&b.label)))
            .map(|(e, _)| e)
            .expect("the trivial entry is always present")
    }

    pub fn best_value(&self) -> &BoundValue {
        self.best().value.as_ref().expect("best entry is present")
    }

    pub fn entry(&self, label: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

/// `(d, e)` with `d, e >= 2`, `s = d(e - 1)` and `r = de - 1`, if any.
pub fn rao_decomposition(r: usize, s: usize) -> Option<(usize, usize)> {
    if r <= s || s == 0 {
        return None;
    }
    let d = r + 1 - s;
    if d < 2 || (r + 1) % d != 0 {
        return None;
    }
    let e = (r + 1) / d;
    (e >= 2 && d * (e - 1) == s).then_some((d, e))
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `x^(1/e)` for a positive rational.
pub fn rational_root(x: &BigRational, e: u32) -> f64 {
    assert!(e >= 1 && x > &BigRational::zero());
    let bits = x.numer().bits() as i64 - x.denom().bits() as i64;
    let k = bits.div_euclid(e as i64);
    let shift = k * e as i64;
    let two = BigInt::from(2);
    let scaled = if shift >= 0 {
        x / BigRational::from_integer(two.pow(shift as u32))
    } else {
        x * BigRational::from_integer(two.pow((-shift) as u32))
    };
    let a = scaled.to_f64().expect("scaled into f64 range");
    let mut y = a.powf(1.0 / e as f64);
    for _ in 0..3 {
        let ye1 = y.powi(e as i32 - 1);
        y -= (ye1 * y - a) / (e as f64 * ye1);
    }
    y * (k as f64).exp2()
}

/// `(e! (d - 1) (1 + 2/q) / (1 - 2e/q))^(1/e)`; needs `q > 2e`.
pub fn rao_constant(d: usize, e: usize, q: u64) -> std::result::Result<f64, Absent> {
    let arg = rao_argument(d, e, q, 0)?;
    Ok(rational_root(&arg, e as u32))
}

fn rao_argument(d: usize, e: usize, q: u64, power: u32) -> std::result::Result<BigRational, Absent> {
    if q <= 2 * e as u64 {
        return Err(Absent(format!("needs q > 2e = {}, got q = {q}", 2 * e)));
    }
    let num = BigInt::from(factorial(e) * BigUint::from(d - 1) * BigUint::from(q + 2)) * BigInt::from(q).pow(power);
    let den = BigInt::from(q - 2 * e as u64);
    Ok(BigRational::new(num, den))
}

/// `C_{d,e} q^{(n - e + 1)/e} + e` when a decomposition exists and `q > 2e`.
pub fn rao_bound(n: usize, q: u64, r: usize, s: usize) -> std::result::Result<f64, Absent> {
    let (d, e) = rao_decomposition(r, s)
        .ok_or_else(|| Absent(format!("no d, e >= 2 with s = d(e-1), r = de-1 for (r, s) = ({r}, {s})")))?;
    if n + 1 < e {
        return Err(Absent(format!("needs n >= e - 1 = {}", e - 1)));
    }
    let arg = rao_argument(d, e, q, (n + 1 - e) as u32)?;
    Ok(rational_root(&arg, e as u32) + e as f64)
}

fn check_params(n: usize, r: usize, s: usize) -> Result<()> {
    if s < 1 || n <= s {
        return Err(Error::param(format!("need n > s >= 1, got n={n}, s={s}")));
    }
    if r <= s {
        return Err(Error::param(format!("need r > s, got r={r}, s={s}")));
    }
    Ok(())
}

/// `r ([n - s + 1]_q + 1)`.
pub fn pigeonhole_bound(n: usize, q: u64, r: usize, s: usize) -> Result<BigUint> {
    if s < 1 || n <= s {
        return Err(Error::param(format!("need n > s >= 1, got n={n}, s={s}")));
    }
    Ok(BigUint::from(r) * (gaussian_binomial((n - s + 1) as u64, 1, q) + BigUint::one()))
}

/// Every applicable bound on an (r, s)-set of PG(n, q), including the
/// point count of PG(n, q) as a fallback.
pub fn best_upper_bound(n: usize, q: u64, r: usize, s: usize) -> Result<BoundsReport> {
    check_params(n, r, s)?;
    if q < 2 {
        return Err(Error::param("q must be at least 2"));
    }
    let mut entries = vec![BoundEntry {
        label: "pigeonhole".into(),
        provenance: Provenance::Pigeonhole,
        params: vec![],
        value: Ok(BoundValue::Exact(pigeonhole_bound(n, q, r, s)?)),
    }];
    let rao_params = rao_decomposition(r, s).map(|(d, e)| vec![("d", d), ("e", e)]).unwrap_or_default();
    entries.push(BoundEntry {
        label: "rao".into(),
        provenance: Provenance::Rao,
        params: rao_params,
        value: rao_bound(n, q, r, s).map(BoundValue::Real),
    });
    for m in 1..s {
        let sub = best_upper_bound(n - m, q, r - m, s - m)?;
        entries.push(BoundEntry {
            label: format!("projection(m={m})"),
            provenance: Provenance::Projection,
            params: vec![("m", m)],
            value: Ok(sub.best_value().plus(m)),
        });
    }
    entries.push(BoundEntry {
        label: "trivial".into(),
        provenance: Provenance::Trivial,
        params: vec![],
        value: Ok(BoundValue::Exact(gaussian_binomial(n as u64 + 1, 1, q))),
    });
    Ok(BoundsReport { n, q, r, s, entries })
}

/// `((r! - 1)/r!) q^{n - s - s(n - s)/r}`; needs `s + 1 >= r >= 3`.
pub fn gv_lower_size(n: usize, q: u64, r: usize, s: usize) -> std::result::Result<f64, Absent> {
    if !(r >= 3 && s + 1 >= r) {
        return Err(Absent(format!("needs s + 1 >= r >= 3, got r={r}, s={s}")));
    }
    if n < s {
        return Err(Absent(format!("needs n >= s, got n={n}, s={s}")));
    }
    let f = BigInt::from(factorial(r));
    let c = BigRational::new(&f - BigInt::one(), f);
    let c = c.to_f64().expect("constant in (0, 1)");
    // n - s - s(n - s)/r = (n - s)(r - s)/r, negative when r < s.
    let base = BigRational::from_integer(BigInt::from(q).pow(((n - s) * r.abs_diff(s)) as u32));
    let root = rational_root(&base, r as u32);
    Ok(c * if r >= s { root } else { 1.0 / root })
}

pub type Exponent = Ratio<i64>;

/// Exponent `t` such that the best bound is `O(q^t)` as `q` grows.
pub fn bound_exponent(n: usize, r: usize, s: usize) -> Result<(Exponent, String)> {
    check_params(n, r, s)?;
    let mut best = (Exponent::from_integer((n - s) as i64), "pigeonhole".to_string());
    let mut consider = |t: Exponent, label: String| {
        if t < best.0 || (t == best.0 && label < best.1) {
            best = (t, label);
        }
    };
    if let Some((_, e)) = rao_decomposition(r, s) {
        if n + 1 >= e {
            consider(Exponent::new((n + 1 - e) as i64, e as i64), "rao".into());
        }
    }
    for m in 1..s {
        let (t, _) = bound_exponent(n - m, r - m, s - m)?;
        consider(t, format!("projection(m={m})"));
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentCell {
    pub s: usize,
    pub r: usize,
    pub exponent: Exponent,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTable {
    pub n: usize,
    pub s_max: usize,
    pub gap_max: usize,
    /// Row-major by `s`, then by `r - s`.
    pub cells: Vec<ExponentCell>,
}

impl ExponentTable {
    pub fn get(&self, s: usize, gap: usize) -> Option<&ExponentCell> {
        self.cells.iter().find(|c| c.s == s && c.r == s + gap)
    }
}

/// Exponents for `1 <= s <= s_max` and `1 <= r - s <= gap_max`.
pub fn exponent_table(n: usize, s_max: usize, gap_max: usize) -> Result<ExponentTable> {
    if n <= s_max {
        return Err(Error::param(format!("need n > s_max, got n={n}, s_max={s_max}")));
    }
    let mut cells = Vec::new();
    for s in 1..=s_max {
        for gap in 1..=gap_max {
            let (exponent, source) = bound_exponent(n, s + gap, s)?;
            cells.push(ExponentCell {
                s,
                r: s + gap,
                exponent,
                source,
            });
        }
    }
    Ok(ExponentTable {
        n,
        s_max,
        gap_max,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        assert_eq!(rao_decomposition(3, 2), Some((2, 2)));
        assert_eq!(rao_decomposition(5, 3), Some((3, 2)));
        assert_eq!(rao_decomposition(4, 2), None);
        assert_eq!(rao_decomposition(7, 6), Some((2, 4)));
        assert_eq!(rao_decomposition(2, 1), None);
        assert_eq!(rao_decomposition(2, 2), None);
    }

    #[test]
    fn pigeonhole_examples() {
        assert_eq!(pigeonhole_bound(4, 3, 9, 2).unwrap(), BigUint::from(126u32));
        assert_eq!(pigeonhole_bound(2, 2, 2, 1).unwrap(), BigUint::from(8u32));
        assert_eq!(pigeonhole_bound(2, 2, 4, 1).unwrap(), BigUint::from(16u32));
        assert!(pigeonhole_bound(2, 2, 2, 2).is_err());
    }

    #[test]
    fn rao_examples() {
        let c = rao_constant(2, 2, 64).unwrap();
        assert!((c - 2.2f64.sqrt()).abs() < 1e-12);
        assert!(rao_bound(4, 4, 3, 2).is_err());
        assert!(rao_bound(4, 5, 3, 2).is_ok());
        let big = rao_constant(2, 2, 1 << 40).unwrap();
        assert!((big - 2f64.sqrt()).abs() < 1e-9);
        let lo = rao_bound(6, 101, 3, 2).unwrap();
        assert!(lo < rao_bound(7, 101, 3, 2).unwrap());
        assert!(lo < rao_bound(6, 103, 3, 2).unwrap());
    }

    #[test]
    fn roots_of_large_rationals() {
        let x = BigRational::from_integer(BigInt::from(10).pow(400));
        let y = rational_root(&x, 4);
        assert!((y / 1e100 - 1.0).abs() < 1e-14);
        let small = BigRational::new(BigInt::one(), BigInt::from(3).pow(300));
        assert!((rational_root(&small, 100) - 1.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn report_structure() {
        let rep = best_upper_bound(4, 4, 3, 2).unwrap();
        assert!(rep.entry("rao").unwrap().value.is_err());
        assert_eq!(rep.entry("trivial").unwrap().value, Ok(BoundValue::Exact(BigUint::from(341u32))));
        let best = rep.best_value().to_f64();
        let pig = rep.entry("pigeonhole").unwrap().value.as_ref().unwrap().to_f64();
        assert!(best <= pig);
        assert!(best_upper_bound(3, 2, 2, 2).is_err());
    }

    #[test]
    fn gv_examples() {
        let v = gv_lower_size(6, 8, 3, 2).unwrap();
        assert!((v - 5.0 / 6.0 * 16.0).abs() < 1e-12);
        assert!(gv_lower_size(4, 7, 2, 1).is_err());
        assert!(gv_lower_size(4, 7, 4, 2).is_err());
    }

    #[test]
    fn exponent_examples() {
        let t = exponent_table(20, 6, 6).unwrap();
        assert_eq!(t.get(2, 1).unwrap().exponent, Exponent::new(19, 2));
        assert_eq!(t.get(6, 1).unwrap().exponent, Exponent::new(17, 4));
        assert_eq!(t.get(4, 4).unwrap().exponent, Exponent::from_integer(16));
        assert_eq!(t.get(3, 1).unwrap().source, "projection(m=1)");
        assert_eq!(t.get(1, 1).unwrap().source, "pigeonhole");
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(2.2f64.sqrt()), "1.48323969742");
        assert_eq!(format_real(126.0), "126");
        assert_eq!(format_real(1e20), "1.00000000000e20");
    }
}
