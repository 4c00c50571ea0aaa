//! Exact arithmetic in GF(p), GF(p^k) and in extension towers GF(q^N) built
//! on top of them.
//!
//! Elements are plain `u64` encodings. An element of a field whose modulus
//! lives over a coefficient field of order `b` encodes as `sum c_i b^i`, where
//! `c_i` are the power-basis coefficients (themselves encodings in the
//! coefficient field). Unrolling a tower, every encoding is just a base-`p`
//! digit string, so addition is always digit-wise addition mod `p`.
//!
//! Moduli are canonical: the lexicographically smallest monic irreducible
//! polynomial of the requested degree, comparing coefficient vectors constant
//! term first. A field is therefore a pure function of its parameters.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Canonical integer encoding of a field element, in `[0, q)`.
pub type Elem = u64;

/// Fields up to this order get log/exp tables for multiplication.
const TABLE_LIMIT: u64 = 1 << 20;
/// Odd-characteristic extension fields up to this order get an addition table.
const ADD_TABLE_LIMIT: u64 = 256;

/// A finite field, possibly presented as an extension of another finite field.
///
/// Cheap to clone; the arithmetic tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

struct Inner {
    p: u64,
    k: u32,
    order: u64,
    base: Option<FieldSpec>,
    modulus: Vec<Elem>,
    add_table: Option<Vec<u16>>,
    mul_tables: Option<MulTables>,
}

struct MulTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FieldSpec {
    /// Builds the canonical GF(p^k).
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::param("extension degree k must be at least 1"));
        }
        let prime = Self::prime_unchecked(p);
        if k == 1 {
            return Ok(prime);
        }
        Ok(ExtensionSpec::new(&prime, k)?.field)
    }

    /// Builds GF(q) from a prime-power order.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, k) = factor_prime_power(q)?;
        Self::new(p, k)
    }

    fn prime_unchecked(p: u64) -> Self {
        let mut inner = Inner {
            p,
            k: 1,
            order: p,
            base: None,
            modulus: vec![0, 1],
            add_table: None,
            mul_tables: None,
        };
        if p <= TABLE_LIMIT {
            inner.mul_tables = Some(build_mul_tables(&inner));
        }
        FieldSpec {
            inner: Arc::new(inner),
        }
    }

    fn extension_unchecked(base: &FieldSpec, modulus: Vec<Elem>) -> Self {
        let degree = (modulus.len() - 1) as u32;
        let mut inner = Inner {
            p: base.p(),
            k: base.k() * degree,
            order: base.order().pow(degree),
            base: Some(base.clone()),
            modulus,
            add_table: None,
            mul_tables: None,
        };
        if inner.p != 2 && inner.order <= ADD_TABLE_LIMIT {
            let q = inner.order;
            let mut table = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    table.push(digit_add(inner.p, a, b) as u16);
                }
            }
            inner.add_table = Some(table);
        }
        if inner.order <= TABLE_LIMIT {
            inner.mul_tables = Some(build_mul_tables(&inner));
        }
        FieldSpec {
            inner: Arc::new(inner),
        }
    }

    /// The characteristic.
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    /// Degree over the prime field.
    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// The order `q = p^k`.
    pub fn order(&self) -> u64 {
        self.inner.order
    }

    /// Coefficient field of the modulus; `None` for a prime field.
    pub fn base(&self) -> Option<&FieldSpec> {
        self.inner.base.as_ref()
    }

    /// Monic modulus over [`FieldSpec::base`], constant term first. Prime
    /// fields store `X`.
    pub fn modulus(&self) -> &[Elem] {
        &self.inner.modulus
    }

    /// Degree of the modulus over the coefficient field.
    pub fn degree(&self) -> u32 {
        (self.inner.modulus.len() - 1) as u32
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.base.is_none()
    }

    /// True when the coefficient field is itself an extension, i.e. the
    /// field is not presented directly over GF(p).
    pub fn is_tower(&self) -> bool {
        self.base().is_some_and(|b| !b.is_prime_field())
    }

    pub fn elements(&self) -> Range<Elem> {
        0..self.order()
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.inner.order
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::EncodingOutOfRange {
                value: a,
                order: self.order(),
            })
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.base.is_none() {
            let p = inner.p;
            return if a >= p - b { a - (p - b) } else { a + b };
        }
        if inner.p == 2 {
            return a ^ b;
        }
        if let Some(t) = &inner.add_table {
            return t[(a * inner.order + b) as usize] as Elem;
        }
        digit_add(inner.p, a, b)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.base.is_none() {
            return if a == 0 { 0 } else { inner.p - a };
        }
        if inner.p == 2 {
            return a;
        }
        let p = inner.p;
        let (mut a, mut out, mut place) = (a, 0u64, 1u64);
        while a > 0 {
            let d = a % p;
            if d != 0 {
                out += (p - d) * place;
            }
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        if let Some(t) = &inner.mul_tables {
            let i = t.log[a as usize] + t.log[b as usize];
            return t.exp[i as usize] as Elem;
        }
        mul_slow(inner, a, b)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.inner;
        if let Some(t) = &inner.mul_tables {
            let q1 = inner.order as u32 - 1;
            let l = t.log[a as usize];
            return Ok(t.exp[((q1 - l) % q1) as usize] as Elem);
        }
        Ok(self.pow(a, inner.order - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Power-basis coefficients over the coefficient field, constant first.
    pub fn digits(&self, a: Elem) -> Vec<Elem> {
        let b = self.base().map_or(self.order(), FieldSpec::order);
        let mut a = a;
        (0..self.degree())
            .map(|_| {
                let d = a % b;
                a /= b;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[Elem]) -> Elem {
        let b = self.base().map_or(self.order(), FieldSpec::order);
        digits.iter().rev().fold(0, |acc, &d| acc * b + d)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.order == other.inner.order
                && self.inner.modulus == other.inner.modulus
                && self.inner.base == other.inner.base)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p())
            .field("k", &self.k())
            .field("modulus", &self.modulus())
            .field("base_order", &self.base().map(FieldSpec::order))
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k() == 1 {
            write!(f, "GF({})", self.p())
        } else {
            write!(f, "GF({}^{})", self.p(), self.k())
        }
    }
}

fn digit_add(p: u64, mut a: u64, mut b: u64) -> u64 {
    let (mut out, mut place) = (0u64, 1u64);
    while a > 0 || b > 0 {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

fn mul_slow(inner: &Inner, a: Elem, b: Elem) -> Elem {
    let Some(base) = &inner.base else {
        return ((a as u128 * b as u128) % inner.p as u128) as u64;
    };
    let q = base.order();
    let split = |mut x: u64| {
        let mut v = Vec::with_capacity(inner.modulus.len());
        while x > 0 {
            v.push(x % q);
            x /= q;
        }
        v
    };
    let prod = poly::mul(base, &split(a), &split(b));
    let r = poly::rem(base, &prod, &inner.modulus);
    r.iter().rev().fold(0, |acc, &d| acc * q + d)
}

fn pow_slow(inner: &Inner, a: Elem, mut e: u64) -> Elem {
    let (mut acc, mut base) = (1, a);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_slow(inner, acc, base);
        }
        base = mul_slow(inner, base, base);
        e >>= 1;
    }
    acc
}

fn build_mul_tables(inner: &Inner) -> MulTables {
    let q = inner.order;
    let g = primitive_element(inner);
    let n = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * n.max(1)];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for i in 0..n {
        exp[i] = x as u32;
        exp[i + n] = x as u32;
        log[x as usize] = i as u32;
        x = mul_slow(inner, x, g);
    }
    MulTables { exp, log }
}

fn primitive_element(inner: &Inner) -> Elem {
    let q1 = inner.order - 1;
    if q1 == 1 {
        return 1;
    }
    let factors = prime_factors(q1);
    (2..inner.order)
        .find(|&g| factors.iter().all(|&l| pow_slow(inner, g, q1 / l) != 1))
        .expect("the multiplicative group of a finite field is cyclic")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The degree-`N` extension GF(q^N) of a base field GF(q), together with
/// the coordinate maps between GF(q^N) and GF(q)^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    base: FieldSpec,
    degree: u32,
    field: FieldSpec,
}

impl ExtensionSpec {
    pub fn new(base: &FieldSpec, degree: u32) -> Result<Self> {
        if degree < 1 {
            return Err(Error::param("extension degree N must be at least 1"));
        }
        if degree == 1 {
            return Ok(ExtensionSpec {
                base: base.clone(),
                degree,
                field: base.clone(),
            });
        }
        base.order()
            .checked_pow(degree)
            .ok_or_else(|| Error::Overflow(format!("{}^{} exceeds u64", base.order(), degree)))?;
        let modulus = canonical_irreducible(base, degree);
        Ok(ExtensionSpec {
            base: base.clone(),
            degree,
            field: FieldSpec::extension_unchecked(base, modulus),
        })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// GF(q^N) as a field in its own right.
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ext_modulus(&self) -> &[Elem] {
        if self.degree == 1 {
            &[0, 1]
        } else {
            self.field.modulus()
        }
    }

    /// The class of `X` modulo the extension modulus.
    pub fn generator(&self) -> Elem {
        if self.degree == 1 {
            0
        } else {
            self.base.order()
        }
    }

    /// GF(q) -> GF(q^N) as constant polynomials. With the digit encoding
    /// this is the identity on encodings.
    pub fn embed(&self, a: Elem) -> Result<Elem> {
        self.base.check(a)
    }

    /// Coordinates with respect to `1, b, ..., b^(N-1)`.
    pub fn coordinates(&self, a: Elem) -> Vec<Elem> {
        if self.degree == 1 {
            return vec![a];
        }
        self.field.digits(a)
    }

    pub fn from_coordinates(&self, coords: &[Elem]) -> Result<Elem> {
        if coords.len() != self.degree as usize {
            return Err(Error::AmbientMismatch(format!(
                "expected {} coordinates, got {}",
                self.degree,
                coords.len()
            )));
        }
        for &c in coords {
            self.base.check(c)?;
        }
        if self.degree == 1 {
            return Ok(coords[0]);
        }
        Ok(self.field.from_digits(coords))
    }
}

/// Lexicographically smallest monic irreducible polynomial of `degree` over
/// `base`, constant term first. Degree 1 returns `X`.
pub fn canonical_irreducible(base: &FieldSpec, degree: u32) -> Vec<Elem> {
    let b = base.order();
    if degree == 1 {
        return vec![0, 1];
    }
    let d = degree as usize;
    let top = b.pow(degree - 1);
    // A zero constant term means X divides, so start at c0 = 1.
    for idx in top..b.pow(degree) {
        let mut coeffs = vec![0; d + 1];
        let mut rest = idx;
        for i in (0..d).rev() {
            coeffs[i] = rest % b;
            rest /= b;
        }
        coeffs[d] = 1;
        if is_irreducible(base, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Ben-Or test: a monic `f` of degree `d` is irreducible iff
/// `gcd(f, X^(b^i) - X) = 1` for every `1 <= i <= d/2`.
pub fn is_irreducible(base: &FieldSpec, f: &[Elem]) -> bool {
    let f = poly::trimmed(f.to_vec());
    let d = f.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = poly::powmod(base, &h, base.order(), &f);
        let diff = poly::sub(base, &h, &x);
        let g = poly::gcd(base, &f, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Dense polynomial helpers over a [`FieldSpec`]; constant term first,
/// trailing zeros trimmed.
pub(crate) mod poly {
    use super::{Elem, FieldSpec};

    pub fn trimmed(mut v: Vec<Elem>) -> Vec<Elem> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn sub(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                f.sub(x, y)
            })
            .collect();
        trimmed(v)
    }

    pub fn mul(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trimmed(out)
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(f: &FieldSpec, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
        let m = trimmed(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
        let mut r = trimmed(a.to_vec());
        while r.len() > dm {
            let top = r.len() - 1;
            let c = f.mul(r[top], lead_inv);
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
            }
            r = trimmed(r);
        }
        r
    }

    pub fn mulmod(f: &FieldSpec, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
        rem(f, &mul(f, a, b), m)
    }

    pub fn powmod(f: &FieldSpec, a: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
        let mut acc = vec![1];
        let mut base = rem(f, a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(f, &acc, &base, m);
            }
            base = mulmod(f, &base, &base, m);
            e >>= 1;
        }
        rem(f, &acc, m)
    }

    /// Monic gcd; the zero polynomial is returned as an empty vector.
    pub fn gcd(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut a = trimmed(a.to_vec());
        let mut b = trimmed(b.to_vec());
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = f.inv(lead).expect("nonzero");
            for c in a.iter_mut() {
                *c = f.mul(*c, inv);
            }
        }
        a
    }

    /// Evaluates a polynomial at `x` (Horner).
    #[cfg(test)]
    pub fn eval(f: &FieldSpec, a: &[Elem], x: Elem) -> Elem {
        a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = powmod(w, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if is_prime(q) {
        return Ok((q, 1));
    }
    for k in 2..64u32 {
        let root = integer_root(q, k);
        if root < 2 {
            break;
        }
        if root.checked_pow(k) == Some(q) && is_prime(root) {
            return Ok((root, k));
        }
    }
    Err(Error::NotPrimePower(q))
}

fn integer_root(n: u64, k: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}
