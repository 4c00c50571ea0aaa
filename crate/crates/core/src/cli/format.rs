//! The JSON interchange format for point sets.
//!
//! ```text
//! {"p": 3, "k": 1, "modulus": [0, 1], "n": 2, "r": 2, "s": 1, "points": [[0, 1, 1], [1, 0, 2]]}
//! ```
//!
//! One line, newline-terminated, points sorted ascending. `r` and `s` may be
//! `null`. Reading normalizes and sorts points but insists on the canonical
//! modulus for `GF(p^k)`.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::projgeom::PointSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSetFile {
    pub set: PointSet,
    pub r: Option<usize>,
    pub s: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
    n: usize,
    r: Option<usize>,
    s: Option<usize>,
    points: Vec<Vec<u64>>,
}

fn list(out: &mut String, xs: impl IntoIterator<Item = u64>) {
    out.push('[');
    for (i, x) in xs.into_iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{x}").expect("write to String");
    }
    out.push(']');
}

fn opt(x: Option<usize>) -> String {
    x.map_or_else(|| "null".to_string(), |v| v.to_string())
}

pub fn write_point_set(x: &PointSet, r: Option<usize>, s: Option<usize>) -> Result<String> {
    let f = x.field();
    if f.is_tower() {
        return Err(Error::param(format!("{f} is presented as a tower; only GF(p^k) over GF(p) is serializable")));
    }
    let mut out = String::with_capacity(64 + x.len() * (x.n() + 1) * 4);
    write!(out, "{{\"p\": {}, \"k\": {}, \"modulus\": ", f.p(), f.k()).expect("write to String");
    list(&mut out, f.modulus().iter().copied());
    write!(out, ", \"n\": {}, \"r\": {}, \"s\": {}, \"points\": [", x.n(), opt(r), opt(s)).expect("write to String");
    for (i, p) in x.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        list(&mut out, p.coords().iter().copied());
    }
    out.push_str("]}\n");
    Ok(out)
}

pub fn read_point_set(text: &str) -> Result<PointSetFile> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = FieldSpec::new(raw.p, raw.k)?;
    if field.modulus() != raw.modulus.as_slice() {
        return Err(Error::Parse(format!(
            "modulus {:?} is not the canonical modulus {:?} of {field}",
            raw.modulus,
            field.modulus()
        )));
    }
    let set = PointSet::from_coords(field, raw.n, raw.points)?;
    Ok(PointSetFile {
        set,
        r: raw.r,
        s: raw.s,
    })
}
