//! C ABI over the `rsset` library.
//!
//! Objects are opaque handles created by `rsset_*_new` style functions and
//! released with the matching `*_free`. Every fallible function returns an
//! [`RssetStatus`]; on failure a message is available from
//! [`rsset_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rsset::bounds::best_upper_bound;
use rsset::cli::{read_point_set, write_point_set};
use rsset::constructions::{
    elliptic_ovoid, graph_curve_32_square, monomial_curve, monomial_curve_affine_variant, rational_normal_curve,
};
use rsset::gf::FieldSpec;
use rsset::projgeom::PointSet;
use rsset::randomized::{cubic_92_construction, gv_construction, quadric_42_construction, Prng};
use rsset::verifier::{Verifier, DEFAULT_BUDGET};
use rsset::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RssetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Arithmetic = 3,
    Parse = 4,
    BudgetExceeded = 5,
    Precondition = 6,
    Overflow = 7,
    Io = 8,
    Panic = 9,
}

/// A finite field.
pub struct RssetField(FieldSpec);

/// A point set of PG(n, q).
pub struct RssetPointSet(PointSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> RssetStatus {
    match err {
        Error::InvalidParameter(_) | Error::NotPrime(_) | Error::NotPrimePower(_) | Error::AmbientMismatch(_) => {
            RssetStatus::InvalidArgument
        }
        Error::DivisionByZero | Error::EncodingOutOfRange { .. } | Error::ZeroVector => RssetStatus::Arithmetic,
        Error::Parse(_) => RssetStatus::Parse,
        Error::BudgetExceeded { .. } | Error::RejectionCapExceeded(_) => RssetStatus::BudgetExceeded,
        Error::Precondition { .. } => RssetStatus::Precondition,
        Error::Overflow(_) => RssetStatus::Overflow,
        Error::Io(_) => RssetStatus::Io,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RssetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RssetStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            RssetStatus::NullPointer
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            RssetStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_set(out: *mut *mut RssetPointSet, set: PointSet) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(RssetPointSet(set))), "out")
}

fn opt_param(v: i64) -> Option<usize> {
    (v >= 0).then_some(v as usize)
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rsset_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates `GF(p^k)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rsset_field_new(p: u64, k: u32, out: *mut *mut RssetField) -> RssetStatus {
    guard(|| {
        let f = FieldSpec::new(p, k)?;
        write_out(out, Box::into_raw(Box::new(RssetField(f))), "out")
    })
}

/// Creates the field with `q` elements.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rsset_field_with_order(q: u64, out: *mut *mut RssetField) -> RssetStatus {
    guard(|| {
        let f = FieldSpec::with_order(q)?;
        write_out(out, Box::into_raw(Box::new(RssetField(f))), "out")
    })
}

/// # Safety
/// `field` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rsset_field_free(field: *mut RssetField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field order, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rsset_field_order(field: *const RssetField) -> u64 {
    field.as_ref().map_or(0, |f| f.0.order())
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_field_add(field: *const RssetField, a: u64, b: u64, out: *mut u64) -> RssetStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        f.check(a)?;
        f.check(b)?;
        write_out(out, f.add(a, b), "out")
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_field_mul(field: *const RssetField, a: u64, b: u64, out: *mut u64) -> RssetStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        f.check(a)?;
        f.check(b)?;
        write_out(out, f.mul(a, b), "out")
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_field_inv(field: *const RssetField, a: u64, out: *mut u64) -> RssetStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        f.check(a)?;
        write_out(out, f.inv(a)?, "out")
    })
}

/// Builds a set from `count` row-major vectors of length `n + 1`.
///
/// # Safety
/// `coords` must point to `count * (n + 1)` values.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_from_coords(
    field: *const RssetField,
    n: usize,
    coords: *const u64,
    count: usize,
    out: *mut *mut RssetPointSet,
) -> RssetStatus {
    guard(|| {
        let f = deref(field, "field")?.0.clone();
        let width = n.checked_add(1).ok_or(Error::Overflow("n + 1".into()))?;
        let total = width.checked_mul(count).ok_or(Error::Overflow("coordinate count".into()))?;
        let flat: &[u64] = if total == 0 {
            &[]
        } else {
            if coords.is_null() {
                return Err(Failure::Null("coords"));
            }
            std::slice::from_raw_parts(coords, total)
        };
        let set = PointSet::from_coords(f, n, flat.chunks(width).map(<[u64]>::to_vec))?;
        emit_set(out, set)
    })
}

/// Parses the JSON interchange format.
///
/// # Safety
/// `json` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_from_json(json: *const c_char, out: *mut *mut RssetPointSet) -> RssetStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Error::Parse(format!("invalid UTF-8: {e}")))?;
        emit_set(out, read_point_set(text)?.set)
    })
}

/// Serializes to the JSON interchange format; negative `r` or `s` are
/// written as null. Release the string with [`rsset_string_free`].
///
/// # Safety
/// `set` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_to_json(
    set: *const RssetPointSet,
    r: i64,
    s: i64,
    out: *mut *mut c_char,
) -> RssetStatus {
    guard(|| {
        let x = &deref(set, "set")?.0;
        let text = write_point_set(x, opt_param(r), opt_param(s))?;
        let c = CString::new(text).expect("JSON has no nul bytes");
        write_out(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rsset_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_free(set: *mut RssetPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_len(set: *const RssetPointSet) -> usize {
    set.as_ref().map_or(0, |x| x.0.len())
}

/// Projective dimension `n`, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_dim(set: *const RssetPointSet) -> usize {
    set.as_ref().map_or(0, |x| x.0.n())
}

/// Field order of the set, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_order(set: *const RssetPointSet) -> u64 {
    set.as_ref().map_or(0, |x| x.0.field().order())
}

/// Copies point `index` into `buf`, which must hold `n + 1` values.
///
/// # Safety
/// `buf` must point to `buf_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn rsset_pointset_point(
    set: *const RssetPointSet,
    index: usize,
    buf: *mut u64,
    buf_len: usize,
) -> RssetStatus {
    guard(|| {
        let x = &deref(set, "set")?.0;
        let p = x
            .points()
            .get(index)
            .ok_or_else(|| Error::InvalidParameter(format!("index {index} out of range for {} points", x.len())))?;
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        if buf_len < p.coords().len() {
            return Err(Error::InvalidParameter(format!("buffer needs {} slots", p.coords().len())).into());
        }
        ptr::copy_nonoverlapping(p.coords().as_ptr(), buf, p.coords().len());
        Ok(())
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_monomial_curve(field: *const RssetField, n: usize, out: *mut *mut RssetPointSet) -> RssetStatus {
    guard(|| emit_set(out, monomial_curve(n, &deref(field, "field")?.0)?))
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_monomial_curve_affine(
    field: *const RssetField,
    n: usize,
    out: *mut *mut RssetPointSet,
) -> RssetStatus {
    guard(|| emit_set(out, monomial_curve_affine_variant(n, &deref(field, "field")?.0)?))
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_rational_normal_curve(
    field: *const RssetField,
    c: usize,
    out: *mut *mut RssetPointSet,
) -> RssetStatus {
    guard(|| emit_set(out, rational_normal_curve(c, &deref(field, "field")?.0)?))
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_elliptic_ovoid(field: *const RssetField, out: *mut *mut RssetPointSet) -> RssetStatus {
    guard(|| emit_set(out, elliptic_ovoid(&deref(field, "field")?.0)))
}

/// The graph curve in PG(6, q0^2).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_graph_curve_32(q0: u64, out: *mut *mut RssetPointSet) -> RssetStatus {
    guard(|| emit_set(out, graph_curve_32_square(q0)?))
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_gv_construction(
    field: *const RssetField,
    n: usize,
    r: usize,
    s: usize,
    seed: u64,
    out: *mut *mut RssetPointSet,
) -> RssetStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        emit_set(out, gv_construction(n, f, r, s, &mut Prng::new(seed))?)
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_quadric_42_construction(
    field: *const RssetField,
    m: usize,
    seed: u64,
    out: *mut *mut RssetPointSet,
) -> RssetStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        emit_set(out, quadric_42_construction(m, f, &mut Prng::new(seed))?)
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_cubic_92_construction(
    field: *const RssetField,
    seed: u64,
    out: *mut *mut RssetPointSet,
) -> RssetStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        emit_set(out, cubic_92_construction(f, &mut Prng::new(seed))?)
    })
}

fn verifier(budget: u64) -> Verifier {
    Verifier::new().with_budget(if budget == 0 { DEFAULT_BUDGET } else { budget as u128 })
}

/// Writes whether `set` is an (r, s)-set. `budget = 0` selects the default.
///
/// # Safety
/// `set` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_is_rs_set(
    set: *const RssetPointSet,
    r: usize,
    s: usize,
    budget: u64,
    out: *mut bool,
) -> RssetStatus {
    guard(|| {
        let x = &deref(set, "set")?.0;
        write_out(out, verifier(budget).is_rs_set(x, r, s)?.is_valid(), "out")
    })
}

/// Writes whether `set` is a proper (r, s)-set.
///
/// # Safety
/// `set` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_is_proper(
    set: *const RssetPointSet,
    r: usize,
    s: usize,
    budget: u64,
    out: *mut bool,
) -> RssetStatus {
    guard(|| {
        let x = &deref(set, "set")?.0;
        write_out(out, verifier(budget).is_proper(x, r, s)?, "out")
    })
}

/// Largest intersection of `set` with an s-space.
///
/// # Safety
/// `set` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_max_in_s_space(
    set: *const RssetPointSet,
    s: usize,
    budget: u64,
    out: *mut usize,
) -> RssetStatus {
    guard(|| {
        let x = &deref(set, "set")?.0;
        write_out(out, verifier(budget).max_in_s_space(x, s)?.max_count, "out")
    })
}

/// Smallest applicable upper bound on an (r, s)-set of PG(n, q).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rsset_best_upper_bound(n: usize, q: u64, r: usize, s: usize, out: *mut f64) -> RssetStatus {
    guard(|| {
        let rep = best_upper_bound(n, q, r, s)?;
        write_out(out, rep.best_value().to_f64(), "out")
    })
}
