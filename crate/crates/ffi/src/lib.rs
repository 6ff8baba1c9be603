//! C ABI over the `tribracket` library.
//!
//! Objects are opaque handles created by `trb_*_new`/`trb_*_from_*` functions
//! and released with the matching `trb_*_free`. Every fallible call returns a
//! [`TrbStatus`]; on failure `trb_last_error` describes the problem for the
//! calling thread. Strings returned through out-parameters are owned by the
//! caller and released with `trb_string_free`. Element labels are one-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tribracket::bracket::{SkeinVariant, TribracketBracket};
use tribracket::catalog::Catalog;
use tribracket::diagram::{parse_pd, LinkDiagram};
use tribracket::tribracket::Tribracket;
use tribracket::{builtins, formats, invariant, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrbStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    /// Malformed text: JSON, PD, names, non-UTF-8.
    Parse = 2,
    /// Well-formed input that fails an axiom or a structural check.
    Invalid = 3,
    /// A coefficient is not a unit.
    NonUnit = 4,
    /// A resource guard refused the request.
    Guard = 5,
    /// Anything else, including panics.
    Internal = 6,
}

pub struct TrbTribracket(Tribracket);
pub struct TrbBracket(TribracketBracket);
pub struct TrbDiagram(LinkDiagram);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> TrbStatus {
    match e {
        Error::NonUnit { .. } => TrbStatus::NonUnit,
        Error::BoundExceeded { .. } => TrbStatus::Guard,
        Error::Pd(_)
        | Error::Json(_)
        | Error::MalformedTensor(_)
        | Error::IndexOutOfRange { .. }
        | Error::UnknownName { .. }
        | Error::ModulusTooSmall(_)
        | Error::Polynomial(_) => TrbStatus::Parse,
        Error::Diagram(_)
        | Error::NotQuasigroup { .. }
        | Error::NotAGroup(_)
        | Error::NotConstant { .. }
        | Error::InvalidBracket(_) => TrbStatus::Invalid,
        _ => TrbStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (TrbStatus, String)>) -> TrbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TrbStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TrbStatus::Internal
        }
    }
}

fn lift<T>(r: tribracket::Result<T>) -> Result<T, (TrbStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (TrbStatus, String) {
    (TrbStatus::Null, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TrbStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TrbStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn trb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn trb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"n": .., "tensor": ..}` or a bare one-based tensor. The axioms
/// are not checked; see `trb_tribracket_verify`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_tribracket_from_json(
    json: *const c_char,
    out: *mut *mut TrbTribracket,
) -> TrbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = lift(formats::tribracket_from_json(text(json, "json")?))?;
        put(out, TrbTribracket(x));
        Ok(())
    })
}

/// Built-in tribracket by name (`x3`, `x2`, `trivial`).
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_tribracket_builtin(
    name: *const c_char,
    out: *mut *mut TrbTribracket,
) -> TrbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = lift(builtins::tribracket_by_name(text(name, "name")?))?;
        put(out, TrbTribracket(x));
        Ok(())
    })
}

/// # Safety
/// `x` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trb_tribracket_free(x: *mut TrbTribracket) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `x` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trb_tribracket_size(x: *const TrbTribracket) -> usize {
    x.as_ref().map_or(0, |x| x.0.size())
}

/// Writes whether both tribracket axioms hold.
///
/// # Safety
/// `x` must be a live handle and `valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_tribracket_verify(
    x: *const TrbTribracket,
    valid: *mut bool,
) -> TrbStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("tribracket"))?;
        if valid.is_null() {
            return Err(null("valid"));
        }
        *valid = x.0.verify().valid;
        Ok(())
    })
}

/// `[a,b,c]` with one-based labels.
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_tribracket_eval(
    x: *const TrbTribracket,
    a: usize,
    b: usize,
    c: usize,
    out: *mut usize,
) -> TrbStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("tribracket"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(x.0.eval(a, b, c))?;
        Ok(())
    })
}

/// Parses and fully verifies a bracket (corrected skein form).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_bracket_from_json(
    json: *const c_char,
    out: *mut *mut TrbBracket,
) -> TrbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let b = lift(formats::bracket_from_json(
            text(json, "json")?,
            SkeinVariant::Corrected,
        ))?;
        put(out, TrbBracket(b));
        Ok(())
    })
}

/// Built-in bracket by name (`z7`, `beta1`, `beta2`).
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_bracket_builtin(
    name: *const c_char,
    out: *mut *mut TrbBracket,
) -> TrbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let b = lift(builtins::bracket_by_name(text(name, "name")?))?;
        put(out, TrbBracket(b));
        Ok(())
    })
}

/// # Safety
/// `b` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trb_bracket_free(b: *mut TrbBracket) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Modulus of the coefficient ring, or 0 for a null handle.
///
/// # Safety
/// `b` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trb_bracket_modulus(b: *const TrbBracket) -> u32 {
    b.as_ref().map_or(0, |b| b.0.ring().modulus())
}

/// Residues of δ and w.
///
/// # Safety
/// `b` must be a live handle; `delta` and `w` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn trb_bracket_delta_w(
    b: *const TrbBracket,
    delta: *mut u32,
    w: *mut u32,
) -> TrbStatus {
    guard(|| {
        let b = b.as_ref().ok_or_else(|| null("bracket"))?;
        if delta.is_null() || w.is_null() {
            return Err(null("delta or w"));
        }
        *delta = b.0.delta().value();
        *w = b.0.w().value();
        Ok(())
    })
}

/// Builds a diagram from PD text; bit `i` of `mask` reverses component `i`.
///
/// # Safety
/// `pd` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_diagram_from_pd(
    pd: *const c_char,
    mask: u64,
    out: *mut *mut TrbDiagram,
) -> TrbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pd = lift(parse_pd(text(pd, "pd")?))?;
        let d = lift(LinkDiagram::with_orientation_mask(&pd, mask))?;
        put(out, TrbDiagram(d));
        Ok(())
    })
}

/// Builds the diagram of a catalog entry with its default orientation.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_diagram_from_catalog(
    name: *const c_char,
    out: *mut *mut TrbDiagram,
) -> TrbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = text(name, "name")?;
        let catalog = lift(Catalog::load())?;
        let d = lift(lift(catalog.get(name))?.diagram())?;
        put(out, TrbDiagram(d));
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trb_diagram_free(d: *mut TrbDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Crossing count, or 0 for a null handle.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trb_diagram_crossings(d: *const TrbDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.crossings().len())
}

/// Number of colorings of `d` by `x`.
///
/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_counting_invariant(
    d: *const TrbDiagram,
    x: *const TrbTribracket,
    out: *mut u64,
) -> TrbStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("diagram"))?;
        let x = x.as_ref().ok_or_else(|| null("tribracket"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = invariant::counting_invariant(&d.0, &x.0) as u64;
        Ok(())
    })
}

/// Φ of `d` under `b`, as the canonical string (`json == false`) or as
/// `{"modulus": m, "terms": {..}}`. Free the result with `trb_string_free`.
///
/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trb_phi(
    d: *const TrbDiagram,
    b: *const TrbBracket,
    json: bool,
    out: *mut *mut c_char,
) -> TrbStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("diagram"))?;
        let b = b.as_ref().ok_or_else(|| null("bracket"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let value = lift(invariant::phi(&d.0, &b.0))?;
        let s = if json {
            lift(serde_json::to_string(&value).map_err(Error::from))?
        } else {
            value.to_string()
        };
        *out = to_c_string(s);
        Ok(())
    })
}
