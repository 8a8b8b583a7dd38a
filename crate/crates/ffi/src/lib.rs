//! C interface to `prymgraph`.
//!
//! Graphs and Prym structures cross the boundary as opaque handles; lists
//! and expressions come back as JSON strings owned by the caller and freed
//! with [`pg_string_free`]. Every call returns a [`PgStatus`]; on failure
//! [`pg_last_error`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use prymgraph::{Error, GluingParams, PrymStructure, WeightedGraph};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Json = 3,
    /// Input parsed but failed validation.
    Invalid = 4,
    Parameter = 5,
    Unstable = 6,
    AmbientMismatch = 7,
    /// A Rust panic was caught.
    Internal = 8,
}

/// Opaque weighted graph.
pub struct PgGraph {
    inner: WeightedGraph,
}

/// Opaque Prym structure.
pub struct PgPrym {
    inner: PrymStructure,
}

/// Parameters of the gluing maps, as in `GluingParams`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct PgGluingParams {
    pub g: u32,
    pub i: u32,
    pub r1: u32,
    pub r2: u32,
    pub x: u32,
    pub r: u32,
    pub m: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(PgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Json(_) => PgStatus::Json,
            Error::Parameter(_) | Error::BadWeight(_) | Error::NoCuspForm(_) => PgStatus::Parameter,
            Error::Unstable(_) => PgStatus::Unstable,
            Error::AmbientMismatch(_) => PgStatus::AmbientMismatch,
            _ => PgStatus::Invalid,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PgStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PgStatus::Internal
        }
    }
}

fn null() -> Fail {
    Fail(PgStatus::NullArgument, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail(PgStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|e| Fail(PgStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = value;
    Ok(())
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable value")
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn pg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph from JSON. Structural problems are reported by
/// [`pg_graph_validate`], not here.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_from_json(json: *const c_char, out: *mut *mut PgGraph) -> PgStatus {
    guard(|| {
        let g = WeightedGraph::from_json(read_str(json)?)?;
        write(out, Box::into_raw(Box::new(PgGraph { inner: g })))
    })
}

/// # Safety
/// `g` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_free(g: *mut PgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes the validation report as JSON; returns `Invalid` if it is
/// nonempty.
///
/// # Safety
/// `g` must be a live handle, `report` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_validate(g: *const PgGraph, report: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let r = prymgraph::validate_graph(&deref(g)?.inner);
        write_string(report, to_json(&r))?;
        if r.is_valid() {
            Ok(())
        } else {
            Err(Fail(PgStatus::Invalid, r.to_string()))
        }
    })
}

/// Arithmetic genus.
///
/// # Safety
/// `g` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_genus(g: *const PgGraph, out: *mut u64) -> PgStatus {
    guard(|| {
        let genus = deref(g)?.inner.graph_genus()?;
        write(out, genus)
    })
}

/// Canonical code as a string; equal codes mean isomorphic graphs.
///
/// # Safety
/// `g` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_canonical_code(g: *const PgGraph, out: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let c = prymgraph::canonical_form(&deref(g)?.inner)?;
        write_string(out, c.code_str().to_string())
    })
}

/// JSON list of the Prym structures over `g`.
///
/// # Safety
/// `g` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_enumerate_covers(g: *const PgGraph, ramified: bool, out: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let list = prymgraph::enumerate_prym_structures(&deref(g)?.inner, ramified)?;
        write_string(out, to_json(&list))
    })
}

/// Parses and validates a Prym structure: a morphism JSON or an object
/// holding one under `morphism`.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_prym_from_json(json: *const c_char, out: *mut *mut PgPrym) -> PgStatus {
    guard(|| {
        let mut value: serde_json::Value = serde_json::from_str(read_str(json)?).map_err(Error::from)?;
        if let Some(m) = value.get_mut("morphism") {
            value = m.take();
        }
        let phi = serde_json::from_value(value).map_err(Error::from)?;
        let p = PrymStructure::from_morphism(phi)?;
        write(out, Box::into_raw(Box::new(PgPrym { inner: p })))
    })
}

/// # Safety
/// `p` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pg_prym_free(p: *mut PgPrym) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_prym_to_json(p: *const PgPrym, out: *mut *mut c_char) -> PgStatus {
    guard(|| write_string(out, deref(p)?.inner.to_json()))
}

/// # Safety
/// `p` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_prym_codimension(p: *const PgPrym, out: *mut usize) -> PgStatus {
    guard(|| write(out, deref(p)?.inner.codimension()))
}

/// Stratum descriptor (factors, dimensions) as JSON.
///
/// # Safety
/// `p` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_prym_stratum(p: *const PgPrym, out: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let d = prymgraph::stratum_factors(&deref(p)?.inner)?;
        write_string(out, to_json(&d))
    })
}

/// Builds gluing map `kind` (1 to 6), or the two-elliptic gluing for
/// kind 0 from `g` and `m`.
///
/// # Safety
/// `params` must be readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_build_gluing(kind: u8, params: *const PgGluingParams, out: *mut *mut PgPrym) -> PgStatus {
    guard(|| {
        let p = *deref(params)?;
        let s = if kind == 0 {
            prymgraph::build_elliptic_pair_gluing(p.g, p.m)?
        } else {
            let gp = GluingParams {
                g: p.g,
                i: p.i,
                r1: p.r1,
                r2: p.r2,
                x: p.x,
                r: p.r,
                m: p.m,
            };
            prymgraph::build_gluing(kind, &gp)?
        };
        write(out, Box::into_raw(Box::new(PgPrym { inner: s })))
    })
}

/// JSON list of strata of the `m`-pointed space up to `max_codim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_enumerate_strata(genus: u32, m: u32, max_codim: usize, out: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let list = prymgraph::enumerate_strata(genus, m, max_codim)?;
        write_string(out, to_json(&list))
    })
}

/// Pullback of the second class along the first gluing map, as JSON.
///
/// # Safety
/// `a` and `b` must be live handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_pullback(a: *const PgPrym, b: *const PgPrym, out: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let r = prymgraph::pullback_boundary_class(&deref(a)?.inner, &deref(b)?.inner)?;
        write_string(out, to_json(&r))
    })
}

/// First Chern class of the normal bundle, in text form.
///
/// # Safety
/// `p` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_normal_bundle(p: *const PgPrym, out: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let c1 = prymgraph::normal_bundle_c1(&deref(p)?.inner)?;
        write_string(out, c1.to_string())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_nontaut_bound(genus: i64, out: *mut u32) -> PgStatus {
    guard(|| write(out, prymgraph::nontaut_bound(genus)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_cusp_dim_gamma12(weight: i64, out: *mut u64) -> PgStatus {
    guard(|| write(out, prymgraph::cusp_dim_gamma12(weight)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_eichler_shimura_dim(weight: i64, out: *mut u64) -> PgStatus {
    guard(|| write(out, prymgraph::eichler_shimura_dim(weight)?))
}
