//! C ABI for p1geom.
//!
//! Objects are opaque handles created by `*_new`/`*_parse`/`p1_fit` and
//! released with the matching `*_free`. Every fallible call returns a
//! [`P1Status`]; on failure a message is available from [`p1_last_error`]
//! on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use p1geom::mle::{check_mle_exists, fit, FitOptions, FitResult};
use p1geom::{DesignMatrix, Error, Network, NetworkFormat, ReciprocityVariant};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P1Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Dimension = 4,
    NotInCone = 5,
    SizeCap = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// Values accepted for `variant` arguments.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum P1Variant {
    Zero = 0,
    Constant = 1,
    Edge = 2,
}

/// Values accepted for `format` arguments.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum P1Format {
    Vector = 0,
    Incidence = 1,
}

/// Opaque design matrix.
pub struct P1Design(DesignMatrix);
/// Opaque network.
pub struct P1Network(Network);
/// Opaque fit result.
pub struct P1Fit(FitResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: P1Status, msg: impl Into<String>) -> P1Status {
    set_error(msg);
    status
}

fn from_error(e: Error) -> P1Status {
    let status = match e {
        Error::TooFewNodes(_) => P1Status::InvalidArgument,
        Error::SizeCap { .. } => P1Status::SizeCap,
        Error::Parse(_) => P1Status::Parse,
        Error::Dimension(_) => P1Status::Dimension,
        Error::NotInCone => P1Status::NotInCone,
        _ => P1Status::Internal,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> P1Status + UnwindSafe) -> P1Status {
    catch_unwind(f).unwrap_or_else(|_| fail(P1Status::Internal, "panic inside p1geom"))
}

fn variant(v: i32) -> Option<ReciprocityVariant> {
    match v {
        0 => Some(ReciprocityVariant::Zero),
        1 => Some(ReciprocityVariant::Constant),
        2 => Some(ReciprocityVariant::EdgeDependent),
        _ => None,
    }
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn p1_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds the design matrix for `n` nodes. `variant_code` is a [`P1Variant`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn p1_design_new(n: usize, variant_code: i32, include_theta: bool, out: *mut *mut P1Design) -> P1Status {
    if out.is_null() {
        return fail(P1Status::NullPointer, "out is NULL");
    }
    guard(move || {
        let Some(v) = variant(variant_code) else {
            return fail(P1Status::InvalidArgument, format!("unknown variant code {variant_code}"));
        };
        match DesignMatrix::new(n, v, include_theta) {
            Ok(a) => {
                *out = Box::into_raw(Box::new(P1Design(a)));
                P1Status::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `design` must be NULL or a handle from [`p1_design_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn p1_design_free(design: *mut P1Design) {
    if !design.is_null() {
        drop(Box::from_raw(design));
    }
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `design` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_design_rows(design: *const P1Design) -> usize {
    design.as_ref().map_or(0, |d| d.0.nrows())
}

/// Number of columns, or 0 for NULL.
///
/// # Safety
/// `design` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_design_cols(design: *const P1Design) -> usize {
    design.as_ref().map_or(0, |d| d.0.ncols())
}

/// Copies the entries, row-major, into `buf` of length `len >= rows * cols`.
///
/// # Safety
/// `design` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn p1_design_entries(design: *const P1Design, buf: *mut i64, len: usize) -> P1Status {
    let (Some(d), false) = (design.as_ref(), buf.is_null()) else {
        return fail(P1Status::NullPointer, "design or buf is NULL");
    };
    let need = d.0.nrows() * d.0.ncols();
    if len < need {
        return fail(P1Status::BufferTooSmall, format!("need {need} entries, got {len}"));
    }
    let out = std::slice::from_raw_parts_mut(buf, need);
    for (r, chunk) in out.chunks_mut(d.0.ncols()).enumerate() {
        chunk.copy_from_slice(d.0.entries().row(r));
    }
    P1Status::Ok
}

/// Parses a NUL-terminated network description. `format` is a [`P1Format`].
///
/// # Safety
/// `text` must be a valid C string and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn p1_network_parse(text: *const c_char, format: i32, out: *mut *mut P1Network) -> P1Status {
    if text.is_null() || out.is_null() {
        return fail(P1Status::NullPointer, "text or out is NULL");
    }
    guard(move || {
        let fmt = match format {
            0 => NetworkFormat::Vector,
            1 => NetworkFormat::Incidence,
            other => return fail(P1Status::InvalidArgument, format!("unknown format code {other}")),
        };
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(P1Status::Parse, "network text is not UTF-8");
        };
        match Network::parse(s, fmt) {
            Ok(x) => {
                *out = Box::into_raw(Box::new(P1Network(x)));
                P1Status::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `network` must be NULL or a handle from [`p1_network_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn p1_network_free(network: *mut P1Network) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Number of nodes, or 0 for NULL.
///
/// # Safety
/// `network` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_network_nodes(network: *const P1Network) -> usize {
    network.as_ref().map_or(0, |x| x.0.n())
}

/// Writes the sufficient statistic `A x` into `buf` (length >= rows).
///
/// # Safety
/// Handles must be live and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn p1_statistic(
    design: *const P1Design,
    network: *const P1Network,
    buf: *mut i64,
    len: usize,
) -> P1Status {
    let (Some(a), Some(x), false) = (design.as_ref(), network.as_ref(), buf.is_null()) else {
        return fail(P1Status::NullPointer, "design, network or buf is NULL");
    };
    if len < a.0.nrows() {
        return fail(P1Status::BufferTooSmall, format!("need {} entries, got {len}", a.0.nrows()));
    }
    guard(move || match a.0.sufficient_statistic(&x.0) {
        Ok(t) => {
            std::slice::from_raw_parts_mut(buf, t.len()).copy_from_slice(t.values());
            P1Status::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Decides whether the MLE exists for `network`.
///
/// # Safety
/// Handles must be live and `exists` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn p1_check_exists(design: *const P1Design, network: *const P1Network, exists: *mut bool) -> P1Status {
    let (Some(a), Some(x), false) = (design.as_ref(), network.as_ref(), exists.is_null()) else {
        return fail(P1Status::NullPointer, "design, network or exists is NULL");
    };
    guard(move || {
        let report = a.0.sufficient_statistic(&x.0).and_then(|t| check_mle_exists(&a.0, &t));
        match report {
            Ok(r) => {
                *exists = r.exists;
                P1Status::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Fits the MLE or extended MLE. A fit that does not converge is still
/// returned; inspect [`p1_fit_converged`].
///
/// # Safety
/// Handles must be live and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn p1_fit(
    design: *const P1Design,
    network: *const P1Network,
    tol: f64,
    max_iter: usize,
    out: *mut *mut P1Fit,
) -> P1Status {
    let (Some(a), Some(x), false) = (design.as_ref(), network.as_ref(), out.is_null()) else {
        return fail(P1Status::NullPointer, "design, network or out is NULL");
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return fail(P1Status::InvalidArgument, format!("tol must be positive, got {tol}"));
    }
    guard(move || match fit(&a.0, &x.0, FitOptions { tol, max_iter }) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(P1Fit(f)));
            P1Status::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `fit` must be NULL or a handle from [`p1_fit`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_free(fit: *mut P1Fit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// Number of probabilities (columns), or 0 for NULL.
///
/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_len(fit: *const P1Fit) -> usize {
    fit.as_ref().map_or(0, |f| f.0.probabilities.len())
}

/// Copies the fitted probabilities into `buf`.
///
/// # Safety
/// `fit` must be live and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_probabilities(fit: *const P1Fit, buf: *mut f64, len: usize) -> P1Status {
    let (Some(f), false) = (fit.as_ref(), buf.is_null()) else {
        return fail(P1Status::NullPointer, "fit or buf is NULL");
    };
    let p = &f.0.probabilities;
    if len < p.len() {
        return fail(P1Status::BufferTooSmall, format!("need {} entries, got {len}", p.len()));
    }
    std::slice::from_raw_parts_mut(buf, p.len()).copy_from_slice(p);
    P1Status::Ok
}

/// Copies the zero-based facial-set indices into `buf` and stores their
/// count in `written`.
///
/// # Safety
/// `fit` must be live, `buf` valid for `len` writes, `written` for one.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_facial_set(fit: *const P1Fit, buf: *mut usize, len: usize, written: *mut usize) -> P1Status {
    let (Some(f), false, false) = (fit.as_ref(), buf.is_null(), written.is_null()) else {
        return fail(P1Status::NullPointer, "fit, buf or written is NULL");
    };
    let idx = &f.0.support.indices;
    *written = idx.len();
    if len < idx.len() {
        return fail(P1Status::BufferTooSmall, format!("need {} entries, got {len}", idx.len()));
    }
    std::slice::from_raw_parts_mut(buf, idx.len()).copy_from_slice(idx);
    P1Status::Ok
}

/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_converged(fit: *const P1Fit) -> bool {
    fit.as_ref().is_some_and(|f| f.0.converged)
}

/// Whether the ordinary MLE exists (facial set is every column).
///
/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_exists(fit: *const P1Fit) -> bool {
    fit.as_ref().is_some_and(|f| f.0.exists)
}

/// `max |A p - t|`, or NaN for NULL.
///
/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_residual(fit: *const P1Fit) -> f64 {
    fit.as_ref().map_or(f64::NAN, |f| f.0.residual)
}

/// Log-likelihood of the observed network, or NaN for NULL.
///
/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_log_likelihood(fit: *const P1Fit) -> f64 {
    fit.as_ref().map_or(f64::NAN, |f| f.0.log_likelihood)
}

/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_iterations(fit: *const P1Fit) -> usize {
    fit.as_ref().map_or(0, |f| f.0.iterations)
}

/// JSON report of the fit. Release with [`p1_string_free`]. NULL on error.
///
/// # Safety
/// `fit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn p1_fit_to_json(fit: *const P1Fit) -> *mut c_char {
    let Some(f) = fit.as_ref() else {
        set_error("fit is NULL");
        return ptr::null_mut();
    };
    match f.0.to_json() {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            from_error(e);
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn p1_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
