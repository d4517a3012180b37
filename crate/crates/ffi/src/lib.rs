//! C ABI over the polydev recognizer.
//!
//! Conventions: every fallible call returns a [`PolydevStatus`]; on failure
//! a message is available from [`polydev_last_error`] on the same thread.
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free`. Strings returned through `char **` are
//! released with [`polydev_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use polydev::cmgeom::{cayley_menger_det, DistanceSpec};
use polydev::development::{
    build_correspondence, parse_development, validate_development, vertex_map_by_name, vertex_map_from_json,
    Development,
};
use polydev::recognizer::{recognize, report_json, RecognizeOptions};
use polydev::solver::SolverConfig;
use polydev::verdict::{Verdict, VerdictKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolydevStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidDevelopment = 4,
    Map = 5,
    InvalidArgument = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolydevVerdictKind {
    NotAffineEquivalent = 0,
    AffineEquivalentConditional = 1,
    Inconclusive = 2,
}

/// Solver settings; start from [`polydev_config_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolydevConfig {
    pub max_depth: u32,
    pub eps_res: f64,
    pub eps_width: f64,
    pub alpha_bound: f64,
    pub max_boxes: u64,
    /// Also run the patches of the second development.
    pub symmetric: bool,
    /// Worker threads; 0 uses the global pool.
    pub jobs: u32,
}

/// A parsed development.
pub struct PolydevDevelopment(Development);

/// Result of a recognition run.
pub struct PolydevVerdict(Verdict);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), (PolydevStatus, String)>) -> PolydevStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PolydevStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside polydev");
            PolydevStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (PolydevStatus, String)> {
    if p.is_null() {
        return Err((PolydevStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (PolydevStatus::InvalidUtf8, e.to_string()))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (PolydevStatus, String)> {
    let c = CString::new(s).map_err(|e| (PolydevStatus::Internal, e.to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn null<T>(p: *const T, what: &str) -> Result<(), (PolydevStatus, String)> {
    if p.is_null() {
        Err((PolydevStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next polydev call on the same thread.
#[no_mangle]
pub extern "C" fn polydev_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn polydev_config_default() -> PolydevConfig {
    let c = SolverConfig::default();
    PolydevConfig {
        max_depth: c.max_depth,
        eps_res: c.eps_res,
        eps_width: c.eps_width,
        alpha_bound: c.alpha_bound,
        max_boxes: c.max_boxes as u64,
        symmetric: false,
        jobs: 0,
    }
}

/// Parses a development from JSON text into `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polydev_development_parse(json: *const c_char, out: *mut *mut PolydevDevelopment) -> PolydevStatus {
    guard(|| {
        null(out, "out")?;
        let dev = parse_development(text(json)?).map_err(|e| (PolydevStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(PolydevDevelopment(dev)));
        Ok(())
    })
}

/// # Safety
/// `dev` must come from [`polydev_development_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn polydev_development_free(dev: *mut PolydevDevelopment) {
    if !dev.is_null() {
        drop(Box::from_raw(dev));
    }
}

/// # Safety
/// `dev` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn polydev_development_num_vertices(dev: *const PolydevDevelopment) -> usize {
    dev.as_ref().map_or(0, |d| d.0.num_vertices())
}

/// # Safety
/// `dev` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn polydev_development_num_faces(dev: *const PolydevDevelopment) -> usize {
    dev.as_ref().map_or(0, |d| d.0.num_faces())
}

/// Validation report as JSON in `*report`; `*valid` tells whether it is empty.
///
/// # Safety
/// `dev` must be a live handle; `valid` and `report` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn polydev_development_validate(
    dev: *const PolydevDevelopment,
    eps_len: f64,
    valid: *mut bool,
    report: *mut *mut c_char,
) -> PolydevStatus {
    guard(|| {
        null(dev, "dev")?;
        null(valid, "valid")?;
        null(report, "report")?;
        let r = validate_development(&(*dev).0, eps_len);
        *valid = r.is_valid();
        out_string(serde_json::to_string(&r).map_err(|e| (PolydevStatus::Internal, e.to_string()))?, report)
    })
}

/// Runs the recognizer. `map_json` may be null to pair equal vertex names;
/// `cfg` may be null for defaults.
///
/// # Safety
/// Handles must be live; `map_json` null or NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn polydev_recognize(
    a: *const PolydevDevelopment,
    b: *const PolydevDevelopment,
    map_json: *const c_char,
    cfg: *const PolydevConfig,
    out: *mut *mut PolydevVerdict,
) -> PolydevStatus {
    guard(|| {
        null(a, "a")?;
        null(b, "b")?;
        null(out, "out")?;
        let (da, db) = (&(*a).0, &(*b).0);
        for (d, name) in [(da, "a"), (db, "b")] {
            let r = validate_development(d, 1e-9);
            if !r.is_valid() {
                let msg = serde_json::to_string(&r).unwrap_or_default();
                return Err((PolydevStatus::InvalidDevelopment, format!("{name}: {msg}")));
            }
        }
        let vm = if map_json.is_null() {
            vertex_map_by_name(da, db)
        } else {
            vertex_map_from_json(da, db, text(map_json)?)
        }
        .map_err(|e| (PolydevStatus::Map, e.to_string()))?;
        let map = build_correspondence(da, db, &vm).map_err(|e| (PolydevStatus::Map, e.to_string()))?;
        let c = cfg.as_ref().copied().unwrap_or_else(|| polydev_config_default());
        if !(c.eps_res > 0.0 && c.eps_width > 0.0 && c.alpha_bound > 1.0) {
            return Err((PolydevStatus::InvalidArgument, "tolerances must be positive and alpha_bound > 1".into()));
        }
        let scfg = SolverConfig {
            max_depth: c.max_depth,
            eps_res: c.eps_res,
            eps_width: c.eps_width,
            alpha_bound: c.alpha_bound,
            max_boxes: usize::try_from(c.max_boxes).unwrap_or(usize::MAX),
        };
        let opts = RecognizeOptions {
            symmetric: c.symmetric,
            jobs: (c.jobs > 0).then_some(c.jobs as usize),
            ..RecognizeOptions::default()
        };
        let v = recognize(da, db, &map, &scfg, &opts).map_err(|e| (PolydevStatus::InvalidDevelopment, e.to_string()))?;
        *out = Box::into_raw(Box::new(PolydevVerdict(v)));
        Ok(())
    })
}

/// # Safety
/// `v` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn polydev_verdict_kind(v: *const PolydevVerdict) -> PolydevVerdictKind {
    match v.as_ref().map(|v| v.0.kind) {
        Some(VerdictKind::NotAffineEquivalent) => PolydevVerdictKind::NotAffineEquivalent,
        Some(VerdictKind::AffineEquivalentConditional) => PolydevVerdictKind::AffineEquivalentConditional,
        _ => PolydevVerdictKind::Inconclusive,
    }
}

/// Evidence document as JSON in `*out`.
///
/// # Safety
/// `v` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn polydev_verdict_json(v: *const PolydevVerdict, timings: bool, out: *mut *mut c_char) -> PolydevStatus {
    guard(|| {
        null(v, "verdict")?;
        null(out, "out")?;
        out_string(report_json(&(*v).0, timings), out)
    })
}

/// # Safety
/// `v` must come from [`polydev_recognize`] or be null.
#[no_mangle]
pub unsafe extern "C" fn polydev_verdict_free(v: *mut PolydevVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn polydev_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Cayley–Menger determinant of `k + 1` points from their squared distances,
/// a row-major `(k + 1) × (k + 1)` matrix.
///
/// # Safety
/// `d2` must point to `(k + 1)²` doubles and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn polydev_cayley_menger_det(k: usize, d2: *const f64, out: *mut f64) -> PolydevStatus {
    guard(|| {
        null(d2, "d2")?;
        null(out, "out")?;
        let n = k.checked_add(1).and_then(|m| m.checked_mul(m)).ok_or((PolydevStatus::InvalidArgument, "k too large".into()))?;
        let data = std::slice::from_raw_parts(d2, n).to_vec();
        let spec = DistanceSpec::new(k, data).map_err(|e| (PolydevStatus::InvalidArgument, e.to_string()))?;
        *out = cayley_menger_det(&spec);
        Ok(())
    })
}
