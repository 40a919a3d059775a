//! C interface. Handles are opaque; every fallible call returns a
//! [`DecalageStatus`] and leaves a message for [`decalage_last_error`].
//! Strings handed out must be released with [`decalage_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use decalage::flags::{flag_filtration_f, CellularSheaf, ClosedSubcomplexFlag};
use decalage::io::json::FilteredDocument;
use decalage::io::report::{envelope, sha256_of_all, to_text};
use decalage::io::scenario::{run_check, CheckKind, CheckRequest, RunOptions, Scenario, Workspace};
use decalage::io::simplicial_text::{flag_from_value, parse_complex, sheaf_from_value};
use decalage::{Coefficients, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecalageStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Precondition = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecalageCoefficients {
    Int = 0,
    Rat = 1,
}

impl From<DecalageCoefficients> for Coefficients {
    fn from(c: DecalageCoefficients) -> Self {
        match c {
            DecalageCoefficients::Int => Coefficients::Int,
            DecalageCoefficients::Rat => Coefficients::Rat,
        }
    }
}

/// A complex with its filtrations, and the flag data when built from a
/// simplicial complex.
pub struct DecalageWorkspace(Workspace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DecalageStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => DecalageStatus::Parse,
        Error::Precondition(_) => DecalageStatus::Precondition,
        Error::Io(_) => DecalageStatus::Io,
        _ => DecalageStatus::InvalidInput,
    }
}

enum Failure {
    Status(DecalageStatus, String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DecalageStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DecalageStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Engine(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            DecalageStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(DecalageStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(DecalageStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn optional_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(DecalageStatus::NullArgument, format!("{what} is null"))
}

fn json(s: &str) -> Result<serde_json::Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Engine(e.into()))
}

unsafe fn hand_out(s: String, out: *mut *mut c_char) {
    *out = CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut());
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn decalage_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn decalage_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn decalage_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a filtered document (or a bare complex) from JSON.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn decalage_workspace_from_json(
    json_text: *const c_char,
    out: *mut *mut DecalageWorkspace,
) -> DecalageStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = text(json_text, "json_text")?;
        let doc = FilteredDocument::from_value(&json(s)?)?;
        let ws = Workspace::from_document(doc, sha256_of_all([s.as_bytes()]));
        *out = Box::into_raw(Box::new(DecalageWorkspace(ws)));
        Ok(())
    })
}

/// Builds the flag filtration of a simplicial complex given as text.
/// `flag_json` and `sheaf_json` may be null for the trivial flag and the
/// constant sheaf.
///
/// # Safety
/// Non-null strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn decalage_workspace_from_simplicial(
    complex_text: *const c_char,
    flag_json: *const c_char,
    sheaf_json: *const c_char,
    out: *mut *mut DecalageWorkspace,
) -> DecalageStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let t = text(complex_text, "complex_text")?;
        let flag_s = optional_text(flag_json, "flag_json")?;
        let sheaf_s = optional_text(sheaf_json, "sheaf_json")?;
        let x = parse_complex(t)?;
        let sheaf = match sheaf_s {
            Some(s) => sheaf_from_value(&x, &json(s)?)?,
            None => CellularSheaf::constant(&x),
        };
        let flag = match flag_s {
            Some(s) => flag_from_value(&x, &json(s)?)?,
            None => ClosedSubcomplexFlag::new(&x, vec![x.full()])?,
        };
        let ff = flag_filtration_f(&x, &sheaf, &flag)?;
        let parts = [Some(t), flag_s, sheaf_s].map(|p| p.unwrap_or("").as_bytes());
        *out = Box::into_raw(Box::new(DecalageWorkspace(Workspace::from_flag(ff, sha256_of_all(parts)))));
        Ok(())
    })
}

/// # Safety
/// `ws` must come from this library, or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn decalage_workspace_free(ws: *mut DecalageWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Number of named filtrations in the workspace.
///
/// # Safety
/// `ws` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn decalage_workspace_filtration_count(
    ws: *const DecalageWorkspace,
    count: *mut usize,
) -> DecalageStatus {
    guard(|| {
        let ws = ws.as_ref().ok_or_else(|| null("ws"))?;
        *count.as_mut().ok_or_else(|| null("count"))? = ws.0.filtrations.len();
        Ok(())
    })
}

/// `H^degree` as a free rank and the number of torsion summands.
///
/// # Safety
/// `ws` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn decalage_cohomology(
    ws: *const DecalageWorkspace,
    degree: i32,
    coefficients: DecalageCoefficients,
    free_rank: *mut usize,
    torsion_count: *mut usize,
) -> DecalageStatus {
    guard(|| {
        let ws = ws.as_ref().ok_or_else(|| null("ws"))?;
        let g = Coefficients::from(coefficients).group(ws.0.complex.cohomology(degree)?);
        *free_rank.as_mut().ok_or_else(|| null("free_rank"))? = g.free_rank;
        *torsion_count.as_mut().ok_or_else(|| null("torsion_count"))? = g.torsion.len();
        Ok(())
    })
}

/// Runs a named check (`sta`, `pdec`, `lmlu`, `cellular`, `dec-reindex`,
/// `e1-triples`, `ker-formula`, `validate`, `cohomology`) with the default
/// roles `P` and `F`. The JSON report goes to `report_json`, which may be null.
///
/// # Safety
/// `ws` must be a live handle; `check` NUL-terminated; `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn decalage_check(
    ws: *const DecalageWorkspace,
    check: *const c_char,
    coefficients: DecalageCoefficients,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> DecalageStatus {
    guard(|| {
        let ws = ws.as_ref().ok_or_else(|| null("ws"))?;
        let pass = pass.as_mut().ok_or_else(|| null("pass"))?;
        let kind: CheckKind = text(check, "check")?.parse()?;
        let opts = RunOptions { coeffs: coefficients.into(), max_page: None };
        let out = run_check(&ws.0, &CheckRequest::new(kind), opts)?;
        *pass = out.pass;
        if !report_json.is_null() {
            let v = serde_json::to_value(&out).map_err(Error::from)?;
            let env = envelope("check", &ws.0.input_sha256, opts.coeffs, Some(out.pass), v);
            hand_out(to_text(&env), report_json);
        }
        Ok(())
    })
}

/// Runs a scenario bundle (a directory or a `scenario.json` path).
///
/// # Safety
/// `path` NUL-terminated; `pass` writable; `report_json` writable or null.
#[no_mangle]
pub unsafe extern "C" fn decalage_run_scenario(
    path: *const c_char,
    coefficients: DecalageCoefficients,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> DecalageStatus {
    guard(|| {
        let pass = pass.as_mut().ok_or_else(|| null("pass"))?;
        let p = text(path, "path")?;
        let opts = RunOptions { coeffs: coefficients.into(), max_page: None };
        let outcome = Scenario::load(Path::new(p))?.run(opts)?;
        *pass = outcome.pass;
        if !report_json.is_null() {
            let v = serde_json::to_value(&outcome).map_err(Error::from)?;
            hand_out(to_text(&envelope("run", &outcome.input_sha256, opts.coeffs, Some(outcome.pass), v)), report_json);
        }
        Ok(())
    })
}
