//! C interface to `twistjf`.
//!
//! Tables and curves are opaque handles created and released by this
//! library. Every fallible call returns a [`TjfStatus`]; on failure the
//! message is available from [`tjf_last_error`] until the next call on the
//! same thread. Strings returned through `out` parameters are owned by the
//! caller and must be released with [`tjf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use twistjf::jfilt::{classify_pair, ijf};
use twistjf::mcg::validate_relations;
use twistjf::report::{render_json, RunConfig};
use twistjf::{CurveSpec, Error, JFValue, TwistTable};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TjfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Genus = 4,
    Table = 5,
    Precondition = 6,
    Limit = 7,
    Panic = 8,
}

/// Case of an `i_JF` value.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TjfIjfCase {
    Zero = 0,
    One = 1,
    Exact = 2,
    AtLeast = 3,
}

/// An `i_JF` value. `value` is the number itself for `Zero`, `One` and
/// `Exact`, and the lower bound for `AtLeast`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TjfIjf {
    pub case_: TjfIjfCase,
    pub value: u32,
}

/// A twist table for one genus.
pub struct TjfTable {
    table: TableKind,
}

enum TableKind {
    Builtin(&'static TwistTable),
    Owned(TwistTable),
}

impl TjfTable {
    fn get(&self) -> &TwistTable {
        match &self.table {
            TableKind::Builtin(t) => t,
            TableKind::Owned(t) => t,
        }
    }
}

/// A curve named relative to a table.
pub struct TjfCurve {
    spec: CurveSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TjfStatus {
    match e {
        Error::Parse { .. } | Error::UnknownTwist { .. } | Error::NotACurve(_) => TjfStatus::Parse,
        Error::InvalidGenus(_) | Error::UnsupportedGenus(_) | Error::GenusMismatch { .. } => TjfStatus::Genus,
        Error::Table { .. } | Error::NotAutomorphism(_) => TjfStatus::Table,
        Error::ImageTooLong { .. } | Error::CapTooLarge { .. } => TjfStatus::Limit,
        _ => TjfStatus::Precondition,
    }
}

enum Fail {
    Status(TjfStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TjfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TjfStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            TjfStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(TjfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(TjfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tjf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn tjf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Opens the built-in table for `genus`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tjf_table_builtin(genus: u32, out: *mut *mut TjfTable) -> TjfStatus {
    guard(|| {
        let t = TwistTable::builtin(genus)?;
        put(out, Box::into_raw(Box::new(TjfTable { table: TableKind::Builtin(t) })))
    })
}

/// Loads a table from a file in the twist table text format.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tjf_table_load(path: *const c_char, out: *mut *mut TjfTable) -> TjfStatus {
    guard(|| {
        let t = TwistTable::from_file(Path::new(text(path, "path")?))?;
        put(out, Box::into_raw(Box::new(TjfTable { table: TableKind::Owned(t) })))
    })
}

/// # Safety
/// `table` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn tjf_table_free(table: *mut TjfTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Genus of a table, or 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tjf_table_genus(table: *const TjfTable) -> u32 {
    table.as_ref().map_or(0, |t| t.get().genus().get())
}

/// Parses a curve such as `Sep1 @ [C3 C4^-1]` against `table`.
///
/// # Safety
/// `table` must be a live handle, `spec` a NUL-terminated string and `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tjf_curve_parse(table: *const TjfTable, spec: *const c_char, out: *mut *mut TjfCurve) -> TjfStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let spec = CurveSpec::parse(t.get(), text(spec, "spec")?)?;
        put(out, Box::into_raw(Box::new(TjfCurve { spec })))
    })
}

/// # Safety
/// `curve` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn tjf_curve_free(curve: *mut TjfCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Writes `i_JF(c1, c2)` computed with Magnus degree cap `cap`.
///
/// # Safety
/// All handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tjf_ijf(
    table: *const TjfTable,
    c1: *const TjfCurve,
    c2: *const TjfCurve,
    cap: u32,
    out: *mut TjfIjf,
) -> TjfStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let a = deref(c1, "c1")?;
        let b = deref(c2, "c2")?;
        let v = ijf(t.get(), &a.spec, &b.spec, cap as usize)?;
        let (case_, value) = match v {
            JFValue::Zero => (TjfIjfCase::Zero, 0),
            JFValue::One => (TjfIjfCase::One, 1),
            JFValue::ExactGE2(k) => (TjfIjfCase::Exact, k),
            JFValue::AtLeast(k) => (TjfIjfCase::AtLeast, k),
        };
        let value = u32::try_from(value).map_err(|_| Fail::Status(TjfStatus::Limit, "value out of range".into()))?;
        put(out, TjfIjf { case_, value })
    })
}

/// Full pair report as a JSON document.
///
/// # Safety
/// All handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tjf_pair_json(
    table: *const TjfTable,
    c1: *const TjfCurve,
    c2: *const TjfCurve,
    cap: u32,
    out: *mut *mut c_char,
) -> TjfStatus {
    guard(|| {
        let t = deref(table, "table")?.get();
        let a = deref(c1, "c1")?;
        let b = deref(c2, "c2")?;
        let report = classify_pair(t, &a.spec, &b.spec, cap as usize)?;
        let cfg = RunConfig { genus: t.genus().get(), depth_cap: Some(cap as usize), ..Default::default() };
        put(out, owned_string(render_json("pair", &cfg, &report)?))
    })
}

/// Checks the table against the mapping class group relations. Writes 1 to
/// `passed` if all hold, and the report as JSON to `json` unless it is NULL.
///
/// # Safety
/// `table` must be live, `passed` valid for writes, `json` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tjf_validate(table: *const TjfTable, passed: *mut i32, json: *mut *mut c_char) -> TjfStatus {
    guard(|| {
        let t = deref(table, "table")?.get();
        let report = validate_relations(t)?;
        if !json.is_null() {
            let cfg = RunConfig { genus: t.genus().get(), ..Default::default() };
            json.write(owned_string(render_json("validate", &cfg, &report)?));
        }
        put(passed, i32::from(report.all_passed()))
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tjf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
