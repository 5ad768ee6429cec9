//! C ABI over the orbifunctor engine.
//!
//! Every fallible call returns an [`OfStatus`]; on anything but `OF_OK` the
//! message is available from [`of_last_error`] on the same thread. Handles
//! are opaque and owned by the caller, who releases them with the matching
//! `*_free`. Strings returned as `char *` are released with
//! [`of_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbifunctor::cli::{self, Command, Manifest, Options, Report};
use orbifunctor::exact_abelian::{cokernel_presentation, hom_group, tensor_group, FpAbGroup, IntMatrix};
use orbifunctor::verify::FgMode;
use orbifunctor::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The manifest or a command argument was rejected.
    InvalidInput = 3,
    /// The engine refused the data (bad dimensions, bounds, truncation).
    ComputeError = 4,
    OutOfRange = 5,
    Panic = 6,
}

pub struct OfManifest {
    text: String,
    manifest: Manifest,
}

pub struct OfReport {
    report: Report,
}

pub struct OfGroup {
    group: FpAbGroup,
}

/// Optional flags for [`of_run`]. A field is used only when its `has_` flag
/// is set. `mode` is 1 for strict and 2 for almost.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct OfOptions {
    pub has_degree: bool,
    pub degree: i64,
    pub has_truncation: bool,
    pub truncation: usize,
    pub has_mode: bool,
    pub mode: u32,
    pub has_prime: bool,
    pub prime: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(OfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Manifest(_) => OfStatus::InvalidInput,
            _ => OfStatus::ComputeError,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status and the last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            OfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(OfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(OfStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn out_arg<'a, T>(p: *mut *mut T, what: &str) -> Result<&'a mut *mut T, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    *p = ptr::null_mut();
    Ok(&mut *p)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn of_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn of_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn of_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and resolves a manifest.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn of_manifest_parse(text: *const c_char, out: *mut *mut OfManifest) -> OfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let text = str_arg(text, "text")?.to_string();
        let manifest = cli::parse_manifest(&text)?;
        *out = Box::into_raw(Box::new(OfManifest { text, manifest }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`of_manifest_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn of_manifest_free(m: *mut OfManifest) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

fn options(o: Option<&OfOptions>) -> Result<Options, Failure> {
    let Some(o) = o else { return Ok(Options::default()) };
    let mode = match (o.has_mode, o.mode) {
        (false, _) => None,
        (true, 1) => Some(FgMode::Strict),
        (true, 2) => Some(FgMode::Almost),
        (true, m) => return Err(Failure(OfStatus::OutOfRange, format!("mode {m} is neither 1 (strict) nor 2 (almost)"))),
    };
    Ok(Options {
        degree: o.has_degree.then_some(o.degree),
        truncation: o.has_truncation.then_some(o.truncation),
        mode,
        prime: o.has_prime.then_some(o.prime),
    })
}

/// Runs a command by its CLI name. `manifest` and `opts` may be null.
/// A report is produced whether or not its verdicts pass.
///
/// # Safety
/// Pointers must be null or valid; `command` must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn of_run(
    command: *const c_char,
    manifest: *const OfManifest,
    opts: *const OfOptions,
    out: *mut *mut OfReport,
) -> OfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let command: Command = str_arg(command, "command")?.parse()?;
        let opts = options(opts.as_ref())?;
        let m = manifest.as_ref();
        if m.is_none() && command.needs_manifest() {
            return Err(Failure(OfStatus::InvalidInput, format!("{command} needs a manifest")));
        }
        let report = Report::new(command.name(), cli::inputs_digest(command, m.map(|m| m.text.as_str()), &opts));
        let report = cli::run(command, m.map(|m| &m.manifest), &opts, report)?;
        *out = Box::into_raw(Box::new(OfReport { report }));
        Ok(())
    })
}

/// # Safety
/// `r` must come from [`of_run`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn of_report_free(r: *mut OfReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// 1 when every verdict passes, 0 when one fails, -1 on a null handle.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn of_report_passes(r: *const OfReport) -> i32 {
    r.as_ref().map_or(-1, |r| r.report.passes() as i32)
}

/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn of_report_verdict_count(r: *const OfReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.verdicts.len())
}

/// The report as JSON, identical to the CLI's `--report` output.
///
/// # Safety
/// `r` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_report_json(r: *const OfReport, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c_string(handle(r, "report")?.report.to_json());
        Ok(())
    })
}

/// The report as the CLI's plain-text table.
///
/// # Safety
/// `r` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_report_table(r: *const OfReport, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c_string(handle(r, "report")?.report.render_table());
        Ok(())
    })
}

/// The cokernel of a `rows x cols` integer matrix given row-major.
///
/// # Safety
/// `entries` must point to `rows * cols` readable values (it may be null
/// when the product is zero).
#[no_mangle]
pub unsafe extern "C" fn of_group_cokernel(rows: usize, cols: usize, entries: *const i64, out: *mut *mut OfGroup) -> OfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let n = rows.checked_mul(cols).ok_or_else(|| Failure(OfStatus::OutOfRange, "matrix size overflows".into()))?;
        if n > 0 && entries.is_null() {
            return Err(null("entries"));
        }
        let data = if n == 0 { &[][..] } else { std::slice::from_raw_parts(entries, n) };
        let m = IntMatrix::from_flat(rows, cols, data.iter().map(|&x| x.into()).collect())?;
        *out = Box::into_raw(Box::new(OfGroup { group: cokernel_presentation(&m).bare() }));
        Ok(())
    })
}

/// `Hom(a, b)` when `tensor` is false, `a ⊗ b` when it is true.
///
/// # Safety
/// `a` and `b` must be live groups and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_group_combine(a: *const OfGroup, b: *const OfGroup, tensor: bool, out: *mut *mut OfGroup) -> OfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let (a, b) = (&handle(a, "a")?.group, &handle(b, "b")?.group);
        let g = if tensor { tensor_group(a, b)? } else { hom_group(a, b)? };
        *out = Box::into_raw(Box::new(OfGroup { group: g.bare() }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a live group.
#[no_mangle]
pub unsafe extern "C" fn of_group_rank(g: *const OfGroup) -> usize {
    g.as_ref().map_or(0, |g| g.group.rank())
}

/// Number of invariant factors.
///
/// # Safety
/// `g` must be null or a live group.
#[no_mangle]
pub unsafe extern "C" fn of_group_torsion_len(g: *const OfGroup) -> usize {
    g.as_ref().map_or(0, |g| g.group.torsion().len())
}

/// The `i`-th invariant factor, when it fits in 64 bits.
///
/// # Safety
/// `g` must be a live group and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_group_torsion_at(g: *const OfGroup, i: usize, out: *mut i64) -> OfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = handle(g, "group")?.group.torsion();
        let d = t.get(i).ok_or_else(|| Failure(OfStatus::OutOfRange, format!("index {i} with {} invariant factors", t.len())))?;
        *out = i64::try_from(d).map_err(|_| Failure(OfStatus::OutOfRange, format!("invariant factor {d} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Canonical description such as `Z^2 ⊕ Z/6`.
///
/// # Safety
/// `g` must be a live group and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_group_describe(g: *const OfGroup, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c_string(handle(g, "group")?.group.describe());
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn of_group_free(g: *mut OfGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_are_recorded_per_call() {
        let mut g = ptr::null_mut();
        let s = unsafe { of_group_cokernel(1, 1, ptr::null(), &mut g) };
        assert_eq!(s, OfStatus::NullPointer);
        assert!(!of_last_error().is_null());
        let two = [2i64];
        let s = unsafe { of_group_cokernel(1, 1, two.as_ptr(), &mut g) };
        assert_eq!(s, OfStatus::Ok);
        assert!(of_last_error().is_null());
        unsafe { of_group_free(g) };
    }

    #[test]
    fn bad_mode_is_out_of_range() {
        let o = OfOptions { has_mode: true, mode: 7, ..OfOptions::default() };
        assert!(matches!(options(Some(&o)), Err(Failure(OfStatus::OutOfRange, _))));
    }
}
