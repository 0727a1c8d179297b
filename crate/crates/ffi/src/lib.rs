//! C ABI over `morava`.
//!
//! Every function returns a [`MoravaStatus`]; on anything but `MORAVA_STATUS_OK` a
//! message is available from [`morava_last_error`] on the same thread.
//! Objects are opaque handles owned by the caller and released with their
//! `_free` function; strings returned through `char **` are released with
//! [`morava_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use morava::fgl::{honda, verify_honda, Honda};
use morava::galgebra::{parse_element, parse_presentation, AlgebraPresentation};
use morava::hopf::{verify_hopf_axioms, Builder, HopfPresentation};
use morava::report::Check;
use morava::series::{TruncatedSeries, VariableSpec};
use morava::Error;

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoravaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// A mathematical precondition failed (inhomogeneous input, relation not
    /// preserved, mismatched contexts, ...).
    Math = 4,
    Io = 5,
    Panic = 6,
}

pub struct MoravaAlgebra(Arc<AlgebraPresentation>);
pub struct MoravaFgl(Arc<Honda>);
pub struct MoravaSeries(TruncatedSeries);
pub struct MoravaHopf(HopfPresentation);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> MoravaStatus {
    match e {
        Error::Parse { .. } => MoravaStatus::Parse,
        Error::Config(_) | Error::InvalidPresentation(_) | Error::UnknownGenerator(_) => MoravaStatus::InvalidArgument,
        Error::Io(_) => MoravaStatus::Io,
        _ => MoravaStatus::Math,
    }
}

struct Fail(MoravaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MoravaStatus::NullPointer, format!("{what} is null"))
}

/// Run `f`, turning errors and panics into a status plus `last_error`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MoravaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MoravaStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_error(format!("panic: {}", msg.unwrap_or_default()));
            MoravaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(MoravaStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw();
    Ok(())
}

unsafe fn put_counts(cs: &[Check], passed: *mut u32, total: *mut u32) -> Result<(), Fail> {
    if passed.is_null() || total.is_null() {
        return Err(null("passed/total"));
    }
    *passed = cs.iter().filter(|c| c.passed()).count() as u32;
    *total = cs.len() as u32;
    Ok(())
}

/// Message for the last failed call on this thread ("" after a success).
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn morava_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn morava_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- algebras ------------------------------------------------------------

/// Parse a presentation (`prime 3\nheight 2\ngen e deg -4\nrel e^2 -> 0\n`).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn morava_algebra_parse(text: *const c_char, out: *mut *mut MoravaAlgebra) -> MoravaStatus {
    guard(|| {
        let a = parse_presentation(str_arg(text, "text")?)?;
        put(out, MoravaAlgebra(Arc::new(a)))
    })
}

/// The coefficient field `K(n)_*` itself.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn morava_algebra_kn(p: u32, n: u32, out: *mut *mut MoravaAlgebra) -> MoravaStatus {
    guard(|| {
        let a = parse_presentation(&format!("prime {p}\nheight {n}\n"))?;
        put(out, MoravaAlgebra(Arc::new(a)))
    })
}

/// Render an element given in the polynomial grammar in normal form.
///
/// # Safety
/// `a` must be a live handle; `text` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_algebra_normalize(a: *const MoravaAlgebra, text: *const c_char, out: *mut *mut c_char) -> MoravaStatus {
    guard(|| {
        let a = &handle(a, "algebra")?.0;
        let x = parse_element(a, str_arg(text, "text")?)?;
        put_string(out, a.render(&x))
    })
}

/// # Safety
/// `a` must come from this library, or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn morava_algebra_free(a: *mut MoravaAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

// ---- Honda laws ----------------------------------------------------------

/// The Honda law over `K(n)_*` modulo `(x, y)^order`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn morava_honda(p: u32, n: u32, order: u32, out: *mut *mut MoravaFgl) -> MoravaStatus {
    guard(|| {
        if p < 3 || !morava::galgebra::is_prime(p) || n == 0 || order < 2 {
            return Err(Fail(MoravaStatus::InvalidArgument, format!("need an odd prime p, n ≥ 1, order ≥ 2 (got {p}, {n}, {order})")));
        }
        put(out, MoravaFgl(honda(p, n, order)?))
    })
}

/// `F(x, y)` as text.
///
/// # Safety
/// `f` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_fgl_render(f: *const MoravaFgl, out: *mut *mut c_char) -> MoravaStatus {
    guard(|| put_string(out, handle(f, "fgl")?.0.fgl.series().render()))
}

/// Run the law's checks (unit, commutativity, associativity, p-series, ...).
///
/// # Safety
/// `f` must be a live handle; `passed`, `total` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_fgl_verify(f: *const MoravaFgl, passed: *mut u32, total: *mut u32) -> MoravaStatus {
    guard(|| put_counts(&verify_honda(&handle(f, "fgl")?.0), passed, total))
}

/// # Safety
/// `f` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn morava_fgl_free(f: *mut MoravaFgl) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

// ---- series --------------------------------------------------------------

/// Parse a series in the comma-separated variables `vars` (suffix `:odd`
/// marks an odd variable) over `a`, truncated modulo total degree `order`.
///
/// # Safety
/// `a` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_series_parse(
    a: *const MoravaAlgebra,
    vars: *const c_char,
    order: u32,
    text: *const c_char,
    out: *mut *mut MoravaSeries,
) -> MoravaStatus {
    guard(|| {
        let a = handle(a, "algebra")?.0.clone();
        let vars: Vec<VariableSpec> = str_arg(vars, "vars")?
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| v.strip_suffix(":odd").map_or_else(|| VariableSpec::even(v), VariableSpec::odd))
            .collect();
        if vars.is_empty() {
            return Err(Fail(MoravaStatus::InvalidArgument, "no variables".into()));
        }
        let s = TruncatedSeries::parse(str_arg(text, "text")?, vars.into(), order, a, None)?;
        put(out, MoravaSeries(s))
    })
}

/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_series_add(a: *const MoravaSeries, b: *const MoravaSeries, out: *mut *mut MoravaSeries) -> MoravaStatus {
    guard(|| put(out, MoravaSeries(handle(a, "a")?.0.add(&handle(b, "b")?.0)?)))
}

/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_series_mul(a: *const MoravaSeries, b: *const MoravaSeries, out: *mut *mut MoravaSeries) -> MoravaStatus {
    guard(|| put(out, MoravaSeries(handle(a, "a")?.0.mul(&handle(b, "b")?.0)?)))
}

/// `f(g_0, ..., g_{k-1})`, one substitute per variable of `f`.
///
/// # Safety
/// `f` must be live; `subs` must point to `nsubs` live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_series_compose(
    f: *const MoravaSeries,
    subs: *const *const MoravaSeries,
    nsubs: usize,
    out: *mut *mut MoravaSeries,
) -> MoravaStatus {
    guard(|| {
        let f = &handle(f, "f")?.0;
        if subs.is_null() && nsubs > 0 {
            return Err(null("subs"));
        }
        let gs = (0..nsubs).map(|i| handle(*subs.add(i), "substitute").map(|g| g.0.clone())).collect::<Result<Vec<_>, _>>()?;
        put(out, MoravaSeries(f.compose(&gs)?))
    })
}

/// Compositional inverse of a univariate series with invertible linear term.
///
/// # Safety
/// `f` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_series_inverse(f: *const MoravaSeries, out: *mut *mut MoravaSeries) -> MoravaStatus {
    guard(|| put(out, MoravaSeries(handle(f, "f")?.0.inverse()?)))
}

/// # Safety
/// `f` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_series_render(f: *const MoravaSeries, out: *mut *mut c_char) -> MoravaStatus {
    guard(|| put_string(out, handle(f, "f")?.0.render()))
}

/// # Safety
/// `f` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn morava_series_free(f: *mut MoravaSeries) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

// ---- Hopf algebras -------------------------------------------------------

/// Build one of `sigma`, `A`, `B`, `C`, `KK` at the given window.
///
/// # Safety
/// `which` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_hopf_build(which: *const c_char, p: u32, n: u32, window: u32, out: *mut *mut MoravaHopf) -> MoravaStatus {
    guard(|| {
        let b: Builder = str_arg(which, "which")?.parse()?;
        put(out, MoravaHopf(HopfPresentation::build(b, p, n, window)?))
    })
}

/// Coassociativity, counit and antipode checks up to `|degree| ≤ deg_bound`
/// (`deg_bound < 0` picks the default, three times the largest generator degree).
///
/// # Safety
/// `h` must be live; `passed`, `total` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_hopf_verify(h: *const MoravaHopf, deg_bound: i64, passed: *mut u32, total: *mut u32) -> MoravaStatus {
    guard(|| {
        let h = &handle(h, "hopf")?.0;
        let bound = if deg_bound < 0 { h.default_degree_bound() } else { deg_bound };
        put_counts(&verify_hopf_axioms(h, bound)?, passed, total)
    })
}

/// Generators, relations and coproducts as JSON.
///
/// # Safety
/// `h` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn morava_hopf_to_json(h: *const MoravaHopf, out: *mut *mut c_char) -> MoravaStatus {
    guard(|| put_string(out, handle(h, "hopf")?.0.to_json().to_string()))
}

/// # Safety
/// `h` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn morava_hopf_free(h: *mut MoravaHopf) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// ---- command line ----------------------------------------------------------

/// Run the command-line interface on `argv[0..argc]` (without the program
/// name). `*exit_code` receives 0 (all checks pass), 1 (a check failed) or 2
/// (error); `*out` receives what the command would print.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn morava_cli(argc: usize, argv: *const *const c_char, exit_code: *mut i32, out: *mut *mut c_char) -> MoravaStatus {
    guard(|| {
        if exit_code.is_null() {
            return Err(null("exit_code"));
        }
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let mut args = vec!["morava".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argument")?.to_string());
        }
        let (code, text) = morava::cli::run(args);
        *exit_code = code;
        put_string(out, text)
    })
}

