//! C ABI over `tdsynth`.
//!
//! Handles are opaque and owned by the caller; each has a matching `*_free`.
//! Functions return a [`TdsStatus`]; on failure, [`tds_last_error_message`]
//! describes the error for the calling thread. Strings handed out by the
//! library are released with [`tds_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tdsynth::encode::Mode;
use tdsynth::io::{result_json, FragmentDoc};
use tdsynth::logic::{evaluate, parse, Formula};
use tdsynth::synth::{synthesize, SynthesisRequest, SynthesisResult};
use tdsynth::tdes::{Dynamics, TimedDes, UntimedDes, DEFAULT_STATE_CAP};
use tdsynth::Error;

/// Untimed system description.
pub struct TdsSystem {
    inner: UntimedDes,
}

/// Parsed formula.
pub struct TdsFormula {
    inner: Formula,
}

/// Outcome of a synthesis run.
pub struct TdsResult {
    result: SynthesisResult,
    json: CString,
    fragment: Option<CString>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Json = 3,
    InvalidSystem = 4,
    Syntax = 5,
    UnknownName = 6,
    StateCapExceeded = 7,
    InvalidRequest = 8,
    MalformedFragment = 9,
    BudgetExceeded = 10,
    Internal = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdsMode {
    Exact = 0,
    Paper = 1,
}

/// Passed as `state_cap` to use the library default.
pub const TDS_DEFAULT_STATE_CAP: usize = 0;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> TdsStatus {
    match e {
        Error::InvalidSystem(_) => TdsStatus::InvalidSystem,
        Error::Syntax { .. } => TdsStatus::Syntax,
        Error::UnknownAtom(_) | Error::UnknownEvent(_) | Error::UnknownState(_) => TdsStatus::UnknownName,
        Error::StateCapExceeded { .. } => TdsStatus::StateCapExceeded,
        Error::InvalidRequest(_) => TdsStatus::InvalidRequest,
        Error::MalformedFragment(_) | Error::NotEnabled { .. } | Error::IndexOutOfRange { .. } => {
            TdsStatus::MalformedFragment
        }
        Error::BudgetExceeded { .. } => TdsStatus::BudgetExceeded,
        Error::Json(_) => TdsStatus::Json,
        _ => TdsStatus::Internal,
    }
}

struct Fail(TdsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic for `tds_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TdsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TdsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TdsStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(TdsStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(TdsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(TdsStatus::NullArgument, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(TdsStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn cap(state_cap: usize) -> usize {
    if state_cap == TDS_DEFAULT_STATE_CAP {
        DEFAULT_STATE_CAP
    } else {
        state_cap
    }
}

fn c_string(s: String) -> CString {
    CString::new(s).expect("JSON has no interior nul")
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn tds_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn tds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a system from JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tds_system_from_json(json: *const c_char, out: *mut *mut TdsSystem) -> TdsStatus {
    guard(|| {
        out_arg(out, "out")?;
        let text = str_arg(json, "json")?;
        let inner = UntimedDes::from_json(text).map_err(Error::from)?;
        Dynamics::new(&inner)?;
        *out = Box::into_raw(Box::new(TdsSystem { inner }));
        Ok(())
    })
}

/// # Safety
/// `sys` must be null or a handle from `tds_system_from_json`.
#[no_mangle]
pub unsafe extern "C" fn tds_system_free(sys: *mut TdsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of reachable timed states.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tds_tdes_state_count(sys: *const TdsSystem, state_cap: usize, out: *mut usize) -> TdsStatus {
    guard(|| {
        out_arg(out, "out")?;
        let sys = ref_arg(sys, "sys")?;
        *out = TimedDes::build(&sys.inner, cap(state_cap))?.len();
        Ok(())
    })
}

/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tds_formula_parse(text: *const c_char, out: *mut *mut TdsFormula) -> TdsStatus {
    guard(|| {
        out_arg(out, "out")?;
        let inner = parse(str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(TdsFormula { inner }));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from `tds_formula_parse`.
#[no_mangle]
pub unsafe extern "C" fn tds_formula_free(f: *mut TdsFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Canonical text of the formula; free with `tds_string_free`. Null if `f` is null.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tds_formula_to_string(f: *const TdsFormula) -> *mut c_char {
    match f.as_ref() {
        Some(f) => c_string(f.inner.to_string()).into_raw(),
        None => ptr::null_mut(),
    }
}

/// Searches horizons `hmin..=hmax` for a fragment satisfying `f`.
///
/// # Safety
/// `sys` and `f` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tds_synthesize(
    sys: *const TdsSystem,
    f: *const TdsFormula,
    hmin: usize,
    hmax: usize,
    mode: TdsMode,
    state_cap: usize,
    out: *mut *mut TdsResult,
) -> TdsStatus {
    guard(|| {
        out_arg(out, "out")?;
        let sys = ref_arg(sys, "sys")?;
        let f = ref_arg(f, "formula")?;
        let mode = match mode {
            TdsMode::Exact => Mode::Exact,
            TdsMode::Paper => Mode::Paper,
        };
        let mut req = SynthesisRequest::new(sys.inner.clone(), f.inner.clone(), hmin, hmax).with_mode(mode);
        req.state_cap = cap(state_cap);
        let result = synthesize(&req)?;
        let g = TimedDes::build(&req.system, req.state_cap)?;
        let doc = result_json(&g, &result, false);
        let fragment = result.is_found().then(|| c_string(doc["fragment"].to_string()));
        *out = Box::into_raw(Box::new(TdsResult {
            result,
            json: c_string(doc.to_string()),
            fragment,
        }));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from `tds_synthesize`.
#[no_mangle]
pub unsafe extern "C" fn tds_result_free(r: *mut TdsResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Whether a fragment was found. False for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tds_result_found(r: *const TdsResult) -> bool {
    r.as_ref().is_some_and(|r| r.result.is_found())
}

/// Horizon of the fragment, or 0 when none was found.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tds_result_horizon(r: *const TdsResult) -> usize {
    r.as_ref().and_then(|r| r.result.horizon()).unwrap_or(0)
}

/// Fragment JSON, or null when none was found. Owned by the result.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tds_result_fragment_json(r: *const TdsResult) -> *const c_char {
    r.as_ref()
        .and_then(|r| r.fragment.as_ref())
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Full result document (outcome, fragment, statistics, attempts). Owned by the result.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tds_result_json(r: *const TdsResult) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Evaluates `f` at position `at` of a fragment given as JSON.
///
/// # Safety
/// `sys` and `f` must be live handles, `fragment_json` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tds_check_fragment(
    sys: *const TdsSystem,
    f: *const TdsFormula,
    fragment_json: *const c_char,
    at: usize,
    state_cap: usize,
    out: *mut bool,
) -> TdsStatus {
    guard(|| {
        out_arg(out, "out")?;
        let sys = ref_arg(sys, "sys")?;
        let f = ref_arg(f, "formula")?;
        let doc = FragmentDoc::from_json(str_arg(fragment_json, "fragment_json")?)?;
        let g = TimedDes::build(&sys.inner, cap(state_cap))?;
        let frag = doc.resolve(&g)?;
        *out = evaluate(frag.view(), &f.inner, at, &g)?;
        Ok(())
    })
}
