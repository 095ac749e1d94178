//! C interface to the foldext engine.
//!
//! Instances live behind an opaque [`FoldextInstance`] handle. Every call
//! returns a [`FoldextStatus`]; on failure a message for the calling thread
//! is available from [`foldext_last_error`]. Strings handed out by the
//! library are NUL-terminated JSON and must be released with
//! [`foldext_string_free`]. Budgets of zero select the library defaults.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use foldext::admissible::{check_conditions, decide_extension, Budgets, Outcome};
use foldext::construct::emit_build_plan;
use foldext::genset::{enumerate_generated_set, find_schedule, EnumerationBudget};
use foldext::io::{parse_certificate, parse_document, serialize_certificate, serialize_plan, ParseOptions};
use foldext::{validate_instance, Error, ValidatedInstance};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldextStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, wrong version, bad field or duplicate id.
    Parse = 3,
    /// The instance parsed but broke a structural law.
    InvalidInstance = 4,
    /// A budget or generator parameter was out of range.
    Precondition = 5,
    /// The certificate does not fit the instance.
    Certificate = 6,
    /// The library panicked; this is a bug.
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldextOutcome {
    Extendable = 0,
    NotExtendable = 1,
    /// A budget ran out first.
    Unknown = 2,
}

/// A parsed and validated instance.
pub struct FoldextInstance {
    inner: ValidatedInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FoldextStatus {
    match e {
        Error::Syntax { .. } | Error::Field { .. } | Error::Version { .. } | Error::DuplicateId { .. } => {
            FoldextStatus::Parse
        }
        Error::InvalidInstance(_) => FoldextStatus::InvalidInstance,
        Error::Certificate(_) => FoldextStatus::Certificate,
        Error::Budget(_) | Error::Precondition(_) | Error::TooManyFolds(_) | Error::Io(_) => {
            FoldextStatus::Precondition
        }
    }
}

type Call<T> = Result<T, FoldextStatus>;

fn fail<T>(status: FoldextStatus, message: impl Into<String>) -> Call<T> {
    set_error(message.into());
    Err(status)
}

fn lift<T>(r: foldext::Result<T>) -> Call<T> {
    r.or_else(|e| fail(status_of(&e), e.to_string()))
}

/// Runs `f`, turning panics into [`FoldextStatus::Internal`].
fn guard(f: impl FnOnce() -> Call<()>) -> FoldextStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FoldextStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal error".into());
            FoldextStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Call<&'a str> {
    if p.is_null() {
        return fail(FoldextStatus::NullArgument, format!("{what} is null"));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(e) => fail(FoldextStatus::InvalidUtf8, format!("{what}: {e}")),
    }
}

unsafe fn handle<'a>(p: *const FoldextInstance) -> Call<&'a ValidatedInstance> {
    match p.as_ref() {
        Some(h) => Ok(&h.inner),
        None => fail(FoldextStatus::NullArgument, "instance is null"),
    }
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Call<()> {
    if out.is_null() {
        return fail(FoldextStatus::NullArgument, format!("{what} is null"));
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).expect("JSON output has no NUL").into_raw()
}

fn or_default(value: usize, default: usize) -> usize {
    if value == 0 {
        default
    } else {
        value
    }
}

/// Message describing the last failed call on this thread, or null. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn foldext_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn foldext_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn foldext_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an instance document. On success `*out` receives
/// a handle to release with [`foldext_instance_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn foldext_instance_parse(json: *const c_char, out: *mut *mut FoldextInstance) -> FoldextStatus {
    guard(|| {
        let text = text(json, "json")?;
        let doc = lift(parse_document(text, ParseOptions::default()))?;
        let inner = lift(ValidatedInstance::new(doc.document.into_instance()))?;
        put(out, Box::into_raw(Box::new(FoldextInstance { inner })), "out")
    })
}

/// # Safety
/// `inst` must be null or a handle from [`foldext_instance_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn foldext_instance_free(inst: *mut FoldextInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Checks the structural laws of a document. Returns `Ok` whenever the
/// document parses; `*valid` tells whether it passed, and `*report`
/// receives the JSON report.
///
/// # Safety
/// `json` must be a NUL-terminated string; `valid` and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn foldext_validate(json: *const c_char, valid: *mut bool, report: *mut *mut c_char) -> FoldextStatus {
    guard(|| {
        let text = text(json, "json")?;
        let doc = lift(parse_document(text, ParseOptions::default()))?;
        let rep = validate_instance(&doc.document.into_instance());
        let body = serde_json::to_string(&rep).expect("report serializes");
        put(valid, rep.is_valid(), "valid")?;
        put(report, owned(body), "report")
    })
}

/// Size of the generated set. `*truncated` is set when `max_graphs` cut it short.
///
/// # Safety
/// `inst` must be a live handle; `count` and `truncated` writable.
#[no_mangle]
pub unsafe extern "C" fn foldext_generated_set_count(
    inst: *const FoldextInstance,
    max_graphs: usize,
    count: *mut usize,
    truncated: *mut bool,
) -> FoldextStatus {
    guard(|| {
        let inst = handle(inst)?;
        let budget = EnumerationBudget {
            max_graphs: or_default(max_graphs, EnumerationBudget::default().max_graphs),
            ..EnumerationBudget::default()
        };
        let set = lift(enumerate_generated_set(inst, budget))?;
        put(count, set.graphs.len(), "count")?;
        put(truncated, set.truncated, "truncated")
    })
}

/// Decides extendability. When the outcome is `Extendable` and
/// `certificate` is not null, `*certificate` receives the certificate
/// document; otherwise it is set to null.
///
/// # Safety
/// `inst` must be a live handle; `outcome` writable; `certificate` null or writable.
#[no_mangle]
pub unsafe extern "C" fn foldext_decide(
    inst: *const FoldextInstance,
    max_graphs: usize,
    max_branches_per_graph: usize,
    outcome: *mut FoldextOutcome,
    certificate: *mut *mut c_char,
) -> FoldextStatus {
    guard(|| {
        let inst = handle(inst)?;
        let defaults = Budgets::default();
        let budgets = Budgets {
            enumeration: EnumerationBudget {
                max_graphs: or_default(max_graphs, defaults.enumeration.max_graphs),
                ..defaults.enumeration
            },
            max_branches_per_graph: or_default(max_branches_per_graph, defaults.max_branches_per_graph),
        };
        let verdict = lift(decide_extension(inst, budgets))?;
        let (tag, cert) = match &verdict.outcome {
            Outcome::Extendable(pair) => (FoldextOutcome::Extendable, Some(serialize_certificate(inst, pair))),
            Outcome::NotExtendable => (FoldextOutcome::NotExtendable, None),
            Outcome::Unknown => (FoldextOutcome::Unknown, None),
        };
        put(outcome, tag, "outcome")?;
        if !certificate.is_null() {
            certificate.write(cert.map_or(ptr::null_mut(), owned));
        }
        Ok(())
    })
}

/// Verifies a certificate document: every condition and membership of its
/// graph in the generated set. A certificate that does not fit the
/// instance is reported as `*accepted = false`, not as an error.
///
/// # Safety
/// `inst` must be a live handle, `cert` a NUL-terminated string, `accepted` writable.
#[no_mangle]
pub unsafe extern "C" fn foldext_check_certificate(
    inst: *const FoldextInstance,
    cert: *const c_char,
    accepted: *mut bool,
) -> FoldextStatus {
    guard(|| {
        let inst = handle(inst)?;
        let text = text(cert, "cert")?;
        let ok = match parse_certificate(inst, text).and_then(|p| Ok((check_conditions(inst, &p.graph, &p.delta)?, p))) {
            Ok((report, pair)) => {
                let member = pair.schedule.is_some() || find_schedule(inst, &pair.graph).is_some();
                if !report.all_passed() {
                    set_error(report.to_string());
                } else if !member {
                    set_error("graph is not in the generated set".into());
                }
                report.all_passed() && member
            }
            Err(e @ Error::Certificate(_)) => {
                set_error(e.to_string());
                false
            }
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        put(accepted, ok, "accepted")
    })
}

/// Emits the attachment plan for a certificate as JSON.
///
/// # Safety
/// `inst` must be a live handle, `cert` a NUL-terminated string, `plan` writable.
#[no_mangle]
pub unsafe extern "C" fn foldext_plan(
    inst: *const FoldextInstance,
    cert: *const c_char,
    plan: *mut *mut c_char,
) -> FoldextStatus {
    guard(|| {
        let inst = handle(inst)?;
        let text = text(cert, "cert")?;
        let pair = lift(parse_certificate(inst, text))?;
        let built = lift(emit_build_plan(inst, &pair))?;
        put(plan, owned(serialize_plan(inst, &built)), "plan")
    })
}
