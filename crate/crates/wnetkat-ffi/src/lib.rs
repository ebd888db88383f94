//! C ABI over `wnetkat`.
//!
//! Handles are opaque pointers created by `wnk_*_new`/`wnk_*_compile` style
//! functions and released with the matching `_free`. Every fallible call
//! returns a [`WnkStatus`]; on failure `wnk_last_error()` describes what went
//! wrong on the calling thread. Strings handed out by the library must be
//! released with [`wnk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wnetkat::cli::{parse_topology, render_verdict, Flavor, Loaded};
use wnetkat::engine::DynWnka;
use wnetkat::netcore::{parse_schema, FieldSchema};
use wnetkat::verify::VerifyOptions;
use wnetkat::wnka::CompileOptions;
use wnetkat::{SemiringHandle, WnkError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WnkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Algebra = 4,
    Schema = 5,
    Capability = 6,
    Resource = 7,
    Invalid = 8,
    Topology = 9,
    Io = 10,
    Panic = 11,
}

/// Which query [`wnk_check`] runs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WnkQuery {
    Safe = 0,
    Reach = 1,
}

/// A packet schema.
pub struct WnkSchema(FieldSchema);

/// A compiled automaton together with its schema and guards.
pub struct WnkAutomaton {
    loaded: Loaded,
    wnka: DynWnka,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &WnkError) -> WnkStatus {
    match e {
        WnkError::Algebra(_) => WnkStatus::Algebra,
        WnkError::Parse(_) => WnkStatus::Parse,
        WnkError::Schema(_) => WnkStatus::Schema,
        WnkError::Capability(_) => WnkStatus::Capability,
        WnkError::Resource(_) => WnkStatus::Resource,
        WnkError::Invalid(_) => WnkStatus::Invalid,
        WnkError::Topology { .. } => WnkStatus::Topology,
        WnkError::Io(_) | WnkError::Json(_) => WnkStatus::Io,
    }
}

enum Fail {
    Status(WnkStatus, String),
    Lib(WnkError),
}

impl From<WnkError> for Fail {
    fn from(e: WnkError) -> Self {
        Fail::Lib(e)
    }
}

impl From<wnetkat::AlgebraError> for Fail {
    fn from(e: wnetkat::AlgebraError) -> Self {
        Fail::Lib(e.into())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WnkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WnkStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            WnkStatus::Panic
        }
    }
}

unsafe fn cstr<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(WnkStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(WnkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_cstr<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        cstr(p, what).map(Some)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(WnkStatus::NullPointer, format!("{what} is null"))
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nuls removed").into_raw()
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn wnk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wnk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a `fields { … }` block.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wnk_schema_parse(text: *const c_char, out: *mut *mut WnkSchema) -> WnkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = parse_schema(cstr(text, "text")?)?;
        *out = Box::into_raw(Box::new(WnkSchema(s)));
        Ok(())
    })
}

/// Number of packets over the schema, or 0 for null.
///
/// # Safety
/// `s` must be null or a live schema handle.
#[no_mangle]
pub unsafe extern "C" fn wnk_schema_packet_count(s: *const WnkSchema) -> usize {
    s.as_ref().map_or(0, |s| s.0.packet_count())
}

/// # Safety
/// `s` must be null or a schema handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn wnk_schema_free(s: *mut WnkSchema) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

fn compile(loaded: Loaded) -> Result<Box<WnkAutomaton>, Fail> {
    let wnka = DynWnka::compile(&loaded.guarded(), &loaded.schema, loaded.handle.kind(), CompileOptions::default())?;
    Ok(Box::new(WnkAutomaton { loaded, wnka }))
}

/// Compiles a policy document. `schema` may be null when the document has a
/// `fields` header.
///
/// # Safety
/// Strings must be valid C strings, `schema` null or live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wnk_compile_policy(
    schema: *const WnkSchema,
    policy: *const c_char,
    semiring: *const c_char,
    out: *mut *mut WnkAutomaton,
) -> WnkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let handle = SemiringHandle::from_name(cstr(semiring, "semiring")?)?;
        let loaded = Loaded::from_policy_text(cstr(policy, "policy")?, schema.as_ref().map(|s| &s.0), handle)?;
        *out = Box::into_raw(compile(loaded)?);
        Ok(())
    })
}

/// Compiles the network generated from a topology JSON document, wrapped in
/// the topology's ingress and egress guards. `profile` may be null.
///
/// # Safety
/// Strings must be valid C strings (or null for `profile`), `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wnk_compile_topology(
    topology_json: *const c_char,
    flavor: *const c_char,
    profile: *const c_char,
    semiring: *const c_char,
    out: *mut *mut WnkAutomaton,
) -> WnkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let handle = SemiringHandle::from_name(cstr(semiring, "semiring")?)?;
        let spec = parse_topology(cstr(topology_json, "topology_json")?)?;
        let flavor = Flavor::from_name(cstr(flavor, "flavor")?)?;
        let loaded = Loaded::from_topology(spec, flavor, handle, opt_cstr(profile, "profile")?)?;
        *out = Box::into_raw(compile(loaded)?);
        Ok(())
    })
}

/// Number of automaton states, or 0 for null.
///
/// # Safety
/// `a` must be null or a live automaton handle.
#[no_mangle]
pub unsafe extern "C" fn wnk_automaton_state_count(a: *const WnkAutomaton) -> usize {
    a.as_ref().map_or(0, |a| a.wnka.state_count())
}

/// # Safety
/// `a` must be null or an automaton handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn wnk_automaton_free(a: *mut WnkAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Decides a safety or reachability query against `bound`. On success
/// `*holds` is 1 when the property holds and 0 otherwise; when `report` is
/// not null it receives a JSON verdict to be freed with [`wnk_string_free`].
///
/// # Safety
/// `a` must be live, `bound` a valid C string, `holds` valid, `report` null or valid.
#[no_mangle]
pub unsafe extern "C" fn wnk_check(
    a: *const WnkAutomaton,
    query: WnkQuery,
    bound: *const c_char,
    holds: *mut i32,
    report: *mut *mut c_char,
) -> WnkStatus {
    guard(|| {
        let a = a.as_ref().ok_or_else(|| null("automaton"))?;
        if holds.is_null() {
            return Err(null("holds"));
        }
        let r = a.loaded.handle.parse(cstr(bound, "bound")?)?;
        let opts = VerifyOptions::default();
        let (v, name) = match query {
            WnkQuery::Safe => (a.wnka.check_safety(&r, &opts)?, "safe"),
            WnkQuery::Reach => (a.wnka.check_reachability(&r, &opts)?, "reach"),
        };
        *holds = i32::from(v.holds());
        if !report.is_null() {
            let rep = render_verdict(v, name, a.loaded.handle.kind(), &a.loaded);
            *report = out_string(rep.json.to_string());
        }
        Ok(())
    })
}

/// Weight of input packet `packet` (`f=v,g=w`) producing `history`
/// (`π :: π :: …`, head first), written to `*weight` as a string.
///
/// # Safety
/// `a` must be live, strings valid C strings, `weight` valid.
#[no_mangle]
pub unsafe extern "C" fn wnk_eval(
    a: *const WnkAutomaton,
    packet: *const c_char,
    history: *const c_char,
    weight: *mut *mut c_char,
) -> WnkStatus {
    guard(|| {
        let a = a.as_ref().ok_or_else(|| null("automaton"))?;
        if weight.is_null() {
            return Err(null("weight"));
        }
        let schema = &a.loaded.schema;
        let pk = schema.parse_packet(cstr(packet, "packet")?)?;
        let h = schema.parse_history(cstr(history, "history")?)?;
        *weight = out_string(a.wnka.eval_weight(pk, &h).to_string());
        Ok(())
    })
}
