//! C interface to the `retainrw` rewriter.
//!
//! Handles are opaque and owned by the caller; every `*_free` accepts
//! null. Fallible calls return an [`RrwStatus`] and leave a message for
//! [`rrw_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use retainrw::{parse_term, Context, Engine, ExecRegistry, ProveOutcome, ProveReport, RewriteConfig, RuleError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RrwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    RuleError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RrwOutcome {
    Proved = 0,
    NotProved = 1,
    StepLimit = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RrwConfig {
    pub step_limit: u64,
    pub backchain_depth: u64,
    pub side_conditions: bool,
    pub fast_alist: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct RrwStats {
    pub rewrite_calls: u64,
    pub rule_attempts: u64,
    pub rule_applications: u64,
    pub nodes_created: u64,
    pub shadow_probes: u64,
    pub alist_node_visits: u64,
    pub step_limit_hit: bool,
}

/// A loaded rule set with its evaluators.
pub struct RrwEngine(Engine);

/// The outcome of one proof attempt.
pub struct RrwReport {
    report: ProveReport,
    result: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn guard<F: FnOnce() -> Result<(), (RrwStatus, String)>>(f: F) -> RrwStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RrwStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RrwStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (RrwStatus, String)> {
    if p.is_null() {
        return Err((RrwStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (RrwStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn to_cstring(s: String) -> CString {
    CString::new(s.replace('\0', " ")).expect("nul bytes replaced")
}

fn rule_status(e: RuleError) -> (RrwStatus, String) {
    match e {
        RuleError::Parse(p) => (RrwStatus::ParseError, p.to_string()),
        other => (RrwStatus::RuleError, other.to_string()),
    }
}

unsafe fn config(cfg: *const RrwConfig) -> RewriteConfig {
    let c = if cfg.is_null() { rrw_config_default() } else { *cfg };
    RewriteConfig {
        step_limit: c.step_limit,
        backchain_depth: c.backchain_depth as usize,
        side_conditions_enabled: c.side_conditions,
        fast_alist_enabled: c.fast_alist,
        ..RewriteConfig::default()
    }
}

/// The message of the last failed call on this thread, or null. Valid
/// until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn rrw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn rrw_config_default() -> RrwConfig {
    let d = RewriteConfig::default();
    RrwConfig {
        step_limit: d.step_limit,
        backchain_depth: d.backchain_depth as u64,
        side_conditions: d.side_conditions_enabled,
        fast_alist: d.fast_alist_enabled,
    }
}

/// Loads rule-file text into a new engine stored in `*out`.
///
/// # Safety
/// `rules` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rrw_engine_load(rules: *const c_char, out: *mut *mut RrwEngine) -> RrwStatus {
    guard(|| {
        if out.is_null() {
            return Err((RrwStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let text = text(rules, "rules")?;
        let engine = Engine::load(text, ExecRegistry::with_demo_witnesses()).map_err(rule_status)?;
        *out = Box::into_raw(Box::new(RrwEngine(engine)));
        Ok(())
    })
}

/// # Safety
/// `engine` must come from [`rrw_engine_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rrw_engine_free(engine: *mut RrwEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Number of rewrite rules, or 0 for null.
///
/// # Safety
/// `engine` must be null or a live engine.
#[no_mangle]
pub unsafe extern "C" fn rrw_engine_rule_count(engine: *const RrwEngine) -> usize {
    engine.as_ref().map_or(0, |e| e.0.rules.len())
}

/// Attempts to prove `conjecture`. `cfg` may be null for defaults.
///
/// # Safety
/// Pointers must be valid; `conjecture` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn rrw_prove(
    engine: *const RrwEngine,
    conjecture: *const c_char,
    cfg: *const RrwConfig,
    out: *mut *mut RrwReport,
) -> RrwStatus {
    guard(|| {
        if out.is_null() {
            return Err((RrwStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let engine = engine.as_ref().ok_or((RrwStatus::NullPointer, "engine is null".into()))?;
        let text = text(conjecture, "conjecture")?;
        let report = engine
            .0
            .prove_text(text, &config(cfg))
            .map_err(|e| (RrwStatus::ParseError, e.to_string()))?;
        let result = to_cstring(report.result.to_string());
        *out = Box::into_raw(Box::new(RrwReport { report, result }));
        Ok(())
    })
}

/// Rewrites `term` under the known `facts` (a possibly empty list of
/// terms, e.g. `"(integerp x) (integerp y)"`, or null). The result text
/// goes to `*out` and must be released with [`rrw_string_free`].
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn rrw_rewrite(
    engine: *const RrwEngine,
    term: *const c_char,
    facts: *const c_char,
    cfg: *const RrwConfig,
    out: *mut *mut c_char,
) -> RrwStatus {
    guard(|| {
        if out.is_null() {
            return Err((RrwStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let engine = engine.as_ref().ok_or((RrwStatus::NullPointer, "engine is null".into()))?;
        let parse = |s: &str| parse_term(s).map_err(|e| (RrwStatus::ParseError, e.to_string()));
        let t = parse(text(term, "term")?)?;
        let mut ctx = Context::new();
        if !facts.is_null() {
            let list = parse(&format!("(list {})", text(facts, "facts")?))?;
            for f in list.as_app().map(|(_, a)| a).unwrap_or_default() {
                ctx.push(f.clone());
            }
        }
        let mut rw = engine.0.rewriter(config(cfg));
        let result = rw.rewrite_top(&t, &ctx);
        *out = to_cstring(result.to_string()).into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rrw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `report` must be a live report.
#[no_mangle]
pub unsafe extern "C" fn rrw_report_outcome(report: *const RrwReport) -> RrwOutcome {
    match report.as_ref().map(|r| &r.report.outcome) {
        Some(ProveOutcome::Proved) => RrwOutcome::Proved,
        Some(ProveOutcome::StepLimit) => RrwOutcome::StepLimit,
        _ => RrwOutcome::NotProved,
    }
}

/// The final term; owned by the report.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn rrw_report_result(report: *const RrwReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.result.as_ptr())
}

/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn rrw_report_stats(report: *const RrwReport) -> RrwStats {
    let Some(r) = report.as_ref() else { return RrwStats::default() };
    let s = &r.report.stats;
    RrwStats {
        rewrite_calls: s.rewrite_calls,
        rule_attempts: s.rule_attempts,
        rule_applications: s.rule_applications,
        nodes_created: s.nodes_created,
        shadow_probes: s.shadow_probes,
        alist_node_visits: s.alist_node_visits,
        step_limit_hit: s.step_limit_hit,
    }
}

/// # Safety
/// `report` must come from [`rrw_prove`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rrw_report_free(report: *mut RrwReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
