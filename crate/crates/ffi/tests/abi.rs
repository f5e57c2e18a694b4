use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use retainrw_ffi::*;

const RULES: &str = "(def-rp-rule logand-to-4vec-bitand
  (implies (and (integerp x) (integerp y))
           (equal (logand x y) (4vec-bitand x y))))
(defthm logand-to-4vec-bitand-side-cond
  (implies (and (integerp x) (integerp y))
           (integerp (4vec-bitand x y))))
(rp-attach-sc logand-to-4vec-bitand logand-to-4vec-bitand-side-cond)";

fn load(text: &str) -> (RrwStatus, *mut RrwEngine) {
    let c = CString::new(text).unwrap();
    let mut e = ptr::null_mut();
    let s = unsafe { rrw_engine_load(c.as_ptr(), &mut e) };
    (s, e)
}

fn last_error() -> String {
    let p = rrw_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn prove_round_trip() {
    let (s, e) = load(RULES);
    assert_eq!(s, RrwStatus::Ok);
    assert!(rrw_last_error().is_null());
    assert_eq!(unsafe { rrw_engine_rule_count(e) }, 2);
    let conj = CString::new("(implies (and (integerp x) (integerp y)) (integerp (logand x y)))").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { rrw_prove(e, conj.as_ptr(), ptr::null(), &mut r) }, RrwStatus::Ok);
    unsafe {
        assert_eq!(rrw_report_outcome(r), RrwOutcome::Proved);
        assert_eq!(CStr::from_ptr(rrw_report_result(r)).to_str().unwrap(), "'t");
        assert!(rrw_report_stats(r).rule_applications >= 1);
        rrw_report_free(r);
    }
    let mut cfg = rrw_config_default();
    cfg.side_conditions = false;
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(rrw_prove(e, conj.as_ptr(), &cfg, &mut r), RrwStatus::Ok);
        assert_eq!(rrw_report_outcome(r), RrwOutcome::NotProved);
        rrw_report_free(r);
        rrw_engine_free(e);
    }
}

#[test]
fn rewrite_with_facts() {
    let (_, e) = load(RULES);
    let t = CString::new("(logand x y)").unwrap();
    let f = CString::new("(integerp x) (integerp y)").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(rrw_rewrite(e, t.as_ptr(), f.as_ptr(), ptr::null(), &mut out), RrwStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "(rp 'integerp (4vec-bitand x y))");
        rrw_string_free(out);
        assert_eq!(rrw_rewrite(e, t.as_ptr(), ptr::null(), ptr::null(), &mut out), RrwStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "(logand x y)");
        rrw_string_free(out);
        rrw_engine_free(e);
    }
}

#[test]
fn errors_are_reported() {
    let (s, e) = load("(def-rp-rule broken");
    assert_eq!(s, RrwStatus::ParseError);
    assert!(e.is_null());
    assert!(!last_error().is_empty());
    let (s, _) = load("(rp-attach-sc nope nothing)");
    assert_eq!(s, RrwStatus::RuleError);
    assert!(last_error().contains("nothing"), "{}", last_error());
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { rrw_engine_load(ptr::null(), &mut e) }, RrwStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { rrw_engine_load(bad.as_ptr().cast(), &mut e) }, RrwStatus::InvalidUtf8);
    let mut r = ptr::null_mut();
    let conj = CString::new("(f x").unwrap();
    let (_, e) = load(RULES);
    unsafe {
        assert_eq!(rrw_prove(e, conj.as_ptr(), ptr::null(), &mut r), RrwStatus::ParseError);
        assert!(r.is_null());
        assert_eq!(rrw_prove(ptr::null(), conj.as_ptr(), ptr::null(), &mut r), RrwStatus::NullPointer);
        rrw_engine_free(e);
        rrw_engine_free(ptr::null_mut());
        rrw_report_free(ptr::null_mut());
        rrw_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/retainrw.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["rrw_engine_load", "rrw_prove", "rrw_rewrite", "rrw_last_error", "RRW_STATUS_PARSE_ERROR"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint main(void) {{ RrwEngine *e = 0; RrwConfig c = rrw_config_default();\n\
             (void)c; return rrw_engine_load(\"\", &e) == RRW_STATUS_OK ? 0 : 1; }}\n"
        ),
    )
    .unwrap();
    let Ok(status) = Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg(&src).status() else {
        eprintln!("no C compiler; header only checked textually");
        return;
    };
    assert!(status.success());
}
