use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use block_toeplitz_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    btz_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = btz_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

const SPEC: &str = r#"{"n": 2, "d": 1, "diag": [["1"]], "lower": [[["3+4i"]]], "upper": [[["5"]]]}"#;

#[test]
fn spec_round_trip_and_normality() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(btz_spec_from_json(c(SPEC).as_ptr(), &mut spec), BtzStatus::Ok);
        assert!(btz_last_error_message().is_null());

        let (mut n, mut d) = (0, 0);
        assert_eq!(btz_spec_dims(spec, &mut n, &mut d), BtzStatus::Ok);
        assert_eq!((n, d), (2, 1));

        let mut normal = false;
        assert_eq!(btz_spec_is_normal(spec, &mut normal), BtzStatus::Ok);
        assert!(normal);

        let mut m = ptr::null_mut();
        assert_eq!(btz_spec_build(spec, &mut m), BtzStatus::Ok);
        let mut direct = false;
        assert_eq!(btz_matrix_is_normal(m, &mut direct), BtzStatus::Ok);
        assert!(direct);
        let mut toeplitz = false;
        assert_eq!(btz_matrix_is_toeplitz(m, &mut toeplitz), BtzStatus::Ok);
        assert!(toeplitz);

        let mut back = ptr::null_mut();
        assert_eq!(btz_matrix_to_spec(m, &mut back), BtzStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(btz_spec_to_json(spec, &mut a), BtzStatus::Ok);
        assert_eq!(btz_spec_to_json(back, &mut b), BtzStatus::Ok);
        assert_eq!(take(a), take(b));

        let mut report = ptr::null_mut();
        assert_eq!(btz_spec_normality_json(spec, &mut report), BtzStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["is_normal"], true);

        btz_spec_free(back);
        btz_matrix_free(m);
        btz_spec_free(spec);
    }
}

#[test]
fn scalar_matrix_shorthand() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(btz_matrix_from_json(c(r#"[["1","2"],["0","1"]]"#).as_ptr(), &mut m), BtzStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(btz_matrix_to_json(m, &mut json), BtzStatus::Ok);
        assert!(take(json).contains("\"2\""));

        let mut normal = true;
        assert_eq!(btz_matrix_is_normal(m, &mut normal), BtzStatus::Ok);
        assert!(!normal);

        let mut odd = ptr::null_mut();
        let mixed = r#"[[[["1"]], [["0"]]], [[["0"]], [["1"], ["2"]]]]"#;
        assert_ne!(btz_matrix_from_json(c(mixed).as_ptr(), &mut odd), BtzStatus::Ok);
        assert!(odd.is_null());
        btz_matrix_free(m);
    }
}

#[test]
fn spec_rejected_when_not_toeplitz() {
    unsafe {
        let mut m = ptr::null_mut();
        let text = r#"[[[["1"]], [["2"]]], [[["3"]], [["4"]]]]"#;
        assert_eq!(btz_matrix_from_json(c(text).as_ptr(), &mut m), BtzStatus::Ok);
        let mut is = true;
        assert_eq!(btz_matrix_is_toeplitz(m, &mut is), BtzStatus::Ok);
        assert!(!is);
        let mut spec = ptr::null_mut();
        assert_eq!(btz_matrix_to_spec(m, &mut spec), BtzStatus::Precondition);
        assert!(spec.is_null());
        assert!(last_error().contains("not block Toeplitz"));
        btz_matrix_free(m);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(btz_spec_from_json(ptr::null(), &mut spec), BtzStatus::NullPointer);
        assert_eq!(btz_spec_from_json(c("{").as_ptr(), &mut spec), BtzStatus::ParseError);
        assert!(!last_error().is_empty());
        let short = r#"{"n": 3, "d": 1, "diag": [["1"]], "lower": [[["1"]]], "upper": [[["1"]]]}"#;
        assert_eq!(btz_spec_from_json(c(short).as_ptr(), &mut spec), BtzStatus::ParseError);
        assert!(last_error().contains("n = 3"));
        assert!(spec.is_null());

        let bad = [0xffu8, 0];
        assert_eq!(btz_spec_from_json(bad.as_ptr().cast(), &mut spec), BtzStatus::InvalidUtf8);
        assert_eq!(btz_spec_from_json(c(SPEC).as_ptr(), ptr::null_mut()), BtzStatus::NullPointer);

        let mut out = ptr::null_mut();
        assert_eq!(btz_run_suite(c("X9.9").as_ptr(), 1, 5, &mut out), BtzStatus::UnknownId);
        assert!(last_error().contains("T5.2"));
        assert_eq!(btz_run_suite(c("T5.2").as_ptr(), 1, 0, &mut out), BtzStatus::Precondition);
        assert!(out.is_null());

        btz_spec_free(ptr::null_mut());
        btz_matrix_free(ptr::null_mut());
        btz_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_and_suite() {
    unsafe {
        let mut out = ptr::null_mut();
        let inst = c(r#"{"matrix": [["0","5"],["3+4i","0"]]}"#);
        assert_eq!(btz_verify_json(inst.as_ptr(), c("\"1\"").as_ptr(), &mut out), BtzStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["toeplitz"], true);
        assert_eq!(v["normal"], true);
        assert_eq!(v["sx"]["structural"], v["sx"]["direct"]);

        assert_eq!(btz_verify_json(inst.as_ptr(), ptr::null(), &mut out), BtzStatus::Ok);
        btz_string_free(out);

        let bad = c("{\n \"matrix\": [[\"3//4\"]]\n}");
        assert_eq!(btz_verify_json(bad.as_ptr(), ptr::null(), &mut out), BtzStatus::ParseError);
        assert!(last_error().contains("<instance>:2:"), "{}", last_error());

        assert_eq!(btz_run_suite(c("L2.1").as_ptr(), 7, 6, &mut out), BtzStatus::Ok);
        let s: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(s["theorem"], "L2.1");
        assert_eq!(s["trials"], 6);
        assert_eq!(s["failed"], 0);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(btz_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/block_toeplitz.h")).unwrap();
    let source = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 18, "{exports:?}");
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("BTZ_STATUS_OK = 0"));
    assert!(header.contains("typedef struct BtzSpec BtzSpec;"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/block_toeplitz.h");
    let Ok(out) =
        Command::new("cc").args(["-std=c11", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"]).arg(&header).output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
