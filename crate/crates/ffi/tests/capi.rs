use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gpde_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { gpde_string_free(s) };
    out
}

fn builtin(name: &str) -> *mut GpdeModel {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { gpde_model_builtin(name.as_ptr(), &mut m) }, GpdeStatus::Ok);
    m
}

#[test]
fn check_builtin_ce() {
    let m = builtin("ce_aksz");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gpde_check(m, &mut out) }, GpdeStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["model"], "ce_aksz");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    unsafe { gpde_model_free(m) };
}

#[test]
fn hamiltonian_of_ym_is_reported() {
    let m = builtin("ym_weak");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gpde_hamiltonian(m, &mut out) }, GpdeStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert!(v["outputs"]["hamiltonian"].as_str().unwrap().contains("theta[0]*theta[1]*theta[2]*theta[3]"));
    unsafe { gpde_model_free(m) };
}

#[test]
fn parse_roundtrip_through_source() {
    let m = builtin("toy_dim0");
    let src = unsafe { gpde_model_source(m) };
    let text = take(src);
    let c = CString::new(text.clone()).unwrap();
    let mut m2 = ptr::null_mut();
    assert_eq!(unsafe { gpde_model_parse(c.as_ptr(), &mut m2) }, GpdeStatus::Ok);
    assert_eq!(take(unsafe { gpde_model_source(m2) }), text);
    unsafe {
        gpde_model_free(m);
        gpde_model_free(m2);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    let bad = CString::new("base dim = 1;\ncoord C : gh = 1;\nQ C = D;\n").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { gpde_model_parse(bad.as_ptr(), &mut m) }, GpdeStatus::ParseError);
    assert!(m.is_null());
    assert!(take(gpde_last_error()).contains("undeclared"));

    let name = CString::new("nope").unwrap();
    assert_eq!(unsafe { gpde_model_builtin(name.as_ptr(), &mut m) }, GpdeStatus::ParseError);
    assert_eq!(unsafe { gpde_model_parse(ptr::null(), &mut m) }, GpdeStatus::NullPointer);
    assert_eq!(unsafe { gpde_check(ptr::null(), &mut ptr::null_mut()) }, GpdeStatus::NullPointer);
    unsafe {
        gpde_model_free(ptr::null_mut());
        gpde_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gpde.h")).unwrap();
    for f in ["gpde_model_parse", "gpde_model_builtin", "gpde_model_free", "gpde_check", "gpde_hamiltonian", "gpde_string_free", "gpde_last_error"] {
        assert!(h.contains(f), "{f}");
    }
    assert!(h.contains("typedef struct GpdeModel GpdeModel;"));
}
