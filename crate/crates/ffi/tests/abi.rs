use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cyclohom_ffi::*;

fn read_with(f: impl Fn(*mut c_char, usize, *mut usize) -> CyclohomStatus) -> (CyclohomStatus, String) {
    let mut needed = 0usize;
    let first = f(ptr::null_mut(), 0, &mut needed);
    if first != CyclohomStatus::BufferTooSmall {
        return (first, String::new());
    }
    let mut buf = vec![0 as c_char; needed];
    let status = f(buf.as_mut_ptr(), buf.len(), &mut needed);
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned();
    (status, s)
}

fn last_error() -> String {
    read_with(|b, c, n| unsafe { cyclohom_last_error(b, c, n) }).1
}

#[test]
fn cyclotomic_handle() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cyclohom_cyclotomic(15, &mut p) }, CyclohomStatus::Ok);
    assert_eq!(unsafe { cyclohom_poly_degree(p) }, 8);
    let mut c = 0i64;
    assert_eq!(unsafe { cyclohom_poly_coefficient(p, 7, &mut c) }, CyclohomStatus::Ok);
    assert_eq!(c, -1);
    let (st, s) = read_with(|b, cap, n| unsafe { cyclohom_poly_to_string(p, b, cap, n) });
    assert_eq!((st, s.as_str()), (CyclohomStatus::Ok, "1 -1 0 1 -1 1 0 -1 1"));
    unsafe { cyclohom_poly_free(p) };
}

#[test]
fn short_buffer_reports_size() {
    let mut p = ptr::null_mut();
    unsafe { cyclohom_cyclotomic(3, &mut p) };
    let mut buf = [0 as c_char; 2];
    let mut needed = 0;
    let st = unsafe { cyclohom_poly_to_string(p, buf.as_mut_ptr(), buf.len(), &mut needed) };
    assert_eq!((st, needed), (CyclohomStatus::BufferTooSmall, 6));
    unsafe { cyclohom_poly_free(p) };
}

#[test]
fn errors_set_message() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cyclohom_cyclotomic(0, &mut p) }, CyclohomStatus::InvalidArgument);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { cyclohom_cyclotomic(5, ptr::null_mut()) }, CyclohomStatus::NullPointer);
    assert_eq!(unsafe { cyclohom_poly_degree(ptr::null()) }, -1);
    unsafe { cyclohom_poly_free(ptr::null_mut()) };
}

#[test]
fn verify_report() {
    let checks = CString::new("main").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { cyclohom_verify(105, checks.as_ptr(), 0, &mut r) }, CyclohomStatus::Ok);
    assert_eq!(unsafe { cyclohom_report_passed(r) }, 1);
    let (st, json) = read_with(|b, c, n| unsafe { cyclohom_report_json(r, b, c, n) });
    assert_eq!(st, CyclohomStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let case = v[0]["cases"].as_array().unwrap().iter().find(|c| c["id"] == "j=7").unwrap();
    assert_eq!(case["witness"]["torsion"], serde_json::json!(["2"]));
    unsafe { cyclohom_report_free(r) };

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { cyclohom_verify(12, checks.as_ptr(), 0, &mut r) }, CyclohomStatus::NotSquarefree);
    let bad = CString::new("main,nope").unwrap();
    assert_eq!(unsafe { cyclohom_verify(15, bad.as_ptr(), 0, &mut r) }, CyclohomStatus::InvalidArgument);
    assert!(r.is_null());
}

#[test]
fn snf_and_homology() {
    let m = CString::new("2 2 4\n0 0 2\n0 1 4\n1 0 6\n1 1 8\n").unwrap();
    let (st, s) = read_with(|b, c, n| unsafe { cyclohom_snf(m.as_ptr(), b, c, n) });
    assert_eq!((st, s.as_str()), (CyclohomStatus::Ok, "2 4"));
    let bad = CString::new("2 2 1\n5 5 1\n").unwrap();
    let (st, _) = read_with(|b, c, n| unsafe { cyclohom_snf(bad.as_ptr(), b, c, n) });
    assert_ne!(st, CyclohomStatus::Ok);

    let k = CString::new(r#"{"parts":[3,5],"facets":[[0,0],[0,1],[1,0],[1,1]],"full_skeleton":false}"#).unwrap();
    let (st, s) = read_with(|b, c, n| unsafe { cyclohom_homology(k.as_ptr(), 1, b, c, n) });
    assert_eq!((st, s.as_str()), (CyclohomStatus::Ok, "Z"));
    let junk = CString::new("{").unwrap();
    let (st, _) = read_with(|b, c, n| unsafe { cyclohom_homology(junk.as_ptr(), 0, b, c, n) });
    assert_eq!(st, CyclohomStatus::ParseError);
}
