use std::ffi::{CStr, CString};
use std::ptr;

use metacyclic_d2_ffi::*;

fn parse(text: &str) -> *mut D2Matrix {
    let c = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { d2_matrix_parse(c.as_ptr(), &mut m) }, D2Status::Ok);
    m
}

fn text_of(m: *const D2Matrix) -> String {
    unsafe {
        let s = d2_matrix_to_string(m);
        let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
        d2_string_free(s);
        out
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(d2_last_error_message()).to_string_lossy().into_owned() }
}

#[test]
fn parse_round_trip_and_shape() {
    let m = parse("2 3\n1 -2 3\n4 5 -6\n");
    unsafe {
        assert_eq!(d2_matrix_rows(m), 2);
        assert_eq!(d2_matrix_cols(m), 3);
    }
    assert_eq!(text_of(m), "2 3\n1 -2 3\n4 5 -6\n");
    unsafe { d2_matrix_free(m) };
}

#[test]
fn parse_error_reports_line() {
    let c = CString::new("2 2\n1 2\n3 x\n").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { d2_matrix_parse(c.as_ptr(), &mut m) }, D2Status::Parse);
    assert!(m.is_null());
    assert!(last_error().contains("line 3"), "{}", last_error());
}

#[test]
fn null_arguments_are_rejected() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { d2_matrix_parse(ptr::null(), &mut m) }, D2Status::NullPointer);
    assert_eq!(unsafe { d2_matrix_kernel(ptr::null(), &mut m) }, D2Status::NullPointer);
    unsafe {
        d2_matrix_free(ptr::null_mut());
        d2_report_free(ptr::null_mut());
        d2_string_free(ptr::null_mut());
        assert_eq!(d2_report_passed(ptr::null()), -1);
    }
}

#[test]
fn hnf_snf_kernel() {
    let a = parse("2 2\n2 4\n6 8\n");
    let (mut h, mut u, mut d) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(d2_matrix_hnf(a, &mut h, &mut u), D2Status::Ok);
        assert_eq!(d2_matrix_snf(a, &mut d), D2Status::Ok);
    }
    assert_eq!(text_of(h), "2 2\n2 0\n0 4\n");
    assert_eq!(text_of(d), "2 2\n2 0\n0 4\n");
    let k = parse("3 1\n1\n1\n1\n");
    let mut ker = ptr::null_mut();
    unsafe {
        assert_eq!(d2_matrix_kernel(k, &mut ker), D2Status::Ok);
        assert_eq!(d2_matrix_rows(ker), 2);
        for m in [a, h, u, d, k, ker] {
            d2_matrix_free(m);
        }
    }
}

#[test]
fn solve_right_with_and_without_solution() {
    let a = parse("2 2\n2 0\n0 3\n");
    let ok = parse("2 1\n4\n9\n");
    let bad = parse("2 1\n1\n0\n");
    let mut x = ptr::null_mut();
    unsafe {
        assert_eq!(d2_matrix_solve_right(a, ok, &mut x), D2Status::Ok);
    }
    assert_eq!(text_of(x), "2 1\n2\n3\n");
    let mut y = ptr::null_mut();
    unsafe {
        assert_eq!(d2_matrix_solve_right(a, bad, &mut y), D2Status::NoSolution);
    }
    assert!(y.is_null());
    assert!(!last_error().is_empty());
    let wrong = parse("3 1\n1\n1\n1\n");
    unsafe {
        assert_eq!(d2_matrix_solve_right(a, wrong, &mut y), D2Status::Dimension);
        for m in [a, ok, bad, x, wrong] {
            d2_matrix_free(m);
        }
    }
}

#[test]
fn m7_report_through_the_abi() {
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(d2_verify_m7(false, ptr::null(), &mut r), D2Status::Ok);
        assert_eq!(d2_report_passed(r), 1);
        assert_eq!(d2_report_fail_count(r), 0);
        let s = d2_report_json(r);
        let json = CStr::from_ptr(s).to_str().unwrap().to_owned();
        d2_string_free(s);
        d2_report_free(r);
        assert!(json.contains("\"m7.certificate\""));
    }
}

#[test]
fn m7_missing_fixture_dir_is_io_error() {
    let dir = CString::new("/nonexistent/fixtures").unwrap();
    let mut r = ptr::null_mut();
    let st = unsafe { d2_verify_m7(false, dir.as_ptr(), &mut r) };
    assert_eq!(st, D2Status::Io);
    assert!(r.is_null());
    assert!(last_error().contains("/nonexistent/fixtures"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/metacyclic_d2.h");
    for name in [
        "d2_last_error_message",
        "d2_matrix_parse",
        "d2_matrix_free",
        "d2_matrix_rows",
        "d2_matrix_cols",
        "d2_matrix_to_string",
        "d2_string_free",
        "d2_matrix_hnf",
        "d2_matrix_snf",
        "d2_matrix_kernel",
        "d2_matrix_solve_right",
        "d2_verify_m7",
        "d2_report_json",
        "d2_report_passed",
        "d2_report_fail_count",
        "d2_report_free",
        "D2_STATUS_NO_SOLUTION",
        "typedef struct D2Matrix D2Matrix",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
