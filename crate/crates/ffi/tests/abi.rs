use std::ffi::{CStr, CString};
use std::ptr;

use nullcone_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { nc_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(nc_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn formulas_for_a_pfaffian_point() {
    let mut f = NcFormulas {
        height: 0,
        ara: 0,
        invariant_ring_dim: 0,
        stci: false,
    };
    assert_eq!(
        unsafe { nc_formulas(NcFamily::Pfaffian, 0, 1, 3, &mut f) },
        NcStatus::Ok
    );
    assert_eq!(f.ara, 3);
    assert_eq!(
        unsafe { nc_formulas(NcFamily::Pfaffian, 0, 1, 3, ptr::null_mut()) },
        NcStatus::NullPointer
    );
}

#[test]
fn nullcone_handle_round_trip() {
    let field = CString::new("p=32003").unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { nc_nullcone_new(NcFamily::Generic, 2, 2, 2, field.as_ptr(), &mut h) };
    assert_eq!(st, NcStatus::Ok);
    let mut count = 0usize;
    assert_eq!(
        unsafe { nc_nullcone_num_generators(h, &mut count) },
        NcStatus::Ok
    );
    assert!(count > 0);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { nc_nullcone_generator(h, 0, &mut g) }, NcStatus::Ok);
    assert!(!take(g).is_empty());
    assert_eq!(
        unsafe { nc_nullcone_generator(h, count, &mut g) },
        NcStatus::InvalidArgument
    );
    assert!(last_error().contains("out of range"));
    let mut f = NcFormulas {
        height: 0,
        ara: 0,
        invariant_ring_dim: 0,
        stci: false,
    };
    unsafe { nc_formulas(NcFamily::Generic, 2, 2, 2, &mut f) };
    let mut height = -1i64;
    assert_eq!(unsafe { nc_nullcone_height(h, &mut height) }, NcStatus::Ok);
    assert_eq!(height, f.height);
    unsafe { nc_nullcone_free(h) };
}

#[test]
fn bad_field_is_rejected() {
    let field = CString::new("p=32004").unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { nc_nullcone_new(NcFamily::Symmetric, 0, 1, 2, field.as_ptr(), &mut h) };
    assert_eq!(st, NcStatus::InvalidArgument);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn certificate_is_verified_and_serializes() {
    let field = CString::new("p=32003").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { nc_certify(NcFamily::Pfaffian, 0, 1, 3, field.as_ptr(), 42, &mut c) },
        NcStatus::Ok
    );
    let mut ok = false;
    assert_eq!(unsafe { nc_certificate_verified(c, &mut ok) }, NcStatus::Ok);
    assert!(ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { nc_certificate_to_json(c, &mut s) }, NcStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["verified"], true);
    unsafe { nc_certificate_free(c) };
}

#[test]
fn counts_agree_with_known_group_orders() {
    let space = CString::new("Sp").unwrap();
    let mut n = 0u64;
    assert_eq!(
        unsafe { nc_count_enumerate(space.as_ptr(), 0, 1, 0, 1, 3, &mut n) },
        NcStatus::Ok
    );
    assert_eq!(n, 24);
    let gl = CString::new("GL").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { nc_count_closed(gl.as_ptr(), 2, 0, 0, 2, 2, &mut s) },
        NcStatus::Ok
    );
    assert_eq!(take(s), "6");
}

#[test]
fn cli_runs_in_process() {
    let args: Vec<CString> = ["count", "--space", "Sp", "--t", "1", "--k", "1", "-q", "3"]
        .iter()
        .map(|a| CString::new(*a).unwrap())
        .collect();
    let ptrs: Vec<_> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let mut code = -1;
    assert_eq!(
        unsafe { nc_cli_run(ptrs.len(), ptrs.as_ptr(), &mut out, &mut code) },
        NcStatus::Ok
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["computed"]["count"], 24);
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/nullcone.h"))
            .unwrap();
    for sym in [
        "nc_last_error",
        "nc_string_free",
        "nc_formulas",
        "nc_nullcone_new",
        "nc_nullcone_free",
        "nc_nullcone_num_generators",
        "nc_nullcone_generator",
        "nc_nullcone_height",
        "nc_certify",
        "nc_certificate_free",
        "nc_certificate_verified",
        "nc_certificate_to_json",
        "nc_count_enumerate",
        "nc_count_closed",
        "nc_cli_run",
    ] {
        assert!(
            header.contains(&format!("{sym}(")),
            "{sym} missing from header"
        );
    }
    assert!(header.contains("typedef struct NcNullcone NcNullcone;"));
}
