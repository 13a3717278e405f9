use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fano_instantons_ffi::*;

fn last_error() -> String {
    let p = fi_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn sample(g: FiGeometry, k: usize, prime: u64, seed: u64) -> *mut FiSample {
    let mut s = ptr::null_mut();
    let status = unsafe { fi_sample_new(g, k, prime, seed, &mut s) };
    assert_eq!(status, FiStatus::Ok);
    assert!(!s.is_null());
    s
}

#[test]
fn sample_dims_validate_and_dd() {
    let s = sample(FiGeometry::Quadric, 4, 32003, 1);
    let (mut i, mut w) = (0usize, 0usize);
    let mut passed = false;
    let mut dd = 0u64;
    unsafe {
        assert_eq!(fi_sample_dims(s, &mut i, &mut w), FiStatus::Ok);
        assert_eq!(fi_sample_validate(s, 30, 1, &mut passed), FiStatus::Ok);
        assert_eq!(fi_sample_dd(s, &mut dd), FiStatus::Ok);
        fi_sample_free(s);
    }
    assert_eq!((i, w), (3, 4));
    assert!(passed);
    assert_ne!(dd, 0);
}

#[test]
fn json_round_trip() {
    let s = sample(FiGeometry::V5, 2, 32003, 5);
    let mut text: *mut c_char = ptr::null_mut();
    unsafe {
        assert_eq!(fi_sample_to_json(s, &mut text), FiStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(fi_sample_from_json(text, &mut back), FiStatus::Ok);
        let mut again: *mut c_char = ptr::null_mut();
        assert_eq!(fi_sample_to_json(back, &mut again), FiStatus::Ok);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(again));
        fi_string_free(text);
        fi_string_free(again);
        fi_sample_free(back);
        fi_sample_free(s);
    }
}

#[test]
fn errors_map_to_codes() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(fi_sample_new(FiGeometry::V5, 9, 32003, 0, &mut s), FiStatus::Unsupported);
        assert!(last_error().contains("2..=4"));
        assert_eq!(fi_sample_new(FiGeometry::Quadric, 2, 32004, 0, &mut s), FiStatus::InvalidField);
        assert_eq!(fi_sample_new(FiGeometry::Quadric, 2, 32003, 0, ptr::null_mut()), FiStatus::NullPointer);
        let bad = CString::new("{\"format\": 1}").unwrap();
        assert_eq!(fi_sample_from_json(bad.as_ptr(), &mut s), FiStatus::Parse);
        assert!(s.is_null());
        let v = sample(FiGeometry::V22, 1, 32003, 0);
        let mut dd = 0;
        assert_eq!(fi_sample_dd(v, &mut dd), FiStatus::Unsupported);
        let mut ok = false;
        assert_eq!(fi_sample_semistable(v, &mut ok), FiStatus::Unsupported);
        fi_sample_free(v);
        assert_eq!(fi_sample_dims(ptr::null(), &mut 0, &mut 0), FiStatus::NullPointer);
        fi_sample_free(ptr::null_mut());
        fi_string_free(ptr::null_mut());
    }
    // success clears the message
    let s = sample(FiGeometry::Quadric, 2, 32003, 0);
    assert!(fi_last_error().is_null());
    unsafe { fi_sample_free(s) };
}

#[test]
fn delta_chi_and_wall() {
    let (mut delta, mut passed, mut identical, mut semistable) = (0i64, false, false, false);
    unsafe {
        assert_eq!(fi_delta(FiGeometry::Quadric, 3, 3, 32003, 0, &mut delta, &mut passed), FiStatus::Ok);
        assert_eq!((delta, passed), (12, true));
        assert_eq!(fi_chi_identical(FiGeometry::V5, 4, &mut identical), FiStatus::Ok);
        assert!(identical);
        let s = sample(FiGeometry::V22, 2, 3, 0);
        assert_eq!(fi_sample_semistable(s, &mut semistable), FiStatus::Ok);
        assert!(semistable);
        fi_sample_free(s);
    }
    let v = unsafe { CStr::from_ptr(fi_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/fano_instantons.h");
    assert!(header.exists(), "header not generated");
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"fano_instantons.h\"\n\
         int main(void) {\n\
           FiSample *s = 0;\n\
           FiStatus st = fi_sample_new(FiGeometry_Quadric, 3, 32003, 0, &s);\n\
           fi_sample_free(s);\n\
           return st == FiStatus_Ok ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .output()
        .expect("a C compiler is available");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
