use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use linsofic_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ls_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = ls_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

const J12: &str = r#"{"free_rank":0,"blocks":[{"torsion":"0","free":[],"size":2,"mult":"1"}]}"#;

#[test]
fn spectrum_round_trip_and_tensor() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(ls_spectrum_from_json(c(J12).as_ptr(), &mut a), LsStatus::Ok);
        let mut sq = ptr::null_mut();
        assert_eq!(ls_spectrum_tensor(a, a, 100, &mut sq), LsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(ls_spectrum_to_json(sq, &mut s), LsStatus::Ok);
        let json = take(s);
        assert!(json.contains(r#""size":3"#) && json.contains(r#""size":1"#), "{json}");
        assert_eq!(ls_spectrum_stats(sq, &mut s), LsStatus::Ok);
        assert!(take(s).contains(r#""j":"1/2""#));
        ls_spectrum_free(sq);
        ls_spectrum_free(a);
        ls_spectrum_free(ptr::null_mut());
    }
}

#[test]
fn cap_and_parse_errors_map_to_codes() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(ls_spectrum_from_json(c("{").as_ptr(), &mut a), LsStatus::Parse);
        assert!(last_error().contains("line 1"));
        assert!(a.is_null());
        assert_eq!(ls_spectrum_from_json(ptr::null(), &mut a), LsStatus::InvalidArgument);
        assert_eq!(ls_spectrum_from_json(c(J12).as_ptr(), &mut a), LsStatus::Ok);
        assert!(ls_last_error().is_null());
        let mut out = ptr::null_mut();
        let mut big = ptr::null_mut();
        assert_eq!(ls_spectrum_tensor(a, a, 100, &mut big), LsStatus::Ok);
        assert_eq!(ls_spectrum_tensor(big, big, 1, &mut out), LsStatus::Cap);
        assert_eq!(ls_spectrum_tensor(ptr::null(), a, 1, &mut out), LsStatus::InvalidArgument);
        ls_spectrum_free(big);
        ls_spectrum_free(a);
    }
}

#[test]
fn groups_through_the_abi() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(ls_table_abelian([2u64, 2].as_ptr(), 2, &mut t), LsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(ls_kappa_complex(t, &mut s), LsStatus::Ok);
        assert!(take(s).contains(r#""kappa":"2/3""#));
        ls_table_free(t);

        assert_eq!(ls_table_builtin(c("Q8").as_ptr(), &mut t), LsStatus::Ok);
        assert_eq!(ls_kappa_complex(t, &mut s), LsStatus::Ok);
        assert!(take(s).contains(r#""kappa":"1""#));
        ls_table_free(t);

        let bad = r#"{"classes":[{"size":1,"order":1,"power_map":[0]},{"size":1,"order":2,"power_map":[0,1]}],
                      "chars":[{"dim":1,"values":[1,1]},{"dim":1,"values":[1,1]}]}"#;
        assert_eq!(ls_table_from_json(c(bad).as_ptr(), &mut t), LsStatus::Domain);

        let z3 = r#"{"order":3,"table":[[0,1,2],[1,2,0],[2,0,1]]}"#;
        assert_eq!(ls_kappa_modp(c(z3).as_ptr(), 3, &mut s), LsStatus::Ok);
        assert!(take(s).contains(r#""kappa":"2/3""#));
        assert_eq!(ls_kappa_modp(c(z3).as_ptr(), 2, &mut s), LsStatus::InvalidArgument);
    }
}

#[test]
fn measures_plans_integrals() {
    unsafe {
        let m = r#"{"free_rank":0,"atoms":[{"torsion":"0","free":[],"weight":"1/2"},{"torsion":"1/2","free":[],"weight":"1/2"}]}"#;
        let mut h = ptr::null_mut();
        assert_eq!(ls_measure_from_json(c(m).as_ptr(), &mut h), LsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(ls_measure_return_probability(h, 7, &mut s), LsStatus::Ok);
        assert_eq!(take(s), "1/2");
        ls_measure_free(h);

        assert_eq!(ls_plan(c("1/2").as_ptr(), c("1/10").as_ptr(), 1.0, &mut s), LsStatus::Ok);
        assert!(take(s).contains(r#""r":5"#));
        assert_eq!(ls_plan(c("2").as_ptr(), c("1/10").as_ptr(), 1.0, &mut s), LsStatus::InvalidArgument);

        let mut v = 0.0;
        assert_eq!(ls_integral(1, 0.0, std::f64::consts::TAU, &mut v), LsStatus::Ok);
        assert!((v - std::f64::consts::TAU).abs() < 1e-12);
        assert_eq!(ls_integral(1, f64::NAN, 0.0, &mut v), LsStatus::InvalidArgument);
        assert!(!CStr::from_ptr(ls_version()).to_bytes().is_empty());
    }
}

#[test]
fn header_lists_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/linsofic.h")).unwrap();
    for f in [
        "ls_last_error", "ls_version", "ls_string_free", "ls_spectrum_from_json", "ls_spectrum_free",
        "ls_spectrum_tensor", "ls_spectrum_to_json", "ls_spectrum_stats", "ls_measure_from_json",
        "ls_measure_free", "ls_measure_return_probability", "ls_table_from_json", "ls_table_builtin",
        "ls_table_abelian", "ls_table_free", "ls_kappa_complex", "ls_kappa_modp", "ls_plan", "ls_integral",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("LS_STATUS_BOUND_VIOLATION = 5"));
}

/// Compiles and runs a C program against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let target = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = target.join("liblinsofic_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("linsofic-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
