use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use twistjf_ffi::*;

fn table(genus: u32) -> *mut TjfTable {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tjf_table_builtin(genus, &mut t) }, TjfStatus::Ok);
    t
}

fn curve(t: *const TjfTable, spec: &str) -> *mut TjfCurve {
    let s = CString::new(spec).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { tjf_curve_parse(t, s.as_ptr(), &mut c) }, TjfStatus::Ok, "{spec}");
    c
}

fn last_error() -> String {
    let p = tjf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn ijf_through_handles() {
    let t = table(2);
    assert_eq!(unsafe { tjf_table_genus(t) }, 2);
    let cases = [
        ("C1", "C3", TjfIjfCase::Zero, 0),
        ("C2", "C3", TjfIjfCase::One, 1),
        ("Sep1", "C3", TjfIjfCase::Exact, 3),
        ("Sep1", "Sep1 @ [C3]", TjfIjfCase::AtLeast, 4),
    ];
    for (a, b, case_, value) in cases {
        let (ca, cb) = (curve(t, a), curve(t, b));
        let mut out = TjfIjf { case_: TjfIjfCase::Zero, value: 99 };
        assert_eq!(unsafe { tjf_ijf(t, ca, cb, 3, &mut out) }, TjfStatus::Ok);
        assert_eq!(out, TjfIjf { case_, value }, "{a} / {b}");
        unsafe {
            tjf_curve_free(ca);
            tjf_curve_free(cb);
        }
    }
    unsafe { tjf_table_free(t) };
}

#[test]
fn json_reports_are_owned_strings() {
    let t = table(1);
    let mut passed = 0;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { tjf_validate(t, &mut passed, &mut json) }, TjfStatus::Ok);
    assert_eq!(passed, 1);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"command\": \"validate\""));
    unsafe { tjf_string_free(json) };

    assert_eq!(unsafe { tjf_validate(t, &mut passed, ptr::null_mut()) }, TjfStatus::Ok);

    let (a, b) = (curve(t, "C1"), curve(t, "C2"));
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { tjf_pair_json(t, a, b, 2, &mut json) }, TjfStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
    assert!(text.contains("\"braid\": true"), "{text}");
    unsafe {
        tjf_string_free(json);
        tjf_curve_free(a);
        tjf_curve_free(b);
        tjf_table_free(t);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tjf_table_builtin(0, &mut t) }, TjfStatus::Genus);
    assert!(t.is_null());
    assert!(last_error().contains("genus"));

    let t = table(2);
    let bad = CString::new("Sep1 @ [C3").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { tjf_curve_parse(t, bad.as_ptr(), &mut c) }, TjfStatus::Parse);
    assert!(last_error().contains("column"));

    let delta = CString::new("Delta").unwrap();
    assert_eq!(unsafe { tjf_curve_parse(t, delta.as_ptr(), &mut c) }, TjfStatus::Parse);

    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { tjf_curve_parse(t, invalid.as_ptr().cast(), &mut c) }, TjfStatus::InvalidUtf8);

    assert_eq!(unsafe { tjf_curve_parse(ptr::null(), delta.as_ptr(), &mut c) }, TjfStatus::NullPointer);
    assert_eq!(unsafe { tjf_ijf(t, ptr::null(), ptr::null(), 3, ptr::null_mut()) }, TjfStatus::NullPointer);

    let a = curve(t, "C1");
    let mut out = TjfIjf { case_: TjfIjfCase::Zero, value: 0 };
    assert_eq!(unsafe { tjf_ijf(t, a, a, 0, &mut out) }, TjfStatus::Precondition);

    // a successful call clears the message
    assert_eq!(unsafe { tjf_ijf(t, a, a, 3, &mut out) }, TjfStatus::Ok);
    assert!(tjf_last_error().is_null());

    let g1 = table(1);
    let other = curve(g1, "C1");
    assert_eq!(unsafe { tjf_ijf(t, a, other, 3, &mut out) }, TjfStatus::Genus);
    unsafe {
        tjf_curve_free(a);
        tjf_curve_free(other);
        tjf_table_free(t);
        tjf_table_free(g1);
        tjf_table_free(ptr::null_mut());
        tjf_string_free(ptr::null_mut());
    }
}

#[test]
fn load_table_from_file() {
    let path = std::env::temp_dir().join(format!("tjf-ffi-{}.tbl", std::process::id()));
    std::fs::write(&path, twistjf::TwistTable::builtin_fixture(2).unwrap()).unwrap();
    let p = CString::new(path.to_str().unwrap()).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tjf_table_load(p.as_ptr(), &mut t) }, TjfStatus::Ok);
    assert_eq!(unsafe { tjf_table_genus(t) }, 2);
    unsafe { tjf_table_free(t) };
    std::fs::remove_file(&path).unwrap();

    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tjf_table_load(p.as_ptr(), &mut t) }, TjfStatus::Table);
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(tjf_version()) }.to_str().unwrap();
    assert_eq!(v, twistjf::VERSION);
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "twistjf.h"

int main(void) {
    TjfTable *t = NULL;
    TjfCurve *a = NULL, *b = NULL;
    TjfIjf v;
    if (tjf_table_builtin(2, &t) != TJF_STATUS_OK) return 1;
    if (tjf_curve_parse(t, "Sep1", &a) != TJF_STATUS_OK) return 2;
    if (tjf_curve_parse(t, "C3", &b) != TJF_STATUS_OK) return 3;
    if (tjf_ijf(t, a, b, 3, &v) != TJF_STATUS_OK) return 4;
    if (v.case_ != TJF_IJF_CASE_EXACT || v.value != 3) return 5;
    if (tjf_table_builtin(99, &t) != TJF_STATUS_GENUS) return 6;
    if (tjf_last_error() == NULL || strstr(tjf_last_error(), "99") == NULL) return 7;
    tjf_curve_free(a);
    tjf_curve_free(b);
    printf("ok %s\n", tjf_version());
    return 0;
}
"#;

// Compiles a C program against the generated header and static library.
#[test]
fn header_compiles_and_links() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("cc not found, skipping");
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libtwistjf_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = work.join("tjf_smoke.c");
    let exe = work.join("tjf_smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
