use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use morava_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { morava_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(morava_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn honda_law_round_trip() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { morava_honda(3, 1, 6, &mut f) }, MoravaStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { morava_fgl_render(f, &mut s) }, MoravaStatus::Ok);
    assert_eq!(take(s), "x + y - v*x^2*y - v*x*y^2 + v^2*x^4*y + v^2*x*y^4");
    let (mut passed, mut total) = (0, 0);
    assert_eq!(unsafe { morava_fgl_verify(f, &mut passed, &mut total) }, MoravaStatus::Ok);
    assert!(total > 0 && passed == total);
    unsafe { morava_fgl_free(f) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { morava_honda(4, 1, 6, &mut f) }, MoravaStatus::InvalidArgument);
    assert!(f.is_null());
    assert!(last_error().contains("odd prime"));
    assert_eq!(unsafe { morava_honda(3, 1, 6, ptr::null_mut()) }, MoravaStatus::NullPointer);

    let bad = CString::new("prime 3\nheight 2\ngen e deg\n").unwrap();
    let mut a = ptr::null_mut();
    assert_ne!(unsafe { morava_algebra_parse(bad.as_ptr(), &mut a) }, MoravaStatus::Ok);
    assert!(!last_error().is_empty());
}

#[test]
fn series_arithmetic() {
    let text = CString::new("prime 3\nheight 2\ngen eps deg -4\nrel eps^2 -> 0\n").unwrap();
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { morava_algebra_parse(text.as_ptr(), &mut a) }, MoravaStatus::Ok);
    let mut norm = ptr::null_mut();
    let e = CString::new("eps*eps + 2*eps").unwrap();
    assert_eq!(unsafe { morava_algebra_normalize(a, e.as_ptr(), &mut norm) }, MoravaStatus::Ok);
    assert_eq!(take(norm), "-eps");

    let vars = CString::new("x").unwrap();
    let f_text = CString::new("x + eps*x^3").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { morava_series_parse(a, vars.as_ptr(), 10, f_text.as_ptr(), &mut f) }, MoravaStatus::Ok);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { morava_series_inverse(f, &mut g) }, MoravaStatus::Ok);
    let mut fg = ptr::null_mut();
    let subs = [g as *const MoravaSeries];
    assert_eq!(unsafe { morava_series_compose(f, subs.as_ptr(), 1, &mut fg) }, MoravaStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { morava_series_render(fg, &mut s) }, MoravaStatus::Ok);
    assert_eq!(take(s), "x");

    // inhomogeneous input
    let bad = CString::new("x + x^2").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { morava_series_parse(a, vars.as_ptr(), 10, bad.as_ptr(), &mut h) }, MoravaStatus::Math);
    unsafe {
        morava_series_free(f);
        morava_series_free(g);
        morava_series_free(fg);
        morava_algebra_free(a);
    }
}

#[test]
fn hopf_build_and_verify() {
    let which = CString::new("C").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { morava_hopf_build(which.as_ptr(), 3, 2, 2, &mut h) }, MoravaStatus::Ok);
    let (mut passed, mut total) = (0, 0);
    assert_eq!(unsafe { morava_hopf_verify(h, -1, &mut passed, &mut total) }, MoravaStatus::Ok);
    assert!(total > 0 && passed == total);
    let mut j = ptr::null_mut();
    assert_eq!(unsafe { morava_hopf_to_json(h, &mut j) }, MoravaStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
    assert_eq!(v["builder"], "C");
    unsafe { morava_hopf_free(h) };

    let bogus = CString::new("D").unwrap();
    assert_ne!(unsafe { morava_hopf_build(bogus.as_ptr(), 3, 2, 2, &mut h) }, MoravaStatus::Ok);
}

#[test]
fn cli_entry_point() {
    let args: Vec<CString> = ["--format", "json", "--no-timing", "honda", "--p", "3", "--n", "1", "-N", "6"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let argv: Vec<*const c_char> = args.iter().map(|s| s.as_ptr()).collect();
    let (mut code, mut out) = (-1, ptr::null_mut());
    assert_eq!(unsafe { morava_cli(argv.len(), argv.as_ptr(), &mut code, &mut out) }, MoravaStatus::Ok);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["command"], "honda");
}

/// Directory holding the library artifacts of this build.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let Some(cc) = ["cc", "clang", "gcc"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let lib = artifact_dir().join("libmorava_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "morava.h"

int main(void) {
    MoravaFgl *f = NULL;
    if (morava_honda(3, 1, 6, &f) != MORAVA_STATUS_OK) return 1;
    char *s = NULL;
    if (morava_fgl_render(f, &s) != MORAVA_STATUS_OK) return 2;
    int ok = strcmp(s, "x + y - v*x^2*y - v*x*y^2 + v^2*x^4*y + v^2*x*y^4") == 0;
    morava_string_free(s);
    morava_fgl_free(f);
    if (morava_honda(9, 1, 6, &f) != MORAVA_STATUS_INVALID_ARGUMENT) return 3;
    if (strlen(morava_last_error()) == 0) return 4;
    puts(ok ? "ok" : "mismatch");
    return ok ? 0 : 5;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let st = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success(), "C compile/link failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
