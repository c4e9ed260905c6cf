use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use nearly_kahler_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    nk_string_free(p);
    s
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

#[test]
fn emitted_model_checks_through_handles() {
    unsafe {
        let mut space = ptr::null_mut();
        assert_eq!(nk_space_emit(cstr("s3xs3").as_ptr(), &mut space), NkStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(nk_space_dimension(space, &mut dim), NkStatus::Ok);
        assert_eq!(dim, 6);

        let mut opts = nk_options_default();
        opts.samples = 5;
        let mut report = ptr::null_mut();
        assert_eq!(nk_check(space, &opts, 1, &mut report), NkStatus::Ok);
        let mut passed = 0;
        assert_eq!(nk_report_passed(report, &mut passed), NkStatus::Ok);
        assert_eq!(passed, 1);
        let mut n = 0usize;
        nk_report_check_count(report, &mut n);
        assert!(n >= 4);

        let mut json = ptr::null_mut();
        assert_eq!(nk_report_json(report, &mut json), NkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["command"], "check");
        nk_report_free(report);
        nk_space_free(space);
    }
}

#[test]
fn space_json_round_trips() {
    unsafe {
        let text = std::fs::read_to_string(fixture("flag.json")).unwrap();
        let mut space = ptr::null_mut();
        assert_eq!(nk_space_from_json(cstr(&text).as_ptr(), &mut space), NkStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(nk_space_to_json(space, &mut out), NkStatus::Ok);
        let back: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        let orig: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, orig);
        nk_space_free(space);
    }
}

#[test]
fn failing_structure_reports_math_failure() {
    unsafe {
        let mut space = ptr::null_mut();
        assert_eq!(nk_space_emit(cstr("s3xs3-112").as_ptr(), &mut space), NkStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(nk_check(space, ptr::null(), 0, &mut report), NkStatus::Ok);
        let mut passed = 1;
        nk_report_passed(report, &mut passed);
        assert_eq!(passed, 0);
        let mut text = ptr::null_mut();
        nk_report_text(report, &mut text);
        assert!(take_string(text).contains("psi-stable"));
        nk_report_free(report);
        nk_space_free(space);
    }
}

#[test]
fn errors_and_null_pointers() {
    unsafe {
        let mut space = ptr::null_mut();
        let st = nk_space_from_json(cstr("{\n \"dimension\": 3,\n nope }").as_ptr(), &mut space);
        assert_eq!(st, NkStatus::InvalidInput);
        assert!(space.is_null());
        let msg = CStr::from_ptr(nk_last_error()).to_str().unwrap();
        assert!(msg.contains("line 3"), "{msg}");

        assert_eq!(nk_space_from_json(ptr::null(), &mut space), NkStatus::NullPointer);
        assert_eq!(nk_space_dimension(ptr::null(), ptr::null_mut()), NkStatus::NullPointer);

        let mut report = ptr::null_mut();
        assert_eq!(nk_verify(cstr("torus").as_ptr(), ptr::null(), &mut report), NkStatus::InvalidInput);
        assert!(report.is_null());

        let bad = [0xffu8, 0];
        assert_eq!(nk_verify(bad.as_ptr().cast(), ptr::null(), &mut report), NkStatus::Utf8);

        nk_space_free(ptr::null_mut());
        nk_report_free(ptr::null_mut());
        nk_string_free(ptr::null_mut());
    }
}

#[test]
fn table_and_verify() {
    unsafe {
        let mut report = ptr::null_mut();
        assert_eq!(nk_table(&mut report), NkStatus::Ok);
        let mut n = 0usize;
        nk_report_check_count(report, &mut n);
        assert_eq!(n, 8);
        nk_report_free(report);

        let mut opts = nk_options_default();
        opts.samples = 10;
        assert_eq!(nk_verify(cstr("s6").as_ptr(), &opts, &mut report), NkStatus::Ok);
        let mut passed = 0;
        nk_report_passed(report, &mut passed);
        assert_eq!(passed, 1);
        nk_report_free(report);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nearly_kahler.h")).unwrap();
    for name in [
        "typedef struct NkSpace NkSpace;",
        "typedef struct NkReport NkReport;",
        "NK_STATUS_MATH_FAIL = 1",
        "nk_space_from_json(",
        "nk_check(",
        "nk_verify(",
        "nk_report_json(",
        "nk_report_free(",
        "nk_last_error(",
        "nk_string_free(",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

/// Compiles the C example against the generated header and the static
/// library, then runs it on the shipped fixtures.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libnearly_kahler_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("nk_check_c");
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("examples/check.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let run = |arg: Option<PathBuf>| {
        let mut c = Command::new(&out);
        if let Some(a) = arg {
            c.arg(a);
        }
        c.output().unwrap()
    };
    let ok = run(None);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("check: PASS"));
    assert_eq!(run(Some(fixture("cp3.json"))).status.code(), Some(0));
    assert_eq!(run(Some(fixture("s3xs3_lambda_112.json"))).status.code(), Some(1));
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}
