use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use orbifunctor_ffi::*;

fn last_error() -> String {
    let p = of_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    of_string_free(s);
    out
}

fn fixture(name: &str) -> CString {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/manifests").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn cokernel(rows: usize, cols: usize, entries: &[i64]) -> *mut OfGroup {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { of_group_cokernel(rows, cols, entries.as_ptr(), &mut g) }, OfStatus::Ok);
    g
}

#[test]
fn cokernels_come_out_in_canonical_form() {
    let g = cokernel(2, 2, &[2, 0, 0, 3]);
    unsafe {
        assert_eq!(of_group_rank(g), 0);
        assert_eq!(of_group_torsion_len(g), 1);
        let mut d = 0;
        assert_eq!(of_group_torsion_at(g, 0, &mut d), OfStatus::Ok);
        assert_eq!(d, 6);
        assert_eq!(of_group_torsion_at(g, 1, &mut d), OfStatus::OutOfRange);
        let mut s = ptr::null_mut();
        assert_eq!(of_group_describe(g, &mut s), OfStatus::Ok);
        assert_eq!(take(s), "Z/6");
        of_group_free(g);
    }
    let z2 = cokernel(2, 1, &[0, 0]);
    unsafe {
        assert_eq!(of_group_rank(z2), 2);
        of_group_free(z2);
    }
}

#[test]
fn hom_and_tensor_of_cyclic_groups() {
    let a = cokernel(1, 1, &[4]);
    let b = cokernel(1, 1, &[6]);
    for tensor in [false, true] {
        let mut c = ptr::null_mut();
        unsafe {
            assert_eq!(of_group_combine(a, b, tensor, &mut c), OfStatus::Ok);
            let mut d = 0;
            assert_eq!(of_group_torsion_at(c, 0, &mut d), OfStatus::Ok);
            assert_eq!(d, 2);
            of_group_free(c);
        }
    }
    unsafe {
        of_group_free(a);
        of_group_free(b);
    }
}

#[test]
fn running_commands_matches_the_cli() {
    let text = fixture("desk.json");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { of_manifest_parse(text.as_ptr(), &mut m) }, OfStatus::Ok);
    let cmd = CString::new("verify-theorem").unwrap();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(of_run(cmd.as_ptr(), m, ptr::null(), &mut r), OfStatus::Ok);
        assert_eq!(of_report_passes(r), 1);
        assert!(of_report_verdict_count(r) > 4);
        let mut s = ptr::null_mut();
        assert_eq!(of_report_json(r, &mut s), OfStatus::Ok);
        let json = take(s);
        let expected = orbifunctor::cli::run_text(
            "verify-theorem".parse().unwrap(),
            Some(text.to_str().unwrap()),
            &orbifunctor::cli::Options::default(),
        )
        .unwrap()
        .to_json();
        assert_eq!(json, expected);
        assert_eq!(of_report_table(r, &mut s), OfStatus::Ok);
        assert!(take(s).contains("verdicts pass"));
        of_report_free(r);
        of_manifest_free(m);
    }
}

#[test]
fn options_reach_the_command() {
    let cmd = CString::new("demo-tor-probe").unwrap();
    let opts = OfOptions { has_truncation: true, truncation: 4, has_prime: true, prime: 3, ..OfOptions::default() };
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(of_run(cmd.as_ptr(), ptr::null(), &opts, &mut r), OfStatus::Ok);
        assert_eq!(of_report_passes(r), 1);
        let mut s = ptr::null_mut();
        of_report_json(r, &mut s);
        let json = take(s);
        assert!(json.contains("order 3^"), "{json}");
        assert!(!json.contains("delta_5"), "{json}");
        of_report_free(r);
    }
}

#[test]
fn failures_set_status_and_message() {
    let mut m = ptr::null_mut();
    let bad = CString::new(r#"{ "version": "1", "bogus": {} }"#).unwrap();
    assert_eq!(unsafe { of_manifest_parse(bad.as_ptr(), &mut m) }, OfStatus::InvalidInput);
    assert!(m.is_null());
    assert!(last_error().contains("bogus"));

    assert_eq!(unsafe { of_manifest_parse(ptr::null(), &mut m) }, OfStatus::NullPointer);
    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { of_manifest_parse(invalid.as_ptr().cast(), &mut m) }, OfStatus::InvalidUtf8);

    let cmd = CString::new("validate").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { of_run(cmd.as_ptr(), ptr::null(), ptr::null(), &mut r) }, OfStatus::InvalidInput);
    let cmd = CString::new("frobnicate").unwrap();
    assert_eq!(unsafe { of_run(cmd.as_ptr(), ptr::null(), ptr::null(), &mut r) }, OfStatus::InvalidInput);
    assert!(last_error().contains("frobnicate"));

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { of_group_cokernel(usize::MAX, 2, ptr::null(), &mut g) }, OfStatus::OutOfRange);
    unsafe {
        assert_eq!(of_report_passes(ptr::null()), -1);
        of_report_free(ptr::null_mut());
        of_manifest_free(ptr::null_mut());
        of_group_free(ptr::null_mut());
        of_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(of_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/orbifunctor.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for cc in ["cc", "clang"] {
        let Ok(out) = Command::new(cc).args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(dir.join("include/orbifunctor.h")).output()
        else {
            continue;
        };
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        return;
    }
    panic!("no C compiler found to check the header");
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("liborbifunctor_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out_dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let bin = out_dir.join("orbifunctor_smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stdout));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "Z/6");
}
