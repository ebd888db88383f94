use std::ffi::{CStr, CString};
use std::ptr;

use wnetkat_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    wnk_string_free(s);
    out
}

#[test]
fn schema_round_trip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(wnk_schema_parse(c("fields { a: [0, 1]; b: [x, y, z]; }").as_ptr(), &mut s), WnkStatus::Ok);
        assert_eq!(wnk_schema_packet_count(s), 6);
        wnk_schema_free(s);
        assert_eq!(wnk_schema_packet_count(ptr::null()), 0);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(wnk_schema_parse(c("fields { a: [").as_ptr(), &mut s), WnkStatus::Parse);
        assert!(s.is_null());
        assert!(!wnk_last_error().is_null());
        assert_eq!(wnk_schema_parse(ptr::null(), &mut s), WnkStatus::NullPointer);
        let mut a = ptr::null_mut();
        let st = wnk_compile_policy(ptr::null(), c("fields { f: [0]; } dup").as_ptr(), c("nope").as_ptr(), &mut a);
        assert_eq!(st, WnkStatus::Algebra);
        let st = wnk_compile_policy(ptr::null(), c("fields { f: [0]; } dup").as_ptr(), c("nat-inf").as_ptr(), &mut a);
        assert_eq!(st, WnkStatus::Ok);
        let mut holds = 0;
        let st = wnk_check(a, WnkQuery::Safe, c("1").as_ptr(), &mut holds, ptr::null_mut());
        assert_eq!(st, WnkStatus::Capability);
        wnk_automaton_free(a);
    }
}

#[test]
fn weighted_loop_eval() {
    unsafe {
        let mut a = ptr::null_mut();
        let p = c("fields { f: [0]; } (⟨3⟩⊙ dup)*");
        assert_eq!(wnk_compile_policy(ptr::null(), p.as_ptr(), c("nat-inf").as_ptr(), &mut a), WnkStatus::Ok);
        assert_eq!(wnk_automaton_state_count(a), 3);
        let mut w = ptr::null_mut();
        let st = wnk_eval(a, c("f=0").as_ptr(), c("f=0 :: f=0 :: f=0").as_ptr(), &mut w);
        assert_eq!(st, WnkStatus::Ok);
        assert_eq!(take(w), "9");
        wnk_automaton_free(a);
    }
}

#[test]
fn bundled_topology_queries() {
    unsafe {
        let topo = c(wnetkat::cli::assets::ABILENE);
        let mut a = ptr::null_mut();
        let st = wnk_compile_topology(topo.as_ptr(), c("band").as_ptr(), ptr::null(), c("bottleneck").as_ptr(), &mut a);
        assert_eq!(st, WnkStatus::Ok);
        let (mut holds, mut rep) = (0, ptr::null_mut());
        assert_eq!(wnk_check(a, WnkQuery::Reach, c("1000").as_ptr(), &mut holds, &mut rep), WnkStatus::Ok);
        assert_eq!(holds, 1);
        let v: serde_json::Value = serde_json::from_str(&take(rep)).unwrap();
        assert_eq!(v["witness"]["weight"], "1250");
        assert_eq!(v["witness"]["tunnels"], serde_json::json!([1, 3, 5]));
        wnk_automaton_free(a);

        let st = wnk_compile_topology(
            topo.as_ptr(),
            c("band").as_ptr(),
            c("missing").as_ptr(),
            c("bottleneck").as_ptr(),
            &mut a,
        );
        assert_eq!(st, WnkStatus::Invalid);
    }
}

/// Builds and runs a small C program against the static library and the
/// generated header.
#[test]
fn c_smoke_test() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = root.join("../../target/debug");
    let lib = target.join("libwnetkat_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || std::process::Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = std::process::Command::new(&cc)
        .arg(root.join("tests/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "states=3 weight=27");
}
