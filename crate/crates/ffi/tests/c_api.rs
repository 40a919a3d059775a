use std::ffi::{CStr, CString};
use std::ptr;

use decalage_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = decalage_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const DOC: &str = r#"{"complex": {"degrees": [0, 1], "ranks": [1, 1], "differentials": {"0": [[2]]}},
                      "filtrations": {"F": {"steps": {"0": {"0": "all", "1": "all"}, "1": {"1": "all"}}}}}"#;

#[test]
fn workspace_round_trip() {
    unsafe {
        let mut ws = ptr::null_mut();
        assert_eq!(decalage_workspace_from_json(c(DOC).as_ptr(), &mut ws), DecalageStatus::Ok);
        let mut n = 0;
        assert_eq!(decalage_workspace_filtration_count(ws, &mut n), DecalageStatus::Ok);
        assert_eq!(n, 1);
        let (mut free, mut torsion) = (9, 9);
        assert_eq!(decalage_cohomology(ws, 1, DecalageCoefficients::Int, &mut free, &mut torsion), DecalageStatus::Ok);
        assert_eq!((free, torsion), (0, 1));
        assert_eq!(decalage_cohomology(ws, 1, DecalageCoefficients::Rat, &mut free, &mut torsion), DecalageStatus::Ok);
        assert_eq!((free, torsion), (0, 0));

        let mut pass = false;
        let mut report = ptr::null_mut();
        let st = decalage_check(ws, c("lmlu").as_ptr(), DecalageCoefficients::Int, &mut pass, &mut report);
        assert_eq!(st, DecalageStatus::Ok);
        assert!(pass);
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        decalage_string_free(report);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["result"]["check"], "lmlu");
        assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
        decalage_workspace_free(ws);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut ws = ptr::null_mut();
        assert_eq!(decalage_workspace_from_json(ptr::null(), &mut ws), DecalageStatus::NullArgument);
        assert!(ws.is_null());
        assert_eq!(decalage_workspace_from_json(c("{").as_ptr(), &mut ws), DecalageStatus::Parse);
        let broken = r#"{"degrees": [0, 2], "ranks": [1, 1, 1], "differentials": {"0": [[1]], "1": [[1]]}}"#;
        assert_eq!(decalage_workspace_from_json(c(broken).as_ptr(), &mut ws), DecalageStatus::InvalidInput);
        assert!(last_error().contains("degree 0"));

        assert_eq!(decalage_workspace_from_json(c(DOC).as_ptr(), &mut ws), DecalageStatus::Ok);
        let mut pass = true;
        let st = decalage_check(ws, c("e1-triples").as_ptr(), DecalageCoefficients::Int, &mut pass, ptr::null_mut());
        assert_eq!(st, DecalageStatus::Precondition);
        let st = decalage_check(ws, c("bogus").as_ptr(), DecalageCoefficients::Int, &mut pass, ptr::null_mut());
        assert_eq!(st, DecalageStatus::Parse);
        decalage_workspace_free(ws);
        decalage_workspace_free(ptr::null_mut());
        decalage_string_free(ptr::null_mut());
    }
}

#[test]
fn simplicial_workspace_and_scenarios() {
    unsafe {
        let mut ws = ptr::null_mut();
        let st = decalage_workspace_from_simplicial(
            c("0 1\n1 2\n0 2\n").as_ptr(),
            c(r#"{"steps": [["0"]]}"#).as_ptr(),
            ptr::null(),
            &mut ws,
        );
        assert_eq!(st, DecalageStatus::Ok);
        let mut pass = false;
        let st = decalage_check(ws, c("e1-triples").as_ptr(), DecalageCoefficients::Int, &mut pass, ptr::null_mut());
        assert_eq!(st, DecalageStatus::Ok);
        assert!(pass);
        decalage_workspace_free(ws);

        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/affine-curve");
        let mut report = ptr::null_mut();
        assert_eq!(decalage_run_scenario(c(dir).as_ptr(), DecalageCoefficients::Int, &mut pass, &mut report), DecalageStatus::Ok);
        assert!(pass);
        decalage_string_free(report);
        assert!(!CStr::from_ptr(decalage_version()).to_bytes().is_empty());
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/decalage.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["decalage_workspace_from_json", "decalage_check", "decalage_run_scenario", "decalage_last_error"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).output() else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
