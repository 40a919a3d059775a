use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_decalage"));
    c.env_remove("DECALAGE_OUT");
    c
}

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn scenario_exit_codes() {
    let dir = scenarios();
    let empty = run(&["run", dir.join("empty").to_str().unwrap()]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(report(&empty)["result"][0]["checks"].as_array().unwrap().len(), 0);

    let affine = run(&["run", dir.join("affine-curve").to_str().unwrap()]);
    assert_eq!(affine.status.code(), Some(0), "{}", String::from_utf8_lossy(&affine.stdout));
    let r = report(&affine);
    let checks = r["result"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check"] == "pdec" && c["pass"] == true));

    let broken = run(&["run", dir.join("broken").to_str().unwrap()]);
    assert_eq!(broken.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&broken.stderr).contains("degree 0"));
}

#[test]
fn all_bundles_pass_in_parallel() {
    let dir = scenarios();
    let names = ["empty", "affine-curve", "sphere", "leray-torus"];
    let paths: Vec<String> = names.iter().map(|n| dir.join(n).to_string_lossy().into_owned()).collect();
    let mut args = vec!["--jobs", "2", "run"];
    args.extend(paths.iter().map(String::as_str));
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "nonsense", "x.json"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let space = scenarios().join("affine-curve/space.txt");
    let a = run(&["check", "lmlu", space.to_str().unwrap()]);
    let b = run(&["check", "lmlu", space.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn ss_page_one_on_the_octahedron() {
    let oct = scenarios().join("sphere/octahedron.txt");
    let o = run(&["ss", oct.to_str().unwrap(), "--page", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let ranks: Vec<&str> = text
        .lines()
        .skip(1)
        .take_while(|l| !l.is_empty())
        .filter_map(|l| l.split('\t').nth(3))
        .filter(|r| *r != "0")
        .collect();
    assert_eq!(ranks, ["6", "12", "8"]);
}

#[test]
fn decale_of_trivial_filtration_shifts_steps() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = tmp.path().join("doc.json");
    std::fs::write(
        &doc,
        r#"{"complex": {"degrees": [0, 1], "ranks": [1, 1], "differentials": {"0": [[2]]}},
            "filtrations": {"F": {"steps": {"0": {"0": "all", "1": "all"}}}}}"#,
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = bin().args(["decale", doc.to_str().unwrap()]).env("DECALAGE_OUT", &out).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    // d is injective, so Dec F^0 C^0 = ker d = 0 and the single jump moves to -1
    let dec = &r["result"]["filtrations"]["Dec F"];
    assert_eq!(dec["type"], serde_json::json!([-1, -1]));
    assert!(out.join("decale.json").exists());
}

#[test]
fn lmlu_on_seed_42_corpus() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["random-corpus", "--seed", "42", "--count", "5", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for i in 0..5 {
        let f = tmp.path().join(format!("corpus-{i:04}.json"));
        let c = run(&["check", "lmlu", f.to_str().unwrap()]);
        assert_eq!(c.status.code(), Some(0));
    }
    let again = run(&["random-corpus", "--seed", "42", "--count", "5"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn leray_and_flag_commands() {
    let d = scenarios().join("leray-torus");
    let p = |n: &str| d.join(n).to_string_lossy().into_owned();
    let o = run(&["leray", &p("torus.txt"), "--target", &p("circle.txt"), "--map", &p("map.json"), "--flag", &p("flag.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["flag_length"], 1);

    let a = scenarios().join("affine-curve");
    let q = |n: &str| a.join(n).to_string_lossy().into_owned();
    let f = run(&["flag-f", &q("space.txt"), "--flag", &q("flag.json")]);
    assert_eq!(f.status.code(), Some(0));
    let g = run(&["flag-g", &q("space.txt"), "--flag", &q("flag.json")]);
    assert_eq!(report(&g)["result"]["graded_cohomology"]["1"]["1"], "Z");
    let triples = run(&["check", "e1-triples", &q("space.txt"), "--flag", &q("flag.json")]);
    assert_eq!(triples.status.code(), Some(0));
}

#[test]
fn rational_coefficients_kill_torsion() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = tmp.path().join("doc.json");
    std::fs::write(&doc, r#"{"degrees": [0, 1], "ranks": [1, 1], "differentials": {"0": [[2]]}}"#).unwrap();
    let z = report(&run(&["cohomology", doc.to_str().unwrap()]));
    assert_eq!(z["result"]["degrees"]["1"], "Z/2");
    let q = report(&run(&["--coefficients", "rat", "cohomology", doc.to_str().unwrap()]));
    assert_eq!(q["result"]["degrees"]["1"], "0");
}

#[test]
fn validate_reports_failing_degree() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = tmp.path().join("bad.json");
    std::fs::write(&doc, r#"{"degrees": [0, 2], "ranks": [1, 1, 1], "differentials": {"0": [[1]], "1": [[1]]}}"#).unwrap();
    let o = run(&["validate", doc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["result"]["violations"][0]["degree"], 0);
}
