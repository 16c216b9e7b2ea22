//! End-to-end tests of the `qteich` binary: exit codes, report schema,
//! agreement with the library, and byte-stable tabular output.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use qteich::coeff::builtin_coefficient_chain;
use qteich::homology::{
    reduced_intertwiner, reduced_quantum_trace, torus_a_basis, transvection, PolarizationSpec,
};
use qteich::linop::{CyclicOperator, StateSpace};
use qteich::rep::{intertwiner, quantum_trace, Realization};
use qteich::root::RootData;
use qteich::surface::{builtin_mapping_class, builtin_surface, puncture_cycles};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qteich"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("qteich-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn even_order_is_a_usage_error() {
    let out = run(&["verify", "--suite", "groupoid", "--N", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("even"), "stderr: {err}");
}

#[test]
fn unknown_suite_and_surface_and_class_are_usage_errors() {
    assert_eq!(
        run(&["verify", "--suite", "bogus", "--N", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["decompose", "--N", "3", "--surface", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["trace", "--N", "3", "--mapclass", "bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_dilog_reports_schema_and_passes() {
    let out = run(&["verify", "--suite", "dilog", "--N", "3", "--samples", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["pass"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_remaining_suites_pass_at_small_order() {
    for suite in ["groupoid", "cfalg", "homology"] {
        let out = run(&["verify", "--suite", suite, "--N", "3", "--samples", "3"]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
        assert_eq!(json_of(&out)["pass"], true, "suite {suite}");
    }
}

#[test]
fn trace_matches_the_library() {
    let rd = RootData::new(5, 1e-9).unwrap();
    let spec = builtin_mapping_class("Ta").unwrap();
    let chain = builtin_coefficient_chain(&rd, "Ta").unwrap();
    let v = intertwiner(&rd, &spec, &chain, Realization::Standard).unwrap();
    let expect = quantum_trace(&v);

    let out = run(&["trace", "--N", "5", "--mapclass", "Ta"]);
    assert_eq!(out.status.code(), Some(0));
    let got = json_of(&out)["z_n"].as_f64().unwrap();
    assert!((got - expect).abs() <= 1e-12, "{got} vs {expect}");
}

#[test]
fn reduced_trace_matches_the_library() {
    let rd = RootData::new(5, 1e-9).unwrap();
    let torus = builtin_surface("torus1").unwrap();
    let space = StateSpace::new(&rd, &[0, 1]);
    let spec = builtin_mapping_class("Tb_inv").unwrap();
    let chain = builtin_coefficient_chain(&rd, "Tb_inv").unwrap();
    let v = intertwiner(&rd, &spec, &chain, Realization::Standard).unwrap();
    let mut framing = CyclicOperator::identity(&space);
    for (track, sign) in &spec.transvections {
        let path = &spec.homology_tracks[track][0];
        framing = framing.mul(
            &transvection(&rd, &space, &torus, path, *sign, Realization::Standard).unwrap(),
        );
    }
    let basis = torus_a_basis(&rd, 2).unwrap();
    let r = reduced_intertwiner(&rd, &v, &basis, Some(&framing)).unwrap();
    let expect = reduced_quantum_trace(&r);

    let out = run(&[
        "reduced-trace",
        "--N",
        "5",
        "--mapclass",
        "Tb_inv",
        "--lagrangian",
        "a",
        "--lambda",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let got = json_of(&out)["zbar_n"].as_f64().unwrap();
    assert!((got - expect).abs() <= 1e-12, "{got} vs {expect}");
}

#[test]
fn unsupported_lagrangian_is_a_usage_error() {
    let out = run(&[
        "reduced-trace",
        "--N",
        "5",
        "--lagrangian",
        "b",
        "--lambda",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coefficients_load_from_a_file() {
    let rd = RootData::new(5, 1e-9).unwrap();
    let chain = builtin_coefficient_chain(&rd, "Ta").unwrap();
    let path = scratch("coeffs.json");
    std::fs::write(&path, chain[0].to_json().to_string()).unwrap();

    let auto = run(&["trace", "--N", "5", "--mapclass", "Ta"]);
    let from_file = run(&[
        "trace",
        "--N",
        "5",
        "--mapclass",
        "Ta",
        "--coeffs",
        path.to_str().unwrap(),
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(from_file.status.code(), Some(0));
    let a = json_of(&auto)["z_n"].as_f64().unwrap();
    let b = json_of(&from_file)["z_n"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
}

#[test]
fn missing_coefficient_file_is_a_usage_error() {
    let out = run(&[
        "trace",
        "--N",
        "5",
        "--coeffs",
        "/nonexistent/coeffs.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pentagon_passes_and_reports() {
    let out = run(&["pentagon", "--N", "3", "--samples", "4", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["pass"], true);
}

#[test]
fn decompose_sweeps_the_canonical_cycle() {
    let out = run(&["decompose", "--N", "3", "--surface", "sphere3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["cycle"], "puncture");
    for block in report["blocks"].as_array().unwrap() {
        assert_eq!(block["dim"], 3);
    }
}

#[test]
fn decompose_accepts_a_polarization_file() {
    let cycles = puncture_cycles(&builtin_surface("sphere3").unwrap());
    let spec = PolarizationSpec {
        paths: BTreeMap::from([
            ("l1".to_string(), cycles[0].clone()),
            ("l2".to_string(), cycles[1].clone()),
        ]),
        lambda: BTreeMap::from([("l1".to_string(), 0), ("l2".to_string(), 1)]),
    };
    let path = scratch("polarization.json");
    std::fs::write(&path, spec.to_json().to_string()).unwrap();
    let out = run(&[
        "decompose",
        "--N",
        "3",
        "--surface",
        "sphere3",
        "--polarization",
        path.to_str().unwrap(),
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["dim"], 1);
}

#[test]
fn uqsl2_passes_and_rejects_bad_numbers() {
    let out = run(&[
        "uqsl2", "--N", "3", "--r", "1.1,0.2", "--s", "0.9,-0.1", "--lambda", "0.7,0.4",
        "--weight", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["pass"], true);

    let bad = run(&["uqsl2", "--N", "3", "--r", "abc", "--s", "1", "--lambda", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn shape_check_passes_for_the_twist_word() {
    let out = run(&["shape-check", "--N", "5", "--mapclass", "word:Ta,Tb_inv"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["pass"], true);
    assert!(!report["tetrahedra"].as_array().unwrap().is_empty());
    for lifetime in report["lifetimes"].as_array().unwrap() {
        assert_eq!(lifetime["complete"], true);
    }
}

#[test]
fn trace_table_is_byte_stable() {
    let first = run(&["trace-table", "--N", "3"]);
    let second = run(&["trace-table", "--N", "3"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,mapclass,Z_N,lambda,Zbar_N");
    assert_eq!(lines.len(), 7);
}

#[test]
fn reports_write_to_a_file() {
    let path = scratch("report.json");
    let out = run(&[
        "trace",
        "--N",
        "3",
        "--mapclass",
        "Tb_inv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "trace");
}
