//! End-to-end runs of the `eprod` binary.

use std::process::{Command, Output};

use eprod_cli::config::RunConfig;
use eprod_cli::compute;
use eprod_core::{Complex, Real};
use serde_json::Value;

fn eprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eprod"))
        .args(args)
        .env_remove("EPROD_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value) -> f64 {
    v.as_str().expect("decimal string").parse().expect("decimal")
}

#[test]
fn summable_pairing_exits_zero() {
    let out = eprod(&["compute", "exp(1)", "delta"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "AbelSummable");
    assert!((num(&v["value"]["re"]) - 1.0).abs() < 1e-15);
    assert!(!v["diagnostics"]["abel_trace"].as_array().unwrap().is_empty());
}

#[test]
fn inconclusive_pairing_exits_three() {
    let out = eprod(&["compute", "exp(5)", "delta"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "Inconclusive");
}

#[test]
fn parse_errors_exit_one_with_json_on_stderr() {
    let out = eprod(&["compute", "2*x^2 + foo", "delta"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let e: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(e["error"], "unknown_symbol");
    assert_eq!(e["symbol"], "foo");
    assert_eq!(e["position"], 8);

    let out = eprod(&["compute", "delta", "delta", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(e["error"], "usage");
}

#[test]
fn delta_against_delta_diverges_with_raabe_one_half() {
    let out = eprod(&["compute", "delta", "delta"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "Divergent");
    assert_eq!(v["value"], Value::Null);
    assert!((num(&v["diagnostics"]["raabe_estimate"]) - 0.5).abs() < 0.05);
}

#[test]
fn biorthogonal_pair_sums_to_one() {
    let out = eprod(&["compute", "phi(2)", "psi(2)", "--terms", "400"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["max_terms"], 400);
    assert!((num(&v["value"]["re"]) - 1.0).abs() < 1e-12);
    assert!(num(&v["value"]["im"]).abs() < 1e-12);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let strip = |out: Output| {
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v.to_string()
    };
    let args = ["compute", "cos(1/2)", "delta", "--digits", "40"];
    assert_eq!(strip(eprod(&args)), strip(eprod(&args)));
    let sweep = ["sweep", "--left", "phi", "--right", "psi", "--n", "0:3", "--m", "0:3", "--threads", "4"];
    let serial = ["sweep", "--left", "phi", "--right", "psi", "--n", "0:3", "--m", "0:3", "--threads", "1"];
    assert_eq!(strip(eprod(&sweep)), strip(eprod(&serial)));
}

#[test]
fn config_files_and_flags_layer() {
    let dir = std::env::temp_dir().join(format!("eprod-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(&path, r#"{"digits": 40, "max_terms": 300}"#).unwrap();
    let out_file = dir.join("report.json");
    let p = path.to_str().unwrap();
    let o = out_file.to_str().unwrap();
    let out = eprod(&["compute", "exp(1/2)", "delta", "--config", p, "--terms", "500", "--out", o]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["digits"], 40);
    assert_eq!(v["config"]["max_terms"], 500);
    assert_eq!(std::fs::read(&out_file).unwrap(), out.stdout);

    std::fs::write(&path, r#"{"digitz": 40}"#).unwrap();
    assert_eq!(eprod(&["compute", "delta", "delta", "--config", p]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn phi_psi_sweep_is_the_identity() {
    let out = eprod(&["sweep", "--left", "phi", "--right", "psi", "--n", "0:4", "--m", "0:4"]);
    assert_eq!(out.status.code(), Some(0));
    let cells = json(&out)["cells"].as_array().unwrap().clone();
    assert_eq!(cells.len(), 25);
    for c in cells {
        let (n, m) = (c["n"].as_u64().unwrap(), c["m"].as_u64().unwrap());
        let want = if n == m { 1.0 } else { 0.0 };
        assert!((num(&c["value"]["re"]) - want).abs() < 1e-12, "({n},{m}): {c}");
    }
}

#[test]
fn same_family_sweeps_diverge_off_parity_zeros() {
    for fam in ["phi", "psi"] {
        let out = eprod(&["sweep", "--left", fam, "--right", fam, "--n", "0:3", "--m", "0:3", "--format", "csv"]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        let mut rows = csv::Reader::from_reader(text.as_bytes());
        let mut count = 0;
        for r in rows.records() {
            let r = r.unwrap();
            let (n, m): (u32, u32) = (r[0].parse().unwrap(), r[1].parse().unwrap());
            let want = if (n + m) % 2 == 1 { "ZeroByParity" } else { "Divergent" };
            assert_eq!(&r[2], want, "{fam} ({n},{m})");
            count += 1;
        }
        assert_eq!(count, 16);
    }
}

#[test]
fn oversized_sweeps_are_refused() {
    let out = eprod(&["sweep", "--left", "phi", "--right", "psi", "--n", "0:30", "--m", "0:30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reproduced_examples_report_rows() {
    let out = eprod(&["reproduce", "ex2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);

    let out = eprod(&["reproduce", "adjoint", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("identity,expected,got,tolerance,pass"));
}

#[test]
fn coefficients_list_closed_forms() {
    let out = eprod(&["coeffs", "delta^(1)", "--n-max", "3", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 4);
    // e_1'(0) = sqrt(2) pi^(-1/4), and <e_1, delta'> = -e_1'(0)
    let want = -(2f64.sqrt()) * std::f64::consts::PI.powf(-0.25);
    assert!((num(&rows[1]["value"]["re"]) - want).abs() < 1e-15);
    assert!(rows[1]["exact"].is_string());
    assert_eq!(num(&rows[0]["value"]["re"]), 0.0);
}

#[test]
fn decimal_strings_carry_the_requested_digits() {
    for digits in [30u32, 45, 80] {
        let cfg = RunConfig { digits, ..RunConfig::default() };
        let report = compute("exp(1/2)", "delta", &cfg).unwrap();
        let shown = report.value.expect("summable");
        let p = cfg.summation().unwrap().precision.working_bits();
        let back = Complex::new(Real::parse(&shown.re, p).unwrap(), Real::parse(&shown.im, p).unwrap());
        let mantissa = shown.re.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), digits as usize, "{}", shown.re);
        // the printed value is the sum rounded to `digits` significant digits
        let again = back.re.to_decimal(digits);
        assert_eq!(again, shown.re);
        let err = (&back - &Complex::one(p)).abs();
        assert!(err <= Real::parse("1e-25", p).unwrap());
    }
}
