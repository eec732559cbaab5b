//! Re-runs the worked examples and reports one row per identity.

use std::time::Instant;

use eprod_core::eproduct::{
    classify_exact_series, derivative_domination, phi_phi_product, phi_psi_product, psi_psi_product,
    psi_phi_partial_sum_ratio, EProductResult, SeriesKind,
};
use eprod_core::hermite_core::mehler_kernel;
use eprod_core::operators::adjoint_check;
use eprod_core::{classify_and_sum, Complex, ExactTerm, Real, Status, SummationConfig};
use serde::Serialize;

use crate::config::RunConfig;
use crate::parse::parse_operator;
use crate::report::{csv_table, to_json, SCHEMA};
use crate::{parse_input, CliError, Render};

/// Digits shown in the `got` column; the tolerances are far coarser.
const SHOWN_DIGITS: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Example {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Adjoint,
}

impl Example {
    pub fn name(self) -> &'static str {
        match self {
            Example::Ex1 => "ex1",
            Example::Ex2 => "ex2",
            Example::Ex3 => "ex3",
            Example::Ex4 => "ex4",
            Example::Ex5 => "ex5",
            Example::Adjoint => "adjoint",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub identity: String,
    pub expected: String,
    pub got: String,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceReport {
    pub schema: u32,
    pub command: &'static str,
    pub example: &'static str,
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub passed: usize,
    pub failed: usize,
    pub wall_time_ms: u64,
}

impl Render for ReproduceReport {
    fn json(&self) -> Result<String, CliError> {
        to_json(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![r.identity.clone(), r.expected.clone(), r.got.clone(), r.tolerance.clone(), r.pass.to_string()]
            })
            .collect();
        csv_table(&["identity", "expected", "got", "tolerance", "pass"], rows)
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let mark = if r.pass { "ok  " } else { "FAIL" };
            s += &format!("{mark} {}\n     expected {} (tol {}), got {}\n", r.identity, r.expected, r.tolerance, r.got);
        }
        s += &format!("{} passed, {} failed\n", self.passed, self.failed);
        s
    }
}

struct Ctx {
    cfg: SummationConfig,
    p: usize,
    rows: Vec<Row>,
}

impl Ctx {
    fn push(&mut self, identity: impl Into<String>, expected: impl Into<String>, got: String, tolerance: &str, pass: bool) {
        self.rows.push(Row { identity: identity.into(), expected: expected.into(), got, tolerance: tolerance.into(), pass });
    }

    fn close(&self, got: &Complex, want: &Complex, tol: &str) -> bool {
        let t = Real::parse(tol, self.p).expect("literal tolerance");
        (got - want).abs() <= t
    }

    /// Row comparing a summed value against a reference.
    fn value_row(&mut self, identity: String, r: &EProductResult, want: &Complex, expected: &str, tol: &str) {
        let (got, pass) = match &r.value {
            Some(v) => (show(v), self.close(v, want, tol)),
            None => (r.status.name().to_string(), false),
        };
        self.push(identity, expected, got, tol, pass);
    }

    fn status_row(&mut self, identity: String, r: &EProductResult, want: Status) {
        self.push(identity, want.name(), r.status.name().to_string(), "exact", r.status == want);
    }

    fn pair(&self, l: &str, r: &str) -> Result<EProductResult, CliError> {
        Ok(classify_and_sum(&parse_input(l)?, &parse_input(r)?, &self.cfg)?)
    }
}

fn show(z: &Complex) -> String {
    let re = z.re.to_decimal(SHOWN_DIGITS);
    if z.im.is_zero() {
        re
    } else {
        format!("{re} + {} i", z.im.to_decimal(SHOWN_DIGITS))
    }
}

pub fn reproduce(example: Example, config: &RunConfig) -> Result<ReproduceReport, CliError> {
    let cfg = config.summation()?;
    let t = Instant::now();
    let mut cx = Ctx { p: cfg.precision.working_bits(), cfg, rows: Vec::new() };
    match example {
        Example::Ex1 => exponentials(&mut cx)?,
        Example::Ex2 => waves(&mut cx)?,
        Example::Ex3 => delta_derivatives(&mut cx)?,
        Example::Ex4 => biorthogonality(&mut cx)?,
        Example::Ex5 => same_families(&mut cx)?,
        Example::Adjoint => adjoints(&mut cx)?,
    }
    let passed = cx.rows.iter().filter(|r| r.pass).count();
    Ok(ReproduceReport {
        schema: SCHEMA,
        command: "reproduce",
        example: example.name(),
        config: config.clone(),
        failed: cx.rows.len() - passed,
        passed,
        rows: cx.rows,
        wall_time_ms: t.elapsed().as_millis() as u64,
    })
}

fn exponentials(cx: &mut Ctx) -> Result<(), CliError> {
    let p = cx.p;
    let one = Complex::one(p);
    for g in ["0", "1/2", "-1/2", "1", "-1", "2"] {
        let r = cx.pair(&format!("exp({g})"), "delta")?;
        cx.value_row(format!("<exp({g} x), delta>_e"), &r, &one, "1", "1e-20");

        // sqrt(2) e^(g^2/2) M(i/2; -i g, 0) = 1
        let gamma = Real::parse(&decimal_of(g), p).map_err(CliError::Compute)?;
        let z = Complex::new(Real::zero(p), Real::from_f64(0.5, p));
        let x = Complex::new(Real::zero(p), -gamma.clone());
        let k = mehler_kernel(&z, &x, &Complex::zero(p))?;
        let scale = Real::from_u64(2, p).sqrt() * (&gamma * &gamma).mul_pow2(-1).exp();
        let v = k.scale(&scale);
        let pass = cx.close(&v, &one, "1e-40");
        cx.push(format!("sqrt(2) e^({g}^2/2) M(i/2; -i*{g}, 0)"), "1", show(&v), "1e-40", pass);
    }
    Ok(())
}

fn decimal_of(q: &str) -> String {
    match q.split_once('/') {
        Some((a, b)) => (a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap()).to_string(),
        None => q.to_string(),
    }
}

fn waves(cx: &mut Ctx) -> Result<(), CliError> {
    let p = cx.p;
    for w in ["1", "1/2", "2"] {
        let r = cx.pair(&format!("cos({w})"), "delta")?;
        cx.value_row(format!("<cos({w} x), delta>_e"), &r, &Complex::one(p), "1", "1e-20");
        let r = cx.pair(&format!("sin({w})"), "delta")?;
        cx.value_row(format!("<sin({w} x), delta>_e"), &r, &Complex::zero(p), "0", "1e-20");
    }
    Ok(())
}

fn delta_derivatives(cx: &mut Ctx) -> Result<(), CliError> {
    let r = cx.pair("delta", "delta")?;
    cx.status_row("<delta, delta>_e".into(), &r, Status::Divergent);
    let raabe = r.diagnostics.raabe.as_ref().map(|q| q.estimate.to_f64());
    cx.push(
        "Raabe estimate for <delta, delta>_e",
        "1/2",
        raabe.map_or_else(|| "none".into(), |q| format!("{q:.6}")),
        "0.05",
        raabe.is_some_and(|q| (q - 0.5).abs() <= 0.05),
    );
    for k in 0..=6u32 {
        for l in 0..=6u32 {
            if (k + l) % 2 == 1 {
                let r = cx.pair(&format!("delta^({k})"), &format!("delta^({l})"))?;
                let exact_zero = r.exact_value.as_ref().is_some_and(ExactTerm::is_zero);
                let got = format!("{}{}", r.status.name(), if exact_zero { ", exactly 0" } else { "" });
                let pass = r.status == Status::ZeroByParity && exact_zero;
                cx.push(format!("<delta^({k}), delta^({l})>_e"), "ZeroByParity, exactly 0", got, "exact", pass);
            }
        }
    }
    let dominated = derivative_domination(200)?;
    cx.push(
        "sum (e'_(2l+1)(0))^2 >= 2 sum e_(2l)(0)^2, L < 200",
        "true",
        dominated.to_string(),
        "exact",
        dominated,
    );
    let r = cx.pair("delta^(1)", "delta^(1)")?;
    cx.status_row("<delta^(1), delta^(1)>_e".into(), &r, Status::Divergent);
    Ok(())
}

fn biorthogonality(cx: &mut Ctx) -> Result<(), CliError> {
    let p = cx.p;
    let pi = Real::pi(p);
    let sqrt2 = Real::from_u64(2, p).sqrt();
    let a = Complex::from_real(&pi / &sqrt2);
    let b = Complex::from_real(&pi / (Real::from_u64(8, p) * &sqrt2));
    let r = classify_exact_series(SeriesKind::A, 0, 0, &cx.cfg)?;
    cx.value_row("Abel sum of the even alternating series at (0,0)".into(), &r, &a, "pi/sqrt(2)", "1e-15");
    let r = classify_exact_series(SeriesKind::B, 0, 0, &cx.cfg)?;
    cx.value_row("Abel sum of the odd alternating series at (0,0)".into(), &r, &b, "pi/(8 sqrt(2))", "1e-15");
    for n in 0..=6u32 {
        for m in 0..=6u32 {
            let r = phi_psi_product(n, m, &cx.cfg)?;
            let (want, shown) = if n == m { (Complex::one(p), "1") } else { (Complex::zero(p), "0") };
            if r.status == Status::ZeroByParity {
                cx.status_row(format!("<phi_{n}, psi_{m}>_e"), &r, Status::ZeroByParity);
            } else {
                cx.value_row(format!("<phi_{n}, psi_{m}>_e"), &r, &want, shown, "1e-12");
            }
        }
    }
    Ok(())
}

fn same_families(cx: &mut Ctx) -> Result<(), CliError> {
    for n in 0..=3u32 {
        for m in 0..=3u32 {
            let want = if (n + m) % 2 == 1 { Status::ZeroByParity } else { Status::Divergent };
            let r = phi_phi_product(n, m, &cx.cfg)?;
            cx.status_row(format!("<phi_{n}, phi_{m}>_e"), &r, want);
            let r = psi_psi_product(n, m, &cx.cfg)?;
            cx.status_row(format!("<psi_{n}, psi_{m}>_e"), &r, want);
        }
    }
    let two_pi = ExactTerm::from_integer(2) * ExactTerm::pi_pow_quarters(4);
    for n in 0..=3u32 {
        for m in 0..=3u32 {
            let factor = if (n + m) % 2 == 1 { -two_pi.clone() } else { two_pi.clone() };
            let ratio = psi_phi_partial_sum_ratio(2 * n, 2 * m, 201)?;
            let got = ratio.as_ref().map_or_else(|| "not constant".into(), |q| q.to_string());
            cx.push(
                format!("S_K(psi_{0}, psi_{1}) / S_K(phi_{0}, phi_{1}), K <= 200", 2 * n, 2 * m),
                factor.to_string(),
                got,
                "exact",
                ratio.as_ref() == Some(&factor),
            );
        }
    }
    Ok(())
}

/// `(operator, Phi, phi)` in the input grammar.
const TRIPLES: [(&str, &str, &str); 10] = [
    ("c", "delta", "e(3)"),
    ("x", "delta", "exp(1)"),
    ("D", "delta", "exp(1/2)"),
    ("1", "delta", "cos(1)"),
    ("cdag", "delta^(1)", "e(2)"),
    ("x", "e(4)", "exp(1)"),
    ("c", "hermite[0, 1, 2, 3]", "cos(1/2)"),
    ("D", "e(1)", "x^2"),
    ("x x", "delta", "exp(1/2)"),
    ("c + cdag", "delta", "sin(1)"),
];

fn operator(src: &str) -> Result<eprod_core::OperatorExpr, CliError> {
    parse_operator(src).map_err(|error| CliError::Parse { input: src.to_string(), error })
}

fn adjoints(cx: &mut Ctx) -> Result<(), CliError> {
    for (x, want) in [("c", "cdag"), ("cdag", "c"), ("x", "x"), ("D", "-D")] {
        let got = operator(x)?.ddagger();
        let pass = got == operator(want)?;
        cx.push(format!("{x}^ddagger"), want, got.to_string(), "exact", pass);
        let back = got.ddagger();
        let pass = back == operator(x)?;
        cx.push(format!("({x}^ddagger)^ddagger"), x, back.to_string(), "exact", pass);
    }
    for (x, big, small) in TRIPLES {
        let op = operator(x)?;
        let rep = adjoint_check(&op, &parse_input(big)?, &parse_input(small)?, &cx.cfg)?;
        let scale = rep.right.value.as_ref().map_or(Real::one(cx.p), |v| v.abs().max(Real::one(cx.p)));
        let tol = Real::parse("1e-15", cx.p).expect("literal") * scale;
        let pass = rep.difference <= tol;
        cx.push(
            format!("<({x})^ddagger {big}, {small}>_e = <{big}, ({x}) {small}>_e"),
            "difference 0",
            format!("difference {}", rep.difference.to_decimal(6)),
            "1e-15 relative",
            pass,
        );
    }
    Ok(())
}
