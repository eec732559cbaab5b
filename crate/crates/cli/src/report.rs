//! Machine-readable reports. Numbers are decimal strings so that no digits
//! are lost to binary floats on the way out.

use eprod_core::eproduct::EProductResult;
use eprod_core::{Complex, Real, Status};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecimalComplex {
    pub re: String,
    pub im: String,
}

impl DecimalComplex {
    pub fn new(z: &Complex, digits: u32) -> DecimalComplex {
        DecimalComplex { re: z.re.to_decimal(digits), im: z.im.to_decimal(digits) }
    }
}

fn dec(x: &Real, digits: u32) -> String {
    x.to_decimal(digits)
}

#[derive(Debug, Clone, Serialize)]
pub struct AbelRow {
    pub level: u32,
    pub r: String,
    pub value: DecimalComplex,
    pub terms: usize,
    pub extrapolant: Option<DecimalComplex>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDiagnostics {
    pub ratio_estimate: Option<String>,
    pub raabe_estimate: Option<String>,
    pub low_confidence: bool,
    pub prefactor: Option<String>,
    pub last_partial_sum: Option<DecimalComplex>,
    pub richardson: Option<DecimalComplex>,
    pub wynn: Option<DecimalComplex>,
    pub abel_trace: Vec<AbelRow>,
}

impl ReportDiagnostics {
    pub fn new(r: &EProductResult, digits: u32) -> ReportDiagnostics {
        let d = &r.diagnostics;
        let c = |z: &Complex| DecimalComplex::new(z, digits);
        let abel = d.abel.as_ref();
        ReportDiagnostics {
            ratio_estimate: d.ratio_estimate.as_ref().map(|q| dec(q, digits)),
            raabe_estimate: d.raabe.as_ref().map(|q| dec(&q.estimate, digits)),
            low_confidence: d.low_confidence,
            prefactor: d.prefactor.as_ref().map(|p| p.to_string()),
            last_partial_sum: d.partial_sums.last().map(|(_, s)| c(s)),
            richardson: abel.and_then(|a| a.richardson.as_ref()).map(c),
            wynn: abel.and_then(|a| a.wynn.as_ref()).map(c),
            abel_trace: abel
                .map(|a| {
                    a.trace
                        .iter()
                        .map(|s| AbelRow {
                            level: s.level,
                            r: dec(&s.r, digits),
                            value: c(&s.value),
                            terms: s.terms,
                            extrapolant: s.extrapolant.as_ref().map(c),
                        })
                        .collect()
                })
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: &'static str,
    pub inputs: Inputs,
    pub config: RunConfig,
    pub status: &'static str,
    pub value: Option<DecimalComplex>,
    pub exact_value: Option<String>,
    pub n_terms_used: usize,
    pub diagnostics: ReportDiagnostics,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(inputs: Inputs, config: RunConfig, r: &EProductResult, wall_time_ms: u64) -> RunReport {
        let digits = config.digits;
        RunReport {
            schema: SCHEMA,
            command: "compute",
            inputs,
            status: r.status.name(),
            value: r.value.as_ref().map(|v| DecimalComplex::new(v, digits)),
            exact_value: r.exact_value.as_ref().map(|e| e.to_string()),
            n_terms_used: r.diagnostics.n_terms_used,
            diagnostics: ReportDiagnostics::new(r, digits),
            config,
            wall_time_ms,
        }
    }

    pub fn inconclusive(&self) -> bool {
        self.status == Status::Inconclusive.name()
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let na = String::new();
        let (re, im) = self.value.as_ref().map_or((na.clone(), na.clone()), |v| (v.re.clone(), v.im.clone()));
        csv_table(
            &["left", "right", "status", "re", "im", "n_terms_used", "ratio_estimate", "raabe_estimate", "wall_time_ms"],
            vec![vec![
                self.inputs.left.clone(),
                self.inputs.right.clone(),
                self.status.to_string(),
                re,
                im,
                self.n_terms_used.to_string(),
                self.diagnostics.ratio_estimate.clone().unwrap_or_default(),
                self.diagnostics.raabe_estimate.clone().unwrap_or_default(),
                self.wall_time_ms.to_string(),
            ]],
        )
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "<{}, {}>_e\nstatus  {}\n",
            self.inputs.left, self.inputs.right, self.status
        );
        if let Some(v) = &self.value {
            s += &format!("value   {} + {} i\n", v.re, v.im);
        }
        if let Some(e) = &self.exact_value {
            s += &format!("exact   {e}\n");
        }
        s += &format!("terms   {}\n", self.n_terms_used);
        if let Some(q) = &self.diagnostics.ratio_estimate {
            s += &format!("ratio   {q}\n");
        }
        if let Some(q) = &self.diagnostics.raabe_estimate {
            s += &format!("raabe   {q}\n");
        }
        if self.diagnostics.low_confidence {
            s += "note    partial sums passed the cap without a divergence certificate\n";
        }
        s += &format!("time    {} ms\n", self.wall_time_ms);
        s
    }
}

pub fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| CliError::Io(e.to_string()))
}
