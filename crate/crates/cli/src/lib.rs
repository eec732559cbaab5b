//! Command-line front end for e-products: parsing, configuration, reports,
//! example reproduction and parameter sweeps.

pub mod config;
pub mod parse;
pub mod report;
pub mod reproduce;
pub mod sweep;

use std::fmt;
use std::time::Instant;

use eprod_core::distributions::{exact_coeff, CoeffSequence, Coefficients};
use eprod_core::classify_and_sum;
use serde::Serialize;

use config::RunConfig;
use parse::{parse_distribution, ParseError, ParseErrorKind};
use report::{csv_table, to_json, DecimalComplex, Inputs, RunReport, SCHEMA};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { input: String, error: ParseError },
    Compute(eprod_core::Error),
    Io(String),
}

impl CliError {
    /// 1 for anything the caller got wrong, 2 for failures inside a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 1,
            CliError::Compute(_) | CliError::Io(_) => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::json!({ "schema": SCHEMA, "error": self.kind(), "message": self.to_string() });
        if let CliError::Parse { input, error } = self {
            v["input"] = input.clone().into();
            v["position"] = error.position.into();
            if let ParseErrorKind::UnknownSymbol(s) = &error.kind {
                v["symbol"] = s.clone().into();
            }
        }
        v.to_string()
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { error, .. } => match error.kind {
                ParseErrorKind::Syntax(_) => "syntax",
                ParseErrorKind::UnknownSymbol(_) => "unknown_symbol",
            },
            CliError::Compute(_) => "compute",
            CliError::Io(_) => "io",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Parse { input, error } => write!(f, "{error} in \"{input}\""),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<eprod_core::Error> for CliError {
    fn from(e: eprod_core::Error) -> Self {
        CliError::Compute(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn parse_input(text: &str) -> Result<eprod_core::Distribution, CliError> {
    parse_distribution(text).map_err(|error| CliError::Parse { input: text.to_string(), error })
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// `<L, R>_e` with the full classification report.
pub fn compute(left: &str, right: &str, config: &RunConfig) -> Result<RunReport, CliError> {
    let (l, r) = (parse_input(left)?, parse_input(right)?);
    let cfg = config.summation()?;
    let t = Instant::now();
    let result = classify_and_sum(&l, &r, &cfg)?;
    let inputs = Inputs { left: l.to_string(), right: r.to_string() };
    Ok(RunReport::new(inputs, config.clone(), &result, elapsed_ms(t)))
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffRow {
    pub n: usize,
    pub value: DecimalComplex,
    pub exact: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffReport {
    pub schema: u32,
    pub command: &'static str,
    pub input: String,
    pub config: RunConfig,
    pub rows: Vec<CoeffRow>,
    pub wall_time_ms: u64,
}

impl CoeffReport {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let rows = self
            .rows
            .iter()
            .map(|r| vec![r.n.to_string(), r.value.re.clone(), r.value.im.clone(), r.exact.clone().unwrap_or_default()])
            .collect();
        csv_table(&["n", "re", "im", "exact"], rows)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("<e_n, {}>\n", self.input);
        for r in &self.rows {
            s += &format!("{:>4}  {} + {} i", r.n, r.value.re, r.value.im);
            if let Some(e) = &r.exact {
                s += &format!("  = {e}");
            }
            s.push('\n');
        }
        s
    }
}

/// `<e_n, D>` for `n = 0..=n_max`, with closed forms where they exist.
pub fn coeffs(text: &str, n_max: usize, config: &RunConfig) -> Result<CoeffReport, CliError> {
    let d = parse_input(text)?;
    let cfg = config.summation()?;
    let t = Instant::now();
    let mut seq = CoeffSequence::with_options(d.clone(), cfg.precision.working_bits(), cfg.quadrature_nodes, None);
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let v = seq.coeff(n)?;
        rows.push(CoeffRow {
            n,
            value: DecimalComplex::new(&v, config.digits),
            exact: exact_coeff(&d, n).map(|e| e.to_string()),
        });
    }
    Ok(CoeffReport {
        schema: SCHEMA,
        command: "coeffs",
        input: d.to_string(),
        config: config.clone(),
        rows,
        wall_time_ms: elapsed_ms(t),
    })
}

/// Renders any report in the requested format.
pub trait Render {
    fn json(&self) -> Result<String, CliError>;
    fn csv(&self) -> Result<String, CliError>;
    fn text(&self) -> String;

    fn render(&self, f: Format) -> Result<String, CliError> {
        match f {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }
}

impl Render for RunReport {
    fn json(&self) -> Result<String, CliError> {
        to_json(self)
    }
    fn csv(&self) -> Result<String, CliError> {
        self.to_csv()
    }
    fn text(&self) -> String {
        self.to_text()
    }
}

impl Render for CoeffReport {
    fn json(&self) -> Result<String, CliError> {
        to_json(self)
    }
    fn csv(&self) -> Result<String, CliError> {
        self.to_csv()
    }
    fn text(&self) -> String {
        self.to_text()
    }
}
