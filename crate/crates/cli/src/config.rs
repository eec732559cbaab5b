//! Run configuration: built-in defaults, an optional JSON file, then flags.

use std::path::Path;

use eprod_core::{Precision, SummationConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "EPROD_CONFIG";

/// Flat snapshot of every knob, embedded verbatim in each report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub digits: u32,
    pub max_terms: usize,
    pub tolerance: f64,
    pub abel_levels: u32,
    pub extrapolation_depth: usize,
    pub divergence_margin: f64,
    pub partial_sum_cap: f64,
    pub max_inner_terms: usize,
    pub quadrature_nodes: usize,
    /// Largest number of cells a sweep may request.
    pub sweep_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SummationConfig::default();
        RunConfig {
            digits: s.precision.digits(),
            max_terms: s.max_terms,
            tolerance: s.tolerance,
            abel_levels: s.abel_levels,
            extrapolation_depth: s.extrapolation_depth,
            divergence_margin: s.divergence_margin,
            partial_sum_cap: s.partial_sum_cap,
            max_inner_terms: s.max_inner_terms,
            quadrature_nodes: s.quadrature_nodes,
            sweep_cap: 400,
        }
    }
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub terms: Option<usize>,
    pub digits: Option<u32>,
    pub tol: Option<f64>,
    pub abel_levels: Option<u32>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Explicit path, else the environment variable, else defaults.
    pub fn load(explicit: Option<&Path>) -> Result<RunConfig, CliError> {
        match explicit {
            Some(p) => RunConfig::from_file(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => RunConfig::from_file(Path::new(&p)),
                _ => Ok(RunConfig::default()),
            },
        }
    }

    pub fn apply(mut self, o: &Overrides) -> RunConfig {
        if let Some(v) = o.terms {
            self.max_terms = v;
        }
        if let Some(v) = o.digits {
            self.digits = v;
        }
        if let Some(v) = o.tol {
            self.tolerance = v;
        }
        if let Some(v) = o.abel_levels {
            self.abel_levels = v;
        }
        self
    }

    pub fn summation(&self) -> Result<SummationConfig, CliError> {
        let cfg = SummationConfig {
            precision: Precision::new(self.digits).map_err(|e| CliError::Usage(e.to_string()))?,
            max_terms: self.max_terms,
            tolerance: self.tolerance,
            abel_levels: self.abel_levels,
            extrapolation_depth: self.extrapolation_depth,
            divergence_margin: self.divergence_margin,
            partial_sum_cap: self.partial_sum_cap,
            max_inner_terms: self.max_inner_terms,
            quadrature_nodes: self.quadrature_nodes,
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}
