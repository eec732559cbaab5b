//! Grids of family pairings `<L_n, R_m>_e`, computed on worker threads and
//! assembled in row-major order so output never depends on scheduling.

use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use eprod_core::eproduct::{family_product, Family};
use eprod_core::Status;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{csv_table, to_json, DecimalComplex, SCHEMA};
use crate::{CliError, Render};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyArg {
    Phi,
    Psi,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::Phi => Family::Phi,
            FamilyArg::Psi => Family::Psi,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FamilyArg::Phi => "phi",
            FamilyArg::Psi => "psi",
        }
    }
}

/// Inclusive index range written `a:b`, or a single index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexRange {
    pub start: u32,
    pub end: u32,
}

impl IndexRange {
    fn len(self) -> usize {
        (self.end - self.start + 1) as usize
    }
}

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad index \"{t}\""));
        let (start, end) = match s.split_once(':') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(s)?, num(s)?),
        };
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(IndexRange { start, end })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub n: u32,
    pub m: u32,
    pub status: &'static str,
    pub value: Option<DecimalComplex>,
    pub exact_value: Option<String>,
    pub n_terms_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub command: &'static str,
    pub left: &'static str,
    pub right: &'static str,
    pub n: IndexRange,
    pub m: IndexRange,
    pub config: RunConfig,
    pub cells: Vec<Cell>,
    pub wall_time_ms: u64,
}

impl SweepReport {
    pub fn any_inconclusive(&self) -> bool {
        self.cells.iter().any(|c| c.status == Status::Inconclusive.name())
    }
}

impl Render for SweepReport {
    fn json(&self) -> Result<String, CliError> {
        to_json(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        let rows = self
            .cells
            .iter()
            .map(|c| {
                let (re, im) = c.value.as_ref().map_or((String::new(), String::new()), |v| (v.re.clone(), v.im.clone()));
                vec![c.n.to_string(), c.m.to_string(), c.status.to_string(), re, im, c.n_terms_used.to_string()]
            })
            .collect();
        csv_table(&["n", "m", "status", "re", "im", "n_terms_used"], rows)
    }

    fn text(&self) -> String {
        let mut s = format!("<{}_n, {}_m>_e\n", self.left, self.right);
        for c in &self.cells {
            let v = c.value.as_ref().map_or(String::new(), |v| format!("  {} + {} i", v.re, v.im));
            s += &format!("{:>3} {:>3}  {}{v}\n", c.n, c.m, c.status);
        }
        s
    }
}

pub struct SweepSpec {
    pub left: FamilyArg,
    pub right: FamilyArg,
    pub n: IndexRange,
    pub m: IndexRange,
}

pub fn sweep(spec: &SweepSpec, config: &RunConfig, threads: usize) -> Result<SweepReport, CliError> {
    let cells = spec.n.len() * spec.m.len();
    if cells > config.sweep_cap {
        return Err(CliError::Usage(format!("sweep of {cells} cells exceeds the cap of {}", config.sweep_cap)));
    }
    let cfg = config.summation()?;
    let t = Instant::now();
    let digits = config.digits;
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Cell, CliError>>>> = Mutex::new((0..cells).map(|_| None).collect());
    let width = spec.m.len();
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, cells) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cells {
                    break;
                }
                let n = spec.n.start + (i / width) as u32;
                let m = spec.m.start + (i % width) as u32;
                let cell = family_product(spec.left.family(), spec.right.family(), n, m, &cfg)
                    .map(|r| Cell {
                        n,
                        m,
                        status: r.status.name(),
                        value: r.value.as_ref().map(|v| DecimalComplex::new(v, digits)),
                        exact_value: r.exact_value.as_ref().map(|e| e.to_string()),
                        n_terms_used: r.diagnostics.n_terms_used,
                    })
                    .map_err(CliError::from);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(cell);
            });
        }
    });
    let cells = slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|c| c.expect("every cell visited"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepReport {
        schema: SCHEMA,
        command: "sweep",
        left: spec.left.name(),
        right: spec.right.name(),
        n: spec.n,
        m: spec.m,
        config: config.clone(),
        cells,
        wall_time_ms: t.elapsed().as_millis() as u64,
    })
}
