use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eprod_cli::config::{Overrides, RunConfig};
use eprod_cli::reproduce::{reproduce, Example};
use eprod_cli::sweep::{sweep, FamilyArg, IndexRange, SweepSpec};
use eprod_cli::{coeffs, compute, CliError, Format, Render};

/// Exit code when a report is produced but the series could not be classified.
const INCONCLUSIVE: u8 = 3;
/// Exit code when a reproduced identity does not hold.
const IDENTITY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "eprod", version, about = "Pair tempered distributions through their Hermite coefficients")]
struct Cli {
    /// JSON config file; defaults to $EPROD_CONFIG, then built-in values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Knobs {
    /// Budget of series terms.
    #[arg(long)]
    terms: Option<usize>,
    /// Decimal digits of working precision.
    #[arg(long)]
    digits: Option<u32>,
    /// Relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Last Abel level.
    #[arg(long)]
    abel_levels: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify and sum <LEFT, RIGHT>_e.
    Compute {
        left: String,
        right: String,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
    /// List the Hermite coefficients <e_n, DIST> for n = 0..=N_MAX.
    Coeffs {
        dist: String,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
    /// Re-run a worked example and check each identity.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
    /// Pair two families over index ranges written a:b (inclusive).
    Sweep {
        #[arg(long, value_enum)]
        left: FamilyArg,
        #[arg(long, value_enum)]
        right: FamilyArg,
        #[arg(long)]
        n: IndexRange,
        #[arg(long)]
        m: IndexRange,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
}

impl Knobs {
    fn config(&self, file: Option<&std::path::Path>) -> Result<RunConfig, CliError> {
        let o = Overrides { terms: self.terms, digits: self.digits, tol: self.tol, abel_levels: self.abel_levels };
        Ok(RunConfig::load(file)?.apply(&o))
    }
}

fn emit(report: &dyn Render, output: &Output) -> Result<(), CliError> {
    let text = report.render(output.format)?;
    if let Some(path) = &output.out {
        std::fs::write(path, &text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let file = cli.config.as_deref();
    match cli.command {
        Command::Compute { left, right, knobs, output } => {
            let r = compute(&left, &right, &knobs.config(file)?)?;
            emit(&r, &output)?;
            Ok(if r.inconclusive() { INCONCLUSIVE } else { 0 })
        }
        Command::Coeffs { dist, n_max, knobs, output } => {
            emit(&coeffs(&dist, n_max, &knobs.config(file)?)?, &output)?;
            Ok(0)
        }
        Command::Reproduce { example, knobs, output } => {
            let r = reproduce(example, &knobs.config(file)?)?;
            emit(&r, &output)?;
            Ok(if r.failed > 0 { IDENTITY_FAILED } else { 0 })
        }
        Command::Sweep { left, right, n, m, threads, knobs, output } => {
            let threads = threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let r = sweep(&SweepSpec { left, right, n, m }, &knobs.config(file)?, threads)?;
            emit(&r, &output)?;
            Ok(if r.any_inconclusive() { INCONCLUSIVE } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
