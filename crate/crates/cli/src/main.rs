//! `semicross`: analyze a shift of finite type, its natural extension and
//! the operator algebras they generate, from a JSON configuration.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use semicross_core::representations::SearchMode;
use semicross_core::Error;

use config::ConfigError;
use report::{Inputs, Report};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_OVERFLOW: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "semicross", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// System configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write truncation histories as `series,k,value` rows.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    #[arg(long, global = true)]
    k_max: Option<usize>,

    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true)]
    lambda_grid: Option<usize>,

    #[arg(long, global = true)]
    max_period: Option<usize>,

    /// `auto`, `exhaustive` or `beam:<width>`.
    #[arg(long, global = true)]
    mode: Option<SearchMode>,

    /// Leave the timestamp out so that reports are reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the configuration and echo it in normalized form.
    Validate,
    /// Dynamical properties of the system and of its natural extension.
    Analyze,
    /// Structure of the natural extension and fibers over the named points.
    Extend,
    /// Norm of an element of the semicrossed product.
    Norm { element: String },
    /// Norm of an element's image in the crossed product over the extension.
    CrossedNorm { element: String },
    /// Norm lemmas, nest truncation and covariance checks.
    Verify,
    /// Envelope verdicts and the embedding isometry sweep.
    Envelope,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Analyze => "analyze",
            Command::Extend => "extend",
            Command::Norm { .. } => "norm",
            Command::CrossedNorm { .. } => "crossed-norm",
            Command::Verify => "verify",
            Command::Envelope => "envelope",
        }
    }
}

/// Returns the exit code for a finished run.
fn run(cli: &Cli) -> Result<u8> {
    let Some(path) = &cli.config else {
        bail!(ConfigError {
            file: "<none>".into(),
            location: "--config".into(),
            message: "a configuration file is required".into(),
        });
    };
    let file = path.display().to_string();
    let mut raw = config::read(path)?;
    let policy = &mut raw.policy;
    if let Some(k) = cli.k_max {
        policy.k_max = k;
        policy.k_initial = policy.k_initial.min(k);
    }
    if let Some(t) = cli.tol {
        policy.tolerance = t;
    }
    if let Some(g) = cli.lambda_grid {
        policy.lambda_grid = g;
    }
    if let Some(p) = cli.max_period {
        policy.max_period = p;
    }
    if let Some(m) = cli.mode {
        policy.mode = m;
    }
    let system = config::resolve(&raw, &file)?;

    let (outcome, element) = match &cli.command {
        Command::Validate => (commands::validate(&system), None),
        Command::Analyze => (commands::analyze(&system), None),
        Command::Extend => (commands::extend(&system)?, None),
        Command::Norm { element } => {
            let f = commands::element(&system, &file, element)?;
            (commands::norm(&system, f)?, Some(element.clone()))
        }
        Command::CrossedNorm { element } => {
            let f = commands::element(&system, &file, element)?;
            (commands::crossed(&system, f)?, Some(element.clone()))
        }
        Command::Verify => (commands::verify(&system)?, None),
        Command::Envelope => (commands::envelope(&system)?, None),
    };

    let timestamp = (!cli.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let report = Report {
        command: cli.command.name().into(),
        inputs: Inputs {
            config: file,
            system: system.id.clone(),
            policy: system.policy.clone(),
            element,
        },
        results: outcome.results,
        diagnostics: outcome.diagnostics,
        version: env!("CARGO_PKG_VERSION"),
        timestamp,
    };
    report.write(cli.out.as_deref())?;
    if let Some(csv) = &cli.csv {
        report.write_csv(csv)?;
    }
    if outcome.converged {
        Ok(0)
    } else {
        eprintln!("warning: truncation history did not converge or a check failed");
        Ok(EXIT_NO_CONVERGENCE)
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return EXIT_VALIDATION;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Overflow { .. } | Error::GeneratorExhausted { .. } => EXIT_OVERFLOW,
                Error::NoConvergence => EXIT_NO_CONVERGENCE,
                _ => EXIT_VALIDATION,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
