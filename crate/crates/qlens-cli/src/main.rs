use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
mod verify;

#[derive(Parser, Debug)]
#[command(
    name = "qlens",
    version,
    about = "Dirac spectra, figures and checks for the quantum lens spaces L_q(p, r)"
)]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Printed,
    Corrected,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dirac spectrum on H_K by direct counting.
    Spectrum {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        r: i64,
        #[arg(long = "K", default_value_t = 0)]
        k: i64,
        #[arg(long, default_value_t = 24)]
        two_jmax: u32,
        /// Compare with the closed form for r = p - 1.
        #[arg(long, value_enum)]
        closed_form: Option<Variant>,
    },
    /// Lattice diagram of H_K in the (mu, n) plane.
    Lattice {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        r: i64,
        #[arg(long = "K", default_value_t = 0)]
        k: i64,
        #[arg(long, default_value_t = 6)]
        range: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Residual checks of the spectral triple on a truncation.
    Verify {
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 24)]
        two_jmax: u32,
        #[arg(long, default_value_t = 4)]
        margin: u32,
        /// Seeds the sampled words; results do not depend on it otherwise.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, hide = true)]
        corrupt_phase: bool,
    },
    /// Exact identities of the principal bundle over the teardrop.
    Bundle {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        r: i64,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        /// Also check the q = 0 partition of unity.
        #[arg(long)]
        q0: bool,
        /// Bounded canonical-map probe up to this total word length.
        #[arg(long)]
        probe: Option<u32>,
    },
    /// Labels of the truncated spinor basis.
    BasisDump {
        #[arg(long, default_value_t = 4)]
        two_jmax: u32,
    },
}

/// Failure classes, mapped to exit codes 1 and 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

pub enum Payload {
    Json(serde_json::Value),
    Text(String),
}

pub struct Outcome {
    pub payload: Payload,
    /// Set when a hard check failed; the payload is still written.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn json<T: Serialize>(value: &T, failure: Option<String>) -> Self {
        let v = serde_json::to_value(value).expect("reports serialize");
        Self {
            payload: Payload::Json(v),
            failure,
        }
    }
}

fn write_out(path: &Option<PathBuf>, payload: &Payload) -> io::Result<()> {
    let text = match payload {
        Payload::Json(v) => {
            let mut s = serde_json::to_string_pretty(v).expect("json");
            s.push('\n');
            s
        }
        Payload::Text(t) => t.clone(),
    };
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let outcome = match &cli.command {
        Command::Spectrum {
            p,
            r,
            k,
            two_jmax,
            closed_form,
        } => {
            let variant = closed_form.map(|v| match v {
                Variant::Printed => qlens::lens::ClosedFormVariant::Printed,
                Variant::Corrected => qlens::lens::ClosedFormVariant::Corrected,
            });
            commands::spectrum(*p, *r, *k, *two_jmax, variant)?
        }
        Command::Lattice {
            p,
            r,
            k,
            range,
            format,
        } => commands::lattice(*p, *r, *k, *range, *format)?,
        Command::Verify {
            q,
            two_jmax,
            margin,
            seed,
            samples,
            corrupt_phase,
        } => verify::run(&verify::VerifyConfig {
            q: *q,
            two_jmax: *two_jmax,
            margin: *margin,
            seed: *seed,
            samples: *samples,
            corrupt_phase: *corrupt_phase,
        })?,
        Command::Bundle {
            p,
            r,
            n_max,
            q0,
            probe,
        } => commands::bundle(*p, *r, *n_max, *q0, *probe)?,
        Command::BasisDump { two_jmax } => commands::basis_dump(*two_jmax),
    };
    write_out(&cli.output, &outcome.payload)?;
    match outcome.failure {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qlens: {e}");
            match e {
                CliError::Failed(_) => ExitCode::from(1),
                CliError::Params(_) | CliError::Io(_) => ExitCode::from(2),
            }
        }
    }
}
