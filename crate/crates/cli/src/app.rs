//! Argument parsing and dispatch for the `eee` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use crate::config::{load_config, parse_methods};
use crate::{
    entropy_of_values, format_significant, run_sweep_csv, spectrum_csv, write_atomic, CliError,
    SweepOverrides,
};
use clap::{Parser, Subcommand};
use eee_core::Workers;

#[derive(Parser)]
#[command(
    name = "eee",
    version,
    about = "Source enumeration by entropy estimation of eigenvalues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep and write detection/false-alarm/miss rates as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the master seed of the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads. Does not affect the output.
        #[arg(long)]
        workers: Option<usize>,
        /// Comma list of eee-tail, eee-head, aic, mdl.
        #[arg(long)]
        methods: Option<String>,
    },
    /// Dump the eigenvalues and tail entropy profile of one seeded trial.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = crate::config::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Kernel entropy estimate of a list of values.
    Entropy {
        /// Values, separated by spaces or commas.
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        values: Vec<String>,
        /// Fixed bandwidth; Silverman's rule when omitted.
        #[arg(long)]
        bandwidth: Option<f64>,
    },
}

fn emit(bytes: &[u8], output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => write_atomic(path, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            config,
            output,
            seed,
            trials,
            workers,
            methods,
        } => {
            let cfg = load_config(&config)?;
            let mut spec = cfg
                .sweep
                .ok_or_else(|| CliError::Config("missing [sweep] section".into()))?;
            let overrides = SweepOverrides {
                seed,
                trials,
                methods: methods.as_deref().map(parse_methods).transpose()?,
            };
            overrides.apply(&mut spec);
            spec.points()?;
            let workers = workers.map_or(Workers::Auto, Workers::Fixed);
            let out_path = output.clone().unwrap_or_else(|| PathBuf::from("-"));
            let (csv, manifest) = run_sweep_csv(&spec, &cfg.kernel, workers, &out_path)?;
            emit(&csv, output.as_ref())?;
            let json = serde_json::to_string(&manifest)
                .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            eprintln!("{json}");
            Ok(())
        }
        Command::Spectrum {
            config,
            seed,
            output,
        } => {
            let cfg = load_config(&config)?;
            let csv = spectrum_csv(&cfg.scenario, &cfg.kernel, seed)?;
            emit(&csv, output.as_ref())
        }
        Command::Entropy { values, bandwidth } => {
            let parsed = values
                .iter()
                .flat_map(|v| v.split(','))
                .filter(|v| !v.trim().is_empty())
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Config(format!("not a number: `{v}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let h = entropy_of_values(&parsed, bandwidth)?;
            println!("{}", format_significant(h, 12));
            Ok(())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
