//! Library half of the `eee` command-line tool: configuration parsing, the
//! sweep/spectrum CSV writers and the entropy calculator.

pub mod app;
pub mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use eee_core::kernel_entropy::entropy_of_samples;
use eee_core::{
    delta_f, generate_snapshots, run_sweep, silverman_bandwidth, snapshot_spectrum,
    tail_entropy_profile, Kernel, KernelConfig, ScenarioConfig, SweepRow, SweepSpec, Workers,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Revision of the CSV/config contract this build implements.
pub const SPEC_REVISION: &str = "1";

pub const SWEEP_HEADER: [&str; 8] = [
    "axis",
    "axis_value",
    "method",
    "trials",
    "p_detect",
    "p_fa",
    "p_missed",
    "seed",
];

pub const SPECTRUM_HEADER: [&str; 4] = ["index", "eigenvalue", "F", "delta_F"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] eee_core::Error),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for anything the user can fix in their input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(eee_core::Error::Validation { .. })
            | CliError::Core(eee_core::Error::TooFewSamples { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub spec: SweepSpec,
    pub kernel: KernelConfig,
    pub output_path: PathBuf,
    pub emitted_rows: usize,
    pub tool_version: String,
    pub spec_revision: String,
}

fn method_order(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| {
        a.axis_value
            .total_cmp(&b.axis_value)
            .then_with(|| a.stats.method.name().cmp(b.stats.method.name()))
    });
}

/// Renders sweep rows as CSV, ordered by axis value then method name.
pub fn sweep_csv(spec: &SweepSpec, mut rows: Vec<SweepRow>) -> Result<Vec<u8>, CliError> {
    method_order(&mut rows);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for row in &rows {
        let s = &row.stats;
        w.write_record([
            spec.axis.name().to_string(),
            spec.axis.format_value(row.axis_value),
            s.method.name().to_string(),
            s.trials.to_string(),
            format!("{:.6}", s.p_detect),
            format!("{:.6}", s.p_fa),
            format!("{:.6}", s.p_missed),
            row.seed.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Command-line adjustments applied on top of a sweep config.
#[derive(Debug, Default, Clone)]
pub struct SweepOverrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub methods: Option<Vec<eee_core::EnumMethod>>,
}

impl SweepOverrides {
    pub fn apply(&self, spec: &mut SweepSpec) {
        if let Some(seed) = self.seed {
            spec.master_seed = seed;
        }
        if let Some(trials) = self.trials {
            spec.trials_per_point = trials;
        }
        if let Some(methods) = &self.methods {
            spec.methods = methods.clone();
        }
    }
}

/// Runs a sweep and returns the CSV bytes and the manifest.
pub fn run_sweep_csv(
    spec: &SweepSpec,
    kernel: &KernelConfig,
    workers: Workers,
    output_path: &Path,
) -> Result<(Vec<u8>, RunManifest), CliError> {
    let rows = run_sweep(spec, kernel, workers)?;
    let emitted_rows = rows.len();
    let csv = sweep_csv(spec, rows)?;
    let manifest = RunManifest {
        spec: spec.clone(),
        kernel: *kernel,
        output_path: output_path.to_path_buf(),
        emitted_rows,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        spec_revision: SPEC_REVISION.to_string(),
    };
    Ok((csv, manifest))
}

/// One seeded trial dumped as `(index, eigenvalue, F(i), delta_F(i))`.
/// The last row has an empty `delta_F`.
pub fn spectrum_csv(
    scenario: &ScenarioConfig,
    kernel: &KernelConfig,
    seed: u64,
) -> Result<Vec<u8>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = generate_snapshots(scenario, &mut rng)?;
    let spectrum = snapshot_spectrum(&x)?;
    let profile = tail_entropy_profile(&spectrum, kernel)?;
    let diffs = delta_f(&profile)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(SPECTRUM_HEADER)?;
    for (i, (lambda, f)) in spectrum.values().iter().zip(&profile).enumerate() {
        w.write_record([
            (i + 1).to_string(),
            lambda.to_string(),
            f.to_string(),
            diffs.get(i).map(f64::to_string).unwrap_or_default(),
        ])?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// Kernel entropy of `values`; Silverman bandwidth when `bandwidth` is `None`.
pub fn entropy_of_values(values: &[f64], bandwidth: Option<f64>) -> Result<f64, CliError> {
    if values.is_empty() {
        return Err(CliError::Core(eee_core::Error::TooFewSamples {
            needed: 1,
            got: 0,
        }));
    }
    let h = match bandwidth {
        Some(h) => h,
        None => silverman_bandwidth(values, KernelConfig::default().floor_for(values))?,
    };
    Ok(entropy_of_samples(values, h, Kernel::Gaussian)?)
}

/// `value` with `digits` significant digits in positional notation.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{:.*}", digits.saturating_sub(1), value);
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}
