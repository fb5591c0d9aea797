//! Deterministic Monte Carlo harness.
//!
//! Every trial owns a ChaCha8 stream seeded from [`mix_seed`], so results
//! depend only on the inputs and never on worker count or scheduling.
//! Sweep point `j` runs with master seed `mix_seed(master, j)` and trial `i`
//! of a batch with seed `mix_seed(batch_master, i)`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array_model::{equal_powers, generate_snapshots, NoiseModel, ScenarioConfig};
use crate::enumerators::{estimate, EnumMethod};
use crate::error::{Error, Result};
use crate::kernel_entropy::KernelConfig;
use crate::spectrum::snapshot_spectrum;

/// Default number of trials per sweep point.
pub const DEFAULT_TRIALS: usize = 1000;

/// SplitMix64 output `index + 1` steps after state `master`:
///
/// ```text
/// z = master + (index + 1) * 0x9E3779B97F4A7C15      (wrapping)
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// z ^ (z >> 31)
/// ```
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Correct,
    FalseAlarm,
    Missed,
}

impl Classification {
    pub fn of(k_hat: usize, k_true: usize) -> Self {
        use std::cmp::Ordering::*;
        match k_hat.cmp(&k_true) {
            Equal => Classification::Correct,
            Greater => Classification::FalseAlarm,
            Less => Classification::Missed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub method: EnumMethod,
    pub k_true: usize,
    pub k_hat: usize,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialBatchStats {
    pub method: EnumMethod,
    pub trials: usize,
    pub n_correct: usize,
    pub n_fa: usize,
    pub n_missed: usize,
    pub p_detect: f64,
    pub p_fa: f64,
    pub p_missed: f64,
}

impl TrialBatchStats {
    pub fn from_counts(method: EnumMethod, n_correct: usize, n_fa: usize, n_missed: usize) -> Self {
        let trials = n_correct + n_fa + n_missed;
        let t = trials.max(1) as f64;
        TrialBatchStats {
            method,
            trials,
            n_correct,
            n_fa,
            n_missed,
            p_detect: n_correct as f64 / t,
            p_fa: n_fa as f64 / t,
            p_missed: n_missed as f64 / t,
        }
    }
}

/// Binomial standard error `sqrt(p (1 - p) / n)`.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Runs every method on one snapshot block drawn from `trial_seed`.
pub fn run_trial(
    config: &ScenarioConfig,
    methods: &[EnumMethod],
    kernel: &KernelConfig,
    trial_seed: u64,
) -> Result<Vec<TrialOutcome>> {
    if methods.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let x = generate_snapshots(config, &mut rng)?;
    let spectrum = snapshot_spectrum(&x)?;
    methods
        .iter()
        .map(|&method| {
            let est = estimate(method, &spectrum, config.num_snapshots, kernel)?;
            Ok(TrialOutcome {
                method,
                k_true: config.num_sources,
                k_hat: est.k_hat,
                classification: Classification::of(est.k_hat, config.num_sources),
            })
        })
        .collect()
}

/// How many threads a batch may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    /// Whatever rayon pool is current.
    #[default]
    Auto,
    /// A dedicated pool of this many threads; 1 runs inline.
    Fixed(usize),
}

fn map_trials<T, F>(trials: usize, workers: Workers, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match workers {
        Workers::Fixed(0) => Err(Error::validation("workers", "must be >= 1")),
        Workers::Fixed(1) => (0..trials).map(f).collect(),
        Workers::Fixed(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::WorkerPool(e.to_string()))?
            .install(|| (0..trials).into_par_iter().map(f).collect()),
        Workers::Auto => (0..trials).into_par_iter().map(f).collect(),
    }
}

/// `trials` independent trials; one stats record per method, in `methods` order.
pub fn run_batch(
    config: &ScenarioConfig,
    methods: &[EnumMethod],
    kernel: &KernelConfig,
    trials: usize,
    master_seed: u64,
    workers: Workers,
) -> Result<Vec<TrialBatchStats>> {
    if trials == 0 {
        return Err(Error::validation("trials", "must be >= 1"));
    }
    config.validate()?;
    kernel.validate()?;
    let outcomes = map_trials(trials, workers, |i| {
        run_trial(config, methods, kernel, mix_seed(master_seed, i as u64))
    })?;

    let mut counts = vec![[0usize; 3]; methods.len()];
    for trial in &outcomes {
        for (slot, outcome) in counts.iter_mut().zip(trial) {
            let idx = match outcome.classification {
                Classification::Correct => 0,
                Classification::FalseAlarm => 1,
                Classification::Missed => 2,
            };
            slot[idx] += 1;
        }
    }
    Ok(methods
        .iter()
        .zip(counts)
        .map(|(&m, [c, fa, miss])| TrialBatchStats::from_counts(m, c, fa, miss))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Snapshots,
    SnrDb,
    NumSources,
    Epsilon,
    Eta,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [
        SweepAxis::Snapshots,
        SweepAxis::SnrDb,
        SweepAxis::NumSources,
        SweepAxis::Epsilon,
        SweepAxis::Eta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Snapshots => "snapshots",
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::NumSources => "num_sources",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Eta => "eta",
        }
    }

    fn is_integral(self) -> bool {
        matches!(self, SweepAxis::Snapshots | SweepAxis::NumSources)
    }

    /// `base` with this axis set to `value`. SNR and source-count changes
    /// re-derive equal powers; a source-count change also re-derives the
    /// default directions.
    pub fn apply(self, base: &ScenarioConfig, value: f64) -> Result<ScenarioConfig> {
        let mut cfg = base.clone();
        let integral = || -> Result<usize> {
            if value.is_finite() && value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::validation(
                    "values",
                    format!(
                        "{} axis needs non-negative integers, got {value}",
                        self.name()
                    ),
                ))
            }
        };
        match self {
            SweepAxis::Snapshots => cfg.num_snapshots = integral()?,
            SweepAxis::SnrDb => {
                cfg.snr_db = value;
                cfg.source_powers = equal_powers(cfg.num_sources, value, cfg.noise.sigma2());
            }
            SweepAxis::NumSources => {
                cfg.num_sources = integral()?;
                cfg.rederive_sources();
            }
            SweepAxis::Epsilon | SweepAxis::Eta => match &mut cfg.noise {
                NoiseModel::GaussianMixture { epsilon, eta, .. } => {
                    if self == SweepAxis::Epsilon {
                        *epsilon = value;
                    } else {
                        *eta = value;
                    }
                }
                NoiseModel::Gaussian { .. } => {
                    return Err(Error::validation(
                        "noise",
                        format!("{} axis requires gaussian-mixture noise", self.name()),
                    ))
                }
            },
        }
        Ok(cfg)
    }

    /// Canonical text of an axis value: integers without a decimal point,
    /// reals in shortest round-trip form.
    pub fn format_value(self, value: f64) -> String {
        if self.is_integral() {
            format!("{}", value as u64)
        } else {
            format!("{value}")
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| Error::validation("axis", format!("unknown sweep axis `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub methods: Vec<EnumMethod>,
    pub trials_per_point: usize,
    pub master_seed: u64,
}

impl SweepSpec {
    /// Validates the sweep and returns the scenario of every point.
    pub fn points(&self) -> Result<Vec<ScenarioConfig>> {
        if self.values.is_empty() {
            return Err(Error::validation(
                "values",
                "sweep needs at least one value",
            ));
        }
        if self
            .values
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::validation("values", "must be strictly increasing"));
        }
        if self.methods.is_empty() {
            return Err(Error::validation("methods", "need at least one method"));
        }
        if self.trials_per_point == 0 {
            return Err(Error::validation("trials", "must be >= 1"));
        }
        self.values
            .iter()
            .map(|&v| {
                let cfg = self.axis.apply(&self.base, v)?;
                cfg.validate().map_err(|e| match e {
                    Error::Validation { field, reason } => Error::Validation {
                        field,
                        reason: format!("at {}={}: {reason}", self.axis, self.axis.format_value(v)),
                    },
                    other => other,
                })?;
                Ok(cfg)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    /// Master seed of the batch behind this row.
    pub seed: u64,
    pub stats: TrialBatchStats,
}

/// One batch per axis value; rows grouped by point, methods in the order given.
pub fn run_sweep(
    spec: &SweepSpec,
    kernel: &KernelConfig,
    workers: Workers,
) -> Result<Vec<SweepRow>> {
    kernel.validate()?;
    let points = spec.points()?;
    let mut rows = Vec::with_capacity(points.len() * spec.methods.len());
    for (j, (cfg, &value)) in points.iter().zip(&spec.values).enumerate() {
        let seed = mix_seed(spec.master_seed, j as u64);
        let stats = run_batch(
            cfg,
            &spec.methods,
            kernel,
            spec.trials_per_point,
            seed,
            workers,
        )?;
        rows.extend(stats.into_iter().map(|stats| SweepRow {
            axis_value: value,
            seed,
            stats,
        }));
    }
    Ok(rows)
}
