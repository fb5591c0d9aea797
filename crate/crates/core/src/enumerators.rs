//! Source-count estimators operating on an eigenvalue spectrum.
//!
//! * `EeeTail`: argmin over `i in 1..P-1` of `F(i+1) - F(i)` (tail windows).
//! * `EeeHead`: argmax over `i in 1..P-1` of `G(i+1) - G(i)` (head windows).
//! * `Aic`, `Mdl`: Wax-Kailath information criteria with the complex-data
//!   penalty `k (2P - k)`, scanned over `k in 0..P-1`.
//!
//! Ties resolve to the smallest index. The entropy criteria never return 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel_entropy::{delta_f, head_entropy_profile, tail_entropy_profile, KernelConfig};
use crate::spectrum::EigenSpectrum;

/// Eigenvalues are floored here before taking logarithms in AIC/MDL.
pub const LOG_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumMethod {
    EeeTail,
    EeeHead,
    Aic,
    Mdl,
}

impl EnumMethod {
    pub const ALL: [EnumMethod; 4] = [
        EnumMethod::EeeTail,
        EnumMethod::EeeHead,
        EnumMethod::Aic,
        EnumMethod::Mdl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnumMethod::EeeTail => "eee-tail",
            EnumMethod::EeeHead => "eee-head",
            EnumMethod::Aic => "aic",
            EnumMethod::Mdl => "mdl",
        }
    }
}

impl fmt::Display for EnumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnumMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnumMethod::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| {
                Error::validation(
                    "methods",
                    format!("unknown method `{s}` (expected eee-tail, eee-head, aic or mdl)"),
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub method: EnumMethod,
    pub k_hat: usize,
    /// The scanned objective. For EEE this is the list of `P - 1` entropy
    /// differences, for AIC/MDL the `P` criterion values for `k = 0..P-1`.
    pub criterion_values: Vec<f64>,
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

fn require_two(spectrum: &EigenSpectrum) -> Result<()> {
    if spectrum.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: spectrum.len(),
        });
    }
    Ok(())
}

pub fn eee_tail(spectrum: &EigenSpectrum, kernel: &KernelConfig) -> Result<EstimateResult> {
    require_two(spectrum)?;
    let diffs = delta_f(&tail_entropy_profile(spectrum, kernel)?)?;
    Ok(EstimateResult {
        method: EnumMethod::EeeTail,
        k_hat: argmin(&diffs) + 1,
        criterion_values: diffs,
    })
}

pub fn eee_head(spectrum: &EigenSpectrum, kernel: &KernelConfig) -> Result<EstimateResult> {
    require_two(spectrum)?;
    let diffs = delta_f(&head_entropy_profile(spectrum, kernel)?)?;
    Ok(EstimateResult {
        method: EnumMethod::EeeHead,
        k_hat: argmax(&diffs) + 1,
        criterion_values: diffs,
    })
}

/// `log(g_k / a_k)` over the `P - k` smallest eigenvalues, for `k = 0..P-1`.
fn log_sphericity(values: &[f64]) -> Vec<f64> {
    let p = values.len();
    (0..p)
        .map(|k| {
            let tail = &values[k..];
            let m = tail.len() as f64;
            let mean_log = tail.iter().map(|v| v.max(LOG_FLOOR).ln()).sum::<f64>() / m;
            let mean = tail.iter().map(|v| v.max(LOG_FLOOR)).sum::<f64>() / m;
            mean_log - mean.ln()
        })
        .collect()
}

fn information_criterion(
    spectrum: &EigenSpectrum,
    num_snapshots: usize,
    method: EnumMethod,
    data_weight: f64,
    penalty_weight: f64,
) -> Result<EstimateResult> {
    require_two(spectrum)?;
    if num_snapshots == 0 {
        return Err(Error::validation("num_snapshots", "must be >= 1"));
    }
    let p = spectrum.len();
    let n = num_snapshots as f64;
    let values: Vec<f64> = log_sphericity(spectrum.values())
        .into_iter()
        .enumerate()
        .map(|(k, ls)| {
            let free = (k * (2 * p - k)) as f64;
            -data_weight * n * (p - k) as f64 * ls + penalty_weight * free
        })
        .collect();
    Ok(EstimateResult {
        method,
        k_hat: argmin(&values),
        criterion_values: values,
    })
}

/// `-2N(P-k) log(g_k/a_k) + 2k(2P-k)`.
pub fn aic(spectrum: &EigenSpectrum, num_snapshots: usize) -> Result<EstimateResult> {
    information_criterion(spectrum, num_snapshots, EnumMethod::Aic, 2.0, 2.0)
}

/// `-N(P-k) log(g_k/a_k) + 0.5 k(2P-k) log N`.
pub fn mdl(spectrum: &EigenSpectrum, num_snapshots: usize) -> Result<EstimateResult> {
    let log_n = (num_snapshots.max(1) as f64).ln();
    information_criterion(spectrum, num_snapshots, EnumMethod::Mdl, 1.0, 0.5 * log_n)
}

/// Dispatches to the estimator for `method`.
pub fn estimate(
    method: EnumMethod,
    spectrum: &EigenSpectrum,
    num_snapshots: usize,
    kernel: &KernelConfig,
) -> Result<EstimateResult> {
    match method {
        EnumMethod::EeeTail => eee_tail(spectrum, kernel),
        EnumMethod::EeeHead => eee_head(spectrum, kernel),
        EnumMethod::Aic => aic(spectrum, num_snapshots),
        EnumMethod::Mdl => mdl(spectrum, num_snapshots),
    }
}
