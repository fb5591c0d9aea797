//! Experiment configuration files.
//!
//! The format is TOML with four sections. Unknown keys anywhere are errors.
//!
//! ```toml
//! [scenario]
//! num_sensors = 10
//! num_sources = 5
//! num_snapshots = 100
//! snr_db = 8.0
//! # element_spacing = 0.5          wavelengths
//! # doas_deg = [-60, -30, 0, 30, 60]
//! # source_powers = [6.3, 6.3, 6.3, 6.3, 6.3]
//!
//! [noise]
//! model = "gaussian"               # or "gaussian-mixture"
//! sigma2 = 1.0
//! # epsilon = 0.01                 mixture only
//! # eta = 100.0                    mixture only
//!
//! [kernel]
//! bandwidth = "silverman"          # or "fixed" together with `h`
//! scope = "global"                 # or "per-window"
//! # floor = 1e-9
//!
//! [sweep]
//! axis = "snapshots"               # snapshots | snr_db | num_sources | epsilon | eta
//! values = [10, 20, 50, 100, 200]
//! methods = ["eee-tail", "eee-head", "aic", "mdl"]
//! trials = 1000
//! seed = 1
//! ```

use std::path::Path;

use eee_core::array_model::{equal_powers, DEFAULT_ELEMENT_SPACING};
use eee_core::experiments::DEFAULT_TRIALS;
use eee_core::{
    default_doas, BandwidthRule, BandwidthScope, EnumMethod, Kernel, KernelConfig, NoiseModel,
    ScenarioConfig, SweepSpec,
};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    scenario: RawScenario,
    #[serde(default)]
    noise: Option<RawNoise>,
    #[serde(default)]
    kernel: Option<RawKernel>,
    #[serde(default)]
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    num_sensors: i64,
    num_sources: i64,
    num_snapshots: i64,
    snr_db: f64,
    element_spacing: Option<f64>,
    doas_deg: Option<Vec<f64>>,
    source_powers: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    model: String,
    sigma2: Option<f64>,
    epsilon: Option<f64>,
    eta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    bandwidth: Option<String>,
    h: Option<f64>,
    scope: Option<String>,
    floor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    values: Vec<f64>,
    methods: Option<Vec<String>>,
    trials: Option<i64>,
    seed: Option<u64>,
}

/// A parsed and validated configuration file.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub kernel: KernelConfig,
    pub sweep: Option<SweepSpec>,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> CliError {
    CliError::Core(eee_core::Error::Validation {
        field,
        reason: reason.into(),
    })
}

fn count(field: &'static str, v: i64) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| invalid(field, format!("must be non-negative, got {v}")))
}

fn parse_noise(raw: Option<RawNoise>) -> Result<NoiseModel, CliError> {
    let Some(raw) = raw else {
        return Ok(NoiseModel::default());
    };
    let sigma2 = raw.sigma2.unwrap_or(1.0);
    let noise = match raw.model.as_str() {
        "gaussian" => {
            if raw.epsilon.is_some() || raw.eta.is_some() {
                return Err(invalid(
                    "noise",
                    "epsilon/eta are only valid with model = \"gaussian-mixture\"",
                ));
            }
            NoiseModel::Gaussian { sigma2 }
        }
        "gaussian-mixture" => NoiseModel::GaussianMixture {
            sigma2,
            epsilon: raw
                .epsilon
                .ok_or_else(|| invalid("epsilon", "required for gaussian-mixture noise"))?,
            eta: raw
                .eta
                .ok_or_else(|| invalid("eta", "required for gaussian-mixture noise"))?,
        },
        other => {
            return Err(invalid(
                "model",
                format!("unknown noise model `{other}` (expected gaussian or gaussian-mixture)"),
            ))
        }
    };
    noise.validate()?;
    Ok(noise)
}

fn parse_kernel(raw: Option<RawKernel>) -> Result<KernelConfig, CliError> {
    let Some(raw) = raw else {
        return Ok(KernelConfig::default());
    };
    let bandwidth_rule = match raw.bandwidth.as_deref().unwrap_or("silverman") {
        "silverman" => {
            if raw.h.is_some() {
                return Err(invalid("h", "only valid with bandwidth = \"fixed\""));
            }
            BandwidthRule::Silverman
        }
        "fixed" => BandwidthRule::Fixed {
            h: raw
                .h
                .ok_or_else(|| invalid("h", "required with bandwidth = \"fixed\""))?,
        },
        other => {
            return Err(invalid(
                "bandwidth",
                format!("unknown bandwidth rule `{other}` (expected silverman or fixed)"),
            ))
        }
    };
    let scope = match raw.scope.as_deref().unwrap_or("global") {
        "global" => BandwidthScope::Global,
        "per-window" => BandwidthScope::PerWindow,
        other => {
            return Err(invalid(
                "scope",
                format!("unknown bandwidth scope `{other}` (expected global or per-window)"),
            ))
        }
    };
    let kernel = KernelConfig {
        kernel: Kernel::Gaussian,
        bandwidth_rule,
        scope,
        bandwidth_floor: raw.floor,
    };
    kernel.validate()?;
    Ok(kernel)
}

fn parse_scenario(raw: RawScenario, noise: NoiseModel) -> Result<ScenarioConfig, CliError> {
    let num_sources = count("num_sources", raw.num_sources)?;
    let mut cfg = ScenarioConfig {
        num_sensors: count("num_sensors", raw.num_sensors)?,
        num_sources,
        num_snapshots: count("num_snapshots", raw.num_snapshots)?,
        snr_db: raw.snr_db,
        doas: default_doas(num_sources),
        element_spacing: raw.element_spacing.unwrap_or(DEFAULT_ELEMENT_SPACING),
        noise,
        source_powers: equal_powers(num_sources, raw.snr_db, noise.sigma2()),
    };
    if let Some(deg) = raw.doas_deg {
        cfg.doas = deg.iter().map(|d| d.to_radians()).collect();
    }
    if let Some(powers) = raw.source_powers {
        cfg.source_powers = powers;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_sweep(raw: RawSweep, base: &ScenarioConfig) -> Result<SweepSpec, CliError> {
    let methods = match raw.methods {
        Some(names) => names
            .iter()
            .map(|n| n.parse::<EnumMethod>())
            .collect::<Result<Vec<_>, _>>()?,
        None => EnumMethod::ALL.to_vec(),
    };
    let spec = SweepSpec {
        base: base.clone(),
        axis: raw.axis.parse()?,
        values: raw.values,
        methods,
        trials_per_point: match raw.trials {
            Some(t) => count("trials", t)?,
            None => DEFAULT_TRIALS,
        },
        master_seed: raw.seed.unwrap_or(DEFAULT_SEED),
    };
    spec.points()?;
    Ok(spec)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let noise = parse_noise(raw.noise)?;
    let kernel = parse_kernel(raw.kernel)?;
    let scenario = parse_scenario(raw.scenario, noise)?;
    let sweep = raw.sweep.map(|s| parse_sweep(s, &scenario)).transpose()?;
    Ok(ExperimentConfig {
        scenario,
        kernel,
        sweep,
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses a `--methods` list such as `eee-tail,mdl`.
pub fn parse_methods(list: &str) -> Result<Vec<EnumMethod>, CliError> {
    let methods = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<EnumMethod>, _>>()?;
    if methods.is_empty() {
        return Err(invalid("methods", "empty method list"));
    }
    Ok(methods)
}
