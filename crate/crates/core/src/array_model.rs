//! Uniform-linear-array signal model: steering vectors, population covariance
//! and synthetic snapshot generation under Gaussian or Gaussian-mixture noise.
//!
//! Observations follow `x(t) = A s(t) + n(t)` with `A` the `P x K` steering
//! matrix, `s(t)` independent circularly symmetric complex Gaussian sources and
//! `n(t)` white noise. The mixture noise draws each entry from `N(0, sigma2)`
//! with probability `1 - epsilon` and from `N(0, eta * sigma2)` otherwise.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-wavelength element spacing.
pub const DEFAULT_ELEMENT_SPACING: f64 = 0.5;

/// Half-width of the sector used for default source directions (60 degrees).
pub const DEFAULT_SECTOR_HALF_WIDTH: f64 = PI / 3.0;

/// Additive noise distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum NoiseModel {
    Gaussian {
        sigma2: f64,
    },
    /// Two-component Gaussian mixture: impulses with probability `epsilon`
    /// and variance `eta * sigma2`.
    GaussianMixture {
        sigma2: f64,
        epsilon: f64,
        eta: f64,
    },
}

impl NoiseModel {
    /// Nominal (non-impulsive) component variance.
    pub fn sigma2(&self) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma2 } | NoiseModel::GaussianMixture { sigma2, .. } => sigma2,
        }
    }

    /// Per-entry variance of the full distribution, `(1 - eps) s2 + eps eta s2`.
    pub fn total_variance(&self) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma2 } => sigma2,
            NoiseModel::GaussianMixture {
                sigma2,
                epsilon,
                eta,
            } => (1.0 - epsilon) * sigma2 + epsilon * eta * sigma2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sigma2 = self.sigma2();
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::validation(
                "sigma2",
                format!("must be > 0, got {sigma2}"),
            ));
        }
        if let NoiseModel::GaussianMixture { epsilon, eta, .. } = *self {
            if !(0.0..=1.0).contains(&epsilon) {
                return Err(Error::validation(
                    "epsilon",
                    format!("must lie in [0, 1], got {epsilon}"),
                ));
            }
            if !(eta.is_finite() && eta >= 1.0) {
                return Err(Error::validation("eta", format!("must be >= 1, got {eta}")));
            }
        }
        Ok(())
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::Gaussian { sigma2: 1.0 }
    }
}

/// One synthetic experiment point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub num_sensors: usize,
    pub num_sources: usize,
    pub num_snapshots: usize,
    /// Per-source power over the nominal noise variance, in dB.
    pub snr_db: f64,
    /// Source directions in radians.
    pub doas: Vec<f64>,
    /// Sensor spacing in wavelengths.
    pub element_spacing: f64,
    pub noise: NoiseModel,
    /// Linear source powers `l_{S,i}`.
    pub source_powers: Vec<f64>,
}

impl ScenarioConfig {
    /// Scenario with default geometry: half-wavelength spacing, directions
    /// evenly spread over the +-60 degree sector and equal powers from `snr_db`.
    pub fn new(
        num_sensors: usize,
        num_sources: usize,
        num_snapshots: usize,
        snr_db: f64,
        noise: NoiseModel,
    ) -> Self {
        ScenarioConfig {
            num_sensors,
            num_sources,
            num_snapshots,
            snr_db,
            doas: default_doas(num_sources),
            element_spacing: DEFAULT_ELEMENT_SPACING,
            noise,
            source_powers: equal_powers(num_sources, snr_db, noise.sigma2()),
        }
    }

    /// Re-derive directions and powers after `num_sources` or `snr_db` changed.
    pub fn rederive_sources(&mut self) {
        self.doas = default_doas(self.num_sources);
        self.source_powers = equal_powers(self.num_sources, self.snr_db, self.noise.sigma2());
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_sensors == 0 {
            return Err(Error::validation("num_sensors", "must be >= 1"));
        }
        if self.num_sources >= self.num_sensors {
            return Err(Error::validation(
                "num_sources",
                format!(
                    "must be < num_sensors ({}), got {}",
                    self.num_sensors, self.num_sources
                ),
            ));
        }
        if self.num_snapshots == 0 {
            return Err(Error::validation("num_snapshots", "must be >= 1"));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::validation("snr_db", "must be finite"));
        }
        if !(self.element_spacing.is_finite() && self.element_spacing > 0.0) {
            return Err(Error::validation(
                "element_spacing",
                format!("must be > 0, got {}", self.element_spacing),
            ));
        }
        if self.doas.len() != self.num_sources {
            return Err(Error::validation(
                "doas",
                format!(
                    "expected {} directions, got {}",
                    self.num_sources,
                    self.doas.len()
                ),
            ));
        }
        check_doas(&self.doas)?;
        if self.source_powers.len() != self.num_sources {
            return Err(Error::validation(
                "source_powers",
                format!(
                    "expected {} powers, got {}",
                    self.num_sources,
                    self.source_powers.len()
                ),
            ));
        }
        if let Some(p) = self
            .source_powers
            .iter()
            .find(|p| !(p.is_finite() && **p > 0.0))
        {
            return Err(Error::validation(
                "source_powers",
                format!("powers must be > 0, got {p}"),
            ));
        }
        self.noise.validate()
    }
}

/// `K` directions evenly spaced on the closed sector [-60 deg, 60 deg].
/// A single source sits at broadside.
pub fn default_doas(num_sources: usize) -> Vec<f64> {
    match num_sources {
        0 => Vec::new(),
        1 => vec![0.0],
        k => (0..k)
            .map(|i| {
                -DEFAULT_SECTOR_HALF_WIDTH
                    + 2.0 * DEFAULT_SECTOR_HALF_WIDTH * i as f64 / (k - 1) as f64
            })
            .collect(),
    }
}

/// Equal linear powers `sigma2 * 10^(snr_db / 10)`.
pub fn equal_powers(num_sources: usize, snr_db: f64, sigma2: f64) -> Vec<f64> {
    vec![sigma2 * 10f64.powf(snr_db / 10.0); num_sources]
}

fn check_doas(doas: &[f64]) -> Result<()> {
    match doas
        .iter()
        .find(|d| !(d.is_finite() && d.abs() < FRAC_PI_2))
    {
        Some(d) => Err(Error::validation(
            "doas",
            format!("direction {d} rad outside (-pi/2, pi/2)"),
        )),
        None => Ok(()),
    }
}

/// `P x K` array manifold of a uniform linear array.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringMatrix(pub DMatrix<Complex64>);

impl SteeringMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

/// `P x N` observation block; column `i` is the snapshot at time `t_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix(pub DMatrix<Complex64>);

impl SnapshotMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn num_sensors(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_snapshots(&self) -> usize {
        self.0.ncols()
    }
}

/// Entry `(p, k)` is `exp(j 2 pi d p sin(theta_k))`.
pub fn build_steering_matrix(
    num_sensors: usize,
    doas: &[f64],
    spacing: f64,
) -> Result<SteeringMatrix> {
    if num_sensors == 0 {
        return Err(Error::validation("num_sensors", "must be >= 1"));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::validation(
            "element_spacing",
            format!("must be > 0, got {spacing}"),
        ));
    }
    check_doas(doas)?;
    let a = DMatrix::from_fn(num_sensors, doas.len(), |p, k| {
        Complex64::from_polar(1.0, 2.0 * PI * spacing * p as f64 * doas[k].sin())
    });
    Ok(SteeringMatrix(a))
}

/// `A diag(l) A^H + sigma2 I`.
pub fn population_covariance(config: &ScenarioConfig) -> Result<DMatrix<Complex64>> {
    config.validate()?;
    let a = build_steering_matrix(config.num_sensors, &config.doas, config.element_spacing)?.0;
    let p = config.num_sensors;
    let mut weighted = a.clone();
    for (mut col, &power) in weighted.column_iter_mut().zip(&config.source_powers) {
        col *= Complex64::new(power, 0.0);
    }
    let mut c = &weighted * a.adjoint();
    let sigma2 = config.noise.sigma2();
    for i in 0..p {
        c[(i, i)] += Complex64::new(sigma2, 0.0);
    }
    Ok(c)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

/// Draws a `P x N` noise block, entries in column-major order.
pub fn sample_noise<R: Rng + ?Sized>(
    model: &NoiseModel,
    num_sensors: usize,
    num_snapshots: usize,
    rng: &mut R,
) -> DMatrix<Complex64> {
    let mut w = DMatrix::zeros(num_sensors, num_snapshots);
    match *model {
        NoiseModel::Gaussian { sigma2 } => {
            for z in w.iter_mut() {
                *z = complex_normal(rng, sigma2);
            }
        }
        NoiseModel::GaussianMixture {
            sigma2,
            epsilon,
            eta,
        } => {
            for z in w.iter_mut() {
                let u: f64 = rng.random();
                let variance = if u < epsilon { eta * sigma2 } else { sigma2 };
                *z = complex_normal(rng, variance);
            }
        }
    }
    w
}

/// `X = A S + W`. Sources are drawn before the noise block.
pub fn generate_snapshots<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    rng: &mut R,
) -> Result<SnapshotMatrix> {
    config.validate()?;
    let a = build_steering_matrix(config.num_sensors, &config.doas, config.element_spacing)?.0;
    let n = config.num_snapshots;
    let mut s = DMatrix::zeros(config.num_sources, n);
    for t in 0..n {
        for (k, &power) in config.source_powers.iter().enumerate() {
            s[(k, t)] = complex_normal(rng, power);
        }
    }
    let w = sample_noise(&config.noise, config.num_sensors, n, rng);
    Ok(SnapshotMatrix(a * s + w))
}
