//! Kernel (Parzen-window) entropy estimation over windows of an eigenvalue
//! spectrum.
//!
//! For samples `x_1..x_n` and bandwidth `h` the estimate is
//!
//! ```text
//! H = -(1/n) sum_k log( (1/n) sum_l K_h(x_k - x_l) ),   K_h(x) = K(x/h) / h
//! ```
//!
//! which is evaluated here in the equivalent form
//! `log(h / K(0)) - (1/n) sum_k log( (1/n) sum_l K((x_k - x_l)/h) / K(0) )`.
//! With the kernel normalised by its peak, identical samples contribute
//! exactly 1 each, so a degenerate window yields exactly `log(h / K(0))`.
//!
//! The tail profile `F(i)` is the estimate over the window `(i..P)` and the
//! head profile `G(i)` over `(1..i)`; both use 1-based indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::EigenSpectrum;

/// `1 / sqrt(2 pi)`.
pub const GAUSSIAN_PEAK: f64 = 0.398_942_280_401_432_7;

/// Silverman's rule-of-thumb constant.
pub const SILVERMAN_FACTOR: f64 = 1.06;

/// Relative factor of the default bandwidth floor, `1e-9 * max(1, mean)`.
pub const DEFAULT_FLOOR_FACTOR: f64 = 1e-9;

/// Standard normal density.
pub fn gaussian_kernel(x: f64) -> f64 {
    GAUSSIAN_PEAK * (-0.5 * x * x).exp()
}

/// `(1/h) K(x/h)`.
pub fn scaled_kernel(x: f64, h: f64) -> Result<f64> {
    check_bandwidth(h)?;
    Ok(gaussian_kernel(x / h) / h)
}

fn check_bandwidth(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(
            "bandwidth",
            format!("must be > 0, got {h}"),
        ))
    }
}

/// Smoothing kernel. Only the Gaussian is provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    #[default]
    Gaussian,
}

impl Kernel {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Kernel::Gaussian => gaussian_kernel(x),
        }
    }

    /// `K(x) / K(0)`.
    pub fn shape(self, x: f64) -> f64 {
        match self {
            Kernel::Gaussian => (-0.5 * x * x).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum BandwidthRule {
    /// `1.06 * sd * n^(-1/5)`.
    #[default]
    Silverman,
    Fixed {
        h: f64,
    },
}

/// Which samples a data-driven bandwidth is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandwidthScope {
    /// One bandwidth from all `P` eigenvalues, shared by every window.
    #[default]
    Global,
    /// Each window gets its own bandwidth from its own samples. One-sample
    /// windows borrow the bandwidth of the adjacent two-sample window.
    PerWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KernelConfig {
    pub kernel: Kernel,
    pub bandwidth_rule: BandwidthRule,
    #[serde(default)]
    pub scope: BandwidthScope,
    /// Lower bound on data-driven bandwidths. `None` means
    /// `1e-9 * max(1, mean eigenvalue)`.
    #[serde(default)]
    pub bandwidth_floor: Option<f64>,
}

impl KernelConfig {
    pub fn fixed(h: f64) -> Self {
        KernelConfig {
            bandwidth_rule: BandwidthRule::Fixed { h },
            ..Default::default()
        }
    }

    pub fn per_window() -> Self {
        KernelConfig {
            scope: BandwidthScope::PerWindow,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let BandwidthRule::Fixed { h } = self.bandwidth_rule {
            check_bandwidth(h)?;
        }
        if let Some(floor) = self.bandwidth_floor {
            if !(floor.is_finite() && floor > 0.0) {
                return Err(Error::validation(
                    "bandwidth_floor",
                    format!("must be > 0, got {floor}"),
                ));
            }
        }
        Ok(())
    }

    /// Floor applied to data-driven bandwidths for this spectrum.
    pub fn floor_for(&self, values: &[f64]) -> f64 {
        self.bandwidth_floor.unwrap_or_else(|| {
            let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
            DEFAULT_FLOOR_FACTOR * mean.max(1.0)
        })
    }

    /// Bandwidth computed from the whole spectrum.
    pub fn global_bandwidth(&self, spectrum: &EigenSpectrum) -> Result<f64> {
        self.validate()?;
        match self.bandwidth_rule {
            BandwidthRule::Fixed { h } => Ok(h),
            BandwidthRule::Silverman => {
                silverman_bandwidth(spectrum.values(), self.floor_for(spectrum.values()))
            }
        }
    }
}

/// `1.06 * sd * n^(-1/5)` with the sample standard deviation (divisor
/// `n - 1`), floored at `floor`.
pub fn silverman_bandwidth(values: &[f64], floor: f64) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let h = SILVERMAN_FACTOR * var.sqrt() * nf.powf(-0.2);
    Ok(h.max(floor))
}

/// Contiguous 1-based inclusive window `(start..=end)` of a spectrum.
#[derive(Debug, Clone, Copy)]
pub struct EntropyWindow<'a> {
    samples: &'a [f64],
    pub start: usize,
    pub end: usize,
}

impl<'a> EntropyWindow<'a> {
    pub fn new(spectrum: &'a EigenSpectrum, start: usize, end: usize) -> Result<Self> {
        let p = spectrum.len();
        if start == 0 || start > end || end > p {
            return Err(Error::validation(
                "window",
                format!("need 1 <= i <= j <= {p}, got ({start}, {end})"),
            ));
        }
        Ok(EntropyWindow {
            samples: &spectrum.values()[start - 1..end],
            start,
            end,
        })
    }

    pub fn samples(&self) -> &'a [f64] {
        self.samples
    }
}

/// Kernel entropy estimate of `samples` at bandwidth `h`.
pub fn entropy_of_samples(samples: &[f64], h: f64, kernel: Kernel) -> Result<f64> {
    check_bandwidth(h)?;
    let n = samples.len();
    if n == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let mut sums = vec![1.0; n];
    for a in 0..n {
        for b in a + 1..n {
            let k = kernel.shape((samples[a] - samples[b]) / h);
            sums[a] += k;
            sums[b] += k;
        }
    }
    let nf = n as f64;
    let mean_log = sums.iter().map(|s| (s / nf).ln()).sum::<f64>() / nf;
    Ok((h / kernel.eval(0.0)).ln() - mean_log)
}

pub fn entropy_estimate(window: &EntropyWindow<'_>, h: f64, kernel: &KernelConfig) -> Result<f64> {
    entropy_of_samples(window.samples(), h, kernel.kernel)
}

fn window_bandwidth(
    values: &[f64],
    range: std::ops::Range<usize>,
    fallback: std::ops::Range<usize>,
    floor: f64,
) -> Result<f64> {
    let range = if range.len() < 2 { fallback } else { range };
    silverman_bandwidth(&values[range], floor)
}

/// `F(i)`, `i = 1..P`: entropy of the tail window `(i..P)`.
pub fn tail_entropy_profile(spectrum: &EigenSpectrum, kernel: &KernelConfig) -> Result<Vec<f64>> {
    profile(spectrum, kernel, |p, i| i..p, |p| p - 2..p)
}

/// `G(i)`, `i = 1..P`: entropy of the head window `(1..i)`.
pub fn head_entropy_profile(spectrum: &EigenSpectrum, kernel: &KernelConfig) -> Result<Vec<f64>> {
    profile(spectrum, kernel, |_, i| 0..i + 1, |_| 0..2)
}

// `window(p, i)` maps a 0-based profile index to a 0-based sample range;
// `pair(p)` is the two-sample window used when a window holds one sample.
fn profile(
    spectrum: &EigenSpectrum,
    kernel: &KernelConfig,
    window: impl Fn(usize, usize) -> std::ops::Range<usize>,
    pair: impl Fn(usize) -> std::ops::Range<usize>,
) -> Result<Vec<f64>> {
    let values = spectrum.values();
    let p = values.len();
    if p < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: p });
    }
    let global = kernel.global_bandwidth(spectrum)?;
    let per_window = matches!(kernel.bandwidth_rule, BandwidthRule::Silverman)
        && kernel.scope == BandwidthScope::PerWindow;
    let floor = kernel.floor_for(values);
    (0..p)
        .map(|i| {
            let range = window(p, i);
            let h = if per_window {
                window_bandwidth(values, range.clone(), pair(p), floor)?
            } else {
                global
            };
            entropy_of_samples(&values[range], h, kernel.kernel)
        })
        .collect()
}

/// First differences `profile[i+1] - profile[i]`.
pub fn delta_f(profile: &[f64]) -> Result<Vec<f64>> {
    if profile.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: profile.len(),
        });
    }
    Ok(profile.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Entropy of `n` identical samples, `log(h sqrt(2 pi))`.
pub fn degenerate_entropy(h: f64) -> f64 {
    (h / GAUSSIAN_PEAK).ln()
}
