//! Reference implementations written directly from the defining formulas,
//! kept free of any code path used by the library.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn literal_kernel_h(x: f64, h: f64) -> f64 {
    (1.0 / h) * (1.0 / (2.0 * PI).sqrt()) * (-(x / h) * (x / h) / 2.0).exp()
}

/// `-(1/n) sum_k log((1/n) sum_l K_h(x_k - x_l))`, evaluated as written.
pub fn literal_entropy(samples: &[f64], h: f64) -> f64 {
    let n = samples.len() as f64;
    let mut outer = 0.0;
    for &xk in samples {
        let mut inner = 0.0;
        for &xl in samples {
            inner += literal_kernel_h(xk - xl, h);
        }
        outer += (inner / n).ln();
    }
    -outer / n
}

/// Expanded form: `log(n) + log(h) - (1/n) sum_j log(K(0) + sum_{k != j} K((x_j - x_k)/h))`.
pub fn expanded_entropy(samples: &[f64], h: f64) -> f64 {
    let n = samples.len();
    let k0 = 1.0 / (2.0 * PI).sqrt();
    let mut acc = 0.0;
    for j in 0..n {
        let mut s = k0;
        for k in 0..n {
            if k != j {
                let u = (samples[j] - samples[k]) / h;
                s += k0 * (-0.5 * u * u).exp();
            }
        }
        acc += s.ln();
    }
    (n as f64).ln() + h.ln() - acc / n as f64
}

pub fn literal_silverman(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    1.06 * sd / n.powf(0.2)
}

/// Scan of `H(i+1..P) - H(i..P)` over `i = 1..P-1`; returns the 1-based argmin
/// (first on ties) and the scanned values.
pub fn tail_scan(values: &[f64], h: f64) -> (usize, Vec<f64>) {
    let p = values.len();
    let crit: Vec<f64> = (1..p)
        .map(|i| literal_entropy(&values[i..], h) - literal_entropy(&values[i - 1..], h))
        .collect();
    let mut best = 0;
    for i in 0..crit.len() {
        if crit[i] < crit[best] {
            best = i;
        }
    }
    (best + 1, crit)
}

/// Scan of `H(1..i+1) - H(1..i)`; returns the 1-based argmax.
pub fn head_scan(values: &[f64], h: f64) -> (usize, Vec<f64>) {
    let p = values.len();
    let crit: Vec<f64> = (1..p)
        .map(|i| literal_entropy(&values[..i + 1], h) - literal_entropy(&values[..i], h))
        .collect();
    let mut best = 0;
    for i in 0..crit.len() {
        if crit[i] > crit[best] {
            best = i;
        }
    }
    (best + 1, crit)
}

/// Wax-Kailath scans with geometric means taken as products of roots.
pub fn wax_kailath_scan(values: &[f64], n: usize, mdl: bool) -> usize {
    let p = values.len();
    let nf = n as f64;
    let mut best = (f64::INFINITY, 0);
    for k in 0..p {
        let tail: Vec<f64> = values[k..].iter().map(|v| v.max(1e-30)).collect();
        let m = tail.len() as f64;
        let geo: f64 = tail.iter().map(|v| v.powf(1.0 / m)).product();
        let arith = tail.iter().sum::<f64>() / m;
        let free = (k * (2 * p - k)) as f64;
        let value = if mdl {
            -nf * m * (geo / arith).ln() + 0.5 * free * nf.ln()
        } else {
            -2.0 * nf * m * (geo / arith).ln() + 2.0 * free
        };
        if value < best.0 {
            best = (value, k);
        }
    }
    best.1
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
