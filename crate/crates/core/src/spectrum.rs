//! Sample covariance and its descending eigenvalue spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::array_model::SnapshotMatrix;
use crate::error::{Error, Result};

/// Relative tolerance below which negative eigenvalues are treated as
/// round-off and clamped to zero.
pub const CLAMP_RELATIVE_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of a `P x P` covariance, sorted descending and non-negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSpectrum {
    values: Vec<f64>,
    /// `(P, N)` of the snapshot block the spectrum came from, when known.
    pub source_dims: Option<(usize, usize)>,
}

impl EigenSpectrum {
    /// Wraps an arbitrary list of eigenvalues, sorting it descending.
    /// Values must be finite and non-negative.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(&v) = values.iter().find(|v| **v < 0.0) {
            return Err(Error::NegativeEigenvalue {
                value: v,
                tolerance: 0.0,
            });
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(EigenSpectrum {
            values,
            source_dims: None,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same spectrum multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut s = EigenSpectrum::from_values(self.values.iter().map(|v| v * c).collect())?;
        s.source_dims = self.source_dims;
        Ok(s)
    }
}

/// Spectrum together with the unitary eigenbasis (columns ordered to match).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: EigenSpectrum,
    pub vectors: DMatrix<Complex64>,
}

impl EigenDecomposition {
    /// `U diag(values) U^H`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (mut col, &v) in scaled.column_iter_mut().zip(self.spectrum.values()) {
            col *= Complex64::new(v, 0.0);
        }
        scaled * self.vectors.adjoint()
    }
}

/// `(1/N) sum_i x_i x_i^H`.
pub fn sample_covariance(x: &SnapshotMatrix) -> Result<DMatrix<Complex64>> {
    let n = x.num_snapshots();
    if n == 0 {
        return Err(Error::EmptySnapshots);
    }
    let m = x.matrix();
    Ok((m * m.adjoint()).unscale(n as f64))
}

/// Eigen-decomposes a Hermitian matrix after symmetrising it.
pub fn eigen_decomposition(c: &DMatrix<Complex64>) -> Result<EigenDecomposition> {
    if c.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    let hermitian = (c + c.adjoint()).unscale(2.0);
    let eig = SymmetricEigen::new(hermitian);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    // stable: ties keep solver order
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let max_abs = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tolerance = CLAMP_RELATIVE_TOLERANCE * max_abs;
    let mut values = Vec::with_capacity(order.len());
    for &i in &order {
        let v = eig.eigenvalues[i];
        if v < -tolerance {
            return Err(Error::NegativeEigenvalue {
                value: v,
                tolerance,
            });
        }
        values.push(v.max(0.0));
    }
    let vectors = DMatrix::from_fn(c.nrows(), order.len(), |r, k| {
        eig.eigenvectors[(r, order[k])]
    });
    Ok(EigenDecomposition {
        spectrum: EigenSpectrum {
            values,
            source_dims: None,
        },
        vectors,
    })
}

pub fn eigenvalues_descending(c: &DMatrix<Complex64>) -> Result<EigenSpectrum> {
    eigen_decomposition(c).map(|d| d.spectrum)
}

/// Sample covariance followed by its spectrum, tagged with `(P, N)`.
pub fn snapshot_spectrum(x: &SnapshotMatrix) -> Result<EigenSpectrum> {
    let mut s = eigenvalues_descending(&sample_covariance(x)?)?;
    s.source_dims = Some((x.num_sensors(), x.num_snapshots()));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_block_has_zero_covariance() {
        let x = SnapshotMatrix(DMatrix::zeros(3, 4));
        assert_eq!(sample_covariance(&x).unwrap(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn single_snapshot_outer_product() {
        let x = SnapshotMatrix(DMatrix::from_column_slice(
            2,
            1,
            &[c(1.0, 0.0), c(0.0, 1.0)],
        ));
        let cov = sample_covariance(&x).unwrap();
        let expected =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert_eq!(cov, expected);
    }

    #[test]
    fn empty_block_is_rejected() {
        let x = SnapshotMatrix(DMatrix::zeros(3, 0));
        assert_eq!(sample_covariance(&x).unwrap_err(), Error::EmptySnapshots);
    }

    #[test]
    fn scaled_identity_spectrum() {
        let m = DMatrix::identity(4, 4) * c(2.0, 0.0);
        let s = eigenvalues_descending(&m).unwrap();
        for v in s.values() {
            assert_relative_eq!(*v, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rank_one_two_by_two() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let s = eigenvalues_descending(&m).unwrap();
        assert_relative_eq!(s.values()[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.values()[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn non_finite_is_rejected() {
        let mut m = DMatrix::identity(2, 2) * c(1.0, 0.0);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert_eq!(eigenvalues_descending(&m).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn clearly_negative_eigenvalue_is_rejected() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(
            eigenvalues_descending(&m),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn from_values_sorts_descending() {
        let s = EigenSpectrum::from_values(vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
        assert!(EigenSpectrum::from_values(vec![1.0, -1.0]).is_err());
    }
}
