//! Hermitian matrices and their spectral decompositions.

use crate::error::{Error, Result};
use crate::spectral::eig::jacobi_eigen;
use crate::spectral::matrix::ComplexMatrix;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// A matrix stored exactly Hermitian: construction symmetrizes
/// M ← (M + M*)/2 after checking ‖M − M*‖_F ≤ 1e-12 · (1 + ‖M‖_F).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension {
                context: "hermitian matrix columns",
                got: m.cols(),
                expected: m.rows(),
            });
        }
        let residual = m.sub(&m.adjoint()).frobenius_norm();
        let tol = HERMITICITY_TOL * (1.0 + m.frobenius_norm());
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes without the residual check; for matrices that are
    /// Hermitian in exact arithmetic (U*AU, sums of Hermitians, ...).
    pub fn symmetrize(m: ComplexMatrix) -> Self {
        assert!(m.is_square());
        Self {
            mat: m.adjoint().add(&m).scale(0.5),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self {
            mat: ComplexMatrix::diag(values),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.sub(&other.mat),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            mat: self.mat.scale(c),
        }
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    /// U* A U for a unitary U; Hermitian in exact arithmetic, so the
    /// result is re-symmetrized without a residual check.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::symmetrize(self.mat.conjugate_by(u))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.direct_sum(&other.mat),
        }
    }

    /// Full eigendecomposition, eigenvalues sorted decreasing.
    pub fn eig(&self) -> Result<SpectralDecomposition> {
        let (values, vecs) = jacobi_eigen(&self.mat)?;
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        // Stable descending sort: ties keep solver order.
        order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let mut u = ComplexMatrix::zeros(n, n);
        for (new_j, &old_j) in order.iter().enumerate() {
            u.set_column(new_j, &vecs.column(old_j));
        }
        Ok(SpectralDecomposition { eigenvalues, u })
    }

    /// Eigenvalues only, sorted decreasing.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (mut values, _) = jacobi_eigen(&self.mat)?;
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(values)
    }

    /// Certifies positive semi-definiteness: λ_min ≥ −1e-10 · (1 + λ_max).
    pub fn check_psd(&self) -> Result<()> {
        let values = self.eigenvalues()?;
        let lambda_max = values.first().copied().unwrap_or(0.0);
        let lambda_min = values.last().copied().unwrap_or(0.0);
        if lambda_min < -PSD_TOL * (1.0 + lambda_max.max(0.0)) {
            return Err(Error::NotPsd {
                lambda_min,
            });
        }
        Ok(())
    }

    /// Eigenvalues of a certified-psd matrix, clipped at zero, decreasing.
    pub fn psd_eigenvalues(&self) -> Result<Vec<f64>> {
        let values = self.eigenvalues()?;
        let lambda_max = values.first().copied().unwrap_or(0.0);
        let lambda_min = values.last().copied().unwrap_or(0.0);
        if lambda_min < -PSD_TOL * (1.0 + lambda_max.max(0.0)) {
            return Err(Error::NotPsd {
                lambda_min,
            });
        }
        Ok(values.into_iter().map(|x| x.max(0.0)).collect())
    }
}

/// A = U diag(λ) U* with λ_1 ≥ … ≥ λ_n and unitary U.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    u: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// U diag(λ) U*.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_reconstruct(|x| x)
    }

    /// U diag(f(λ)) U* as a raw matrix.
    pub fn map_reconstruct(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let lambda = ComplexMatrix::diag(&mapped);
        self.u.matmul(&lambda).matmul(&self.u.adjoint())
    }

    /// U diag(f(λ)) U* as a Hermitian matrix; f may reject an eigenvalue.
    pub fn map_hermitian(
        &self,
        mut f: impl FnMut(f64) -> Result<f64>,
    ) -> Result<HermitianMatrix> {
        let mut mapped = Vec::with_capacity(self.eigenvalues.len());
        for &x in &self.eigenvalues {
            mapped.push(f(x)?);
        }
        let lambda = ComplexMatrix::diag(&mapped);
        let raw = self.u.matmul(&lambda).matmul(&self.u.adjoint());
        Ok(HermitianMatrix::symmetrize(raw))
    }
}

/// Builds a Hermitian matrix from eigenvalues and a unitary: U diag(λ) U*.
pub fn from_eigensystem(values: &[f64], u: &ComplexMatrix) -> HermitianMatrix {
    let lambda = ComplexMatrix::diag(values);
    HermitianMatrix::symmetrize(u.matmul(&lambda).matmul(&u.adjoint()))
}

/// Diagonal entries as reals (the matrix is Hermitian, so they are real).
pub fn diagonal_part(a: &HermitianMatrix) -> Vec<f64> {
    (0..a.dim()).map(|i| a.matrix()[(i, i)].re).collect()
}

/// Pinching: zeroes all off-diagonal entries, keeping the diagonal.
pub fn pinch_diagonal(a: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::diag(&diagonal_part(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn symmetrization_is_exact() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 1e-14), c(0.5, 0.25), c(0.5, -0.25), c(2.0, 0.0)],
        )
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        let a = h.matrix();
        assert_eq!(a[(0, 1)], a[(1, 0)].conj());
        assert_eq!(a[(0, 0)].im, 0.0);
        assert_eq!(a[(1, 1)].im, 0.0);
    }

    #[test]
    fn eig_sorted_decreasing_with_reconstruction() {
        let h = HermitianMatrix::new(
            ComplexMatrix::new(
                3,
                3,
                vec![
                    c(1.0, 0.0),
                    c(0.0, 1.0),
                    c(2.0, 0.0),
                    c(0.0, -1.0),
                    c(3.0, 0.0),
                    c(1.0, -1.0),
                    c(2.0, 0.0),
                    c(1.0, 1.0),
                    c(-2.0, 0.0),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let dec = h.eig().unwrap();
        let values = dec.eigenvalues();
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        let recon = dec.reconstruct();
        assert!(
            recon.sub(h.matrix()).frobenius_norm() <= 1e-10 * (1.0 + h.frobenius_norm())
        );
        assert!(dec.unitary().unitarity_residual() <= 1e-10);
    }

    #[test]
    fn diagonal_eig_is_permutation() {
        let h = HermitianMatrix::diag(&[1.0, 2.0, 3.0]);
        let dec = h.eig().unwrap();
        assert_eq!(dec.eigenvalues(), &[3.0, 2.0, 1.0]);
        // Each column of U is a standard basis vector.
        for j in 0..3 {
            let col = dec.unitary().column(j);
            let ones = col.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-12).count();
            let zeros = col.iter().filter(|z| z.norm() < 1e-12).count();
            assert_eq!((ones, zeros), (1, 2));
        }
    }

    #[test]
    fn psd_certification() {
        assert!(HermitianMatrix::diag(&[1.0, 0.0]).check_psd().is_ok());
        assert!(HermitianMatrix::diag(&[1.0, -1e-12]).check_psd().is_ok());
        let err = HermitianMatrix::diag(&[1.0, -0.5]).check_psd();
        assert!(matches!(err, Err(Error::NotPsd { .. })));
        let clipped = HermitianMatrix::diag(&[2.0, -1e-12])
            .psd_eigenvalues()
            .unwrap();
        assert_eq!(clipped, vec![2.0, 0.0]);
    }

    #[test]
    fn pinching_keeps_diagonal() {
        let h = HermitianMatrix::new(
            ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.5, 2.0]).unwrap(),
        )
        .unwrap();
        let p = pinch_diagonal(&h);
        assert_eq!(diagonal_part(&p), vec![1.0, 2.0]);
        assert_eq!(p.matrix()[(0, 1)], c(0.0, 0.0));
    }
}
