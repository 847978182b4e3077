//! Functional calculus on Hermitian matrices and polar factorization.

use crate::error::{Error, Result};
use crate::spectral::eig::svd;
use crate::spectral::hermitian::HermitianMatrix;
use crate::spectral::matrix::ComplexMatrix;

/// f(A) = U f(Λ) U* for a plain scalar map (no domain restrictions).
pub fn apply_fn(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    a.eig()?.map_hermitian(|x| Ok(f(x)))
}

/// f(A) with a domain guard: eigenvalues outside [lo, hi] (with a small
/// tolerance for the endpoints) are reported, not silently mapped.
pub fn apply_fn_on_domain(
    a: &HermitianMatrix,
    function: &'static str,
    lo: f64,
    hi: f64,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix> {
    let edge = 1e-10;
    a.eig()?.map_hermitian(|x| {
        if x < lo - edge || x > hi + edge {
            return Err(Error::DomainViolation {
                function: function.to_string(),
                eigenvalue: x,
                lo,
                hi,
            });
        }
        Ok(f(x.clamp(lo, hi)))
    })
}

/// Positive square root of a psd matrix; negative round-off eigenvalues
/// are clipped to zero after the psd certification.
pub fn sqrt_psd(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = a.eig()?;
    let values = dec.eigenvalues();
    let lambda_max = values.first().copied().unwrap_or(0.0);
    let lambda_min = values.last().copied().unwrap_or(0.0);
    if lambda_min < -crate::spectral::hermitian::PSD_TOL * (1.0 + lambda_max.max(0.0)) {
        return Err(Error::NotPsd { lambda_min });
    }
    dec.map_hermitian(|x| Ok(x.max(0.0).sqrt()))
}

/// A^q for psd A and q > 0 (0^q = 0).
pub fn power_psd(a: &HermitianMatrix, q: f64) -> Result<HermitianMatrix> {
    let dec = a.eig()?;
    let values = dec.eigenvalues();
    let lambda_max = values.first().copied().unwrap_or(0.0);
    let lambda_min = values.last().copied().unwrap_or(0.0);
    if lambda_min < -crate::spectral::hermitian::PSD_TOL * (1.0 + lambda_max.max(0.0)) {
        return Err(Error::NotPsd { lambda_min });
    }
    dec.map_hermitian(|x| {
        let x = x.max(0.0);
        Ok(if x == 0.0 { 0.0 } else { x.powf(q) })
    })
}

/// Polar decomposition M = U P with U unitary and P psd, via the SVD:
/// U = W V*, P = V Σ V* from M = W Σ V*.
pub struct Polar {
    pub u: ComplexMatrix,
    pub p: HermitianMatrix,
}

pub fn polar(m: &ComplexMatrix) -> Result<Polar> {
    if !m.is_square() {
        return Err(Error::Dimension {
            context: "polar factor columns",
            got: m.cols(),
            expected: m.rows(),
        });
    }
    let svd = svd(m)?;
    let u = svd.u.matmul(&svd.v.adjoint());
    let sigma = ComplexMatrix::diag(&svd.singular_values);
    let p = HermitianMatrix::symmetrize(svd.v.matmul(&sigma).matmul(&svd.v.adjoint()));
    Ok(Polar { u, p })
}
