//! Cyclic Jacobi eigensolver for complex Hermitian matrices, plus the
//! SVD built on top of it (eigendecomposition of M*M).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 100;
const CONVERGENCE_FACTOR: f64 = 1e-13;

/// Frobenius mass of the off-diagonal part.
fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry.
///
/// The pivot block is first made real by the phase d = conj(a_pq)/|a_pq|
/// (conjugation by diag(1, d) in the pivot plane), then a classical real
/// rotation with the small-root tangent annihilates the off-diagonal. The
/// combined plane unitary is R = [[c, s], [-d s, d c]].
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g < 1e-300 {
        return;
    }
    let d = apq.conj() / g;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let rpp = Complex64::new(c, 0.0);
    let rpq = Complex64::new(s, 0.0);
    let rqp = -d * s;
    let rqq = d * c;

    let n = m.rows();
    for j in 0..n {
        if j == p || j == q {
            continue;
        }
        let mjp = m[(j, p)];
        let mjq = m[(j, q)];
        let new_p = mjp * rpp + mjq * rqp;
        let new_q = mjp * rpq + mjq * rqq;
        m[(j, p)] = new_p;
        m[(j, q)] = new_q;
        m[(p, j)] = new_p.conj();
        m[(q, j)] = new_q.conj();
    }
    m[(p, p)] = Complex64::new(app - t * g, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * g, 0.0);
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);

    for j in 0..n {
        let vjp = v[(j, p)];
        let vjq = v[(j, q)];
        v[(j, p)] = vjp * rpp + vjq * rqp;
        v[(j, q)] = vjp * rpq + vjq * rqq;
    }
}

/// Diagonalizes a Hermitian matrix: A = V diag(values) V*, values unsorted.
///
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-13 · ‖A‖_F; errors out with the residual after 100 sweeps.
pub(crate) fn jacobi_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = CONVERGENCE_FACTOR * a.frobenius_norm();

    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            let values = (0..n).map(|i| m[(i, i)].re).collect();
            return Ok((values, v));
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    let off = off_diagonal_norm(&m);
    if off <= threshold {
        let values = (0..n).map(|i| m[(i, i)].re).collect();
        return Ok((values, v));
    }
    Err(Error::NonConvergence {
        sweeps: MAX_SWEEPS,
        off_diag: off,
    })
}

/// Singular value decomposition M ≈ U diag(σ) V* for square M, with
/// σ_1 ≥ … ≥ σ_n ≥ 0 and U, V unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Singular values of any finite matrix, decreasing: square roots of the
/// eigenvalues of M*M (clipped at zero), truncated to min(rows, cols).
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = m.adjoint().matmul(m);
    let (mut values, _) = jacobi_eigen(&gram)?;
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    values.truncate(m.rows().min(m.cols()));
    Ok(values.into_iter().map(|x| x.max(0.0).sqrt()).collect())
}

/// Full SVD of a square matrix via the eigendecomposition of M*M.
///
/// Left vectors are M v_i / ‖M v_i‖ for σ_i above 1e-12 · σ_1, re-run
/// through modified Gram–Schmidt; the remaining columns are completed from
/// standard basis vectors so U is always a full unitary.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    assert!(m.is_square(), "svd expects a square matrix");
    let n = m.rows();
    let gram = m.adjoint().matmul(m);
    let (values, vecs) = jacobi_eigen(&gram)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    let sigma: Vec<f64> = order
        .iter()
        .map(|&i| values[i].max(0.0).sqrt())
        .collect();
    let mut v = ComplexMatrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        v.set_column(new_j, &vecs.column(old_j));
    }

    let drop_threshold = 1e-12 * sigma.first().copied().unwrap_or(0.0);
    let mut u_cols: Vec<Option<Vec<Complex64>>> = vec![None; n];
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..n {
        if sigma[j] <= drop_threshold {
            continue;
        }
        let mut w = mat_vec(m, &v.column(j));
        orthogonalize(&mut w, &basis);
        let norm = vec_norm(&w);
        if norm <= 1e-14 {
            continue;
        }
        scale_vec(&mut w, 1.0 / norm);
        u_cols[j] = Some(w.clone());
        basis.push(w);
    }
    // Fill null-space columns from standard basis vectors.
    for j in 0..n {
        if u_cols[j].is_some() {
            continue;
        }
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..n {
            let mut cand = vec![Complex64::new(0.0, 0.0); n];
            cand[e] = Complex64::new(1.0, 0.0);
            orthogonalize(&mut cand, &basis);
            let norm = vec_norm(&cand);
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, cand));
            }
        }
        let (norm, mut w) = best.expect("n >= 1");
        debug_assert!(norm > 1e-8, "basis completion degenerate");
        scale_vec(&mut w, 1.0 / norm);
        u_cols[j] = Some(w.clone());
        basis.push(w);
    }

    let mut u = ComplexMatrix::zeros(n, n);
    for (j, col) in u_cols.into_iter().enumerate() {
        u.set_column(j, &col.unwrap());
    }
    Ok(Svd {
        u,
        singular_values: sigma,
        v,
    })
}

fn mat_vec(m: &ComplexMatrix, x: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m.rows()];
    for i in 0..m.rows() {
        for (k, xv) in x.iter().enumerate() {
            out[i] += m[(i, k)] * xv;
        }
    }
    out
}

fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn scale_vec(x: &mut [Complex64], c: f64) {
    for z in x.iter_mut() {
        *z *= c;
    }
}

/// Two rounds of modified Gram–Schmidt against an orthonormal set.
fn orthogonalize(x: &mut Vec<Complex64>, basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let coeff: Complex64 = b
                .iter()
                .zip(x.iter())
                .map(|(bi, xi)| bi.conj() * xi)
                .sum();
            for (xi, bi) in x.iter_mut().zip(b.iter()) {
                *xi -= coeff * bi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input_is_fixed_point() {
        let a = ComplexMatrix::diag(&[1.0, 2.0, 3.0]);
        let (values, v) = jacobi_eigen(&a).unwrap();
        let mut sorted = values.clone();
        sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert_eq!(sorted, vec![3.0, 2.0, 1.0]);
        assert!(v.unitarity_residual() < 1e-12);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[2,1],[1,2]] has eigenvalues 3 and 1.
        let a = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let (mut values, v) = jacobi_eigen(&a).unwrap();
        values.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert!((values[0] - 3.0).abs() < 1e-12);
        assert!((values[1] - 1.0).abs() < 1e-12);
        assert!(v.unitarity_residual() < 1e-12);
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let a = ComplexMatrix::new(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -2.0),
                c(1.0, -1.0),
                c(5.0, 0.0),
                c(0.5, 0.25),
                c(0.0, 2.0),
                c(0.5, -0.25),
                c(-1.0, 0.0),
            ],
        )
        .unwrap();
        let (values, v) = jacobi_eigen(&a).unwrap();
        let lambda = ComplexMatrix::diag(&values);
        let recon = v.matmul(&lambda).matmul(&v.adjoint());
        assert!(recon.sub(&a).frobenius_norm() < 1e-10 * (1.0 + a.frobenius_norm()));
        assert!(v.unitarity_residual() < 1e-10);
    }

    #[test]
    fn zero_matrix() {
        let a = ComplexMatrix::zeros(3, 3);
        let (values, v) = jacobi_eigen(&a).unwrap();
        assert!(values.iter().all(|&x| x == 0.0));
        assert_eq!(v, ComplexMatrix::identity(3));
    }

    #[test]
    fn singular_values_of_negative_diagonal() {
        let m = ComplexMatrix::diag(&[-3.0, 2.0]);
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-10);
        assert!((sv[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn singular_values_of_nilpotent() {
        // [[0,2],[0,0]]: M*M = diag(0,4), singular values (2,0).
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-10);
        assert!(sv[1].abs() < 1e-10);
    }

    #[test]
    fn svd_reconstructs_rank_deficient() {
        let m = ComplexMatrix::from_real(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, -1.0])
            .unwrap();
        let svd = svd(&m).unwrap();
        let recon = svd
            .u
            .matmul(&ComplexMatrix::diag(&svd.singular_values))
            .matmul(&svd.v.adjoint());
        assert!(recon.sub(&m).frobenius_norm() < 1e-9 * (1.0 + m.frobenius_norm()));
        assert!(svd.u.unitarity_residual() < 1e-10);
        assert!(svd.v.unitarity_residual() < 1e-10);
    }
}
