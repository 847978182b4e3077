//! Seeded random matrix generation. Every generator takes an explicit rng;
//! identical seeds give identical matrices.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::eig::svd;
use crate::spectral::hermitian::HermitianMatrix;
use crate::spectral::matrix::ComplexMatrix;

/// Eigenvalue law for random psd matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumLaw {
    /// i.i.d. uniform on [0, 1).
    Uniform01,
    /// i.i.d. exponential with unit rate.
    Exp,
    /// k eigenvalues pinned to zero, the rest uniform on [0, 1).
    RankDeficient(usize),
    /// Fixed eigenvalue list (length must match n).
    Custom(Vec<f64>),
}

impl SpectrumLaw {
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
        match self {
            SpectrumLaw::Uniform01 => Ok((0..n).map(|_| rng.gen::<f64>()).collect()),
            SpectrumLaw::Exp => Ok((0..n)
                .map(|_| {
                    let u: f64 = rng.gen::<f64>();
                    -(1.0 - u).ln()
                })
                .collect()),
            SpectrumLaw::RankDeficient(k) => {
                if *k > n {
                    return Err(Error::Parameter(format!(
                        "rank deficiency {k} exceeds dimension {n}"
                    )));
                }
                let mut v: Vec<f64> = (0..n - k).map(|_| rng.gen::<f64>()).collect();
                v.extend(std::iter::repeat(0.0).take(*k));
                Ok(v)
            }
            SpectrumLaw::Custom(values) => {
                if values.len() != n {
                    return Err(Error::Dimension {
                        context: "custom spectrum length",
                        got: values.len(),
                        expected: n,
                    });
                }
                if values.iter().any(|&x| x < 0.0) {
                    return Err(Error::Parameter(
                        "custom spectrum must be non-negative".into(),
                    ));
                }
                Ok(values.clone())
            }
        }
    }
}

impl std::str::FromStr for SpectrumLaw {
    type Err = Error;

    /// `uniform01`, `exp`, `rank_deficient(k)`, or `custom(v1, v2, …)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "uniform01" => return Ok(SpectrumLaw::Uniform01),
            "exp" => return Ok(SpectrumLaw::Exp),
            _ => {}
        }
        let parse_args = |name: &str| -> Option<&str> {
            s.strip_prefix(name)?
                .trim()
                .strip_prefix('(')?
                .trim_end()
                .strip_suffix(')')
        };
        if let Some(args) = parse_args("rank_deficient") {
            let k: usize = args.trim().parse().map_err(|_| {
                Error::Parameter(format!("rank_deficient wants an integer, got `{args}`"))
            })?;
            return Ok(SpectrumLaw::RankDeficient(k));
        }
        if let Some(args) = parse_args("custom") {
            let values = args
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| {
                        Error::Parameter(format!("custom spectrum entry `{tok}` is not a number"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            return Ok(SpectrumLaw::Custom(values));
        }
        Err(Error::Parameter(format!(
            "unknown spectrum law `{s}` (try uniform01, exp, rank_deficient(k), custom(…))"
        )))
    }
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Square matrix of i.i.d. standard complex Gaussians.
pub fn random_gaussian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let entries = (0..n * n).map(|_| gaussian_complex(rng)).collect();
    ComplexMatrix::new(n, n, entries).expect("gaussian entries are finite")
}

/// Haar-distributed unitary: Gram–Schmidt QR of a complex Gaussian. The
/// R diagonal from Gram–Schmidt is real positive, which is exactly the
/// phase normalization Haar measure needs.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_gaussian(n, rng);
    let mut q = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut col = g.column(j);
        // Two orthogonalization passes for numerical safety.
        for _ in 0..2 {
            for prev in 0..j {
                let p = q.column(prev);
                let coeff: Complex64 = p
                    .iter()
                    .zip(col.iter())
                    .map(|(pi, ci)| pi.conj() * ci)
                    .sum();
                for (ci, pi) in col.iter_mut().zip(p.iter()) {
                    *ci -= coeff * pi;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in col.iter_mut() {
            *z /= norm;
        }
        q.set_column(j, &col);
    }
    q
}

/// U diag(spectrum) U* with Haar U.
pub fn random_psd(n: usize, law: &SpectrumLaw, rng: &mut impl Rng) -> Result<HermitianMatrix> {
    let spectrum = law.sample(n, rng)?;
    let u = random_unitary(n, rng);
    let lambda = ComplexMatrix::diag(&spectrum);
    Ok(HermitianMatrix::symmetrize(
        u.matmul(&lambda).matmul(&u.adjoint()),
    ))
}

/// Haar-conjugated diagonal with i.i.d. uniform spectrum on [lo, hi].
pub fn random_hermitian_in_interval(
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut impl Rng,
) -> HermitianMatrix {
    let spectrum: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect();
    let u = random_unitary(n, rng);
    let lambda = ComplexMatrix::diag(&spectrum);
    HermitianMatrix::symmetrize(u.matmul(&lambda).matmul(&u.adjoint()))
}

/// Gaussian rescaled so the largest singular value is strictly below 1.
pub fn random_contraction(n: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let g = random_gaussian(n, rng);
    let mu = singular_values_of(&g)?;
    let mu1 = mu.first().copied().unwrap_or(0.0);
    Ok(g.scale(1.0 / (mu1 + 1e-12 * (1.0 + mu1))))
}

/// Inverse of a regularized contraction: all singular values ≥ 1.
pub fn random_expansive(n: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let g = random_gaussian(n, rng);
    let dec = svd(&g)?;
    let mu1 = dec.singular_values.first().copied().unwrap_or(0.0);
    if mu1 == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    // Contraction singular values, floored away from zero so the inverse
    // stays tame, then inverted.
    let inv: Vec<f64> = dec
        .singular_values
        .iter()
        .map(|&s| {
            let contracted = (s / (mu1 + 1e-12 * (1.0 + mu1))).max(1e-2);
            1.0 / contracted
        })
        .collect();
    Ok(dec
        .v
        .matmul(&ComplexMatrix::diag(&inv))
        .matmul(&dec.u.adjoint()))
}

/// A psd (n+m)×(n+m) matrix M = [[A, X], [X*, B]] and its blocks.
pub struct PsdBlock {
    pub m: HermitianMatrix,
    pub a: HermitianMatrix,
    pub x: ComplexMatrix,
    pub b: HermitianMatrix,
}

pub fn random_psd_block(
    n: usize,
    m: usize,
    law: &SpectrumLaw,
    rng: &mut impl Rng,
) -> Result<PsdBlock> {
    let full = random_psd(n + m, law, rng)?;
    let mat = full.matrix();
    let a = HermitianMatrix::symmetrize(mat.block(0, 0, n, n));
    let x = mat.block(0, n, n, m);
    let b = HermitianMatrix::symmetrize(mat.block(n, n, m, m));
    Ok(PsdBlock { m: full, a, x, b })
}

fn singular_values_of(m: &ComplexMatrix) -> Result<Vec<f64>> {
    crate::spectral::eig::singular_values(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn custom_spectrum_1x1() {
        let m = random_psd(1, &SpectrumLaw::Custom(vec![2.0]), &mut rng(7)).unwrap();
        assert!((m.matrix()[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!(m.matrix()[(0, 0)].im.abs() < 1e-15);
    }

    #[test]
    fn determinism_same_seed() {
        let a = random_psd(4, &SpectrumLaw::Uniform01, &mut rng(42)).unwrap();
        let b = random_psd(4, &SpectrumLaw::Uniform01, &mut rng(42)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let u1 = random_unitary(5, &mut rng(9));
        let u2 = random_unitary(5, &mut rng(9));
        assert_eq!(u1, u2);
    }

    #[test]
    fn unitary_is_unitary() {
        for seed in 0..5 {
            let u = random_unitary(6, &mut rng(seed));
            assert!(u.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn psd_draws_are_psd() {
        for seed in 0..50 {
            let m = random_psd(5, &SpectrumLaw::Uniform01, &mut rng(seed)).unwrap();
            let lambda = m.eigenvalues().unwrap();
            assert!(*lambda.last().unwrap() >= -1e-10);
        }
    }

    #[test]
    fn rank_deficient_has_zero_eigenvalues() {
        let m = random_psd(5, &SpectrumLaw::RankDeficient(2), &mut rng(3)).unwrap();
        let lambda = m.eigenvalues().unwrap();
        assert!(lambda[3].abs() < 1e-10);
        assert!(lambda[4].abs() < 1e-10);
        assert!(lambda[2] > 1e-8);
    }

    #[test]
    fn contraction_and_expansive_singular_values() {
        for seed in 0..10 {
            let z = random_contraction(4, &mut rng(seed)).unwrap();
            let mu = crate::spectral::eig::singular_values(&z).unwrap();
            assert!(mu[0] <= 1.0 + 1e-12);
            let x = random_expansive(4, &mut rng(seed + 100)).unwrap();
            let nu = crate::spectral::eig::singular_values(&x).unwrap();
            assert!(*nu.last().unwrap() >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn block_layout_matches_parent() {
        let blk = random_psd_block(2, 3, &SpectrumLaw::Uniform01, &mut rng(11)).unwrap();
        assert_eq!(blk.m.dim(), 5);
        assert_eq!(blk.a.dim(), 2);
        assert_eq!(blk.b.dim(), 3);
        assert_eq!(blk.x.rows(), 2);
        assert_eq!(blk.x.cols(), 3);
        assert_eq!(blk.m.matrix()[(0, 2)], blk.x[(0, 0)]);
        blk.m.check_psd().unwrap();
    }
}
