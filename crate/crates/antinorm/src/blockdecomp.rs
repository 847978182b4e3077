//! The constructive two-block decomposition and the inequalities it drives.
//!
//! A psd matrix partitioned as M = [[A, X], [X*, B]] factors through its
//! square root R = M^{1/2}: keeping only the top n rows of R gives T, the
//! bottom m rows give S, and then T*T + S*S = R*R = M while TT* = A ⊕ 0
//! and SS* = 0 ⊕ B. The polar unitaries of T and S convert those two
//! congruences into the explicit form
//!
//! ```text
//! M = U (A ⊕ 0) U* + V (0 ⊕ B) V*.
//! ```
//!
//! On top of the decomposition this module evaluates the block
//! inequalities that follow from it: the Lee subadditivity of ‖f(·)‖ over
//! blocks, Fisher's determinant inequality, and the convex/concave
//! q-norm and p-anti-norm block bounds, with their scalar hypotheses
//! checked by the predicates in [`crate::functions`].

use crate::error::{Error, Result};
use crate::functions::predicates::{
    default_grid, is_concave, is_convex, is_subadditive, is_superadditive,
};
use crate::functions::{pow_of, ScalarFn};
use crate::norms::{wedge_norm_hermitian, AntiNormSpec, GaugeSpec, NormSpec};
use crate::report::{Binding, CheckReport, NamedMatrix, WorstInstance};
use crate::spectral::funcalc::{polar, sqrt_psd};
use crate::spectral::hermitian::HermitianMatrix;
use crate::spectral::io::MatrixDoc;
use crate::spectral::matrix::ComplexMatrix;

/// Explicit unitaries and diagonal blocks realizing
/// M = U (A ⊕ 0) U* + V (0 ⊕ B) V*.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
}

impl BlockDecomposition {
    pub fn n(&self) -> usize {
        self.a.dim()
    }

    pub fn m(&self) -> usize {
        self.b.dim()
    }

    pub fn dim(&self) -> usize {
        self.a.dim() + self.b.dim()
    }

    /// U (A ⊕ 0) U* + V (0 ⊕ B) V*, assembled from the stored factors.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let dim = self.dim();
        let a_pad = self.a.matrix().embed_top_left(dim);
        let b_pad = ComplexMatrix::zeros(self.n(), self.n()).direct_sum(self.b.matrix());
        let left = self.u.matmul(&a_pad).matmul(&self.u.adjoint());
        let right = self.v.matmul(&b_pad).matmul(&self.v.adjoint());
        HermitianMatrix::symmetrize(left.add(&right))
    }

    /// ‖reconstruct() − M‖_F.
    pub fn residual(&self, m: &HermitianMatrix) -> f64 {
        self.reconstruct().matrix().sub(m.matrix()).frobenius_norm()
    }

    /// max(‖U*U − I‖_F, ‖V*V − I‖_F).
    pub fn unitarity_defect(&self) -> f64 {
        let eye = ComplexMatrix::identity(self.dim());
        let du = self.u.adjoint().matmul(&self.u).sub(&eye).frobenius_norm();
        let dv = self.v.adjoint().matmul(&self.v).sub(&eye).frobenius_norm();
        du.max(dv)
    }
}

/// Keeps `count` rows of `r` starting at `first`, zeroing the others.
fn keep_rows(r: &ComplexMatrix, first: usize, count: usize) -> ComplexMatrix {
    let dim = r.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in first..first + count {
        for j in 0..dim {
            out[(i, j)] = r[(i, j)];
        }
    }
    out
}

/// The diagonal blocks of a partitioned Hermitian matrix.
pub fn split_blocks(
    m: &HermitianMatrix,
    n: usize,
    mm: usize,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    check_partition(m, n, mm)?;
    let a = HermitianMatrix::symmetrize(m.matrix().block(0, 0, n, n));
    let b = HermitianMatrix::symmetrize(m.matrix().block(n, n, mm, mm));
    Ok((a, b))
}

fn check_partition(m: &HermitianMatrix, n: usize, mm: usize) -> Result<()> {
    if n == 0 || mm == 0 {
        return Err(Error::Parameter(format!(
            "block partition needs two non-empty blocks, got n={n}, m={mm}"
        )));
    }
    if n + mm != m.dim() {
        return Err(Error::Dimension {
            context: "block partition",
            got: n + mm,
            expected: m.dim(),
        });
    }
    Ok(())
}

/// Decomposes a psd matrix along the (n, m) partition.
///
/// T (the zero-padded top n rows of M^{1/2}) is always rank-deficient as a
/// square matrix, so its polar unitary comes from the SVD's orthonormal
/// completion of the missing directions; any completion is a valid output
/// since only the congruence T*T = U (TT*) U* matters.
pub fn decompose_block(m: &HermitianMatrix, n: usize, mm: usize) -> Result<BlockDecomposition> {
    check_partition(m, n, mm)?;
    m.check_psd()?;
    let (a, b) = split_blocks(m, n, mm)?;
    let r = sqrt_psd(m)?;
    let t = keep_rows(r.matrix(), 0, n);
    let s = keep_rows(r.matrix(), n, mm);
    // T = W|T| gives TT* = W (T*T) W*, i.e. T*T = W* (A ⊕ 0) W; take U = W*.
    let u = polar(&t)?.u.adjoint();
    let v = polar(&s)?.u.adjoint();
    Ok(BlockDecomposition { u, v, a, b })
}

/// Eigenvalues of f(block); `pad_to` appends copies of f(0) so the list
/// describes f(block ⊕ 0) at the full dimension. Sorted decreasing.
fn f_spectrum(block: &HermitianMatrix, f: &ScalarFn, pad_to: usize) -> Result<Vec<f64>> {
    let mut vals = Vec::with_capacity(pad_to.max(block.dim()));
    for lambda in block.eigenvalues()? {
        vals.push(f.try_value(lambda)?.max(0.0));
    }
    if pad_to > vals.len() {
        let f0 = f.try_value(0.0)?.max(0.0);
        vals.resize(pad_to, f0);
    }
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(vals)
}

fn normalized(lhs: f64, rhs: f64, slack: f64) -> f64 {
    slack / (1.0 + lhs.abs() + rhs.abs())
}

/// Lee's inequality ‖f(M)‖ ≤ ‖f(A)‖ + ‖f(B)‖ for non-negative concave f,
/// block norms taken with the A ↦ ‖A ⊕ 0‖ convention. Returns (lhs, rhs).
pub fn lee_margin(
    m: &HermitianMatrix,
    n: usize,
    mm: usize,
    norm: &NormSpec,
    f: &ScalarFn,
) -> Result<(f64, f64)> {
    let (a, b) = split_blocks(m, n, mm)?;
    let dim = n + mm;
    norm.validate(dim)?;
    let lhs = norm.gauge(&f_spectrum(m, f, dim)?)?;
    let mut mu_a = f_spectrum(&a, f, 0)?;
    let mut mu_b = f_spectrum(&b, f, 0)?;
    mu_a.resize(dim, 0.0);
    mu_b.resize(dim, 0.0);
    let rhs = norm.gauge(&mu_a)? + norm.gauge(&mu_b)?;
    Ok((lhs, rhs))
}

/// Fisher's inequality in log-determinant form:
/// log det M ≤ log det A + log det B. Returns (lhs, rhs); errors unless
/// all three matrices are strictly positive definite.
pub fn fisher_margin(m: &HermitianMatrix, n: usize, mm: usize) -> Result<(f64, f64)> {
    let (a, b) = split_blocks(m, n, mm)?;
    let lhs = log_det(m)?;
    let rhs = log_det(&a)? + log_det(&b)?;
    Ok((lhs, rhs))
}

fn log_det(a: &HermitianMatrix) -> Result<f64> {
    let eigs = a.eigenvalues()?;
    let top = eigs.iter().cloned().fold(0.0_f64, f64::max);
    let mut sum = 0.0;
    for lambda in eigs {
        if lambda <= 1e-12 * (1.0 + top) {
            return Err(Error::Parameter(format!(
                "log-det needs a strictly positive definite matrix (eigenvalue {lambda:.3e})"
            )));
        }
        sum += lambda.ln();
    }
    Ok(sum)
}

/// The convex-side block bound ‖g(M)‖ ≤ (‖g(A)‖^q + ‖g(B)‖^q)^{1/q},
/// g(0) = 0, with the ⊕0 block-norm convention. Returns (lhs, rhs).
pub fn cor44_margin(
    m: &HermitianMatrix,
    n: usize,
    mm: usize,
    norm: &NormSpec,
    g: &ScalarFn,
    q: f64,
) -> Result<(f64, f64)> {
    check_exponent(q, 0.0, 1.0, "q")?;
    let (a, b) = split_blocks(m, n, mm)?;
    let dim = n + mm;
    norm.validate(dim)?;
    let lhs = norm.gauge(&f_spectrum(m, g, dim)?)?;
    let na = norm.gauge(&f_spectrum(&a, g, dim)?)?;
    let nb = norm.gauge(&f_spectrum(&b, g, dim)?)?;
    let rhs = (na.powf(q) + nb.powf(q)).powf(1.0 / q);
    Ok((lhs, rhs))
}

/// Same bound through the corner norm ‖·‖_∧ (gauge of the n largest
/// singular values), which removes the g(0) = 0 requirement but needs
/// blocks of equal size. Block norms on the right act at dimension n.
pub fn cor46_margin(
    m: &HermitianMatrix,
    n: usize,
    norm: &NormSpec,
    g: &ScalarFn,
    q: f64,
) -> Result<(f64, f64)> {
    check_exponent(q, 0.0, 1.0, "q")?;
    let (a, b) = split_blocks(m, n, n)?;
    norm.validate(n)?;
    let gm = g.apply(m)?;
    let lhs = wedge_norm_hermitian(norm, n, &gm)?;
    let na = norm.gauge(&f_spectrum(&a, g, 0)?)?;
    let nb = norm.gauge(&f_spectrum(&b, g, 0)?)?;
    let rhs = (na.powf(q) + nb.powf(q)).powf(1.0 / q);
    Ok((lhs, rhs))
}

/// The concave-side anti-norm bound ‖f(M)‖_! ≥ (‖f(A)‖_!^p + ‖f(B)‖_!^p)^{1/p}
/// with the block anti-norms evaluated on f(A ⊕ 0) and f(0 ⊕ B) at the
/// full dimension (for the Schatten q-anti-norms with f(0) = 0 this is the
/// same as evaluating at the native block dimension). Returns (lhs, rhs).
pub fn cor49_margin(
    m: &HermitianMatrix,
    n: usize,
    mm: usize,
    anti: &AntiNormSpec,
    f: &ScalarFn,
    p: f64,
) -> Result<(f64, f64)> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("anti-norm exponent p={p} must exceed 1")));
    }
    let (a, b) = split_blocks(m, n, mm)?;
    let dim = n + mm;
    anti.validate(dim)?;
    let lhs = anti.anti_gauge(&f_spectrum(m, f, dim)?)?;
    let na = anti.anti_gauge(&f_spectrum(&a, f, dim)?)?;
    let nb = anti.anti_gauge(&f_spectrum(&b, f, dim)?)?;
    let rhs = (na.powf(p) + nb.powf(p)).powf(1.0 / p);
    Ok((lhs, rhs))
}

fn check_exponent(x: f64, lo: f64, hi: f64, name: &str) -> Result<()> {
    if !(x > lo && x < hi) {
        return Err(Error::Parameter(format!(
            "exponent {name}={x} must lie in ({lo}, {hi})"
        )));
    }
    Ok(())
}

fn gate(report: &mut CheckReport, cert: crate::functions::predicates::PredicateReport) -> bool {
    let ok = cert.holds;
    if !ok {
        report.mark_hypotheses_not_met(format!(
            "{} fails {} (margin {:.3e} at x = {:.6})",
            cert.function, cert.predicate, cert.worst_margin, cert.worst_x
        ));
    }
    report.certificates.push(cert);
    ok
}

const PREDICATE_TOL: f64 = 1e-9;

/// Evaluates the block inequality selected by `spec` on one partitioned
/// instance, validating the scalar hypotheses first.
///
/// Dispatch:
/// - norm gauge, exponent 1: Lee, ‖f(M)‖ ≤ ‖f(A)‖ + ‖f(B)‖ (f concave ≥ 0);
/// - norm gauge, exponent in (0,1): the convex q-bound, through the corner
///   norm when g(0) ≠ 0 and the blocks have equal size;
/// - Minkowski anti-norm: Fisher's det M ≤ det A · det B (pass f = id);
/// - other anti-norms, exponent > 1: the concave p-bound.
///
/// Hypothesis failures produce a `HypothesesNotMet` report, not an error.
pub fn check_block_corollaries(
    m: &HermitianMatrix,
    n: usize,
    mm: usize,
    spec: &GaugeSpec,
    f_or_g: &ScalarFn,
    q_or_p: f64,
    tol_rel: f64,
) -> Result<CheckReport> {
    check_partition(m, n, mm)?;
    m.check_psd()?;
    let started = std::time::Instant::now();
    let mut report = CheckReport::new("block_corollary", tol_rel);
    report.dims = vec![n + mm];
    let grid = default_grid(f_or_g.domain())?;

    let outcome: Option<(f64, f64, &str)> = match spec {
        GaugeSpec::Norm(norm) => {
            if q_or_p == 1.0 {
                let concave = is_concave(f_or_g, &grid, PREDICATE_TOL)?;
                let ok = gate(&mut report, concave) && gate_nonneg(&mut report, f_or_g, &grid);
                if ok {
                    let (lhs, rhs) = lee_margin(m, n, mm, norm, f_or_g)?;
                    Some((lhs, rhs, "lee"))
                } else {
                    None
                }
            } else {
                check_exponent(q_or_p, 0.0, 1.0, "q")?;
                let convex = is_convex(f_or_g, &grid, PREDICATE_TOL)?;
                let sub = is_subadditive(&pow_of(f_or_g, q_or_p)?, &grid, PREDICATE_TOL)?;
                let ok = gate(&mut report, convex)
                    && gate(&mut report, sub)
                    && gate_nonneg(&mut report, f_or_g, &grid);
                if !ok {
                    None
                } else if f_or_g.try_value(0.0)?.abs() <= 1e-12 {
                    let (lhs, rhs) = cor44_margin(m, n, mm, norm, f_or_g, q_or_p)?;
                    Some((lhs, rhs, "convex q-bound"))
                } else if n == mm {
                    let (lhs, rhs) = cor46_margin(m, n, norm, f_or_g, q_or_p)?;
                    Some((lhs, rhs, "convex q-bound (corner norm)"))
                } else {
                    report.mark_hypotheses_not_met(format!(
                        "g(0) = {:.3e} ≠ 0 needs equal block sizes for the corner-norm form",
                        f_or_g.value(0.0)
                    ));
                    None
                }
            }
        }
        GaugeSpec::Anti(AntiNormSpec::Minkowski) => {
            if f_or_g.tag() != "id" {
                report.mark_hypotheses_not_met(format!(
                    "the Minkowski gauge checks Fisher's inequality; pass f = id, got {}",
                    f_or_g.tag()
                ));
                None
            } else {
                match fisher_margin(m, n, mm) {
                    Ok((lhs, rhs)) => Some((lhs, rhs, "fisher (log-det)")),
                    Err(Error::Parameter(why)) => {
                        report.mark_hypotheses_not_met(why);
                        None
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        GaugeSpec::Anti(anti) => {
            let concave = is_concave(f_or_g, &grid, PREDICATE_TOL)?;
            let sup = is_superadditive(&pow_of(f_or_g, q_or_p)?, &grid, PREDICATE_TOL)?;
            let ok = gate(&mut report, concave)
                && gate(&mut report, sup)
                && gate_nonneg(&mut report, f_or_g, &grid);
            if ok {
                let (lhs, rhs) = cor49_margin(m, n, mm, anti, f_or_g, q_or_p)?;
                Some((lhs, rhs, "concave p-anti-bound"))
            } else {
                None
            }
        }
    };

    if let Some((lhs, rhs, which)) = outcome {
        // Norm-side bounds are upper bounds (slack = rhs − lhs); anti-side
        // and Fisher's rhs is the larger side too, so the slack agrees.
        let slack = match spec {
            GaugeSpec::Norm(_) => rhs - lhs,
            GaugeSpec::Anti(AntiNormSpec::Minkowski) => rhs - lhs,
            GaugeSpec::Anti(_) => lhs - rhs,
        };
        let margin = normalized(lhs, rhs, slack);
        report.notes.push(format!("inequality: {which}"));
        if let Ok(dec) = decompose_block(m, n, mm) {
            report
                .notes
                .push(format!("decomposition residual {:.3e}", dec.residual(m)));
        }
        let bindings = vec![
            Binding::new("gauge", spec.to_string()),
            Binding::new("function", f_or_g.tag()),
            Binding::new("exponent", format!("{q_or_p}")),
        ];
        report.record(margin, || WorstInstance {
            dim: n + mm,
            trial: 0,
            lhs,
            rhs,
            margin,
            matrices: vec![NamedMatrix {
                name: "M".into(),
                matrix: MatrixDoc::from_hermitian(m),
            }],
            bindings,
        });
    }
    report.finish();
    report.seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

fn gate_nonneg(report: &mut CheckReport, f: &ScalarFn, grid: &[f64]) -> bool {
    for &t in grid {
        let v = f.value(t);
        if v < -PREDICATE_TOL * (1.0 + v.abs()) {
            report.mark_hypotheses_not_met(format!(
                "{} takes the negative value {v:.3e} at t = {t:.6}",
                f.tag()
            ));
            return false;
        }
    }
    true
}
