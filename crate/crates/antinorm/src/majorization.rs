//! Majorization relations, the T-transform decomposition of a majorized
//! vector into a convex combination of permutations, and the constructive
//! witness that turns ≺^w between spectra into a convex combination of
//! unitary conjugates of a padded diagonal matrix.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::spectral::hermitian::HermitianMatrix;
use crate::spectral::matrix::ComplexMatrix;

/// Absolute tolerance per partial-sum comparison.
pub const MAJORIZATION_TOL: f64 = 1e-10;

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

/// Stable argsort, decreasing.
fn argsort_desc(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].partial_cmp(&v[i]).unwrap());
    idx
}

fn check_lengths(a: &[f64], c: &[f64]) -> Result<()> {
    if a.len() != c.len() {
        return Err(Error::Dimension {
            context: "majorization vector length",
            got: c.len(),
            expected: a.len(),
        });
    }
    Ok(())
}

/// a ≺_w c: every top-k partial sum of c dominates that of a.
pub fn weakly_majorizes(a: &[f64], c: &[f64]) -> Result<bool> {
    check_lengths(a, c)?;
    let (a, c) = (sorted_desc(a), sorted_desc(c));
    let mut sa = 0.0;
    let mut sc = 0.0;
    for k in 0..a.len() {
        sa += a[k];
        sc += c[k];
        if sa > sc + MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// a ≺ c: weak majorization plus equal totals.
pub fn majorizes(a: &[f64], c: &[f64]) -> Result<bool> {
    if !weakly_majorizes(a, c)? {
        return Ok(false);
    }
    let delta: f64 = a.iter().sum::<f64>() - c.iter().sum::<f64>();
    Ok(delta.abs() <= MAJORIZATION_TOL)
}

/// a ≺^w c: for every k, the sum of the k smallest entries of a dominates
/// the sum of the k smallest entries of c.
pub fn super_weakly_majorizes(a: &[f64], c: &[f64]) -> Result<bool> {
    check_lengths(a, c)?;
    let (a, c) = (sorted_desc(a), sorted_desc(c));
    let n = a.len();
    let mut sa = 0.0;
    let mut sc = 0.0;
    for k in 0..n {
        sa += a[n - 1 - k];
        sc += c[n - 1 - k];
        if sa < sc - MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One term of a convex combination of permutations: `weight` on the
/// permutation p acting as (P c)[l] = c[p[l]].
#[derive(Debug, Clone, PartialEq)]
pub struct TTerm {
    pub weight: f64,
    pub permutation: Vec<usize>,
}

impl TTerm {
    /// The matrix Π with Π[(l, p[l])] = 1, so Π diag(c) Π* lists c
    /// through p on the diagonal.
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::permutation(&self.permutation)
    }

    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        self.permutation.iter().map(|&j| c[j]).collect()
    }
}

/// Writes a ≺ c as a = Σ α_i P_i c with at most n permutation terms.
///
/// The chain of T-transforms follows the classical scheduling: repeatedly
/// take the smallest index pair (i, j), i < j, with x_i > a_i and
/// x_j < a_j and apply the maximal transfer; each step pins at least one
/// coordinate, so at most n−1 transforms occur. Expanding the transforms
/// doubles the term count, so after every step the combination is pruned
/// back to ≤ n terms by removing an affine dependency (the permuted
/// vectors live in a hyperplane of constant total, so any n+1 of them are
/// affinely dependent).
pub fn ttransform_decompose(a: &[f64], c: &[f64]) -> Result<Vec<TTerm>> {
    check_lengths(a, c)?;
    let n = a.len();
    // Validate a ≺ c, reporting the first violated partial sum.
    {
        let (asort, csort) = (sorted_desc(a), sorted_desc(c));
        let mut sa = 0.0;
        let mut sc = 0.0;
        for k in 0..n {
            sa += asort[k];
            sc += csort[k];
            let violated = if k + 1 == n {
                (sa - sc).abs() > MAJORIZATION_TOL
            } else {
                sa > sc + MAJORIZATION_TOL
            };
            if violated {
                return Err(Error::MajorizationViolated {
                    index: k + 1,
                    lhs: sa,
                    rhs: sc,
                });
            }
        }
    }

    let order_a = argsort_desc(a);
    let order_c = argsort_desc(c);
    let asort: Vec<f64> = order_a.iter().map(|&i| a[i]).collect();
    let csort: Vec<f64> = order_c.iter().map(|&i| c[i]).collect();

    let scale = csort
        .iter()
        .chain(asort.iter())
        .fold(0.0_f64, |m, &x| m.max(x.abs()));
    let eps = 1e-12 * (1.0 + scale);

    // Terms over the *sorted* vectors; translated back at the end.
    let mut terms: Vec<(f64, Vec<usize>)> = vec![(1.0, (0..n).collect())];
    let mut x = csort.clone();
    for _step in 0..n {
        let Some(i) = (0..n).find(|&i| x[i] > asort[i] + eps) else {
            break;
        };
        let Some(j) = (i + 1..n).find(|&j| x[j] < asort[j] - eps) else {
            break;
        };
        let delta = (x[i] - asort[i]).min(asort[j] - x[j]);
        let t = delta / (x[i] - x[j]);
        x[i] -= delta;
        x[j] += delta;

        let mut next: Vec<(f64, Vec<usize>)> = Vec::with_capacity(2 * terms.len());
        for (w, p) in &terms {
            if w * (1.0 - t) > 0.0 {
                next.push((w * (1.0 - t), p.clone()));
            }
            if w * t > 0.0 {
                let mut swapped = p.clone();
                swapped.swap(i, j);
                next.push((w * t, swapped));
            }
        }
        terms = prune_combination(next, &csort, n);
    }

    debug_assert!(
        x.iter()
            .zip(asort.iter())
            .all(|(xi, ai)| (xi - ai).abs() <= 1e-8 * (1.0 + scale)),
        "t-transform chain did not reach the target vector"
    );

    // Renormalize the weights exactly to sum 1.
    let total: f64 = terms.iter().map(|(w, _)| w).sum();
    for (w, _) in terms.iter_mut() {
        *w /= total;
    }

    // Translate permutations from sorted coordinates back to the given
    // ones: a[l] = asort[inv_a[l]] and csort[j] = c[order_c[j]].
    let mut inv_a = vec![0usize; n];
    for (sorted_pos, &orig) in order_a.iter().enumerate() {
        inv_a[orig] = sorted_pos;
    }
    Ok(terms
        .into_iter()
        .map(|(weight, q)| TTerm {
            weight,
            permutation: (0..n).map(|l| order_c[q[inv_a[l]]]).collect(),
        })
        .collect())
}

/// Merges duplicate permutations and reduces the combination to at most
/// `limit` terms without moving the represented point.
fn prune_combination(
    terms: Vec<(f64, Vec<usize>)>,
    c: &[f64],
    limit: usize,
) -> Vec<(f64, Vec<usize>)> {
    let mut merged: HashMap<Vec<usize>, f64> = HashMap::new();
    for (w, p) in terms {
        *merged.entry(p).or_insert(0.0) += w;
    }
    let mut list: Vec<(f64, Vec<usize>)> =
        merged.into_iter().map(|(p, w)| (w, p)).collect();
    // Deterministic order regardless of hash iteration.
    list.sort_by(|x, y| x.1.cmp(&y.1));

    while list.len() > limit {
        let m = list.len();
        let n = c.len();
        // Columns [P_i c; 1]; rank ≤ n because every column sums to Σc + 1.
        let mut mat = vec![vec![0.0_f64; m]; n + 1];
        for (col, (_, p)) in list.iter().enumerate() {
            for (row, &pj) in p.iter().enumerate() {
                mat[row][col] = c[pj];
            }
            mat[n][col] = 1.0;
        }
        let Some(mut beta) = kernel_vector(&mat) else {
            break;
        };
        if !beta.iter().any(|&b| b < 0.0) {
            for b in beta.iter_mut() {
                *b = -*b;
            }
        }
        let theta = list
            .iter()
            .zip(&beta)
            .filter(|(_, &b)| b < 0.0)
            .map(|((w, _), &b)| w / -b)
            .fold(f64::INFINITY, f64::min);
        if !theta.is_finite() {
            break;
        }
        let mut drop_idx = None;
        for (k, ((w, _), &b)) in list.iter_mut().zip(&beta).enumerate() {
            *w += theta * b;
            if *w <= 1e-13 && drop_idx.is_none() && b < 0.0 {
                drop_idx = Some(k);
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        match drop_idx {
            Some(k) => {
                list.remove(k);
            }
            None => break,
        }
        list.retain(|(w, _)| *w > 1e-13);
    }
    list
}

/// A nonzero x with M x ≈ 0, found by Gauss–Jordan elimination; None if M
/// has full column rank.
fn kernel_vector(mat: &[Vec<f64>]) -> Option<Vec<f64>> {
    let rows = mat.len();
    let cols = mat[0].len();
    let mut m: Vec<Vec<f64>> = mat.to_vec();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
        .max(1.0);
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut next_row = 0;
    for col in 0..cols {
        if next_row >= rows {
            break;
        }
        let (best_row, best_val) = (next_row..rows)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        if best_val <= 1e-11 * scale {
            continue;
        }
        m.swap(next_row, best_row);
        let piv = m[next_row][col];
        for cc in col..cols {
            m[next_row][cc] /= piv;
        }
        for r in 0..rows {
            if r != next_row {
                let f = m[r][col];
                if f != 0.0 {
                    for cc in col..cols {
                        m[r][cc] -= f * m[next_row][cc];
                    }
                }
            }
        }
        pivot_row_of_col[col] = Some(next_row);
        next_row += 1;
    }
    let free = (0..cols).find(|&c| pivot_row_of_col[c].is_none())?;
    let mut x = vec![0.0; cols];
    x[free] = 1.0;
    for col in 0..cols {
        if let Some(pr) = pivot_row_of_col[col] {
            x[col] = -m[pr][free];
        }
    }
    Some(x)
}

/// The constructive content of the anti-norm Ky Fan principle: given
/// λ(A) ≺^w λ(B), pad λ_1(B) by r = Tr A − Tr B so that λ(A) ≺ C, then
/// realize A as a convex combination of unitary conjugates of diag(C).
#[derive(Debug, Clone)]
pub struct MajorizationWitness {
    /// Non-negative padding added to λ_1(B).
    pub r: f64,
    /// The padded spectrum (λ_1(B)+r, λ_2(B), …), decreasing.
    pub c: Vec<f64>,
    /// Convex weights and unitaries with Σ α_i U_i diag(C) U_i* = A.
    pub combo: Vec<(f64, ComplexMatrix)>,
}

impl MajorizationWitness {
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.c.len();
        let diag = ComplexMatrix::diag(&self.c);
        let mut acc = ComplexMatrix::zeros(n, n);
        for (alpha, u) in &self.combo {
            acc = acc.add(&u.matmul(&diag).matmul(&u.adjoint()).scale(*alpha));
        }
        HermitianMatrix::symmetrize(acc)
    }

    pub fn weight_sum(&self) -> f64 {
        self.combo.iter().map(|(a, _)| a).sum()
    }
}

pub fn lemma42_witness(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<MajorizationWitness> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            context: "witness pair dimension",
            got: b.dim(),
            expected: a.dim(),
        });
    }
    let n = a.dim();
    let dec_a = a.eig()?;
    let lambda_a = dec_a.eigenvalues().to_vec();
    let lambda_b = b.eigenvalues()?;

    // Validate λ(A) ≺^w λ(B), reporting the first violated tail sum.
    {
        let mut sa = 0.0;
        let mut sb = 0.0;
        for k in 0..n {
            sa += lambda_a[n - 1 - k];
            sb += lambda_b[n - 1 - k];
            if sa < sb - MAJORIZATION_TOL {
                return Err(Error::MajorizationViolated {
                    index: k + 1,
                    lhs: sa,
                    rhs: sb,
                });
            }
        }
    }

    let trace_gap: f64 =
        lambda_a.iter().sum::<f64>() - lambda_b.iter().sum::<f64>();
    let r = trace_gap.max(0.0);
    let mut c = lambda_b;
    c[0] += r;

    let terms = ttransform_decompose(&lambda_a, &c)?;
    let combo = terms
        .into_iter()
        .map(|term| {
            let u = dec_a.unitary().matmul(&term.matrix());
            (term.weight, u)
        })
        .collect();
    Ok(MajorizationWitness { r, c, combo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms;
    use crate::spectral::random::{random_psd, SpectrumLaw};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classic_pair_relations() {
        assert!(majorizes(&[2.0, 2.0], &[3.0, 1.0]).unwrap());
        assert!(!majorizes(&[3.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(weakly_majorizes(&[2.0, 2.0], &[3.0, 1.0]).unwrap());
        // (2,2) has larger tail sums than (3,1): 2 ≥ 1, 4 ≥ 4.
        assert!(super_weakly_majorizes(&[2.0, 2.0], &[3.0, 1.0]).unwrap());
        assert!(!super_weakly_majorizes(&[3.0, 1.0], &[2.0, 2.0]).unwrap());
    }

    #[test]
    fn reflexivity() {
        let v = [1.5, 0.2, 0.9];
        assert!(majorizes(&v, &v).unwrap());
        assert!(weakly_majorizes(&v, &v).unwrap());
        assert!(super_weakly_majorizes(&v, &v).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(majorizes(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn ky_fan_majorization_of_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..100 {
            let a = random_psd(5, &SpectrumLaw::Uniform01, &mut rng).unwrap();
            let b = random_psd(5, &SpectrumLaw::Uniform01, &mut rng).unwrap();
            let sum = a.add(&b).eigenvalues().unwrap();
            let bound: Vec<f64> = a
                .eigenvalues()
                .unwrap()
                .iter()
                .zip(b.eigenvalues().unwrap().iter())
                .map(|(x, y)| x + y)
                .collect();
            assert!(weakly_majorizes(&sum, &bound).unwrap());
            assert!(majorizes(&sum, &bound).unwrap());
        }
    }

    #[test]
    fn single_ttransform_pair() {
        let terms = ttransform_decompose(&[2.0, 2.0], &[3.0, 1.0]).unwrap();
        assert_eq!(terms.len(), 2);
        for term in &terms {
            assert!((term.weight - 0.5).abs() < 1e-12);
        }
        let perms: Vec<&[usize]> =
            terms.iter().map(|t| t.permutation.as_slice()).collect();
        assert!(perms.contains(&[0, 1][..].into()));
        assert!(perms.contains(&[1, 0][..].into()));
    }

    #[test]
    fn identical_vectors_single_term() {
        let v = [2.0, 1.0, 0.5];
        let terms = ttransform_decompose(&v, &v).unwrap();
        assert_eq!(terms.len(), 1);
        assert!((terms[0].weight - 1.0).abs() < 1e-12);
        assert_eq!(terms[0].permutation, vec![0, 1, 2]);
    }

    #[test]
    fn rejects_non_majorized_input() {
        let err = ttransform_decompose(&[3.0, 1.0], &[2.0, 2.0]);
        assert!(matches!(err, Err(Error::MajorizationViolated { .. })));
        // Unequal totals also rejected.
        let err = ttransform_decompose(&[1.0, 1.0], &[3.0, 1.0]);
        assert!(matches!(err, Err(Error::MajorizationViolated { .. })));
    }

    fn random_convex_mix_of_permutations(
        c: &[f64],
        rng: &mut ChaCha8Rng,
    ) -> Vec<f64> {
        let n = c.len();
        let m = 4 + (rng.gen::<u32>() % 4) as usize;
        let mut weights: Vec<f64> = (0..m).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        let mut a = vec![0.0; n];
        for &w in &weights {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = (rng.gen::<u64>() % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            for l in 0..n {
                a[l] += w * c[perm[l]];
            }
        }
        a
    }

    #[test]
    fn random_decompositions_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..50 {
            let n = 6;
            let c: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 3.0).collect();
            let a = random_convex_mix_of_permutations(&c, &mut rng);
            let terms = ttransform_decompose(&a, &c).unwrap();
            assert!(terms.len() <= n, "got {} terms", terms.len());
            let total: f64 = terms.iter().map(|t| t.weight).sum();
            assert!((total - 1.0).abs() <= 1e-12);
            assert!(terms.iter().all(|t| t.weight >= -1e-14));
            let mut recon = vec![0.0; n];
            for term in &terms {
                for (l, v) in term.apply(&c).into_iter().enumerate() {
                    recon[l] += term.weight * v;
                }
            }
            for (x, y) in recon.iter().zip(&a) {
                assert!(
                    (x - y).abs() <= 1e-10,
                    "reconstruction off: {recon:?} vs {a:?}"
                );
            }
        }
    }

    #[test]
    fn witness_identical_matrices() {
        let a = HermitianMatrix::diag(&[2.0, 1.0]);
        let w = lemma42_witness(&a, &a).unwrap();
        assert_eq!(w.r, 0.0);
        assert_eq!(w.combo.len(), 1);
        let recon = w.reconstruct();
        assert!(recon.sub(&a).frobenius_norm() < 1e-10);
    }

    #[test]
    fn witness_hand_example() {
        // A = diag(2,2), B = diag(3,0.5): tail sums 2 ≥ 0.5 and 4 ≥ 3.5,
        // so A ≺^w B with r = 0.5 and C = (3.5, 0.5).
        let a = HermitianMatrix::diag(&[2.0, 2.0]);
        let b = HermitianMatrix::diag(&[3.0, 0.5]);
        let w = lemma42_witness(&a, &b).unwrap();
        assert!((w.r - 0.5).abs() < 1e-12);
        assert_eq!(w.c.len(), 2);
        assert!((w.c[0] - 3.5).abs() < 1e-12);
        assert!((w.c[1] - 0.5).abs() < 1e-12);
        let recon = w.reconstruct();
        assert!(recon.sub(&a).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn witness_rejects_non_dominating_pair() {
        // Tail sum of A smaller: 0.1 < 0.5 at k = 1.
        let a = HermitianMatrix::diag(&[3.0, 0.1]);
        let b = HermitianMatrix::diag(&[1.0, 0.5]);
        assert!(matches!(
            lemma42_witness(&a, &b),
            Err(Error::MajorizationViolated { .. })
        ));
    }

    /// A = B + P for independent random psd P, so λ(A) dominates λ(B)
    /// entrywise and in particular λ(A) ≺^w λ(B).
    fn dominating_pair(
        n: usize,
        rng: &mut ChaCha8Rng,
    ) -> (HermitianMatrix, HermitianMatrix) {
        let b = random_psd(n, &SpectrumLaw::Uniform01, rng).unwrap();
        let p = random_psd(n, &SpectrumLaw::Uniform01, rng).unwrap();
        (b.add(&p), b)
    }

    #[test]
    fn witness_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for trial in 0..100 {
            let n = 2 + trial % 7;
            let (a, b) = dominating_pair(n, &mut rng);
            let w = lemma42_witness(&a, &b).unwrap();
            assert!(w.r >= 0.0);
            assert!(w.combo.len() <= n);
            assert!((w.weight_sum() - 1.0).abs() <= 1e-12);
            for (_, u) in &w.combo {
                assert!(u.unitarity_residual() <= 1e-10);
            }
            let recon = w.reconstruct();
            assert!(
                recon.sub(&a).frobenius_norm() <= 1e-8 * (1.0 + a.frobenius_norm()),
                "reconstruction residual too large at n={n}"
            );
        }
    }

    #[test]
    fn witness_padding_is_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..50 {
            let (a, b) = dominating_pair(4, &mut rng);
            let w = lemma42_witness(&a, &b).unwrap();
            let lambda_a = a.eigenvalues().unwrap();
            assert!(majorizes(&lambda_a, &w.c).unwrap());
            let mut shrunk = w.c.clone();
            shrunk[0] -= 10.0 * MAJORIZATION_TOL;
            assert!(
                !majorizes(&lambda_a, &shrunk).unwrap(),
                "padding not minimal: shrunk C still majorizes"
            );
        }
    }

    #[test]
    fn antinorm_monotone_under_super_weak_majorization() {
        // Lemma 4.2's consequence across the entire catalog.
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        let n = 4;
        let specs = norms::catalog(n);
        for _ in 0..1000 {
            let (a, b) = dominating_pair(n, &mut rng);
            let mu_a = a.psd_eigenvalues().unwrap();
            let mu_b = b.psd_eigenvalues().unwrap();
            for entry in &specs {
                let lhs = entry.spec.anti_gauge(&mu_a).unwrap();
                let rhs = entry.spec.anti_gauge(&mu_b).unwrap();
                assert!(
                    lhs >= rhs - 1e-9 * (lhs.abs() + rhs.abs() + 1.0),
                    "{} dropped under ≺^w: {lhs} < {rhs}",
                    entry.name
                );
            }
        }
    }
}
