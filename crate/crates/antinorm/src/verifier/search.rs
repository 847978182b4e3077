//! Counterexample searches for the `cex_*` and `open_*` catalog entries.
//!
//! Each target fixes a low-dimensional parametric family of instances chosen
//! so the known failure mode is reachable, then spends the sample budget on
//! random exploration followed by coordinate hill-climbing on the violation.
//! The score of a sample is the negated normalized margin of the claimed
//! inequality, so positive scores are violations. A search "finds" an
//! instance when the best score exceeds `10 · tol_rel`.
//!
//! Found instances carry the full matrices and bindings needed to re-verify
//! them from the serialized form alone; [`reverify`] recomputes the margin of
//! a reloaded instance with no access to the search state.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::predicates::{
    self, default_grid, is_concave, is_convex, is_superadditive, PredicateReport,
};
use crate::functions::{self, ScalarFn};
use crate::norms::{AntiNormSpec, NormSpec};
use crate::report::{Binding, CheckReport, NamedMatrix, Verdict, WorstInstance};
use crate::spectral::hermitian::from_eigensystem;
use crate::spectral::{ComplexMatrix, HermitianMatrix, MatrixDoc};

use super::checks::{gauge_vals, margin_ge, margin_le};
use super::{norm_sweep, trial_seed, CheckConfig};

const PRED_TOL: f64 = predicates::DEFAULT_TOL;

/// A violating instance, self-contained: the matrices and bindings suffice to
/// recompute the margin after a serialization round trip.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoundInstance {
    /// Normalized margin of the claimed inequality; negative means violated.
    pub margin: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub matrices: Vec<NamedMatrix>,
    pub bindings: Vec<Binding>,
}

/// Outcome of one search target.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub target: String,
    pub found: Option<FoundInstance>,
    /// Samples actually evaluated (may stop early on a deep violation).
    pub samples: u64,
    /// Most violating margin of the underlying inequality seen anywhere;
    /// infinite when no sample was ever evaluated.
    #[serde(with = "crate::report::nonfinite_as_null")]
    pub best_margin: f64,
    pub seconds: f64,
    pub notes: Vec<String>,
    pub hypotheses_not_met: bool,
    pub certificates: Vec<PredicateReport>,
}

impl SearchOutcome {
    fn new(target: &str) -> Self {
        SearchOutcome {
            target: target.into(),
            found: None,
            samples: 0,
            best_margin: f64::INFINITY,
            seconds: 0.0,
            notes: Vec::new(),
            hypotheses_not_met: false,
            certificates: Vec::new(),
        }
    }

    /// Summarizes the search as a `CheckReport`. `cex_*` targets pass exactly
    /// when a violation beyond `10 · tol_rel` was found; `open_*` targets
    /// pass whenever the search completed, and the notes say what happened.
    pub fn into_report(self, tol_rel: f64) -> CheckReport {
        let is_cex = self.target.starts_with("cex_");
        let mut report = CheckReport::new(&self.target, tol_rel);
        report.dims = vec![2];
        report.trials = self.samples;
        report.worst_margin = if self.best_margin.is_finite() { self.best_margin } else { 0.0 };
        report.certificates = self.certificates;
        report.notes = self.notes;
        report.seconds = self.seconds;
        report.worst_instance = self.found.as_ref().map(|inst| WorstInstance {
            dim: 2,
            trial: 0,
            lhs: inst.lhs,
            rhs: inst.rhs,
            margin: inst.margin,
            matrices: inst.matrices.clone(),
            bindings: inst.bindings.clone(),
        });
        report.verdict = if self.hypotheses_not_met {
            Verdict::HypothesesNotMet
        } else if is_cex {
            match &self.found {
                Some(inst) if inst.margin < -10.0 * tol_rel => Verdict::Pass,
                _ => {
                    report
                        .notes
                        .push("no violating instance found within the sample budget".into());
                    Verdict::Fail
                }
            }
        } else {
            Verdict::Pass
        };
        report
    }
}

/// Runs one search target under `config.budget` samples.
pub fn run_search(target: &str, config: &CheckConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let started = std::time::Instant::now();
    let mut outcome = match target {
        "cex_nonconvex_g" => cex_nonconvex_g(config),
        "cex_expansive_antinorm" => cex_expansive_antinorm(config),
        "open_expansive_schatten" => open_expansive_schatten(config),
        "open_contraction_symmetric_norm" => open_contraction_symmetric_norm(config),
        other => Err(Error::Parameter(format!("unknown search target `{other}`"))),
    }?;
    outcome.seconds = started.elapsed().as_secs_f64();
    Ok(outcome)
}

/// Random exploration on half the budget, then coordinate jitter around the
/// best point with a shrinking step. `eval` returns the score (negated
/// margin; higher is more violating) or `None` to skip a sample. Stops early
/// once `stop_at` is reached. Returns the best parameters, best score, and
/// samples used.
fn hill_climb(
    bounds: &[(f64, f64)],
    mut eval: impl FnMut(&[f64]) -> Option<f64>,
    budget: u64,
    stop_at: f64,
    rng: &mut ChaCha8Rng,
) -> (Option<Vec<f64>>, f64, u64) {
    let mut best: Option<Vec<f64>> = None;
    let mut best_score = f64::NEG_INFINITY;
    let mut used = 0u64;
    let explore = (budget / 2).max(1);
    while used < explore {
        let theta: Vec<f64> = bounds
            .iter()
            .map(|&(lo, hi)| lo + (hi - lo) * rng.gen::<f64>())
            .collect();
        used += 1;
        if let Some(score) = eval(&theta) {
            if score > best_score {
                best_score = score;
                best = Some(theta);
            }
            if best_score >= stop_at {
                return (best, best_score, used);
            }
        }
    }
    if let Some(mut center) = best.clone() {
        let mut scale = 0.25;
        while used < budget && scale > 1e-6 {
            let mut improved = false;
            for (k, &(lo, hi)) in bounds.iter().enumerate() {
                if used >= budget {
                    break;
                }
                let mut cand = center.clone();
                cand[k] = (cand[k] + scale * (hi - lo) * (2.0 * rng.gen::<f64>() - 1.0)).clamp(lo, hi);
                used += 1;
                if let Some(score) = eval(&cand) {
                    if score > best_score {
                        best_score = score;
                        center = cand.clone();
                        best = Some(cand);
                        improved = true;
                    }
                    if best_score >= stop_at {
                        return (best, best_score, used);
                    }
                }
            }
            if !improved {
                scale *= 0.5;
            }
        }
    }
    (best, best_score, used)
}

fn single_override(cfg: &CheckConfig, target: &str) -> Result<Option<ScalarFn>> {
    let mut overrides = cfg.parsed_functions()?;
    match overrides.len() {
        0 => Ok(None),
        1 => Ok(Some(overrides.remove(0))),
        n => Err(Error::Parameter(format!(
            "{target} takes at most one function override, got {n}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// target families and their margins (shared with `reverify`)
// ---------------------------------------------------------------------------

/// Claimed: Tr g(A+B) >= Tr g(A) + Tr g(B). Returns (lhs, rhs, margin).
fn nonconvex_margin(g: &ScalarFn, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<(f64, f64, f64)> {
    let trace_of = |m: &HermitianMatrix| -> Result<f64> {
        let mut acc = 0.0;
        for lam in m.psd_eigenvalues()? {
            acc += g.try_value(lam)?;
        }
        Ok(acc)
    };
    let lhs = trace_of(&a.add(b))?;
    let rhs = trace_of(a)? + trace_of(b)?;
    Ok((lhs, rhs, margin_ge(lhs, rhs)))
}

/// Claimed: ||f(Z*AZ)||_! <= ||Z* f(A) Z||_!. Returns (lhs, rhs, margin).
fn expansive_margin(
    f: &ScalarFn,
    anti: &AntiNormSpec,
    a: &HermitianMatrix,
    z: &ComplexMatrix,
) -> Result<(f64, f64, f64)> {
    let zaz = a.conjugate_by(z);
    let lhs = anti.anti_gauge(&gauge_vals(&zaz.psd_eigenvalues()?, f)?)?;
    let rhs = anti.anti_gauge(&f.apply(a)?.conjugate_by(z).psd_eigenvalues()?)?;
    Ok((lhs, rhs, margin_le(lhs, rhs)))
}

/// Claimed: ||f(Z*AZ)|| >= ||Z* f(A) Z||. Returns (lhs, rhs, margin).
fn contraction_margin(
    f: &ScalarFn,
    norm: &NormSpec,
    a: &HermitianMatrix,
    z: &ComplexMatrix,
) -> Result<(f64, f64, f64)> {
    let zaz = a.conjugate_by(z);
    let lhs = norm.gauge(&gauge_vals(&zaz.psd_eigenvalues()?, f)?)?;
    let rhs = norm.gauge(&f.apply(a)?.conjugate_by(z).psd_eigenvalues()?)?;
    Ok((lhs, rhs, margin_ge(lhs, rhs)))
}

/// Recomputes the claimed-inequality margin of a reloaded instance from its
/// matrices and bindings alone.
pub fn reverify(target: &str, inst: &FoundInstance) -> Result<f64> {
    let mat = |name: &str| -> Result<&MatrixDoc> {
        inst.matrices
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.matrix)
            .ok_or_else(|| Error::Parameter(format!("instance has no matrix named `{name}`")))
    };
    let binding = |key: &str| -> Result<&str> {
        inst.bindings
            .iter()
            .find(|b| b.key == key)
            .map(|b| b.value.as_str())
            .ok_or_else(|| Error::Parameter(format!("instance has no binding `{key}`")))
    };
    match target {
        "cex_nonconvex_g" => {
            let g = ScalarFn::from_str(binding("g")?)?;
            let a = mat("A")?.to_hermitian()?;
            let b = mat("B")?.to_hermitian()?;
            Ok(nonconvex_margin(&g, &a, &b)?.2)
        }
        "cex_expansive_antinorm" | "open_expansive_schatten" => {
            let f = ScalarFn::from_str(binding("f")?)?;
            let anti = AntiNormSpec::from_str(binding("antinorm")?)?;
            let a = mat("A")?.to_hermitian()?;
            let z = mat("Z")?.to_matrix()?;
            Ok(expansive_margin(&f, &anti, &a, &z)?.2)
        }
        "open_contraction_symmetric_norm" => {
            let f = ScalarFn::from_str(binding("f")?)?;
            let norm = NormSpec::from_str(binding("norm")?)?;
            let a = mat("A")?.to_hermitian()?;
            let z = mat("Z")?.to_matrix()?;
            Ok(contraction_margin(&f, &norm, &a, &z)?.2)
        }
        other => Err(Error::Parameter(format!("unknown search target `{other}`"))),
    }
}

fn rotation(angle: f64) -> ComplexMatrix {
    let (s, c) = angle.sin_cos();
    ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).expect("2x2 rotation")
}

// ---------------------------------------------------------------------------
// cex_nonconvex_g
// ---------------------------------------------------------------------------

/// Superadditivity of g alone does not give trace superadditivity on
/// matrices: for non-convex superadditive g, the rank-one pair
/// A, B = (1/2) [[s, ±√(st)], [±√(st), t]] (so A + B = diag(s, t), each
/// summand has eigenvalues (s+t)/2 and 0) violates
/// Tr g(A+B) >= Tr g(A) + Tr g(B) near the concavity kink.
fn cex_nonconvex_g(cfg: &CheckConfig) -> Result<SearchOutcome> {
    let target = "cex_nonconvex_g";
    let mut outcome = SearchOutcome::new(target);
    let g = single_override(cfg, target)?.unwrap_or_else(functions::star_kink);
    let grid = default_grid(g.domain())?;
    let superadd = is_superadditive(&g, &grid, PRED_TOL)?;
    let convex = is_convex(&g, &grid, PRED_TOL)?;
    let superadd_holds = superadd.holds;
    let convex_holds = convex.holds;
    outcome.certificates.push(superadd);
    outcome.certificates.push(convex);
    if !g.domain().contains_with_edge(0.0, 1e-12) {
        outcome.hypotheses_not_met = true;
        outcome.notes.push(format!(
            "{}: the rank-one family needs 0 in the domain of g",
            g.tag()
        ));
        return Ok(outcome);
    }
    if !superadd_holds {
        outcome.hypotheses_not_met = true;
        outcome.notes.push(format!(
            "{} is not superadditive; the search premise needs superadditive g",
            g.tag()
        ));
        return Ok(outcome);
    }
    if convex_holds {
        outcome.hypotheses_not_met = true;
        outcome.notes.push(format!(
            "{} is convex, so trace superadditivity is a theorem; no counterexample exists",
            g.tag()
        ));
        return Ok(outcome);
    }
    let hi = if g.domain().hi.is_finite() { (g.domain().hi * 0.999).min(3.0) } else { 3.0 };
    let bounds = [(0.01, hi), (0.01, hi)];
    let eval = |theta: &[f64]| -> Option<f64> {
        let (s, t) = (theta[0], theta[1]);
        let lhs = g.try_value(s).ok()? + g.try_value(t).ok()?;
        let rhs = 2.0 * (g.try_value(0.5 * (s + t)).ok()? + g.try_value(0.0).ok()?);
        Some(-margin_ge(lhs, rhs))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, target, 0, 0));
    let (best, best_score, used) = hill_climb(&bounds, eval, cfg.budget, 0.01, &mut rng);
    outcome.samples = used;
    if let Some(theta) = best {
        outcome.best_margin = -best_score;
        if best_score > 10.0 * cfg.tol_rel {
            let (s, t) = (theta[0], theta[1]);
            let c = (s * t).sqrt();
            let a = HermitianMatrix::symmetrize(
                ComplexMatrix::from_real(2, 2, &[s, c, c, t]).expect("2x2"),
            )
            .scale(0.5);
            let b = HermitianMatrix::symmetrize(
                ComplexMatrix::from_real(2, 2, &[s, -c, -c, t]).expect("2x2"),
            )
            .scale(0.5);
            let (lhs, rhs, margin) = nonconvex_margin(&g, &a, &b)?;
            outcome.best_margin = margin.min(outcome.best_margin);
            outcome.found = Some(FoundInstance {
                margin,
                lhs,
                rhs,
                matrices: vec![
                    NamedMatrix { name: "A".into(), matrix: MatrixDoc::from_hermitian(&a) },
                    NamedMatrix { name: "B".into(), matrix: MatrixDoc::from_hermitian(&b) },
                ],
                bindings: vec![
                    Binding::new("g", g.tag()),
                    Binding::new("antinorm", "trace"),
                    Binding::new("s", s.to_string()),
                    Binding::new("t", t.to_string()),
                ],
            });
            outcome.notes.push(format!(
                "violation at (s, t) = ({s:.4}, {t:.4}): Tr g(A+B) = {lhs:.6} < {rhs:.6} = Tr g(A) + Tr g(B)"
            ));
        }
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// the expansive-Z families
// ---------------------------------------------------------------------------

/// θ = (z, λ1, λ2, angle) ↦ (A, Z) with A = R(angle) diag(λ) R(angle)*,
/// Z = diag(z, 1) expansive for z > 1. Large z drives λ_min(Z*AZ) to the
/// Schur complement of A, where concave non-linear f can break the claimed
/// order for Ky Fan anti-norms with k < n.
fn expansive_instance(theta: &[f64]) -> (HermitianMatrix, ComplexMatrix) {
    let (z, l1, l2, angle) = (theta[0], theta[1], theta[2], theta[3]);
    let a = from_eigensystem(&[l1, l2], &rotation(angle));
    let zmat = ComplexMatrix::diag(&[z, 1.0]);
    (a, zmat)
}

const EXPANSIVE_BOUNDS: [(f64, f64); 4] =
    [(1.0, 50.0), (1e-3, 4.0), (1e-3, 4.0), (0.0, std::f64::consts::PI)];

/// Gates a concave non-negative f whose domain is all of [0, ∞), pushing the
/// certificates; returns whether it passed.
fn gate_expansive_f(outcome: &mut SearchOutcome, f: &ScalarFn) -> Result<bool> {
    let grid = default_grid(f.domain())?;
    let concave = is_concave(f, &grid, PRED_TOL)?;
    let mut nonneg_worst = f64::INFINITY;
    for &t in &grid {
        nonneg_worst = nonneg_worst.min(f.value(t));
    }
    let domain_ok = f.domain().contains_with_edge(0.0, 1e-12) && !f.domain().hi.is_finite();
    let ok = concave.holds && nonneg_worst >= -PRED_TOL && domain_ok;
    outcome.certificates.push(concave);
    outcome.certificates.push(PredicateReport {
        predicate: "non-negative with domain [0, inf)".into(),
        function: f.tag().into(),
        holds: nonneg_worst >= -PRED_TOL && domain_ok,
        worst_margin: nonneg_worst,
        worst_x: f64::NAN,
        worst_y: f64::NAN,
        samples: grid.len(),
        tol: PRED_TOL,
    });
    if !ok {
        outcome
            .notes
            .push(format!("binding {} failed its gates; skipped", f.tag()));
    }
    Ok(ok)
}

fn search_expansive(
    cfg: &CheckConfig,
    target: &str,
    fs: Vec<ScalarFn>,
    antis: Vec<AntiNormSpec>,
    stop_at: f64,
) -> Result<SearchOutcome> {
    let mut outcome = SearchOutcome::new(target);
    let mut active = Vec::new();
    for f in fs {
        if gate_expansive_f(&mut outcome, &f)? {
            active.push(f);
        }
    }
    if active.is_empty() {
        outcome.hypotheses_not_met = true;
        outcome
            .notes
            .push("no function binding passed its gates".into());
        return Ok(outcome);
    }
    let per_f = (cfg.budget / active.len() as u64).max(1);
    let mut best_overall = f64::NEG_INFINITY;
    let mut best_setting: Option<(Vec<f64>, ScalarFn, AntiNormSpec)> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, target, 0, 0));
    for f in &active {
        // Mirrors hill_climb's strict-improvement rule so `best_anti` always
        // names the anti-norm behind the θ hill_climb returns.
        let mut best_anti = 0usize;
        let mut local_best = f64::NEG_INFINITY;
        let eval = |theta: &[f64]| -> Option<f64> {
            let (a, z) = expansive_instance(theta);
            let zaz = a.conjugate_by(&z);
            let lhs_vals = gauge_vals(&zaz.psd_eigenvalues().ok()?, f).ok()?;
            let rhs_vals = f.apply(&a).ok()?.conjugate_by(&z).psd_eigenvalues().ok()?;
            let mut score = f64::NEG_INFINITY;
            let mut arg = 0usize;
            for (k, anti) in antis.iter().enumerate() {
                let lhs = anti.anti_gauge(&lhs_vals).ok()?;
                let rhs = anti.anti_gauge(&rhs_vals).ok()?;
                let s = -margin_le(lhs, rhs);
                if s > score {
                    score = s;
                    arg = k;
                }
            }
            if score > local_best {
                local_best = score;
                best_anti = arg;
            }
            Some(score)
        };
        let (best, best_score, used) = hill_climb(&EXPANSIVE_BOUNDS, eval, per_f, stop_at, &mut rng);
        outcome.samples += used;
        if best_score > best_overall {
            best_overall = best_score;
            if let Some(theta) = best {
                best_setting = Some((theta, f.clone(), antis[best_anti].clone()));
            }
        }
    }
    outcome.best_margin = if best_overall.is_finite() { -best_overall } else { f64::INFINITY };
    if let Some((theta, f, anti)) = best_setting {
        if best_overall > 10.0 * cfg.tol_rel {
            let (a, z) = expansive_instance(&theta);
            let (lhs, rhs, margin) = expansive_margin(&f, &anti, &a, &z)?;
            outcome.best_margin = margin.min(outcome.best_margin);
            outcome.found = Some(FoundInstance {
                margin,
                lhs,
                rhs,
                matrices: vec![
                    NamedMatrix { name: "A".into(), matrix: MatrixDoc::from_hermitian(&a) },
                    NamedMatrix { name: "Z".into(), matrix: MatrixDoc::from_matrix(&z) },
                ],
                bindings: vec![
                    Binding::new("f", f.tag()),
                    Binding::new("antinorm", anti.to_string()),
                    Binding::new("z", theta[0].to_string()),
                ],
            });
            outcome.notes.push(format!(
                "violation with f = {}, anti-norm {}: ||f(Z*AZ)||_! = {:.6} > {:.6} = ||Z*f(A)Z||_! at z = {:.3}",
                f.tag(),
                anti,
                lhs,
                rhs,
                theta[0]
            ));
        }
    }
    Ok(outcome)
}

/// The expansive direction fails for Ky Fan anti-norms below the trace:
/// searches the diag(z, 1) family for ||f(Z*AZ)||_! > ||Z*f(A)Z||_! under
/// the smallest-eigenvalue anti-norm.
fn cex_expansive_antinorm(cfg: &CheckConfig) -> Result<SearchOutcome> {
    let target = "cex_expansive_antinorm";
    let fs = match single_override(cfg, target)? {
        Some(f) => vec![f],
        None => vec![functions::ramp_minus_half(), functions::cap()],
    };
    search_expansive(cfg, target, fs, vec![AntiNormSpec::KyFanAnti(1)], 2e-3)
}

/// Whether Schatten q-anti-norms (0 < q <= 1) also escape the expansive
/// failure is unsettled; this search looks for a violation and is expected
/// to come back empty.
fn open_expansive_schatten(cfg: &CheckConfig) -> Result<SearchOutcome> {
    let target = "open_expansive_schatten";
    let fs = match single_override(cfg, target)? {
        Some(f) => vec![f],
        None => vec![functions::sqrt(), functions::ramp_minus_half(), functions::cap()],
    };
    let antis = match cfg.r {
        Some(r) if r > 0.0 && r <= 1.0 => vec![AntiNormSpec::SchattenAnti(r)],
        Some(r) => {
            return Err(Error::Parameter(format!(
                "{target} needs r in (0, 1], got {r}"
            )))
        }
        None => vec![
            AntiNormSpec::SchattenAnti(0.3),
            AntiNormSpec::SchattenAnti(0.5),
            AntiNormSpec::SchattenAnti(0.8),
        ],
    };
    let mut outcome = search_expansive(cfg, target, fs, antis, 1e-3)?;
    if !outcome.hypotheses_not_met {
        if outcome.found.is_some() {
            outcome.notes.push(
                "a violating instance was found: the conjectured Schatten q-anti-norm inequality fails"
                    .into(),
            );
        } else {
            outcome.notes.push(format!(
                "no violation in {} samples (best margin {:.3e}); consistent with the conjectured inequality",
                outcome.samples, outcome.best_margin
            ));
        }
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// open_contraction_symmetric_norm
// ---------------------------------------------------------------------------

/// For contractions the symmetric-norm inequality ||f(Z*AZ)|| >= ||Z*f(A)Z||
/// is a theorem when f is monotone or operator concave; for merely concave
/// non-monotone f it is not. The family sweeps real contractions
/// Z = R(φ) diag(c1, c2) R(ψ) against all symmetric norms at n = 2; with the
/// default tent binding the operator norm turns up violations readily, so a
/// run normally ends with a found instance in its notes.
fn open_contraction_symmetric_norm(cfg: &CheckConfig) -> Result<SearchOutcome> {
    let target = "open_contraction_symmetric_norm";
    let mut outcome = SearchOutcome::new(target);
    let f = single_override(cfg, target)?.unwrap_or_else(functions::tent);
    let grid = default_grid(f.domain())?;
    let concave = is_concave(&f, &grid, PRED_TOL)?;
    let mut nonneg_worst = f64::INFINITY;
    let (mut rises, mut falls) = (false, false);
    for w in grid.windows(2) {
        let (v0, v1) = (f.value(w[0]), f.value(w[1]));
        nonneg_worst = nonneg_worst.min(v0.min(v1));
        if v1 > v0 + PRED_TOL {
            rises = true;
        }
        if v1 < v0 - PRED_TOL {
            falls = true;
        }
    }
    let non_monotone = rises && falls;
    let concave_holds = concave.holds;
    outcome.certificates.push(concave);
    outcome.certificates.push(PredicateReport {
        predicate: "non-negative and non-monotone".into(),
        function: f.tag().into(),
        holds: nonneg_worst >= -PRED_TOL && non_monotone,
        worst_margin: nonneg_worst,
        worst_x: f64::NAN,
        worst_y: f64::NAN,
        samples: grid.len(),
        tol: PRED_TOL,
    });
    if !concave_holds || nonneg_worst < -PRED_TOL {
        outcome.hypotheses_not_met = true;
        outcome
            .notes
            .push(format!("{} must be concave and non-negative", f.tag()));
        return Ok(outcome);
    }
    if !non_monotone {
        outcome.hypotheses_not_met = true;
        outcome.notes.push(format!(
            "{} is monotone, and the monotone case is a theorem; the open case needs a non-monotone f",
            f.tag()
        ));
        return Ok(outcome);
    }
    if !f.domain().contains_with_edge(0.0, 1e-12) {
        outcome.hypotheses_not_met = true;
        outcome
            .notes
            .push(format!("{}: contractions need 0 in the domain", f.tag()));
        return Ok(outcome);
    }
    let amax = if f.domain().hi.is_finite() { f.domain().hi * 0.995 } else { 2.0 };
    let pi = std::f64::consts::PI;
    let bounds = [
        (0.0, amax),
        (0.0, amax),
        (0.0, pi),
        (0.0, 1.0),
        (0.0, 1.0),
        (0.0, pi),
        (0.0, pi),
    ];
    let norms = norm_sweep(2);
    let mut best_norm = 0usize;
    let mut local_best = f64::NEG_INFINITY;
    let instance = |theta: &[f64]| -> (HermitianMatrix, ComplexMatrix) {
        let a = from_eigensystem(&[theta[0], theta[1]], &rotation(theta[2]));
        let z = rotation(theta[5])
            .matmul(&ComplexMatrix::diag(&[theta[3], theta[4]]))
            .matmul(&rotation(theta[6]));
        (a, z)
    };
    let eval = |theta: &[f64]| -> Option<f64> {
        let (a, z) = instance(theta);
        let zaz = a.conjugate_by(&z);
        let lhs_vals = gauge_vals(&zaz.psd_eigenvalues().ok()?, &f).ok()?;
        let rhs_vals = f.apply(&a).ok()?.conjugate_by(&z).psd_eigenvalues().ok()?;
        let mut score = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for (k, norm) in norms.iter().enumerate() {
            let lhs = norm.gauge(&lhs_vals).ok()?;
            let rhs = norm.gauge(&rhs_vals).ok()?;
            let s = -margin_ge(lhs, rhs);
            if s > score {
                score = s;
                arg = k;
            }
        }
        if score > local_best {
            local_best = score;
            best_norm = arg;
        }
        Some(score)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, target, 0, 0));
    let (best, best_score, used) = hill_climb(&bounds, eval, cfg.budget, 0.02, &mut rng);
    outcome.samples = used;
    outcome.best_margin = if best_score.is_finite() { -best_score } else { f64::INFINITY };
    if let Some(theta) = best {
        if best_score > 10.0 * cfg.tol_rel {
            let (a, z) = instance(&theta);
            let norm = norms[best_norm].clone();
            let (lhs, rhs, margin) = contraction_margin(&f, &norm, &a, &z)?;
            outcome.best_margin = margin.min(outcome.best_margin);
            outcome.found = Some(FoundInstance {
                margin,
                lhs,
                rhs,
                matrices: vec![
                    NamedMatrix { name: "A".into(), matrix: MatrixDoc::from_hermitian(&a) },
                    NamedMatrix { name: "Z".into(), matrix: MatrixDoc::from_matrix(&z) },
                ],
                bindings: vec![
                    Binding::new("f", f.tag()),
                    Binding::new("norm", norm.to_string()),
                ],
            });
        }
    }
    if let Some(inst) = &outcome.found {
        outcome.notes.push(format!(
            "violating instance found (margin {:.3e}): the symmetric-norm inequality fails for non-monotone {}",
            inst.margin,
            f.tag()
        ));
    } else {
        outcome.notes.push(format!(
            "no violation in {} samples (best margin {:.3e})",
            outcome.samples, outcome.best_margin
        ));
    }
    Ok(outcome)
}
