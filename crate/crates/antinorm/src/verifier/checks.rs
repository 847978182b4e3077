//! The 27 randomized inequality checks of the catalog.
//!
//! Shared structure: resolve the function bindings (config overrides or
//! per-check defaults), certify their scalar hypotheses once on a grid, then
//! sweep `dims × trials × bindings`, drawing instances from per-trial seeded
//! generators and recording normalized margins. Gauges of `f(X)` are computed
//! from the spectrum of `X` mapped through `f` — a gauge only sees singular
//! values — so each trial costs a few eigendecompositions however many specs
//! are swept.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blockdecomp;
use crate::error::{Error, Result};
use crate::functions::predicates::{
    self, default_grid, is_concave, is_convex, is_subadditive, is_superadditive,
    log_concavity_margin, PredicateReport,
};
use crate::functions::{self, pow_of, ScalarFn};
use crate::norms::{AntiNormSpec, GaugeSpec, NormSpec};
use crate::report::{Binding, CheckReport, NamedMatrix, Verdict, WorstInstance};
use crate::section5::{
    det_functional, eq51_check, eq51_control_points, midpoint_convexity_check, pressure,
    prop56_check, schatten_functional, InstanceSource, Mode, TraceFunctional,
};
use crate::spectral::hermitian::{diagonal_part, from_eigensystem};
use crate::spectral::random::{
    random_contraction, random_hermitian_in_interval, random_psd, random_unitary,
};
use crate::spectral::{HermitianMatrix, MatrixDoc};

use super::{anti_sweep, norm_sweep, trial_seed, CheckConfig};

const PRED_TOL: f64 = predicates::DEFAULT_TOL;

/// Dispatches a check id to its implementation and stamps the wall time.
pub(super) fn run(id: &str, cfg: &CheckConfig) -> Result<CheckReport> {
    let started = std::time::Instant::now();
    let mut report = match id {
        "rotfeld_trace" => rotfeld_trace(cfg),
        "rotfeld_norm" => rotfeld_norm(cfg),
        "lee_block" => lee_block(cfg),
        "fisher" => fisher(cfg),
        "minkowski" => minkowski(cfg),
        "minkowski_convex" => minkowski_convex(cfg),
        "jensen_det" => jensen_det(cfg),
        "antinorm_superadd" => antinorm_superadd(cfg),
        "jensen_antinorm" => jensen_antinorm(cfg),
        "brown_kosaki" => brown_kosaki(cfg),
        "thm41_norm" => thm41_norm(cfg),
        "thm41_antinorm" => thm41_antinorm(cfg),
        "lemma42_consequence" => lemma42_consequence(cfg),
        "cor43" => cor43(cfg),
        "cor44_block" => cor44_block(cfg),
        "cor45" => cor45(cfg),
        "cor46_wedge" => cor46_wedge(cfg),
        "cor47" => cor47(cfg),
        "cor48" => cor48(cfg),
        "cor49_block" => cor49_block(cfg),
        "cor410" => cor410(cfg),
        "thm52_midpoint" => thm52_midpoint(cfg),
        "ex53_pressure" => ex53_pressure(cfg),
        "ex54_det" => ex54_det(cfg),
        "ex55_schatten" => ex55_schatten(cfg),
        "prop56" => prop56(cfg),
        "eq51" => eq51(cfg),
        other => Err(Error::Parameter(format!("unknown check id `{other}`"))),
    }?;
    report.seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

fn rng_for(cfg: &CheckConfig, id: &str, dim: usize, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, id, dim, trial))
}

/// Normalized slack of `lhs <= rhs`.
pub(super) fn margin_le(lhs: f64, rhs: f64) -> f64 {
    (rhs - lhs) / (1.0 + lhs.abs() + rhs.abs())
}

/// Normalized slack of `lhs >= rhs`.
pub(super) fn margin_ge(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / (1.0 + lhs.abs() + rhs.abs())
}

/// `|f(λ)|` sorted decreasing: the singular values of `f(X)` given `λ(X)`.
pub(super) fn gauge_vals(lams: &[f64], f: &ScalarFn) -> Result<Vec<f64>> {
    let mut v = Vec::with_capacity(lams.len());
    for &x in lams {
        v.push(f.try_value(x)?.abs());
    }
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(v)
}

/// Pads a decreasing value vector to `dim` entries of `pad` and restores the
/// decreasing order (block gauges with the ⊕-extension conventions).
fn padded(mut v: Vec<f64>, dim: usize, pad: f64) -> Vec<f64> {
    v.resize(dim.max(v.len()), pad.max(0.0));
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Grid certificate that `f >= 0` (within predicate tolerance).
fn nonneg_cert(f: &ScalarFn, grid: &[f64]) -> PredicateReport {
    let mut worst = f64::INFINITY;
    let mut at = f64::NAN;
    for &t in grid {
        let v = f.value(t);
        if v < worst {
            worst = v;
            at = t;
        }
    }
    PredicateReport {
        predicate: "non-negative".into(),
        function: f.tag().into(),
        holds: worst >= -PRED_TOL,
        worst_margin: worst,
        worst_x: at,
        worst_y: at,
        samples: grid.len(),
        tol: PRED_TOL,
    }
}

/// Structural certificate with a caller-computed outcome (conditions that are
/// not grid predicates: `g(0) = 0`, tag shapes, domain shapes, …).
fn structural_cert(predicate: &str, f: &ScalarFn, holds: bool, worst: f64) -> PredicateReport {
    PredicateReport {
        predicate: predicate.into(),
        function: f.tag().into(),
        holds,
        worst_margin: worst,
        worst_x: f64::NAN,
        worst_y: f64::NAN,
        samples: 1,
        tol: PRED_TOL,
    }
}

/// Config function overrides, or the check defaults when none were given.
fn resolve_fns(cfg: &CheckConfig, defaults: Vec<ScalarFn>) -> Result<Vec<ScalarFn>> {
    let overrides = cfg.parsed_functions()?;
    Ok(if overrides.is_empty() { defaults } else { overrides })
}

/// Same, for checks whose bindings carry an exponent. A config exponent
/// replaces the per-binding defaults; config functions take the config
/// exponent or, failing that, the first default's exponent.
fn resolve_graded(
    cfg: &CheckConfig,
    defaults: Vec<(ScalarFn, f64)>,
    exp_override: Option<f64>,
) -> Result<Vec<(ScalarFn, f64)>> {
    let overrides = cfg.parsed_functions()?;
    if overrides.is_empty() {
        Ok(defaults
            .into_iter()
            .map(|(f, e)| (f, exp_override.unwrap_or(e)))
            .collect())
    } else {
        let fallback = exp_override.unwrap_or(defaults[0].1);
        Ok(overrides.into_iter().map(|f| (f, fallback)).collect())
    }
}

/// Norm sweep at dimension `n`, honoring spec overrides. Overridden specs
/// that do not fit the dimension are dropped (the caller skips the dimension
/// when nothing is left); anti-norm overrides are an error here.
fn norms_at(overrides: &[GaugeSpec], n: usize) -> Result<Vec<NormSpec>> {
    if overrides.is_empty() {
        return Ok(norm_sweep(n));
    }
    let mut v = Vec::new();
    for s in overrides {
        match s {
            GaugeSpec::Norm(ns) => {
                if ns.validate(n).is_ok() {
                    v.push(ns.clone());
                }
            }
            GaugeSpec::Anti(a) => {
                return Err(Error::Parameter(format!(
                    "`{a}` is an anti-norm; this check sweeps symmetric norms"
                )))
            }
        }
    }
    Ok(v)
}

/// Anti-norm sweep at dimension `n`, honoring spec overrides.
fn antis_at(overrides: &[GaugeSpec], n: usize) -> Result<Vec<AntiNormSpec>> {
    if overrides.is_empty() {
        return Ok(anti_sweep(n));
    }
    let mut v = Vec::new();
    for s in overrides {
        match s {
            GaugeSpec::Anti(a) => {
                if a.validate(n).is_ok() {
                    v.push(a.clone());
                }
            }
            GaugeSpec::Norm(ns) => {
                return Err(Error::Parameter(format!(
                    "`{ns}` is a symmetric norm; this check sweeps anti-norms"
                )))
            }
        }
    }
    Ok(v)
}

/// Draws one psd instance compatible with `f`'s domain: bounded domains use
/// uniform spectra inside the domain scaled by `cap` (so sums or conjugations
/// stay inside), unbounded ones use the configured spectrum law.
fn draw_psd_for(
    f: &ScalarFn,
    cap: f64,
    n: usize,
    cfg: &CheckConfig,
    rng: &mut ChaCha8Rng,
) -> Result<HermitianMatrix> {
    let dom = f.domain();
    let lo = if dom.lo_open || dom.lo > 0.0 { dom.lo.max(0.0) + 0.05 } else { 0.0 };
    if dom.hi.is_finite() {
        Ok(random_hermitian_in_interval(n, lo, dom.hi * cap * 0.999, rng))
    } else if lo > 0.0 {
        Ok(random_hermitian_in_interval(n, lo, 2.0, rng))
    } else {
        random_psd(n, &cfg.spectrum, rng)
    }
}

fn mats(pairs: &[(&str, &HermitianMatrix)]) -> Vec<NamedMatrix> {
    pairs
        .iter()
        .map(|(name, m)| NamedMatrix {
            name: (*name).into(),
            matrix: MatrixDoc::from_hermitian(m),
        })
        .collect()
}

/// Gates one binding: pushes all certificates, notes a skipped binding, and
/// says whether every certificate held.
fn gate(report: &mut CheckReport, tag: &str, certs: Vec<PredicateReport>) -> bool {
    let ok = certs.iter().all(|c| c.holds);
    report.certificates.extend(certs);
    if !ok {
        report
            .notes
            .push(format!("binding {tag} failed its hypothesis certificates; skipped"));
    }
    ok
}

fn finish_or_gate_out(mut report: CheckReport, any_active: bool) -> CheckReport {
    if !any_active {
        report.mark_hypotheses_not_met("no function binding passed its hypothesis certificates");
    } else {
        report.finish();
    }
    report
}

/// Folds a sub-report produced by a library-level check into an aggregate,
/// deduplicating certificates by (predicate, function).
fn absorb(dst: &mut CheckReport, sub: CheckReport) {
    dst.trials += sub.trials;
    for c in sub.certificates {
        if !dst
            .certificates
            .iter()
            .any(|e| e.predicate == c.predicate && e.function == c.function)
        {
            dst.certificates.push(c);
        }
    }
    if sub.worst_margin < dst.worst_margin {
        dst.worst_margin = sub.worst_margin;
        if sub.worst_instance.is_some() {
            dst.worst_instance = sub.worst_instance;
        }
    }
    if sub.verdict == Verdict::HypothesesNotMet {
        for note in sub.notes {
            dst.notes.push(note);
        }
        dst.verdict = Verdict::HypothesesNotMet;
    }
}

// ---------------------------------------------------------------------------
// sums of two psd matrices: trace / norm / anti-norm / determinant forms
// ---------------------------------------------------------------------------

/// Tr f(A+B) <= Tr f(A) + Tr f(B), f concave and non-negative.
fn rotfeld_trace(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "rotfeld_trace";
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active = Vec::new();
    for f in resolve_fns(cfg, vec![functions::sqrt(), functions::ramp_minus_half(), functions::cap()])? {
        let grid = default_grid(f.domain())?;
        let certs = vec![is_concave(&f, &grid, PRED_TOL)?, nonneg_cert(&f, &grid)];
        if gate(&mut report, f.tag(), certs) {
            active.push(f);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for f in &active {
                let a = draw_psd_for(f, 0.5, n, cfg, &mut rng)?;
                let b = draw_psd_for(f, 0.5, n, cfg, &mut rng)?;
                let sum = a.add(&b);
                let lhs: f64 = sum.psd_eigenvalues()?.iter().map(|&x| f.value(x.min(f.domain().hi))).sum();
                let ra: f64 = a.psd_eigenvalues()?.iter().map(|&x| f.value(x)).sum();
                let rb: f64 = b.psd_eigenvalues()?.iter().map(|&x| f.value(x)).sum();
                let rhs = ra + rb;
                let m = margin_le(lhs, rhs);
                report.record(m, || WorstInstance {
                    dim: n,
                    trial,
                    lhs,
                    rhs,
                    margin: m,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![Binding::new("f", f.tag())],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// ||f(A+B)|| <= ||f(A)|| + ||f(B)|| over the norm sweep.
fn rotfeld_norm(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "rotfeld_norm";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active = Vec::new();
    for f in resolve_fns(cfg, vec![functions::sqrt(), functions::ramp_minus_half(), functions::cap()])? {
        let grid = default_grid(f.domain())?;
        let certs = vec![is_concave(&f, &grid, PRED_TOL)?, nonneg_cert(&f, &grid)];
        if gate(&mut report, f.tag(), certs) {
            active.push(f);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        let norms = norms_at(&spec_over, n)?;
        if norms.is_empty() {
            report.notes.push(format!("no overridden norm fits n = {n}; dimension skipped"));
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for f in &active {
                let a = draw_psd_for(f, 0.5, n, cfg, &mut rng)?;
                let b = draw_psd_for(f, 0.5, n, cfg, &mut rng)?;
                let sum = a.add(&b);
                let fs = gauge_vals(&sum.psd_eigenvalues()?, f)?;
                let fa = gauge_vals(&a.psd_eigenvalues()?, f)?;
                let fb = gauge_vals(&b.psd_eigenvalues()?, f)?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, norms[0].clone());
                for norm in &norms {
                    let lhs = norm.gauge(&fs)?;
                    let rhs = norm.gauge(&fa)? + norm.gauge(&fb)?;
                    let m = margin_le(lhs, rhs);
                    if m < worst {
                        worst = m;
                        at = (lhs, rhs, norm.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: n,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![
                        Binding::new("f", f.tag()),
                        Binding::new("norm", at.2.to_string()),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// Block partition for dimension `d`: the config override when it fits,
/// otherwise the (ceil, floor) split.
fn partition_for(cfg: &CheckConfig, d: usize) -> Option<(usize, usize)> {
    if let (Some(n), Some(m)) = (cfg.block_n, cfg.block_m) {
        return if n + m == d { Some((n, m)) } else { None };
    }
    if d < 2 {
        return None;
    }
    let n = d.div_ceil(2);
    Some((n, d - n))
}

/// ||f(M)|| <= ||f(A) ⊕ 0|| + ||f(B) ⊕ 0|| for psd block matrices.
fn lee_block(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "lee_block";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.iter().copied().filter(|&d| partition_for(cfg, d).is_some()).collect();
    if report.dims.is_empty() {
        report.mark_hypotheses_not_met("no configured dimension admits a 2-block partition");
        return Ok(report);
    }
    let mut active = Vec::new();
    for f in resolve_fns(cfg, vec![functions::sqrt(), functions::ramp_minus_half(), functions::cap()])? {
        let grid = default_grid(f.domain())?;
        let certs = vec![is_concave(&f, &grid, PRED_TOL)?, nonneg_cert(&f, &grid)];
        if gate(&mut report, f.tag(), certs) {
            active.push(f);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    let dims = report.dims.clone();
    for &d in &dims {
        let (bn, bm) = partition_for(cfg, d).expect("dims were filtered");
        let norms = norms_at(&spec_over, d)?;
        if norms.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, d, trial);
            for f in &active {
                let m = draw_psd_for(f, 1.0, d, cfg, &mut rng)?;
                let (ba, bb) = blockdecomp::split_blocks(&m, bn, bm)?;
                let fm = gauge_vals(&m.psd_eigenvalues()?, f)?;
                let fa = padded(gauge_vals(&ba.psd_eigenvalues()?, f)?, d, 0.0);
                let fb = padded(gauge_vals(&bb.psd_eigenvalues()?, f)?, d, 0.0);
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, norms[0].clone());
                for norm in &norms {
                    let lhs = norm.gauge(&fm)?;
                    let rhs = norm.gauge(&fa)? + norm.gauge(&fb)?;
                    let mm = margin_le(lhs, rhs);
                    if mm < worst {
                        worst = mm;
                        at = (lhs, rhs, norm.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: d,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("M", &m)]),
                    bindings: vec![
                        Binding::new("f", f.tag()),
                        Binding::new("norm", at.2.to_string()),
                        Binding::new("partition", format!("{bn}+{bm}")),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// det M <= det A · det B in log form, positive definite blocks.
fn fisher(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "fisher";
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.iter().copied().filter(|&d| partition_for(cfg, d).is_some()).collect();
    if report.dims.is_empty() {
        report.mark_hypotheses_not_met("no configured dimension admits a 2-block partition");
        return Ok(report);
    }
    let dims = report.dims.clone();
    for &d in &dims {
        let (bn, bm) = partition_for(cfg, d).expect("dims were filtered");
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, d, trial);
            let m = random_hermitian_in_interval(d, 0.2, 2.0, &mut rng);
            let (lhs, rhs) = blockdecomp::fisher_margin(&m, bn, bm)?;
            let mm = margin_le(lhs, rhs);
            report.record(mm, || WorstInstance {
                dim: d,
                trial,
                lhs,
                rhs,
                margin: mm,
                matrices: mats(&[("M", &m)]),
                bindings: vec![Binding::new("partition", format!("{bn}+{bm}"))],
            });
        }
    }
    report.finish();
    Ok(report)
}

/// det^{1/n}(A+B) >= det^{1/n} A + det^{1/n} B.
fn minkowski(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "minkowski";
    let mink = AntiNormSpec::Minkowski;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    for &n in &cfg.dims {
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            let a = random_psd(n, &cfg.spectrum, &mut rng)?;
            let b = random_psd(n, &cfg.spectrum, &mut rng)?;
            let lhs = mink.anti_gauge(&a.add(&b).psd_eigenvalues()?)?;
            let rhs = mink.anti_gauge(&a.psd_eigenvalues()?)? + mink.anti_gauge(&b.psd_eigenvalues()?)?;
            let m = margin_ge(lhs, rhs);
            report.record(m, || WorstInstance {
                dim: n,
                trial,
                lhs,
                rhs,
                margin: m,
                matrices: mats(&[("A", &a), ("B", &b)]),
                bindings: vec![],
            });
        }
    }
    report.finish();
    Ok(report)
}

/// det^{1/n} g(A+B) >= det^{1/n} g(A) + det^{1/n} g(B), g convex >= 0, g(0)=0.
fn minkowski_convex(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "minkowski_convex";
    let mink = AntiNormSpec::Minkowski;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active = Vec::new();
    for g in resolve_fns(cfg, vec![functions::pow(2.0)?, functions::poly(&[0.0, 1.0, 0.0, 1.0])?])? {
        let grid = default_grid(g.domain())?;
        let g0 = g.try_value(0.0).unwrap_or(f64::NAN);
        let certs = vec![
            is_convex(&g, &grid, PRED_TOL)?,
            nonneg_cert(&g, &grid),
            structural_cert("vanishes at 0", &g, g0.abs() <= 1e-12, g0),
        ];
        if gate(&mut report, g.tag(), certs) {
            active.push(g);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for g in &active {
                let a = draw_psd_for(g, 0.5, n, cfg, &mut rng)?;
                let b = draw_psd_for(g, 0.5, n, cfg, &mut rng)?;
                let lhs = mink.anti_gauge(&gauge_vals(&a.add(&b).psd_eigenvalues()?, g)?)?;
                let rhs = mink.anti_gauge(&gauge_vals(&a.psd_eigenvalues()?, g)?)?
                    + mink.anti_gauge(&gauge_vals(&b.psd_eigenvalues()?, g)?)?;
                let m = margin_ge(lhs, rhs);
                report.record(m, || WorstInstance {
                    dim: n,
                    trial,
                    lhs,
                    rhs,
                    margin: m,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![Binding::new("g", g.tag())],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// det^{1/n} f((A+B)/2) >= (det^{1/n} f(A) + det^{1/n} f(B)) / 2.
fn jensen_det(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "jensen_det";
    let mink = AntiNormSpec::Minkowski;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active = Vec::new();
    for f in resolve_fns(cfg, vec![functions::sqrt(), functions::cap()])? {
        let grid = default_grid(f.domain())?;
        let certs = vec![is_concave(&f, &grid, PRED_TOL)?, nonneg_cert(&f, &grid)];
        if gate(&mut report, f.tag(), certs) {
            active.push(f);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for f in &active {
                let a = draw_psd_for(f, 1.0, n, cfg, &mut rng)?;
                let b = draw_psd_for(f, 1.0, n, cfg, &mut rng)?;
                let mid = a.add(&b).scale(0.5);
                let lhs = mink.anti_gauge(&gauge_vals(&mid.psd_eigenvalues()?, f)?)?;
                let rhs = 0.5
                    * (mink.anti_gauge(&gauge_vals(&a.psd_eigenvalues()?, f)?)?
                        + mink.anti_gauge(&gauge_vals(&b.psd_eigenvalues()?, f)?)?);
                let m = margin_ge(lhs, rhs);
                report.record(m, || WorstInstance {
                    dim: n,
                    trial,
                    lhs,
                    rhs,
                    margin: m,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![Binding::new("f", f.tag())],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// ||g(A+B)||_! >= ||g(A)||_! + ||g(B)||_! over the anti-norm sweep.
fn antinorm_superadd(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "antinorm_superadd";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active = Vec::new();
    let defaults = vec![
        functions::pow(2.0)?,
        functions::poly(&[0.0, 1.0, 0.0, 1.0])?,
        functions::pow(1.5)?,
    ];
    for g in resolve_fns(cfg, defaults)? {
        let grid = default_grid(g.domain())?;
        let g0 = g.try_value(0.0).unwrap_or(f64::NAN);
        let certs = vec![
            is_convex(&g, &grid, PRED_TOL)?,
            nonneg_cert(&g, &grid),
            structural_cert("vanishes at 0", &g, g0.abs() <= 1e-12, g0),
        ];
        if gate(&mut report, g.tag(), certs) {
            active.push(g);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        let antis = antis_at(&spec_over, n)?;
        if antis.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for g in &active {
                let a = draw_psd_for(g, 0.5, n, cfg, &mut rng)?;
                let b = draw_psd_for(g, 0.5, n, cfg, &mut rng)?;
                let gs = gauge_vals(&a.add(&b).psd_eigenvalues()?, g)?;
                let ga = gauge_vals(&a.psd_eigenvalues()?, g)?;
                let gb = gauge_vals(&b.psd_eigenvalues()?, g)?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, antis[0].clone());
                for anti in &antis {
                    let lhs = anti.anti_gauge(&gs)?;
                    let rhs = anti.anti_gauge(&ga)? + anti.anti_gauge(&gb)?;
                    let m = margin_ge(lhs, rhs);
                    if m < worst {
                        worst = m;
                        at = (lhs, rhs, anti.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: n,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![
                        Binding::new("g", g.tag()),
                        Binding::new("antinorm", at.2.to_string()),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// The two-step chain ||f((A+B)/2)||_! >= ||(f(A)+f(B))/2||_! >=
/// (||f(A)||_! + ||f(B)||_!)/2; the recorded margin is the worse step.
fn jensen_antinorm(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "jensen_antinorm";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active = Vec::new();
    for f in resolve_fns(cfg, vec![functions::sqrt(), functions::tent()])? {
        let grid = default_grid(f.domain())?;
        let certs = vec![is_concave(&f, &grid, PRED_TOL)?, nonneg_cert(&f, &grid)];
        if gate(&mut report, f.tag(), certs) {
            active.push(f);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        let antis = antis_at(&spec_over, n)?;
        if antis.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for f in &active {
                let a = draw_psd_for(f, 1.0, n, cfg, &mut rng)?;
                let b = draw_psd_for(f, 1.0, n, cfg, &mut rng)?;
                let mid = a.add(&b).scale(0.5);
                let f_mid = gauge_vals(&mid.psd_eigenvalues()?, f)?;
                let fa_mat = f.apply(&a)?;
                let fb_mat = f.apply(&b)?;
                let avg_vals = fa_mat.add(&fb_mat).scale(0.5).psd_eigenvalues()?;
                let fa = gauge_vals(&a.psd_eigenvalues()?, f)?;
                let fb = gauge_vals(&b.psd_eigenvalues()?, f)?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, antis[0].clone(), "outer");
                for anti in &antis {
                    let outer = anti.anti_gauge(&f_mid)?;
                    let middle = anti.anti_gauge(&avg_vals)?;
                    let split = 0.5 * (anti.anti_gauge(&fa)? + anti.anti_gauge(&fb)?);
                    let m1 = margin_ge(outer, middle);
                    let m2 = margin_ge(middle, split);
                    if m1 < worst {
                        worst = m1;
                        at = (outer, middle, anti.clone(), "f(mid) >= avg of f");
                    }
                    if m2 < worst {
                        worst = m2;
                        at = (middle, split, anti.clone(), "avg of f >= split");
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: n,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![
                        Binding::new("f", f.tag()),
                        Binding::new("antinorm", at.2.to_string()),
                        Binding::new("step", at.3),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// ||f(Z*AZ)||_! >= ||Z* f(A) Z||_! for contractions Z.
fn brown_kosaki(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "brown_kosaki";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active = Vec::new();
    for f in resolve_fns(cfg, vec![functions::sqrt(), functions::tent(), functions::cap()])? {
        let grid = default_grid(f.domain())?;
        let zero_in = f.domain().contains_with_edge(0.0, 1e-12);
        let certs = vec![
            is_concave(&f, &grid, PRED_TOL)?,
            nonneg_cert(&f, &grid),
            structural_cert("0 in domain", &f, zero_in, if zero_in { 0.0 } else { -1.0 }),
        ];
        if gate(&mut report, f.tag(), certs) {
            active.push(f);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        let antis = antis_at(&spec_over, n)?;
        if antis.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for f in &active {
                let a = draw_psd_for(f, 0.995, n, cfg, &mut rng)?;
                let z = random_contraction(n, &mut rng)?;
                let zaz = a.conjugate_by(&z);
                let lhs_vals = gauge_vals(&zaz.psd_eigenvalues()?, f)?;
                let rhs_vals = f.apply(&a)?.conjugate_by(&z).psd_eigenvalues()?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, antis[0].clone());
                for anti in &antis {
                    let lhs = anti.anti_gauge(&lhs_vals)?;
                    let rhs = anti.anti_gauge(&rhs_vals)?;
                    let m = margin_ge(lhs, rhs);
                    if m < worst {
                        worst = m;
                        at = (lhs, rhs, anti.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: n,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: vec![
                        NamedMatrix { name: "A".into(), matrix: MatrixDoc::from_hermitian(&a) },
                        NamedMatrix { name: "Z".into(), matrix: MatrixDoc::from_matrix(&z) },
                    ],
                    bindings: vec![
                        Binding::new("f", f.tag()),
                        Binding::new("antinorm", at.2.to_string()),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

// ---------------------------------------------------------------------------
// the q / p power bounds
// ---------------------------------------------------------------------------

/// ||g(A+B)||^q <= ||g(A)||^q + ||g(B)||^q, g convex with g^q subadditive.
fn thm41_norm(cfg: &CheckConfig) -> Result<CheckReport> {
    power_norm_check(
        cfg,
        "thm41_norm",
        vec![
            (functions::poly(&[0.0, 1.0, 0.0, 1.0])?, 1.0 / 3.0),
            (functions::ramp_plus(), 0.5),
            (functions::poly(&[0.0, 1.0, 0.0, 2.0])?, 1.0 / 3.0),
        ],
        None,
    )
}

/// Corollary family: degree-m polynomials with non-negative coefficients,
/// exponent 1/m.
fn cor43(cfg: &CheckConfig) -> Result<CheckReport> {
    power_norm_check(
        cfg,
        "cor43",
        vec![
            (functions::poly(&[0.0, 1.0, 0.0, 1.0])?, 1.0 / 3.0),
            (functions::poly(&[1.0, 1.0, 1.0])?, 0.5),
            (functions::poly(&[0.0, 2.0, 0.0, 0.0, 1.0])?, 0.25),
        ],
        Some("polynomial with non-negative coefficients"),
    )
}

/// Coefficients of a `poly(...)` tag, or None when the tag is not one.
fn poly_coeffs_from_tag(tag: &str) -> Option<Vec<f64>> {
    let inner = tag.strip_prefix("poly(")?.strip_suffix(")")?;
    inner.split(',').map(|s| s.trim().parse::<f64>().ok()).collect()
}

fn power_norm_check(
    cfg: &CheckConfig,
    id: &str,
    defaults: Vec<(ScalarFn, f64)>,
    poly_gate: Option<&str>,
) -> Result<CheckReport> {
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active: Vec<(ScalarFn, f64)> = Vec::new();
    for (g, q) in resolve_graded(cfg, defaults, cfg.q)? {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("{id}: exponent q = {q} must lie in (0, 1)")));
        }
        let grid = default_grid(g.domain())?;
        let gq = pow_of(&g, q)?;
        let mut certs = vec![
            is_convex(&g, &grid, PRED_TOL)?,
            nonneg_cert(&g, &grid),
            is_subadditive(&gq, &grid, PRED_TOL)?,
        ];
        if let Some(gate_name) = poly_gate {
            let coeffs_ok = poly_coeffs_from_tag(g.tag())
                .map(|c| c.iter().all(|&x| x >= 0.0))
                .unwrap_or(false);
            certs.push(structural_cert(gate_name, &g, coeffs_ok, if coeffs_ok { 0.0 } else { -1.0 }));
        }
        if gate(&mut report, g.tag(), certs) {
            active.push((g, q));
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        let norms = norms_at(&spec_over, n)?;
        if norms.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for (g, q) in &active {
                let a = draw_psd_for(g, 0.5, n, cfg, &mut rng)?;
                let b = draw_psd_for(g, 0.5, n, cfg, &mut rng)?;
                let gs = gauge_vals(&a.add(&b).psd_eigenvalues()?, g)?;
                let ga = gauge_vals(&a.psd_eigenvalues()?, g)?;
                let gb = gauge_vals(&b.psd_eigenvalues()?, g)?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, norms[0].clone());
                for norm in &norms {
                    let lhs = norm.gauge(&gs)?.powf(*q);
                    let rhs = norm.gauge(&ga)?.powf(*q) + norm.gauge(&gb)?.powf(*q);
                    let m = margin_le(lhs, rhs);
                    if m < worst {
                        worst = m;
                        at = (lhs, rhs, norm.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: n,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![
                        Binding::new("g", g.tag()),
                        Binding::new("q", q.to_string()),
                        Binding::new("norm", at.2.to_string()),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// ||f(A+B)||_!^p >= ||f(A)||_!^p + ||f(B)||_!^p, f concave with f^p
/// superadditive.
fn thm41_antinorm(cfg: &CheckConfig) -> Result<CheckReport> {
    power_anti_check(
        cfg,
        "thm41_antinorm",
        vec![
            (functions::roots(&[1.0, 1.0])?, 2.0),
            (functions::ramp_minus_half(), 2.0),
        ],
        None,
    )
}

/// Root-sum family f(t) = Σ a_k t^{1/k}, exponent m.
fn cor47(cfg: &CheckConfig) -> Result<CheckReport> {
    power_anti_check(
        cfg,
        "cor47",
        vec![
            (functions::roots(&[1.0, 1.0])?, 2.0),
            (functions::roots(&[0.0, 1.0])?, 2.0),
            (functions::roots(&[1.0, 0.0, 2.0])?, 3.0),
        ],
        Some("sum of roots with non-negative coefficients"),
    )
}

fn power_anti_check(
    cfg: &CheckConfig,
    id: &str,
    defaults: Vec<(ScalarFn, f64)>,
    roots_gate: Option<&str>,
) -> Result<CheckReport> {
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let mut active: Vec<(ScalarFn, f64)> = Vec::new();
    for (f, p) in resolve_graded(cfg, defaults, cfg.p)? {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::Parameter(format!("{id}: exponent p = {p} must exceed 1")));
        }
        let grid = default_grid(f.domain())?;
        let fp = pow_of(&f, p)?;
        let mut certs = vec![
            is_concave(&f, &grid, PRED_TOL)?,
            nonneg_cert(&f, &grid),
            is_superadditive(&fp, &grid, PRED_TOL)?,
        ];
        if let Some(gate_name) = roots_gate {
            let ok = f.tag().starts_with("roots(");
            certs.push(structural_cert(gate_name, &f, ok, if ok { 0.0 } else { -1.0 }));
        }
        if gate(&mut report, f.tag(), certs) {
            active.push((f, p));
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        let antis = antis_at(&spec_over, n)?;
        if antis.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for (f, p) in &active {
                let a = draw_psd_for(f, 0.5, n, cfg, &mut rng)?;
                let b = draw_psd_for(f, 0.5, n, cfg, &mut rng)?;
                let fs = gauge_vals(&a.add(&b).psd_eigenvalues()?, f)?;
                let fa = gauge_vals(&a.psd_eigenvalues()?, f)?;
                let fb = gauge_vals(&b.psd_eigenvalues()?, f)?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, antis[0].clone());
                for anti in &antis {
                    let lhs = anti.anti_gauge(&fs)?.powf(*p);
                    let rhs = anti.anti_gauge(&fa)?.powf(*p) + anti.anti_gauge(&fb)?.powf(*p);
                    let m = margin_ge(lhs, rhs);
                    if m < worst {
                        worst = m;
                        at = (lhs, rhs, anti.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: n,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![
                        Binding::new("f", f.tag()),
                        Binding::new("p", p.to_string()),
                        Binding::new("antinorm", at.2.to_string()),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

// ---------------------------------------------------------------------------
// majorization consequence
// ---------------------------------------------------------------------------

/// Generates λ(A) ≺^w λ(B) pairs constructively (pairwise averaging of λ(B)
/// plus lifting one coordinate), then checks every swept anti-norm satisfies
/// ||A||_! >= ||B||_!.
fn lemma42_consequence(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "lemma42_consequence";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    for &n in &cfg.dims {
        let antis = antis_at(&spec_over, n)?;
        if antis.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            let mut lam_b = cfg.spectrum.sample(n, &mut rng)?;
            lam_b.sort_by(|a, b| b.partial_cmp(a).unwrap());
            // Pairwise averaging keeps z ≺ λ(B); lifting any coordinate keeps
            // the bottom-k sums dominating, hence λ(A) ≺^w λ(B).
            let mut z = lam_b.clone();
            if n >= 2 {
                for _ in 0..3 {
                    let i = (rng.gen::<u64>() as usize) % n;
                    let mut j = (rng.gen::<u64>() as usize) % n;
                    if i == j {
                        j = (j + 1) % n;
                    }
                    let t = rng.gen::<f64>();
                    let (zi, zj) = (z[i], z[j]);
                    z[i] = t * zi + (1.0 - t) * zj;
                    z[j] = (1.0 - t) * zi + t * zj;
                }
            }
            let r = 0.5 * rng.gen::<f64>();
            let top = z
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(i, _)| i)
                .unwrap_or(0);
            z[top] += r;
            z.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let ua = random_unitary(n, &mut rng);
            let ub = random_unitary(n, &mut rng);
            let a = from_eigensystem(&z, &ua);
            let b = from_eigensystem(&lam_b, &ub);
            let mu_a = a.psd_eigenvalues()?;
            let mu_b = b.psd_eigenvalues()?;
            let mut worst = f64::INFINITY;
            let mut at = (0.0, 0.0, antis[0].clone());
            for anti in &antis {
                let lhs = anti.anti_gauge(&mu_a)?;
                let rhs = anti.anti_gauge(&mu_b)?;
                let m = margin_ge(lhs, rhs);
                if m < worst {
                    worst = m;
                    at = (lhs, rhs, anti.clone());
                }
            }
            report.record(worst, || WorstInstance {
                dim: n,
                trial,
                lhs: at.0,
                rhs: at.1,
                margin: worst,
                matrices: mats(&[("A", &a), ("B", &b)]),
                bindings: vec![Binding::new("antinorm", at.2.to_string())],
            });
        }
    }
    report.finish();
    Ok(report)
}

// ---------------------------------------------------------------------------
// block corollaries
// ---------------------------------------------------------------------------

/// ||g(M)|| <= (||g(A)||^q + ||g(B)||^q)^{1/q} with the ⊕0 conventions, plus
/// a 3-block recursion at d >= 3.
fn cor44_block(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "cor44_block";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.iter().copied().filter(|&d| partition_for(cfg, d).is_some()).collect();
    if report.dims.is_empty() {
        report.mark_hypotheses_not_met("no configured dimension admits a 2-block partition");
        return Ok(report);
    }
    let defaults = vec![
        (functions::poly(&[0.0, 1.0, 0.0, 1.0])?, 1.0 / 3.0),
        (functions::pow(2.0)?, 0.5),
    ];
    let mut active: Vec<(ScalarFn, f64)> = Vec::new();
    for (g, q) in resolve_graded(cfg, defaults, cfg.q)? {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("{id}: exponent q = {q} must lie in (0, 1)")));
        }
        let grid = default_grid(g.domain())?;
        let g0 = g.try_value(0.0).unwrap_or(f64::NAN);
        let certs = vec![
            is_convex(&g, &grid, PRED_TOL)?,
            nonneg_cert(&g, &grid),
            is_subadditive(&pow_of(&g, q)?, &grid, PRED_TOL)?,
            structural_cert("vanishes at 0", &g, g0.abs() <= 1e-12, g0),
        ];
        if gate(&mut report, g.tag(), certs) {
            active.push((g, q));
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    let dims = report.dims.clone();
    for &d in &dims {
        let (bn, bm) = partition_for(cfg, d).expect("dims were filtered");
        let norms = norms_at(&spec_over, d)?;
        if norms.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, d, trial);
            for (g, q) in &active {
                let m = draw_psd_for(g, 1.0, d, cfg, &mut rng)?;
                let gm = gauge_vals(&m.psd_eigenvalues()?, g)?;
                let (ba, bb) = blockdecomp::split_blocks(&m, bn, bm)?;
                let ga = padded(gauge_vals(&ba.psd_eigenvalues()?, g)?, d, g.value(0.0));
                let gb = padded(gauge_vals(&bb.psd_eigenvalues()?, g)?, d, g.value(0.0));
                // 3-block partition for the recursion form.
                let three = if d >= 3 {
                    let n1 = (d / 3).max(1);
                    let n2 = ((d - n1) / 2).max(1);
                    Some((n1, n2, d - n1 - n2))
                } else {
                    None
                };
                let three_vals: Option<Vec<Vec<f64>>> = match three {
                    Some((n1, n2, n3)) => {
                        let mut offs = Vec::new();
                        let mut off = 0;
                        for s in [n1, n2, n3] {
                            let blk = HermitianMatrix::symmetrize(m.matrix().block(off, off, s, s));
                            offs.push(padded(gauge_vals(&blk.psd_eigenvalues()?, g)?, d, g.value(0.0)));
                            off += s;
                        }
                        Some(offs)
                    }
                    None => None,
                };
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, norms[0].clone(), "2 blocks");
                for norm in &norms {
                    let lhs = norm.gauge(&gm)?;
                    let rhs2 = (norm.gauge(&ga)?.powf(*q) + norm.gauge(&gb)?.powf(*q)).powf(1.0 / q);
                    let m2 = margin_le(lhs, rhs2);
                    if m2 < worst {
                        worst = m2;
                        at = (lhs, rhs2, norm.clone(), "2 blocks");
                    }
                    if let Some(blocks) = &three_vals {
                        let mut acc = 0.0;
                        for v in blocks {
                            acc += norm.gauge(v)?.powf(*q);
                        }
                        let rhs3 = acc.powf(1.0 / q);
                        let m3 = margin_le(lhs, rhs3);
                        if m3 < worst {
                            worst = m3;
                            at = (lhs, rhs3, norm.clone(), "3 blocks");
                        }
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: d,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("M", &m)]),
                    bindings: vec![
                        Binding::new("g", g.tag()),
                        Binding::new("q", q.to_string()),
                        Binding::new("norm", at.2.to_string()),
                        Binding::new("partition", at.3),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// Tr g(A) <= (Σ_i g^q(a_ii))^{1/q}.
fn cor45(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "cor45";
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let defaults = vec![
        (functions::pow(2.0)?, 0.5),
        (functions::poly(&[0.0, 1.0, 0.0, 1.0])?, 1.0 / 3.0),
    ];
    let mut active: Vec<(ScalarFn, f64)> = Vec::new();
    for (g, q) in resolve_graded(cfg, defaults, cfg.q)? {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("{id}: exponent q = {q} must lie in (0, 1)")));
        }
        let grid = default_grid(g.domain())?;
        let g0 = g.try_value(0.0).unwrap_or(f64::NAN);
        let certs = vec![
            is_convex(&g, &grid, PRED_TOL)?,
            nonneg_cert(&g, &grid),
            is_subadditive(&pow_of(&g, q)?, &grid, PRED_TOL)?,
            structural_cert("vanishes at 0", &g, g0.abs() <= 1e-12, g0),
        ];
        if gate(&mut report, g.tag(), certs) {
            active.push((g, q));
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for (g, q) in &active {
                let a = draw_psd_for(g, 1.0, n, cfg, &mut rng)?;
                let lhs: f64 = a.psd_eigenvalues()?.iter().map(|&x| g.value(x)).sum();
                let rhs = diagonal_part(&a)
                    .iter()
                    .map(|&x| g.value(x.max(0.0)).powf(*q))
                    .sum::<f64>()
                    .powf(1.0 / q);
                let m = margin_le(lhs, rhs);
                report.record(m, || WorstInstance {
                    dim: n,
                    trial,
                    lhs,
                    rhs,
                    margin: m,
                    matrices: mats(&[("A", &a)]),
                    bindings: vec![Binding::new("g", g.tag()), Binding::new("q", q.to_string())],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// The corner-norm bound at equal block sizes, which drops g(0) = 0.
fn cor46_wedge(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "cor46_wedge";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.iter().copied().filter(|&d| d >= 2 && d % 2 == 0).collect();
    if report.dims.is_empty() {
        report.mark_hypotheses_not_met("equal-size blocks need an even dimension; none configured");
        return Ok(report);
    }
    let defaults = vec![
        (functions::poly(&[1.0, 0.0, 1.0])?, 1.0 / 3.0),
        (functions::pow(2.0)?, 0.5),
    ];
    let mut active: Vec<(ScalarFn, f64)> = Vec::new();
    for (g, q) in resolve_graded(cfg, defaults, cfg.q)? {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("{id}: exponent q = {q} must lie in (0, 1)")));
        }
        let grid = default_grid(g.domain())?;
        let certs = vec![
            is_convex(&g, &grid, PRED_TOL)?,
            nonneg_cert(&g, &grid),
            is_subadditive(&pow_of(&g, q)?, &grid, PRED_TOL)?,
        ];
        if gate(&mut report, g.tag(), certs) {
            active.push((g, q));
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    let dims = report.dims.clone();
    for &d in &dims {
        let half = d / 2;
        let norms = norms_at(&spec_over, half)?;
        if norms.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, d, trial);
            for (g, q) in &active {
                let m = draw_psd_for(g, 1.0, d, cfg, &mut rng)?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, norms[0].clone());
                for norm in &norms {
                    let (lhs, rhs) = blockdecomp::cor46_margin(&m, half, norm, g, *q)?;
                    let mm = margin_le(lhs, rhs);
                    if mm < worst {
                        worst = mm;
                        at = (lhs, rhs, norm.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: d,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("M", &m)]),
                    bindings: vec![
                        Binding::new("g", g.tag()),
                        Binding::new("q", q.to_string()),
                        Binding::new("norm", at.2.to_string()),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// det^{1/n} h(A+B) >= det^{1/n} h(A) + det^{1/n} h(B) for superadditive,
/// strictly positive, log-concave h.
fn cor48(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "cor48";
    let mink = AntiNormSpec::Minkowski;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let inline_h = ScalarFn::with_derivatives(
        "t*(2-exp(-t))",
        functions::Interval::nonneg(),
        |t| t * (2.0 - (-t).exp()),
        |t| 2.0 - (-t).exp() + t * (-t).exp(),
        |t| (2.0 - t) * (-t).exp(),
    );
    let mut active = Vec::new();
    for h in resolve_fns(cfg, vec![functions::id(), inline_h])? {
        let grid: Vec<f64> = predicates::log_grid(h.domain(), 0.05, 4.0, 80)?;
        let mut pos_worst = f64::INFINITY;
        for &t in &grid {
            pos_worst = pos_worst.min(h.value(t));
        }
        let certs = vec![
            is_superadditive(&h, &grid, PRED_TOL)?,
            log_concavity_margin(&h, &grid, PRED_TOL)?,
            structural_cert("strictly positive on (0, ∞)", &h, pos_worst > 0.0, pos_worst),
        ];
        if gate(&mut report, h.tag(), certs) {
            active.push(h);
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for h in &active {
                let a = random_hermitian_in_interval(n, 0.05, 2.0, &mut rng);
                let b = random_hermitian_in_interval(n, 0.05, 2.0, &mut rng);
                let lhs = mink.anti_gauge(&gauge_vals(&a.add(&b).psd_eigenvalues()?, h)?)?;
                let rhs = mink.anti_gauge(&gauge_vals(&a.psd_eigenvalues()?, h)?)?
                    + mink.anti_gauge(&gauge_vals(&b.psd_eigenvalues()?, h)?)?;
                let m = margin_ge(lhs, rhs);
                report.record(m, || WorstInstance {
                    dim: n,
                    trial,
                    lhs,
                    rhs,
                    margin: m,
                    matrices: mats(&[("A", &a), ("B", &b)]),
                    bindings: vec![Binding::new("h", h.tag())],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// ||f(M)||_! >= (||f(A)||_!^p + ||f(B)||_!^p)^{1/p} for Schatten-type
/// anti-norms on blocks, with the f(0)-padded full-dimension convention.
fn cor49_block(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "cor49_block";
    let spec_over = cfg.parsed_specs()?;
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.iter().copied().filter(|&d| partition_for(cfg, d).is_some()).collect();
    if report.dims.is_empty() {
        report.mark_hypotheses_not_met("no configured dimension admits a 2-block partition");
        return Ok(report);
    }
    let defaults = vec![
        (functions::sqrt(), 2.0),
        (functions::roots(&[1.0, 1.0])?, 2.0),
    ];
    let mut active: Vec<(ScalarFn, f64)> = Vec::new();
    for (f, p) in resolve_graded(cfg, defaults, cfg.p)? {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::Parameter(format!("{id}: exponent p = {p} must exceed 1")));
        }
        let grid = default_grid(f.domain())?;
        let certs = vec![
            is_concave(&f, &grid, PRED_TOL)?,
            nonneg_cert(&f, &grid),
            is_superadditive(&pow_of(&f, p)?, &grid, PRED_TOL)?,
        ];
        if gate(&mut report, f.tag(), certs) {
            active.push((f, p));
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    // The r-anti-norm family to sweep: config r or spec overrides when given.
    let default_antis = |n: usize| -> Result<Vec<AntiNormSpec>> {
        if let Some(r) = cfg.r {
            let spec = if r < 0.0 {
                AntiNormSpec::SchattenNeg(r)
            } else {
                AntiNormSpec::SchattenAnti(r)
            };
            spec.validate(n)?;
            return Ok(vec![spec]);
        }
        antis_at(
            &spec_over,
            n,
        )
        .map(|v| {
            if spec_over.is_empty() {
                vec![
                    AntiNormSpec::SchattenAnti(0.5),
                    AntiNormSpec::SchattenAnti(0.8),
                    AntiNormSpec::Trace,
                ]
            } else {
                v
            }
        })
    };
    let dims = report.dims.clone();
    for &d in &dims {
        let (bn, bm) = partition_for(cfg, d).expect("dims were filtered");
        let antis = default_antis(d)?;
        if antis.is_empty() {
            continue;
        }
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, d, trial);
            for (f, p) in &active {
                let m = draw_psd_for(f, 1.0, d, cfg, &mut rng)?;
                let mut worst = f64::INFINITY;
                let mut at = (0.0, 0.0, antis[0].clone());
                for anti in &antis {
                    let (lhs, rhs) = blockdecomp::cor49_margin(&m, bn, bm, anti, f, *p)?;
                    let mm = margin_ge(lhs, rhs);
                    if mm < worst {
                        worst = mm;
                        at = (lhs, rhs, anti.clone());
                    }
                }
                report.record(worst, || WorstInstance {
                    dim: d,
                    trial,
                    lhs: at.0,
                    rhs: at.1,
                    margin: worst,
                    matrices: mats(&[("M", &m)]),
                    bindings: vec![
                        Binding::new("f", f.tag()),
                        Binding::new("p", p.to_string()),
                        Binding::new("antinorm", at.2.to_string()),
                        Binding::new("partition", format!("{bn}+{bm}")),
                    ],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

/// Tr f(A) >= (Σ_i f^p(a_ii))^{1/p}.
fn cor410(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "cor410";
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let defaults = vec![
        (functions::sqrt(), 2.0),
        (functions::ramp_minus_half(), 2.0),
        (functions::roots(&[1.0, 1.0])?, 2.0),
    ];
    let mut active: Vec<(ScalarFn, f64)> = Vec::new();
    for (f, p) in resolve_graded(cfg, defaults, cfg.p)? {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::Parameter(format!("{id}: exponent p = {p} must exceed 1")));
        }
        let grid = default_grid(f.domain())?;
        let certs = vec![
            is_concave(&f, &grid, PRED_TOL)?,
            nonneg_cert(&f, &grid),
            is_superadditive(&pow_of(&f, p)?, &grid, PRED_TOL)?,
        ];
        if gate(&mut report, f.tag(), certs) {
            active.push((f, p));
        }
    }
    if active.is_empty() {
        return Ok(finish_or_gate_out(report, false));
    }
    for &n in &cfg.dims {
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for (f, p) in &active {
                let a = draw_psd_for(f, 1.0, n, cfg, &mut rng)?;
                let lhs: f64 = a.psd_eigenvalues()?.iter().map(|&x| f.value(x)).sum();
                let rhs = diagonal_part(&a)
                    .iter()
                    .map(|&x| f.value(x.max(0.0)).powf(*p))
                    .sum::<f64>()
                    .powf(1.0 / p);
                let m = margin_ge(lhs, rhs);
                report.record(m, || WorstInstance {
                    dim: n,
                    trial,
                    lhs,
                    rhs,
                    margin: m,
                    matrices: mats(&[("A", &a)]),
                    bindings: vec![Binding::new("f", f.tag()), Binding::new("p", p.to_string())],
                });
            }
        }
    }
    Ok(finish_or_gate_out(report, true))
}

// ---------------------------------------------------------------------------
// trace-functional convexity (the φ ∘ τ ∘ f family)
// ---------------------------------------------------------------------------

fn functional_cells(
    cfg: &CheckConfig,
    id: &str,
    functionals: Vec<TraceFunctional>,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let sources = [InstanceSource::Hermitian, InstanceSource::Diagonal];
    let cells = (functionals.len() * sources.len()) as u64;
    let per_cell = (cfg.trials / cells).max(1);
    for &n in &cfg.dims {
        let mut cell = 0u64;
        for tf in &functionals {
            for &source in &sources {
                let mut rng = rng_for(cfg, id, n, cell);
                cell += 1;
                let mut sub = midpoint_convexity_check(tf, n, source, per_cell, &mut rng, cfg.tol_rel)?;
                if let Some(w) = &mut sub.worst_instance {
                    w.bindings.push(Binding::new("phi", tf.phi.tag()));
                    w.bindings.push(Binding::new("f", tf.f.tag()));
                    w.bindings.push(Binding::new("mode", tf.mode.as_str()));
                    w.bindings.push(Binding::new("source", source.as_str()));
                }
                absorb(&mut report, sub);
            }
        }
    }
    report.finish();
    Ok(report)
}

/// Midpoint convexity/concavity of A ↦ φ(τ(f(A))) for two certified pairs.
fn thm52_midpoint(cfg: &CheckConfig) -> Result<CheckReport> {
    functional_cells(
        cfg,
        "thm52_midpoint",
        vec![
            TraceFunctional::new(functions::pow(0.5)?, functions::pow(2.0)?, Mode::Convexity)?,
            TraceFunctional::new(functions::pow(2.0)?, functions::pow(0.5)?, Mode::Concavity)?,
        ],
    )
}

/// The pressure A ↦ log τ(exp A) is convex.
fn ex53_pressure(cfg: &CheckConfig) -> Result<CheckReport> {
    functional_cells(cfg, "ex53_pressure", vec![pressure()])
}

/// A ↦ exp τ(log A) = det^{1/n} A is concave on positive matrices.
fn ex54_det(cfg: &CheckConfig) -> Result<CheckReport> {
    functional_cells(cfg, "ex54_det", vec![det_functional()])
}

/// A ↦ (τ(A^q))^{1/q}: concave for q in (0,1), convex for q > 1.
fn ex55_schatten(cfg: &CheckConfig) -> Result<CheckReport> {
    functional_cells(
        cfg,
        "ex55_schatten",
        vec![schatten_functional(0.5)?, schatten_functional(2.0)?],
    )
}

/// Sub/superadditivity of A ↦ φ(||f(A)||) with the scalar and vector gates.
fn prop56(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "prop56";
    let mut report = CheckReport::new(id, cfg.tol_rel);
    let usable: Vec<usize> = cfg.dims.iter().copied().filter(|&n| n >= 2).collect();
    report.dims = usable.clone();
    if usable.is_empty() {
        report.mark_hypotheses_not_met("prop56 bindings need n >= 2; no usable dimension");
        return Ok(report);
    }
    let cases: Vec<(ScalarFn, GaugeSpec, ScalarFn, (f64, f64))> = vec![
        (
            functions::pow(2.0)?,
            GaugeSpec::Anti(AntiNormSpec::Trace),
            functions::sqrt(),
            (0.0, 2.0),
        ),
        (
            functions::pow(0.5)?,
            GaugeSpec::Norm(NormSpec::KyFan(2)),
            functions::poly(&[0.0, 1.0, 0.0, 1.0])?,
            (0.0, 0.6),
        ),
    ];
    let per_cell = (cfg.trials / cases.len() as u64).max(1);
    for &n in &usable {
        for (cell, (phi, gauge, f, window)) in cases.iter().enumerate() {
            let mut rng = rng_for(cfg, id, n, cell as u64);
            let mut sub = prop56_check(phi, gauge, f, n, *window, per_cell, &mut rng, cfg.tol_rel)?;
            sub.notes.clear();
            absorb(&mut report, sub);
        }
    }
    report.finish();
    Ok(report)
}

/// The scalar control inequality behind the second-derivative computation,
/// for four certified φ plus a negative control that must be caught.
fn eq51(cfg: &CheckConfig) -> Result<CheckReport> {
    let id = "eq51";
    let mut report = CheckReport::new(id, cfg.tol_rel);
    report.dims = cfg.dims.clone();
    let phis: Vec<(ScalarFn, f64, f64)> = vec![
        (functions::log(), 0.2, 4.2),
        (functions::pow(0.5)?, 0.2, 4.2),
        (functions::pow(2.0)?, 0.2, 4.2),
        (functions::exp(), 0.0, 2.0),
    ];
    for &n in &cfg.dims {
        let len = n.max(2);
        for trial in 0..cfg.trials {
            let mut rng = rng_for(cfg, id, n, trial);
            for (phi, lo, hi) in &phis {
                let t: Vec<f64> = (0..len).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect();
                let x: Vec<f64> = if trial % 4 == 0 {
                    eq51_control_points(phi, &t)
                } else {
                    (0..len).map(|_| -2.0 + 4.0 * rng.gen::<f64>()).collect()
                };
                let sub = eq51_check(phi, &t, &x, cfg.tol_rel)?;
                if sub.verdict == Verdict::HypothesesNotMet {
                    report.mark_hypotheses_not_met(format!(
                        "certificate unexpectedly failed for φ = {}",
                        phi.tag()
                    ));
                    return Ok(report);
                }
                absorb(&mut report, sub);
            }
        }
        // Negative control: the ratio certificate fails and the proof's
        // extremal x choice must produce a strict violation.
        let mut detected = false;
        let mut control_worst = f64::INFINITY;
        let control = functions::neg_gauss();
        for ctrial in 0..8u64 {
            let mut rng = rng_for(cfg, id, n, 1_000_000 + ctrial);
            let t: Vec<f64> = (0..len).map(|_| 1.1 + 1.8 * rng.gen::<f64>()).collect();
            let x = eq51_control_points(&control, &t);
            let sub = eq51_check(&control, &t, &x, cfg.tol_rel)?;
            control_worst = control_worst.min(sub.worst_margin);
            if sub.verdict == Verdict::HypothesesNotMet && sub.worst_margin < -10.0 * cfg.tol_rel {
                detected = true;
                if !report
                    .certificates
                    .iter()
                    .any(|c| c.function == control.tag())
                {
                    report.certificates.extend(sub.certificates);
                }
            }
        }
        if detected {
            report.notes.push(format!(
                "negative control {}: certificate fails and violation detected (worst {:.3e}) at n = {n}",
                control.tag(),
                control_worst
            ));
        } else {
            let m = -1.0;
            report.record(m, || WorstInstance {
                dim: n,
                trial: u64::MAX,
                lhs: control_worst,
                rhs: 0.0,
                margin: m,
                matrices: vec![],
                bindings: vec![
                    Binding::new("phi", control.tag()),
                    Binding::new("failure", "negative control not detected"),
                ],
            });
        }
    }
    report.finish();
    Ok(report)
}
