//! Trace-functional convexity machinery: the normalized trace τ, functionals
//! `A ↦ φ(τ(f(A)))`, midpoint convexity checks on random matrix pairs, the
//! second-derivative inequality (5.1), and the abstract sub/superadditivity
//! of `A ↦ φ(‖f(A)‖)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::functions::predicates::{
    self, log_grid, phi_ratio_convexity, PredicateReport, RatioShape,
};
use crate::functions::{reflect, ScalarFn};
use crate::norms::GaugeSpec;
use crate::report::{Binding, CheckReport, NamedMatrix, WorstInstance};
use crate::spectral::io::MatrixDoc;
use crate::spectral::random::random_hermitian_in_interval;
use crate::spectral::HermitianMatrix;

/// Default slack for the randomized midpoint checks.
pub const SECTION5_SLACK: f64 = 1e-9;

/// Fraction of the sampling window kept clear of each endpoint.
pub const WINDOW_MARGIN: f64 = 0.01;

/// Whether a functional is being tested for midpoint convexity or concavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Convexity,
    Concavity,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Convexity => "convexity",
            Mode::Concavity => "concavity",
        }
    }
}

/// Where midpoint test instances come from: full Hermitian matrices, or
/// diagonal ones (the n-variable reduction).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceSource {
    Hermitian,
    Diagonal,
}

impl InstanceSource {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceSource::Hermitian => "hermitian",
            InstanceSource::Diagonal => "diagonal",
        }
    }
}

/// The functional `A ↦ φ(τ(f(A)))` together with the claim being tested.
#[derive(Debug, Clone)]
pub struct TraceFunctional {
    pub phi: ScalarFn,
    pub f: ScalarFn,
    pub mode: Mode,
    /// Compact sub-interval of f's domain that instances are drawn from
    /// (before the 1% endpoint margin).
    window: (f64, f64),
}

impl TraceFunctional {
    /// Builds the functional with a sampling window derived from f's domain
    /// clipped to `[-4, 4]`.
    pub fn new(phi: ScalarFn, f: ScalarFn, mode: Mode) -> Result<Self> {
        let d = f.domain();
        let lo = d.lo.max(-4.0);
        let hi = d.hi.min(4.0);
        Self::with_window(phi, f, mode, (lo, hi))
    }

    /// Builds the functional with an explicit sampling window.
    pub fn with_window(
        phi: ScalarFn,
        f: ScalarFn,
        mode: Mode,
        window: (f64, f64),
    ) -> Result<Self> {
        let (lo, hi) = window;
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Parameter(format!(
                "degenerate sampling window [{lo}, {hi}] for f = {}",
                f.tag()
            )));
        }
        let tf = TraceFunctional { phi, f, mode, window };
        tf.validate()?;
        Ok(tf)
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.sampling_interval();
        // Range of f over the window must land in φ's domain.
        let mut values = Vec::with_capacity(64);
        for k in 0..64 {
            let t = lo + (hi - lo) * k as f64 / 63.0;
            if !self.f.domain().contains_with_edge(t, 1e-12) {
                return Err(Error::Parameter(format!(
                    "window point {t} outside domain of f = {}",
                    self.f.tag()
                )));
            }
            let v = self.f.value(self.f.domain().clamp_to_closed(t));
            if !self.phi.domain().contains_with_edge(v, 1e-9 * (1.0 + v.abs())) {
                return Err(Error::Parameter(format!(
                    "f({t}) = {v} escapes the domain of φ = {}",
                    self.phi.tag()
                )));
            }
            values.push(v);
        }
        // φ must be strictly monotone across the range f produces.
        let (vmin, vmax) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if vmax - vmin > 1e-12 * (1.0 + vmax.abs()) {
            let mut sign = 0.0f64;
            for k in 0..64 {
                let a = vmin + (vmax - vmin) * k as f64 / 64.0;
                let b = vmin + (vmax - vmin) * (k + 1) as f64 / 64.0;
                let diff = self.phi.value(b) - self.phi.value(a);
                let s = diff.signum();
                if diff == 0.0 || (sign != 0.0 && s != sign) {
                    return Err(Error::Parameter(format!(
                        "φ = {} is not strictly monotone on [{vmin}, {vmax}]",
                        self.phi.tag()
                    )));
                }
                sign = s;
            }
        }
        Ok(())
    }

    /// The window with the 1% endpoint margin applied — where spectra are
    /// actually drawn.
    pub fn sampling_interval(&self) -> (f64, f64) {
        let (lo, hi) = self.window;
        let m = WINDOW_MARGIN * (hi - lo);
        (lo + m, hi - m)
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }
}

/// The normalized trace `(1/n) Σ diagonal`.
pub fn tau(a: &HermitianMatrix) -> f64 {
    a.trace() / a.dim() as f64
}

/// `φ(τ(f(A)))`, computed through the spectrum of A.
pub fn eval_functional(tf: &TraceFunctional, a: &HermitianMatrix) -> Result<f64> {
    let eigs = a.eigenvalues()?;
    let n = eigs.len() as f64;
    let mut mean = 0.0;
    for x in eigs {
        mean += tf.f.try_value(x)?;
    }
    mean /= n;
    tf.phi.try_value(mean)
}

/// The pressure `A ↦ log τ(e^A)`, convex on Hermitians.
pub fn pressure() -> TraceFunctional {
    TraceFunctional::new(
        crate::functions::log(),
        crate::functions::exp(),
        Mode::Convexity,
    )
    .expect("pressure functional is well-formed")
}

/// `A ↦ exp τ(log A) = det^{1/n}(A)`, concave on positive definites.
pub fn det_functional() -> TraceFunctional {
    TraceFunctional::new(
        crate::functions::exp(),
        crate::functions::log(),
        Mode::Concavity,
    )
    .expect("determinant functional is well-formed")
}

/// `A ↦ (τ(A^q))^{1/q}` on psd matrices: concave for q in (0,1), convex for
/// q > 1.
pub fn schatten_functional(q: f64) -> Result<TraceFunctional> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Parameter(format!("schatten functional needs q > 0, got {q}")));
    }
    let mode = if q < 1.0 { Mode::Concavity } else { Mode::Convexity };
    TraceFunctional::new(crate::functions::pow(1.0 / q)?, crate::functions::pow(q)?, mode)
}

fn draw_instance(
    n: usize,
    source: InstanceSource,
    lo: f64,
    hi: f64,
    rng: &mut impl Rng,
) -> HermitianMatrix {
    match source {
        InstanceSource::Hermitian => random_hermitian_in_interval(n, lo, hi, rng),
        InstanceSource::Diagonal => {
            let diag: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect();
            HermitianMatrix::diag(&diag)
        }
    }
}

/// Midpoint convexity (or concavity) of `A ↦ φ(τ(f(A)))` on random pairs
/// with spectra in the functional's sampling window.
pub fn midpoint_convexity_check(
    tf: &TraceFunctional,
    n: usize,
    source: InstanceSource,
    trials: u64,
    rng: &mut impl Rng,
    tol_rel: f64,
) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::Parameter("midpoint check needs n >= 1".into()));
    }
    let (lo, hi) = tf.sampling_interval();
    let mut report = CheckReport::new("midpoint-convexity", tol_rel);
    report.dims = vec![n];
    for trial in 0..trials {
        let a = draw_instance(n, source, lo, hi, rng);
        let b = draw_instance(n, source, lo, hi, rng);
        let mid = a.add(&b).scale(0.5);
        let va = eval_functional(tf, &a)?;
        let vb = eval_functional(tf, &b)?;
        let vm = eval_functional(tf, &mid)?;
        let avg = 0.5 * (va + vb);
        let raw = match tf.mode {
            Mode::Convexity => avg - vm,
            Mode::Concavity => vm - avg,
        };
        let scale = 1.0 + avg.abs() + vm.abs();
        report.record(raw / scale, || WorstInstance {
            dim: n,
            trial,
            lhs: vm,
            rhs: avg,
            margin: raw / scale,
            matrices: vec![
                NamedMatrix { name: "A".into(), matrix: MatrixDoc::from_hermitian(&a) },
                NamedMatrix { name: "B".into(), matrix: MatrixDoc::from_hermitian(&b) },
            ],
            bindings: vec![
                Binding::new("phi", tf.phi.tag()),
                Binding::new("f", tf.f.tag()),
                Binding::new("mode", tf.mode.as_str()),
                Binding::new("source", source.as_str()),
            ],
        });
    }
    report.finish();
    Ok(report)
}

/// The proof's extremal choice for (5.1): `x_i = φ'(t_i)² / φ''(t_i)`, which
/// turns the Schwarz step into an equality.
pub fn eq51_control_points(phi: &ScalarFn, t_points: &[f64]) -> Vec<f64> {
    t_points
        .iter()
        .map(|&t| {
            let d1 = phi.d1(t);
            d1 * d1 / phi.d2(t)
        })
        .collect()
}

/// Inequality (5.1):
/// `((1/n) Σ x_i/φ'(t_i))² ≤ [φ'(t̄)/φ''(t̄)] · ((1/n) Σ φ''(t_i) x_i²/φ'(t_i)³)`
/// with `t̄` the mean of the `t_i`. Requires `φ' > 0, φ'' < 0` at every
/// `t_i`; a `φ' < 0` family is accepted via the reflection `φ(-t)`. The
/// margin is reported even when the `φ'/φ''` convexity certificate fails, but
/// then the verdict is `hypotheses-not-met` rather than pass/fail.
pub fn eq51_check(
    phi: &ScalarFn,
    t_points: &[f64],
    x_points: &[f64],
    tol_rel: f64,
) -> Result<CheckReport> {
    if t_points.is_empty() || t_points.len() != x_points.len() {
        return Err(Error::Parameter(format!(
            "eq51 needs matching non-empty point lists, got {} and {}",
            t_points.len(),
            x_points.len()
        )));
    }
    // Reduce a decreasing φ to the increasing case by reflecting.
    let d1_signs: Vec<f64> = t_points.iter().map(|&t| phi.d1(t).signum()).collect();
    let (phi_eff, t_eff): (ScalarFn, Vec<f64>) = if d1_signs.iter().all(|&s| s > 0.0) {
        (phi.clone(), t_points.to_vec())
    } else if d1_signs.iter().all(|&s| s < 0.0) {
        (reflect(phi), t_points.iter().map(|&t| -t).collect())
    } else {
        return Err(Error::Parameter(format!(
            "eq51: φ' of {} changes sign over the t points",
            phi.tag()
        )));
    };
    for &t in &t_eff {
        let d1 = phi_eff.d1(t);
        if !(d1 > 0.0) {
            return Err(Error::Parameter(format!(
                "eq51: φ'({t}) = {d1} is not positive after reduction"
            )));
        }
    }
    // Either curvature sign works — dividing the second-derivative identity
    // by φ''(t̄) of either sign lands on the same inequality — but it must
    // not change over the points. The certificate flips with the sign:
    // φ'/φ'' convex when φ'' < 0, concave when φ'' > 0.
    let d2_signs: Vec<f64> = t_eff.iter().map(|&t| phi_eff.d2(t).signum()).collect();
    let ratio_shape = if d2_signs.iter().all(|&s| s < 0.0) {
        RatioShape::Convex
    } else if d2_signs.iter().all(|&s| s > 0.0) {
        RatioShape::Concave
    } else {
        return Err(Error::Parameter(format!(
            "eq51: φ'' of {} changes sign (or vanishes) over the t points",
            phi.tag()
        )));
    };

    let mut report = CheckReport::new("eq51", tol_rel);
    report.dims = vec![t_points.len()];

    // Hypothesis certificate: φ'/φ'' midpoint-convex (φ'' < 0) or
    // midpoint-concave (φ'' > 0) across the span of the t points (linear
    // grid; the points need not be positive).
    let (tmin, tmax) = t_eff
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    let mut hypotheses_ok = true;
    if tmax - tmin > 1e-10 * (1.0 + tmax.abs()) {
        let grid: Vec<f64> = (0..64)
            .map(|k| tmin + (tmax - tmin) * k as f64 / 63.0)
            .collect();
        let cert = phi_ratio_convexity(&phi_eff, &grid, predicates::DEFAULT_TOL, ratio_shape)?;
        hypotheses_ok = cert.holds;
        report.certificates.push(cert);
    } else {
        report.notes.push("degenerate t range; ratio certificate skipped".into());
    }

    let n = t_eff.len() as f64;
    let t_bar = t_eff.iter().sum::<f64>() / n;
    let mut lhs_sum = 0.0;
    let mut rhs_sum = 0.0;
    for (&t, &x) in t_eff.iter().zip(x_points) {
        let d1 = phi_eff.d1(t);
        let d2 = phi_eff.d2(t);
        lhs_sum += x / d1;
        rhs_sum += d2 * x * x / (d1 * d1 * d1);
    }
    let lhs = (lhs_sum / n) * (lhs_sum / n);
    let rhs = phi_eff.d1(t_bar) / phi_eff.d2(t_bar) * (rhs_sum / n);
    let raw = rhs - lhs;
    let scale = 1.0 + lhs.abs() + rhs.abs();
    report.record(raw / scale, || WorstInstance {
        dim: t_points.len(),
        trial: 0,
        lhs,
        rhs,
        margin: raw / scale,
        matrices: vec![],
        bindings: vec![
            Binding::new("phi", phi.tag()),
            Binding::new(
                "t_points",
                t_points.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","),
            ),
            Binding::new(
                "x_points",
                x_points.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            ),
        ],
    });
    if hypotheses_ok {
        report.finish();
    } else {
        report.mark_hypotheses_not_met(
            "φ'/φ'' convexity certificate failed; margin reported without a pass/fail claim",
        );
    }
    Ok(report)
}

/// Gauge of `f(M)` for psd `M`: the gauge applied to the decreasing
/// rearrangement of `|f(eigenvalues)|`.
pub fn gauge_of_f(gauge: &GaugeSpec, f: &ScalarFn, m: &HermitianMatrix) -> Result<f64> {
    let mut vals = Vec::with_capacity(m.dim());
    for x in m.eigenvalues()? {
        vals.push(f.try_value(x)?.abs());
    }
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    gauge.gauge(&vals)
}

/// Sub/superadditivity of `A ↦ φ(‖f(A)‖)` on random psd pairs (Prop 5.6
/// shape). Norm gauges are tested for subadditivity, anti-norm gauges for
/// superadditivity. Hypothesis gates: `φ∘Φ∘φ⁻¹` midpoint convex (norm) or
/// concave (anti-norm) on random non-negative vectors, and `φ∘f`
/// sub/superadditive on a grid over the sampling window. A failed gate
/// yields `hypotheses-not-met` and skips the matrix trials.
#[allow(clippy::too_many_arguments)]
pub fn prop56_check(
    phi: &ScalarFn,
    gauge: &GaugeSpec,
    f: &ScalarFn,
    n: usize,
    window: (f64, f64),
    trials: u64,
    rng: &mut impl Rng,
    tol_rel: f64,
) -> Result<CheckReport> {
    gauge.validate(n)?;
    let (wlo, whi) = window;
    if !(whi > wlo) || wlo < 0.0 {
        return Err(Error::Parameter(format!(
            "prop56 needs a non-negative window, got [{wlo}, {whi}]"
        )));
    }
    if !f.domain().contains_with_edge(2.0 * whi, 1e-9) {
        return Err(Error::Parameter(format!(
            "window [{wlo}, {whi}]: f = {} must be defined up to {}",
            f.tag(),
            2.0 * whi
        )));
    }

    let mut report = CheckReport::new("prop56", tol_rel);
    report.dims = vec![n];
    report.notes.push(format!(
        "phi = {}, gauge = {}, f = {}, window = [{wlo}, {whi}]",
        phi.tag(),
        gauge,
        f.tag()
    ));

    // φ must be strictly increasing from [0, ∞) onto itself.
    let zero = phi.try_value(0.0).unwrap_or(f64::NAN);
    if !(zero.abs() <= 1e-9) {
        report.mark_hypotheses_not_met(format!("φ(0) = {zero} is not 0"));
        return Ok(report);
    }
    let phigrid = log_grid(phi.domain(), 1e-4, (2.0 * whi).max(1.0), 40)?;
    if phigrid.iter().any(|&t| !(phi.d1(t) > 0.0)) {
        report.mark_hypotheses_not_met(format!("φ = {} is not strictly increasing", phi.tag()));
        return Ok(report);
    }

    // Gate 1: φ∘f sub/superadditive on a grid over the window.
    let f_phi = {
        let (p, g) = (phi.clone(), f.clone());
        ScalarFn::from_closure(
            format!("{}∘{}", phi.tag(), f.tag()),
            f.domain(),
            move |t| p.value(g.value(t)),
        )
    };
    let grid = log_grid(f.domain(), (wlo).max(1e-4 * whi), whi, 60)?;
    let scalar_cert = if gauge.is_norm() {
        predicates::is_subadditive(&f_phi, &grid, predicates::DEFAULT_TOL)?
    } else {
        predicates::is_superadditive(&f_phi, &grid, predicates::DEFAULT_TOL)?
    };
    let scalar_ok = scalar_cert.holds;
    report.certificates.push(scalar_cert);

    // Gate 2: x ↦ φ(Φ(φ⁻¹(x_1), ..., φ⁻¹(x_n))) midpoint convex/concave on
    // random non-negative vectors.
    let cap = phi.try_value(2.0 * whi)?;
    let psi = |x: &[f64]| -> Result<f64> {
        let mut back = Vec::with_capacity(x.len());
        for &xi in x {
            back.push(phi.inverse(xi)?);
        }
        back.sort_by(|a, b| b.partial_cmp(a).unwrap());
        phi.try_value(gauge.gauge(&back)?)
    };
    let mut vector_cert = PredicateReport {
        predicate: if gauge.is_norm() {
            "phi∘gauge∘phi_inv midpoint convex (random vectors)".into()
        } else {
            "phi∘gauge∘phi_inv midpoint concave (random vectors)".into()
        },
        function: format!("{} with {}", gauge, phi.tag()),
        holds: true,
        worst_margin: f64::INFINITY,
        worst_x: f64::NAN,
        worst_y: f64::NAN,
        samples: 0,
        tol: predicates::DEFAULT_TOL,
    };
    for _ in 0..200 {
        let u: Vec<f64> = (0..n).map(|_| cap * rng.gen::<f64>()).collect();
        let v: Vec<f64> = (0..n).map(|_| cap * rng.gen::<f64>()).collect();
        let mid: Vec<f64> = u.iter().zip(&v).map(|(&a, &b)| 0.5 * (a + b)).collect();
        let (pu, pv, pm) = (psi(&u)?, psi(&v)?, psi(&mid)?);
        let avg = 0.5 * (pu + pv);
        let raw = if gauge.is_norm() { avg - pm } else { pm - avg };
        let margin = raw / (1.0 + avg.abs() + pm.abs());
        vector_cert.samples += 1;
        if margin < vector_cert.worst_margin {
            vector_cert.worst_margin = margin;
        }
    }
    vector_cert.holds = vector_cert.worst_margin >= -vector_cert.tol;
    let vector_ok = vector_cert.holds;
    report.certificates.push(vector_cert);

    if !(scalar_ok && vector_ok) {
        report.mark_hypotheses_not_met(
            "predicate certificates failed; matrix trials skipped",
        );
        return Ok(report);
    }

    // Main test on random psd pairs with spectra in the window.
    let m = WINDOW_MARGIN * (whi - wlo);
    let (slo, shi) = (wlo + m, whi - m);
    for trial in 0..trials {
        let a = random_hermitian_in_interval(n, slo, shi, rng);
        let b = random_hermitian_in_interval(n, slo, shi, rng);
        let sum = a.add(&b);
        let va = phi.try_value(gauge_of_f(gauge, f, &a)?)?;
        let vb = phi.try_value(gauge_of_f(gauge, f, &b)?)?;
        let vs = phi.try_value(gauge_of_f(gauge, f, &sum)?)?;
        let split = va + vb;
        let raw = if gauge.is_norm() { split - vs } else { vs - split };
        let scale = 1.0 + split.abs() + vs.abs();
        report.record(raw / scale, || WorstInstance {
            dim: n,
            trial,
            lhs: vs,
            rhs: split,
            margin: raw / scale,
            matrices: vec![
                NamedMatrix { name: "A".into(), matrix: MatrixDoc::from_hermitian(&a) },
                NamedMatrix { name: "B".into(), matrix: MatrixDoc::from_hermitian(&b) },
            ],
            bindings: vec![
                Binding::new("phi", phi.tag()),
                Binding::new("gauge", gauge.to_string()),
                Binding::new("f", f.tag()),
            ],
        });
    }
    report.finish();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{self, Interval};
    use crate::norms::{AntiNormSpec, NormSpec};
    use crate::report::Verdict;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn tau_basics() {
        assert!((tau(&HermitianMatrix::identity(5)) - 1.0).abs() < 1e-15);
        assert!((tau(&HermitianMatrix::diag(&[2.0, 4.0])) - 3.0).abs() < 1e-15);

        let mut r = rng(11);
        for _ in 0..20 {
            let a = random_hermitian_in_interval(4, -1.0, 3.0, &mut r);
            let u = crate::spectral::random::random_unitary(4, &mut r);
            let conj = a.conjugate_by(&u);
            assert!((tau(&a) - tau(&conj)).abs() <= 1e-10 * (1.0 + tau(&a).abs()));
        }
    }

    #[test]
    fn det_functional_matches_minkowski_antinorm() {
        let tf = det_functional();
        let mut r = rng(21);
        for _ in 0..25 {
            let a = random_hermitian_in_interval(4, 0.1, 3.0, &mut r);
            let v = eval_functional(&tf, &a).unwrap();
            let mink = AntiNormSpec::Minkowski.eval(&a).unwrap();
            assert!(
                (v - mink).abs() <= 1e-9 * (1.0 + mink),
                "exp τ log = det^(1/n): {v} vs {mink}"
            );
        }
    }

    #[test]
    fn pressure_at_zero_matrix() {
        let tf = pressure();
        let z = HermitianMatrix::diag(&[0.0, 0.0]);
        assert!(eval_functional(&tf, &z).unwrap().abs() < 1e-12, "log 1 = 0");
    }

    #[test]
    fn schatten_functional_matches_normalized_antinorm() {
        let q = 0.5;
        let tf = schatten_functional(q).unwrap();
        let spec = AntiNormSpec::SchattenAnti(q);
        let mut r = rng(31);
        for n in [2usize, 4] {
            for _ in 0..10 {
                let a = random_hermitian_in_interval(n, 0.05, 2.0, &mut r);
                let v = eval_functional(&tf, &a).unwrap();
                let anti = spec.eval(&a).unwrap();
                let expect = (n as f64).powf(-1.0 / q) * anti;
                assert!(
                    (v - expect).abs() <= 1e-9 * (1.0 + expect),
                    "(τ(A^q))^(1/q) = n^(-1/q)·‖A‖_q: {v} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn pressure_is_convex_on_hermitian_pairs() {
        let tf = pressure();
        let mut r = rng(41);
        for n in [2usize, 3, 4, 8] {
            let rep =
                midpoint_convexity_check(&tf, n, InstanceSource::Hermitian, 250, &mut r, SECTION5_SLACK)
                    .unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "pressure convex at n = {n}: {rep}");
        }
    }

    #[test]
    fn det_is_concave_and_exp_variant_recaptures_jensen() {
        let mut r = rng(51);
        let rep = midpoint_convexity_check(
            &det_functional(),
            3,
            InstanceSource::Hermitian,
            300,
            &mut r,
            SECTION5_SLACK,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "det^(1/n) concave: {rep}");

        // φ = exp, f = log∘h with h concave non-negative: det^{1/n} h(A).
        let h = functions::roots(&[1.0, 1.0]).unwrap();
        let composite = {
            let hh = h.clone();
            ScalarFn::from_closure("log∘roots(1,1)", Interval::positive(), move |t| {
                hh.value(t).ln()
            })
        };
        let tf = TraceFunctional::with_window(
            functions::exp(),
            composite,
            Mode::Concavity,
            (0.05, 4.0),
        )
        .unwrap();
        let rep =
            midpoint_convexity_check(&tf, 3, InstanceSource::Hermitian, 300, &mut r, SECTION5_SLACK)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "det^(1/n) h(A) concave: {rep}");
    }

    #[test]
    fn square_of_trace_is_convex_on_diagonals() {
        let tf = TraceFunctional::new(
            functions::pow(2.0).unwrap(),
            functions::id(),
            Mode::Convexity,
        )
        .unwrap();
        let mut r = rng(61);
        let rep =
            midpoint_convexity_check(&tf, 4, InstanceSource::Diagonal, 400, &mut r, SECTION5_SLACK)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "(τA)² convex: {rep}");
    }

    #[test]
    fn prop51_contrapositive_convex_phi_fails_on_diagonals() {
        // φ = exp is strictly convex, so φ∘τ∘φ⁻¹ = det^{1/n} cannot be
        // convex; the diagonal search must find a violation.
        let tf = TraceFunctional::new(functions::exp(), functions::log(), Mode::Convexity).unwrap();
        let mut r = rng(71);
        let rep =
            midpoint_convexity_check(&tf, 3, InstanceSource::Diagonal, 400, &mut r, SECTION5_SLACK)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Fail, "det^(1/n) is not convex: {rep}");
        let worst = rep.worst_instance.unwrap();
        assert!(worst.margin < -10.0 * SECTION5_SLACK);
        assert_eq!(worst.matrices.len(), 2);
    }

    #[test]
    fn thm52_link_catalog_phis_pass_both_sources() {
        // φ passing the ratio-convexity certificate (with φ' > 0, φ'' < 0):
        // φ∘τ∘φ⁻¹ is midpoint convex on both diagonal and full instances.
        let cases = [
            (functions::log(), functions::exp()),
            (functions::pow(0.5).unwrap(), functions::pow(2.0).unwrap()),
        ];
        let mut r = rng(81);
        for (phi, inv) in cases {
            let grid: Vec<f64> = (0..40).map(|k| 0.2 + 3.5 * k as f64 / 39.0).collect();
            let cert =
                phi_ratio_convexity(&phi, &grid, predicates::DEFAULT_TOL, RatioShape::Convex)
                    .unwrap();
            assert!(cert.holds, "{} ratio convex", phi.tag());

            let tf = TraceFunctional::new(phi, inv, Mode::Convexity).unwrap();
            for source in [InstanceSource::Diagonal, InstanceSource::Hermitian] {
                let rep =
                    midpoint_convexity_check(&tf, 3, source, 250, &mut r, SECTION5_SLACK).unwrap();
                assert_eq!(rep.verdict, Verdict::Pass, "{}: {rep}", tf.phi.tag());
            }
        }
    }

    #[test]
    fn eq51_single_point_is_equality() {
        let rep = eq51_check(&functions::log(), &[2.0], &[3.0], SECTION5_SLACK).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.worst_margin.abs() <= 1e-12, "n = 1 collapses to equality: {rep}");
    }

    #[test]
    fn eq51_holds_for_log_and_powers() {
        let mut r = rng(91);
        for _ in 0..200 {
            let n = 2 + (r.gen::<u64>() % 5) as usize;
            let t: Vec<f64> = (0..n).map(|_| 0.2 + 4.0 * r.gen::<f64>()).collect();
            let x: Vec<f64> = (0..n).map(|_| -2.0 + 4.0 * r.gen::<f64>()).collect();
            let rep = eq51_check(&functions::log(), &t, &x, SECTION5_SLACK).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "log: {rep}");
            let rep = eq51_check(&functions::pow(0.5).unwrap(), &t, &x, SECTION5_SLACK).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "sqrt: {rep}");
        }
    }

    #[test]
    fn eq51_reflected_variant_matches_standard() {
        // φ̃(t) = log(-t) has φ̃' < 0, φ̃'' < 0 on t < 0; the reflection
        // reduces it to plain log at -t.
        let phi_dec = reflect(&functions::log());
        let t = [-0.5, -1.5, -2.5];
        let x = [0.3, -0.4, 1.1];
        let rep = eq51_check(&phi_dec, &t, &x, SECTION5_SLACK).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);

        let t_pos: Vec<f64> = t.iter().map(|&v| -v).collect();
        let direct = eq51_check(&functions::log(), &t_pos, &x, SECTION5_SLACK).unwrap();
        assert!(
            (rep.worst_margin - direct.worst_margin).abs() <= 1e-12,
            "reflection is exact: {} vs {}",
            rep.worst_margin,
            direct.worst_margin
        );
    }

    #[test]
    fn eq51_convex_phi_uses_concave_certificate() {
        // φ = t² has φ'' > 0 and φ'/φ'' = t, which is (weakly) concave, so
        // the check passes with the concave-shape certificate.
        let sq = functions::pow(2.0).unwrap();
        let rep = eq51_check(&sq, &[1.0, 2.0, 3.5], &[1.0, -0.5, 2.0], SECTION5_SLACK).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep}");
        // φ = exp: ratio ≡ 1, fine on either certificate; x from the
        // extremal choice keeps the Schwarz step tight.
        let e = functions::exp();
        let t = [0.0, 0.7, 1.9];
        let x = eq51_control_points(&e, &t);
        let rep = eq51_check(&e, &t, &x, SECTION5_SLACK).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep}");
    }

    #[test]
    fn eq51_sign_violations_are_errors() {
        // Mixed φ' signs.
        let tent = functions::tent();
        assert!(eq51_check(&tent, &[0.5, 1.5], &[1.0, 1.0], SECTION5_SLACK).is_err());
        // Length mismatch.
        assert!(eq51_check(&functions::log(), &[1.0], &[1.0, 2.0], SECTION5_SLACK).is_err());
    }

    #[test]
    fn eq51_negative_control_violates_with_proof_points() {
        // φ = -exp(-t²/2): φ' > 0, φ'' < 0 on [1.05, 3], but φ'/φ'' is
        // strictly concave, so the proof's extremal x choice breaks (5.1).
        let phi = functions::neg_gauss();
        let t = [1.1, 1.7, 2.3, 2.9];
        let x = eq51_control_points(&phi, &t);
        let rep = eq51_check(&phi, &t, &x, SECTION5_SLACK).unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesNotMet, "certificate fails: {rep}");
        assert!(
            rep.worst_margin < -10.0 * SECTION5_SLACK,
            "violation margin: {}",
            rep.worst_margin
        );
        assert!(!rep.certificates.is_empty() && !rep.certificates[0].holds);
    }

    #[test]
    fn prop56_trace_antinorm_with_sqrt_reproduces_superadditivity() {
        // φ = t², anti-norm = trace, f = √t: (Tr √(A+B))² ≥ (Tr √A)² + (Tr √B)².
        let phi = functions::pow(2.0).unwrap();
        let gauge = GaugeSpec::Anti(AntiNormSpec::Trace);
        let f = functions::sqrt();
        let mut r = rng(101);
        let rep =
            prop56_check(&phi, &gauge, &f, 3, (0.0, 2.0), 300, &mut r, SECTION5_SLACK).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep}");
        assert_eq!(rep.certificates.len(), 2);
        assert!(rep.certificates.iter().all(|c| c.holds));
    }

    #[test]
    fn prop56_kyfan_norm_with_convex_g_reproduces_subadditivity() {
        // φ = √t, norm = ky_fan(2), f = t + t³ on a window where √(f) stays
        // subadditive.
        let phi = functions::pow(0.5).unwrap();
        let gauge = GaugeSpec::Norm(NormSpec::KyFan(2));
        let f = functions::poly(&[0.0, 1.0, 0.0, 1.0]).unwrap();
        let mut r = rng(111);
        let rep =
            prop56_check(&phi, &gauge, &f, 3, (0.0, 0.6), 300, &mut r, SECTION5_SLACK).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep}");
    }

    #[test]
    fn prop56_identity_phi_reduces_to_plain_additivity() {
        let phi = functions::id();
        let mut r = rng(121);
        let rep = prop56_check(
            &phi,
            &GaugeSpec::Norm(NormSpec::Schatten(2.0)),
            &functions::id(),
            3,
            (0.0, 2.0),
            200,
            &mut r,
            SECTION5_SLACK,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep}");

        let rep = prop56_check(
            &phi,
            &GaugeSpec::Anti(AntiNormSpec::Trace),
            &functions::id(),
            3,
            (0.0, 2.0),
            200,
            &mut r,
            SECTION5_SLACK,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep}");
    }

    #[test]
    fn prop56_failing_gate_skips_trials() {
        // t² is not subadditive, so the norm-side scalar gate fails.
        let phi = functions::id();
        let mut r = rng(131);
        let rep = prop56_check(
            &phi,
            &GaugeSpec::Norm(NormSpec::Schatten(2.0)),
            &functions::pow(2.0).unwrap(),
            3,
            (0.0, 2.0),
            100,
            &mut r,
            SECTION5_SLACK,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesNotMet, "{rep}");
        assert_eq!(rep.trials, 0, "matrix trials skipped");
        assert!(rep.certificates.iter().any(|c| !c.holds));
    }

    #[test]
    fn pressure_convexity_thousand_pairs() {
        let tf = pressure();
        let mut r = rng(141);
        let mut total = 0;
        for n in [2usize, 3, 4, 8] {
            let rep =
                midpoint_convexity_check(&tf, n, InstanceSource::Hermitian, 250, &mut r, 1e-9)
                    .unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "pressure n = {n}: {rep}");
            total += rep.trials;
        }
        assert_eq!(total, 1000);
    }

    #[test]
    fn functional_construction_rejects_bad_shapes() {
        // Range of f escapes φ's domain: log of negative values.
        assert!(TraceFunctional::with_window(
            functions::log(),
            functions::id(),
            Mode::Convexity,
            (-2.0, -1.0),
        )
        .is_err());
        // Non-monotone φ.
        assert!(TraceFunctional::with_window(
            functions::tent(),
            functions::id(),
            Mode::Convexity,
            (0.0, 2.0),
        )
        .is_err());
        assert!(schatten_functional(-1.0).is_err());
    }
}
