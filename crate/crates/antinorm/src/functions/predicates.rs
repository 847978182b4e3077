//! Numerical shape predicates for scalar functions.
//!
//! Every predicate works on an explicit sampling grid (use [`default_grid`]
//! for the standard one: 200 log-spaced points on `[1e-4, 1e4]` intersected
//! with the function's domain), reports the worst violation it saw, and
//! decides with a relative tolerance. Margins are normalized by
//! `1 + |values involved|`, so `holds` means "worst normalized margin is at
//! least `-tol`". The checks are deterministic: same function, grid and
//! tolerance always give the same report.

use serde::{Deserialize, Serialize};

use super::{Interval, ScalarFn};
use crate::error::{Error, Result};

pub const DEFAULT_GRID_SIZE: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const GRID_LO: f64 = 1e-4;
pub const GRID_HI: f64 = 1e4;

/// Outcome of one predicate run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredicateReport {
    /// Which predicate ran, e.g. `"convex"` or `"ratio_concave"`.
    pub predicate: String,
    /// Tag of the function that was tested.
    pub function: String,
    pub holds: bool,
    /// Worst normalized margin over all samples; negative values below
    /// `-tol` are violations. For the pair predicates the margin is the
    /// inequality slack divided by `1 + |f(x)| + |f(y)|`.
    pub worst_margin: f64,
    /// Point (or pair) where the worst margin occurred; NaN when the
    /// predicate has no specific witness point.
    #[serde(with = "crate::report::nonfinite_as_null")]
    pub worst_x: f64,
    #[serde(with = "crate::report::nonfinite_as_null")]
    pub worst_y: f64,
    /// Number of points or pairs examined.
    pub samples: usize,
    pub tol: f64,
}

impl PredicateReport {
    fn new(predicate: &str, function: &str, tol: f64) -> Self {
        PredicateReport {
            predicate: predicate.to_string(),
            function: function.to_string(),
            holds: true,
            worst_margin: f64::INFINITY,
            worst_x: f64::NAN,
            worst_y: f64::NAN,
            samples: 0,
            tol,
        }
    }

    fn record(&mut self, margin: f64, x: f64, y: f64) {
        self.samples += 1;
        if margin < self.worst_margin {
            self.worst_margin = margin;
            self.worst_x = x;
            self.worst_y = y;
        }
    }

    fn finish(mut self) -> Self {
        if self.samples == 0 {
            self.worst_margin = 0.0;
        }
        self.holds = self.worst_margin >= -self.tol;
        self
    }
}

/// Log-spaced grid of `n` points on `[lo, hi]` intersected with `domain`.
/// The window must end up positive and non-degenerate.
pub fn log_grid(domain: Interval, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Parameter("grid needs at least 2 points".into()));
    }
    let mut lo = lo.max(domain.lo);
    let mut hi = hi.min(domain.hi);
    if domain.lo_open && lo <= domain.lo {
        lo = domain.lo + 1e-9 * (1.0 + domain.lo.abs());
    }
    if domain.hi_open && hi >= domain.hi {
        hi = domain.hi - 1e-9 * (1.0 + domain.hi.abs());
    }
    if !(lo > 0.0) {
        return Err(Error::Parameter(format!(
            "log-spaced grid needs a positive window, got lo = {lo}"
        )));
    }
    if !(hi > lo) {
        return Err(Error::Parameter(format!(
            "empty grid window: [{lo}, {hi}] after intersecting with {domain}"
        )));
    }
    let (lln, hln) = (lo.ln(), hi.ln());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let s = i as f64 / (n - 1) as f64;
        let t = (lln + s * (hln - lln)).exp();
        out.push(t.clamp(lo, hi));
    }
    Ok(out)
}

/// The standard predicate grid for `domain`.
pub fn default_grid(domain: Interval) -> Result<Vec<f64>> {
    log_grid(domain, GRID_LO, GRID_HI, DEFAULT_GRID_SIZE)
}

fn midpoint_test(f: &ScalarFn, grid: &[f64], tol: f64, concave: bool, name: &str) -> Result<PredicateReport> {
    if grid.len() < 2 {
        return Err(Error::Parameter("midpoint test needs at least 2 grid points".into()));
    }
    let mut report = PredicateReport::new(name, f.tag(), tol);
    let values: Vec<f64> = grid.iter().map(|&t| f.value(t)).collect();
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let (x, y) = (grid[i], grid[j]);
            let avg = 0.5 * (values[i] + values[j]);
            let fm = f.value(0.5 * (x + y));
            let raw = if concave { fm - avg } else { avg - fm };
            let scale = 1.0 + values[i].abs() + values[j].abs();
            report.record(raw / scale, x, y);
        }
    }
    Ok(report.finish())
}

/// Midpoint convexity on all grid pairs: `f((x+y)/2) <= (f(x)+f(y))/2`.
pub fn is_convex(f: &ScalarFn, grid: &[f64], tol: f64) -> Result<PredicateReport> {
    midpoint_test(f, grid, tol, false, "convex")
}

/// Midpoint concavity on all grid pairs.
pub fn is_concave(f: &ScalarFn, grid: &[f64], tol: f64) -> Result<PredicateReport> {
    midpoint_test(f, grid, tol, true, "concave")
}

fn additivity_test(f: &ScalarFn, grid: &[f64], tol: f64, superadd: bool, name: &str) -> Result<PredicateReport> {
    let mut report = PredicateReport::new(name, f.tag(), tol);
    let domain = f.domain();
    let values: Vec<f64> = grid.iter().map(|&t| f.value(t)).collect();
    for i in 0..grid.len() {
        for j in i..grid.len() {
            let (x, y) = (grid[i], grid[j]);
            if !domain.contains(x + y) {
                continue;
            }
            let split = values[i] + values[j];
            let joint = f.value(x + y);
            let raw = if superadd { joint - split } else { split - joint };
            let scale = 1.0 + split.abs() + joint.abs();
            report.record(raw / scale, x, y);
        }
    }
    if report.samples == 0 {
        return Err(Error::Parameter(format!(
            "no grid pairs with x + y inside {domain}"
        )));
    }
    Ok(report.finish())
}

/// `f(x) + f(y) >= f(x + y)` over grid pairs whose sum stays in the domain.
pub fn is_subadditive(f: &ScalarFn, grid: &[f64], tol: f64) -> Result<PredicateReport> {
    additivity_test(f, grid, tol, false, "subadditive")
}

/// `f(x + y) >= f(x) + f(y)` over grid pairs whose sum stays in the domain.
pub fn is_superadditive(f: &ScalarFn, grid: &[f64], tol: f64) -> Result<PredicateReport> {
    additivity_test(f, grid, tol, true, "superadditive")
}

fn ratio_monotonicity(w: &ScalarFn, grid: &[f64], tol: f64, decreasing: bool, name: &str) -> Result<PredicateReport> {
    if grid.len() < 2 {
        return Err(Error::Parameter("ratio test needs at least 2 grid points".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted[0] <= 0.0 {
        return Err(Error::Parameter(
            "quasi-concavity ratio test needs a grid bounded away from 0".into(),
        ));
    }
    let mut report = PredicateReport::new(name, w.tag(), tol);
    let ratios: Vec<f64> = sorted.iter().map(|&t| w.value(t) / t).collect();
    for k in 0..ratios.len() - 1 {
        let (a, b) = (ratios[k], ratios[k + 1]);
        let raw = if decreasing { a - b } else { b - a };
        let scale = 1.0 + a.abs() + b.abs();
        report.record(raw / scale, sorted[k], sorted[k + 1]);
    }
    Ok(report.finish())
}

/// Quasi-concavity in the sense used here: `w(t)/t` non-increasing along the
/// sorted grid.
pub fn is_quasiconcave(w: &ScalarFn, grid: &[f64], tol: f64) -> Result<PredicateReport> {
    ratio_monotonicity(w, grid, tol, true, "quasiconcave")
}

/// Quasi-convexity: `w(t)/t` non-decreasing along the sorted grid.
pub fn is_quasiconvex(w: &ScalarFn, grid: &[f64], tol: f64) -> Result<PredicateReport> {
    ratio_monotonicity(w, grid, tol, false, "quasiconvex")
}

/// Second derivative of `log h` at `t`, from `h`'s derivative data.
fn log_second(h: &ScalarFn, t: f64) -> Result<f64> {
    let v = h.value(t);
    if !(v > 0.0) {
        return Err(Error::Parameter(format!(
            "log-concavity test: {}({t}) = {v} is not positive",
            h.tag()
        )));
    }
    Ok((h.d2(t) * v - h.d1(t) * h.d1(t)) / (v * v))
}

/// Strict log-concavity: `(log h)'' < 0` across the grid. The report's
/// `worst_margin` is `-max (log h)''`, so strictly log-concave functions get
/// a positive margin while `exp` (where `(log h)'' = 0`) gets exactly 0 and
/// fails.
pub fn log_concavity_margin(h: &ScalarFn, grid: &[f64], tol: f64) -> Result<PredicateReport> {
    if grid.is_empty() {
        return Err(Error::Parameter("log-concavity test needs a non-empty grid".into()));
    }
    let mut report = PredicateReport::new("strictly_log_concave", h.tag(), tol);
    for &t in grid {
        let l2 = log_second(h, t)?;
        report.record(-l2, t, t);
    }
    let mut report = report.finish();
    // Strictness: a zero margin (e.g. h = exp) must fail.
    report.holds = report.worst_margin > report.tol;
    Ok(report)
}

/// For strictly log-concave `h`, finds `q` in `(0, 1)` with `h^q` concave on
/// `[a, b]`, using `(h^q)'' = q h^q (q ((log h)')^2 + (log h)'')`. Returns
/// `None` when no positive exponent works on the sampled grid.
pub fn concavity_exponent(h: &ScalarFn, a: f64, b: f64, n: usize) -> Result<Option<f64>> {
    let grid = log_grid(h.domain(), a, b, n.max(2))?;
    let mut bound = f64::INFINITY;
    for &t in &grid {
        let l2 = log_second(h, t)?;
        if l2 >= 0.0 {
            return Ok(None);
        }
        let v = h.value(t);
        let l1 = h.d1(t) / v;
        if l1 != 0.0 {
            bound = bound.min(-l2 / (l1 * l1));
        }
    }
    if !(bound > 0.0) {
        return Ok(None);
    }
    // Back off slightly so the bound survives off-grid points, and keep the
    // exponent strictly inside (0, 1).
    Ok(Some(0.999 * bound.min(1.0)))
}

/// Which shape `phi_ratio_convexity` should certify for `φ'/φ''`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioShape {
    Convex,
    Concave,
}

/// Midpoint convexity/concavity test for the ratio `φ'/φ''`. Requires
/// `φ' > 0` and `φ''` of constant sign on the grid; a vanishing `φ''` makes
/// the ratio singular and is reported as an error.
pub fn phi_ratio_convexity(
    phi: &ScalarFn,
    grid: &[f64],
    tol: f64,
    shape: RatioShape,
) -> Result<PredicateReport> {
    if grid.len() < 2 {
        return Err(Error::Parameter("ratio convexity test needs at least 2 grid points".into()));
    }
    let ratio_at = |t: f64| -> Result<f64> {
        let d1 = phi.d1(t);
        let d2 = phi.d2(t);
        if !(d1 > 0.0) {
            return Err(Error::HypothesisNotMet(format!(
                "{}: φ'({t}) = {d1} is not positive",
                phi.tag()
            )));
        }
        if d2.abs() <= 1e-14 * (1.0 + d1.abs()) {
            return Err(Error::Parameter(format!(
                "{}: φ''({t}) = {d2} vanishes; ratio φ'/φ'' is singular",
                phi.tag()
            )));
        }
        Ok(d1 / d2)
    };
    // Validate sign pattern first so precondition failures beat shape failures.
    let mut sign = 0.0f64;
    for &t in grid {
        let r = ratio_at(t)?;
        let s = phi.d2(t).signum();
        if sign == 0.0 {
            sign = s;
        } else if s != sign {
            return Err(Error::HypothesisNotMet(format!(
                "{}: φ'' changes sign on the grid (at t = {t}, ratio {r})",
                phi.tag()
            )));
        }
    }
    let name = match shape {
        RatioShape::Convex => "ratio_convex",
        RatioShape::Concave => "ratio_concave",
    };
    let mut report = PredicateReport::new(name, phi.tag(), tol);
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let (x, y) = (grid[i], grid[j]);
            let rx = ratio_at(x)?;
            let ry = ratio_at(y)?;
            let rm = ratio_at(0.5 * (x + y))?;
            let avg = 0.5 * (rx + ry);
            let raw = match shape {
                RatioShape::Convex => avg - rm,
                RatioShape::Concave => rm - avg,
            };
            let scale = 1.0 + rx.abs() + ry.abs();
            report.record(raw / scale, x, y);
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{self, Interval, ScalarFn};

    fn grid_for(f: &ScalarFn) -> Vec<f64> {
        default_grid(f.domain()).unwrap()
    }

    #[test]
    fn default_grid_respects_domains() {
        let g = default_grid(Interval::nonneg()).unwrap();
        assert_eq!(g.len(), DEFAULT_GRID_SIZE);
        assert!(g[0] >= GRID_LO && *g.last().unwrap() <= GRID_HI);
        assert!(g.windows(2).all(|w| w[0] < w[1]), "strictly increasing");
        // Log spacing: adjacent ratios stay constant.
        let r0 = g[1] / g[0];
        for w in g.windows(2) {
            assert!((w[1] / w[0] - r0).abs() < 1e-8);
        }

        let tent_grid = default_grid(functions::tent().domain()).unwrap();
        assert!(*tent_grid.last().unwrap() <= 2.0);

        let ng = default_grid(functions::neg_gauss().domain()).unwrap();
        assert!(ng[0] >= 1.05 && *ng.last().unwrap() <= 3.0);

        assert!(default_grid(Interval::closed(-5.0, -1.0)).is_err());
    }

    #[test]
    fn convexity_basics() {
        let square = functions::pow(2.0).unwrap();
        let rep = is_convex(&square, &grid_for(&square), DEFAULT_TOL).unwrap();
        assert!(rep.holds, "t^2 convex: {rep:?}");

        let root = functions::sqrt();
        assert!(is_concave(&root, &grid_for(&root), DEFAULT_TOL).unwrap().holds);
        assert!(!is_convex(&root, &grid_for(&root), DEFAULT_TOL).unwrap().holds);

        // Linear functions pass both within tolerance.
        let lin = functions::poly(&[0.0, 3.0]).unwrap();
        assert!(is_convex(&lin, &grid_for(&lin), DEFAULT_TOL).unwrap().holds);
        assert!(is_concave(&lin, &grid_for(&lin), DEFAULT_TOL).unwrap().holds);

        let rp = functions::ramp_plus();
        assert!(is_convex(&rp, &grid_for(&rp), DEFAULT_TOL).unwrap().holds);
        let rm = functions::ramp_minus_half();
        assert!(is_concave(&rm, &grid_for(&rm), DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn cube_root_of_convex_is_subadditive_not_convex() {
        let g = functions::poly(&[0.0, 1.0, 0.0, 1.0]).unwrap(); // t + t^3
        let grid = grid_for(&g);
        assert!(is_convex(&g, &grid, DEFAULT_TOL).unwrap().holds);

        let g13 = functions::pow_of(&g, 1.0 / 3.0).unwrap();
        let rep = is_convex(&g13, &grid, DEFAULT_TOL).unwrap();
        assert!(!rep.holds, "(t+t^3)^(1/3) is not convex: {rep:?}");
        assert!(rep.worst_margin < -DEFAULT_TOL);
        assert!(rep.worst_x < rep.worst_y);

        assert!(is_subadditive(&g13, &grid, DEFAULT_TOL).unwrap().holds);
        assert!(is_quasiconcave(&g13, &grid, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn cube_of_concave_is_quasiconvex() {
        let f = functions::roots(&[1.0, 1.0]).unwrap(); // t + sqrt t, concave
        let grid = grid_for(&f);
        assert!(is_concave(&f, &grid, DEFAULT_TOL).unwrap().holds);

        let f3 = functions::pow_of(&f, 3.0).unwrap();
        assert!(is_quasiconvex(&f3, &grid, DEFAULT_TOL).unwrap().holds);
        assert!(is_convex(&f3, &grid, DEFAULT_TOL).unwrap().holds);
        assert!(!is_quasiconcave(&f3, &grid, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn additivity_basics() {
        let square = functions::pow(2.0).unwrap();
        let grid = grid_for(&square);
        assert!(is_superadditive(&square, &grid, DEFAULT_TOL).unwrap().holds);
        assert!(!is_subadditive(&square, &grid, DEFAULT_TOL).unwrap().holds);

        let root = functions::sqrt();
        assert!(is_subadditive(&root, &grid, DEFAULT_TOL).unwrap().holds);
        assert!(!is_superadditive(&root, &grid, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn star_kink_separates_superadditive_from_convex() {
        let g = functions::star_kink();
        let grid = grid_for(&g);
        assert!(is_superadditive(&g, &grid, DEFAULT_TOL).unwrap().holds);
        let rep = is_convex(&g, &grid, DEFAULT_TOL).unwrap();
        assert!(!rep.holds, "star_kink must fail convexity: {rep:?}");
        // The violation happens across the kink at t = 1.
        assert!(rep.worst_x < 1.0 && rep.worst_y > 1.0);
    }

    #[test]
    fn quasi_tests_reject_zero_grid() {
        let f = functions::id();
        let bad = vec![0.0, 1.0, 2.0];
        assert!(is_quasiconcave(&f, &bad, DEFAULT_TOL).is_err());
        assert!(is_quasiconvex(&f, &bad, DEFAULT_TOL).is_err());
    }

    #[test]
    fn log_concavity_examples() {
        let h = functions::poly(&[0.0, 1.0, 1.0]).unwrap(); // t + t^2
        let grid = grid_for(&h);
        let rep = log_concavity_margin(&h, &grid, DEFAULT_TOL).unwrap();
        assert!(rep.holds, "t + t^2 strictly log-concave: {rep:?}");
        assert!(rep.worst_margin > 0.0);

        let e = functions::exp();
        let egrid = log_grid(e.domain(), 1e-2, 10.0, 50).unwrap();
        let rep = log_concavity_margin(&e, &egrid, DEFAULT_TOL).unwrap();
        assert!(!rep.holds, "exp is not strictly log-concave");
        assert!(rep.worst_margin.abs() <= 1e-12, "margin is exactly 0: {rep:?}");

        // Positivity is required.
        let t = functions::tent();
        assert!(log_concavity_margin(&t, &[2.0], DEFAULT_TOL).is_err());
    }

    #[test]
    fn concavity_exponent_produces_concave_power() {
        let h = functions::poly(&[0.0, 1.0, 1.0]).unwrap();
        let q = concavity_exponent(&h, 0.1, 10.0, 100).unwrap().expect("exponent exists");
        assert!(q > 0.0 && q < 1.0, "q = {q}");
        // The bound -L2/L1^2 for t + t^2 tends to 1/2 for large t.
        assert!(q < 0.55 && q > 0.45, "q = {q}");

        let hq = functions::pow_of(&h, q).unwrap();
        let grid = log_grid(h.domain(), 0.1, 10.0, 120).unwrap();
        assert!(is_concave(&hq, &grid, DEFAULT_TOL).unwrap().holds);

        // exp is not strictly log-concave, so no exponent exists.
        let e = functions::exp();
        assert!(concavity_exponent(&e, 0.1, 10.0, 50).unwrap().is_none());
    }

    #[test]
    fn ratio_shapes_of_standard_phis() {
        let grid = log_grid(Interval::positive(), 0.1, 50.0, 60).unwrap();
        // log: ratio is -t, linear.
        let l = functions::log();
        assert!(phi_ratio_convexity(&l, &grid, DEFAULT_TOL, RatioShape::Convex).unwrap().holds);
        assert!(phi_ratio_convexity(&l, &grid, DEFAULT_TOL, RatioShape::Concave).unwrap().holds);
        // exp: ratio is 1.
        let e = functions::exp();
        assert!(phi_ratio_convexity(&e, &grid, DEFAULT_TOL, RatioShape::Convex).unwrap().holds);
        // t^r: ratio is t/(r-1), linear.
        let p = functions::pow(0.5).unwrap();
        assert!(phi_ratio_convexity(&p, &grid, DEFAULT_TOL, RatioShape::Convex).unwrap().holds);

        // t^1 has vanishing second derivative: singular ratio.
        let one = functions::pow(1.0).unwrap();
        assert!(matches!(
            phi_ratio_convexity(&one, &grid, DEFAULT_TOL, RatioShape::Convex),
            Err(Error::Parameter(_))
        ));

        // Piecewise-linear φ also has vanishing φ''.
        let t = functions::tent();
        let tg = log_grid(t.domain(), 0.1, 1.9, 30).unwrap();
        assert!(matches!(
            phi_ratio_convexity(&t, &tg, DEFAULT_TOL, RatioShape::Convex),
            Err(Error::Parameter(_))
        ));

        // Decreasing φ with curvature: the φ' > 0 precondition fails.
        let dec = ScalarFn::with_derivatives(
            "neg_square",
            Interval::closed(0.1, 3.0),
            |t| -t * t,
            |t| -2.0 * t,
            |_| -2.0,
        );
        let dg = log_grid(dec.domain(), 0.1, 3.0, 30).unwrap();
        assert!(matches!(
            phi_ratio_convexity(&dec, &dg, DEFAULT_TOL, RatioShape::Convex),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn neg_gauss_fails_ratio_convexity() {
        let phi = functions::neg_gauss();
        let grid = log_grid(phi.domain(), 1.05, 3.0, 80).unwrap();
        let rep = phi_ratio_convexity(&phi, &grid, DEFAULT_TOL, RatioShape::Convex).unwrap();
        assert!(!rep.holds, "ratio t/(1-t^2) is strictly concave: {rep:?}");
        let rep = phi_ratio_convexity(&phi, &grid, DEFAULT_TOL, RatioShape::Concave).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn closure_properties() {
        // Sum of two convex functions with quasi-concave cube roots.
        let g1 = functions::poly(&[0.0, 1.0, 0.0, 1.0]).unwrap();
        let g2 = functions::poly(&[0.0, 0.0, 0.0, 2.0]).unwrap();
        let s = functions::sum(&g1, &g2);
        let grid = grid_for(&s);
        assert!(is_convex(&s, &grid, DEFAULT_TOL).unwrap().holds);
        let s13 = functions::pow_of(&s, 1.0 / 3.0).unwrap();
        assert!(is_quasiconcave(&s13, &grid, DEFAULT_TOL).unwrap().holds);
        assert!(is_subadditive(&s13, &grid, DEFAULT_TOL).unwrap().holds);

        // Geometric mean of two concave functions with quasi-convex squares.
        let f1 = functions::roots(&[1.0, 1.0]).unwrap();
        let f2 = functions::sqrt();
        let prod = functions::product(&f1, &f2);
        let gm = functions::pow_of(&prod, 0.5).unwrap();
        assert!(is_concave(&gm, &grid, DEFAULT_TOL).unwrap().holds);
        assert!(is_quasiconvex(&prod, &grid, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn reports_serialize() {
        let f = functions::sqrt();
        let rep = is_concave(&f, &grid_for(&f), DEFAULT_TOL).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"predicate\":\"concave\""));
        assert!(json.contains("\"holds\":true"));
    }
}
