//! Scalar functions with attached domains and optional derivative data.
//!
//! A [`ScalarFn`] bundles everything the rest of the crate needs to reason
//! about a real function of one variable: where it lives, how to evaluate it,
//! its first two derivatives when we know them in closed form, and an inverse
//! when one is registered. The shape predicates (convexity, subadditivity,
//! quasi-concavity, ...) live in [`predicates`]; the text grammar used by the
//! CLI lives in [`parse`].

pub mod parse;
pub mod predicates;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::HermitianMatrix;

/// Evaluation edge tolerance: eigenvalues this close to a closed endpoint are
/// clamped onto it instead of rejected.
pub const DOMAIN_EDGE_TOL: f64 = 1e-10;

/// Step used by the central finite-difference fallbacks for `d1`/`d2`.
pub const FD_STEP: f64 = 1e-5;

/// An interval of the real line with individually open or closed endpoints.
/// Infinite endpoints are expressed with `f64::INFINITY` and are always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Self {
        Interval { lo, hi, lo_open, hi_open }
    }

    /// `[lo, hi]`
    pub const fn closed(lo: f64, hi: f64) -> Self {
        Interval::new(lo, hi, false, false)
    }

    /// `[0, ∞)`
    pub const fn nonneg() -> Self {
        Interval::new(0.0, f64::INFINITY, false, true)
    }

    /// `(0, ∞)`
    pub const fn positive() -> Self {
        Interval::new(0.0, f64::INFINITY, true, true)
    }

    /// `(-∞, ∞)`
    pub const fn all() -> Self {
        Interval::new(f64::NEG_INFINITY, f64::INFINITY, true, true)
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lo_open { t > self.lo } else { t >= self.lo };
        let below = if self.hi_open { t < self.hi } else { t <= self.hi };
        above && below
    }

    /// Like [`contains`](Self::contains) but accepts points within `tol` of a
    /// closed endpoint; such points are meant to be clamped by the caller.
    pub fn contains_with_edge(&self, t: f64, tol: f64) -> bool {
        let above = if self.lo_open { t > self.lo } else { t >= self.lo - tol };
        let below = if self.hi_open { t < self.hi } else { t <= self.hi + tol };
        above && below
    }

    /// Clamps `t` onto a closed endpoint it slightly overshoots. Points deep
    /// inside (or outside an open endpoint) are returned unchanged.
    pub fn clamp_to_closed(&self, t: f64) -> f64 {
        if !self.lo_open && t < self.lo {
            self.lo
        } else if !self.hi_open && t > self.hi {
            self.hi
        } else {
            t
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_open { "(" } else { "[" };
        let close = if self.hi_open { ")" } else { "]" };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar function together with its domain, optional closed-form first and
/// second derivatives, and an optional closed-form inverse.
#[derive(Clone)]
pub struct ScalarFn {
    tag: String,
    domain: Interval,
    eval: Closure,
    d1: Option<Closure>,
    d2: Option<Closure>,
    inverse: Option<Closure>,
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFn")
            .field("tag", &self.tag)
            .field("domain", &self.domain)
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .finish()
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)
    }
}

impl ScalarFn {
    pub fn from_closure<F>(tag: impl Into<String>, domain: Interval, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarFn {
            tag: tag.into(),
            domain,
            eval: Arc::new(eval),
            d1: None,
            d2: None,
            inverse: None,
        }
    }

    pub fn with_derivatives<F, G, H>(
        tag: impl Into<String>,
        domain: Interval,
        eval: F,
        d1: G,
        d2: H,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarFn {
            tag: tag.into(),
            domain,
            eval: Arc::new(eval),
            d1: Some(Arc::new(d1)),
            d2: Some(Arc::new(d2)),
            inverse: None,
        }
    }

    pub fn with_inverse<F>(mut self, inverse: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn has_derivatives(&self) -> bool {
        self.d1.is_some() && self.d2.is_some()
    }

    /// Evaluates without a domain check. Callers are expected to feed points
    /// from the domain; use [`try_value`](Self::try_value) when unsure.
    pub fn value(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn try_value(&self, t: f64) -> Result<f64> {
        if !self.domain.contains_with_edge(t, DOMAIN_EDGE_TOL) {
            return Err(self.domain_violation(t));
        }
        Ok((self.eval)(self.domain.clamp_to_closed(t)))
    }

    fn domain_violation(&self, t: f64) -> Error {
        Error::DomainViolation {
            function: self.tag.clone(),
            eigenvalue: t,
            lo: self.domain.lo,
            hi: self.domain.hi,
        }
    }

    /// First derivative: closed form when registered, otherwise a central
    /// finite difference with step `FD_STEP * (1 + |t|)` shrunk to stay
    /// inside the domain.
    pub fn d1(&self, t: f64) -> f64 {
        if let Some(d) = &self.d1 {
            return d(t);
        }
        let h = self.fd_step(t, FD_STEP);
        (self.value(t + h) - self.value(t - h)) / (2.0 * h)
    }

    /// Second derivative: closed form when registered, otherwise a central
    /// second difference. The fallback uses a larger step (`1e-4`) because
    /// the second difference divides rounding error by `h^2`.
    pub fn d2(&self, t: f64) -> f64 {
        if let Some(d) = &self.d2 {
            return d(t);
        }
        let h = self.fd_step(t, 1e-4);
        (self.value(t + h) - 2.0 * self.value(t) + self.value(t - h)) / (h * h)
    }

    fn fd_step(&self, t: f64, base: f64) -> f64 {
        let mut h = base * (1.0 + t.abs());
        // Halve until both probe points sit inside the domain.
        for _ in 0..60 {
            if self.domain.contains(t - h) && self.domain.contains(t + h) {
                break;
            }
            h *= 0.5;
        }
        h
    }

    /// Inverts the function at `y`: the registered closed form when present,
    /// otherwise monotone bisection on the stored domain (50 iterations,
    /// bracket width below `1e-13 *` span).
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if let Some(inv) = &self.inverse {
            return Ok(inv(y));
        }
        self.bisect_inverse(y)
    }

    fn bisect_inverse(&self, y: f64) -> Result<f64> {
        // Clip infinite endpoints to a generous working range.
        let mut lo = self.domain.lo.max(-1e8);
        let mut hi = self.domain.hi.min(1e8);
        if self.domain.lo_open {
            lo += 1e-13 * (1.0 + lo.abs());
        }
        if self.domain.hi_open {
            hi -= 1e-13 * (1.0 + hi.abs());
        }
        let f_lo = self.value(lo);
        let f_hi = self.value(hi);
        let increasing = f_hi >= f_lo;
        let (mut a, mut b) = (lo, hi);
        let (ya, yb) = if increasing { (f_lo, f_hi) } else { (f_hi, f_lo) };
        if y < ya - 1e-9 * (1.0 + ya.abs()) || y > yb + 1e-9 * (1.0 + yb.abs()) {
            return Err(Error::Parameter(format!(
                "inverse of {}: target {y} outside range [{ya}, {yb}]",
                self.tag
            )));
        }
        for _ in 0..50 {
            let mid = 0.5 * (a + b);
            let fm = self.value(mid);
            let go_right = if increasing { fm < y } else { fm > y };
            if go_right {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    }

    /// Applies the function to a Hermitian matrix through its spectral
    /// decomposition, rejecting eigenvalues outside the domain.
    pub fn apply(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        let decomp = a.eig()?;
        decomp.map_hermitian(|x| {
            if !self.domain.contains_with_edge(x, DOMAIN_EDGE_TOL) {
                return Err(self.domain_violation(x));
            }
            Ok((self.eval)(self.domain.clamp_to_closed(x)))
        })
    }

    /// Trace of `f(A)`.
    pub fn trace_apply(&self, a: &HermitianMatrix) -> Result<f64> {
        let eigs = a.eigenvalues()?;
        let mut total = 0.0;
        for x in eigs {
            total += self.try_value(x)?;
        }
        Ok(total)
    }
}

fn check_coeffs(coeffs: &[f64], what: &str) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::Parameter(format!("{what} needs at least one coefficient")));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Parameter(format!("{what} coefficients must be finite")));
    }
    Ok(())
}

fn join_coeffs(coeffs: &[f64]) -> String {
    coeffs
        .iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Polynomial `a_0 + a_1 t + ... + a_m t^m` with coefficients listed in
/// ascending degree, on `[0, ∞)`.
pub fn poly(coeffs: &[f64]) -> Result<ScalarFn> {
    check_coeffs(coeffs, "poly")?;
    let c: Vec<f64> = coeffs.to_vec();
    let c1 = c.clone();
    let c2 = c.clone();
    Ok(ScalarFn::with_derivatives(
        format!("poly({})", join_coeffs(coeffs)),
        Interval::nonneg(),
        move |t| horner(&c, t),
        move |t| horner_d1(&c1, t),
        move |t| horner_d2(&c2, t),
    ))
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn horner_d1(c: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..c.len()).rev() {
        acc = acc * t + c[k] * k as f64;
    }
    acc
}

fn horner_d2(c: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for k in (2..c.len()).rev() {
        acc = acc * t + c[k] * (k * (k - 1)) as f64;
    }
    acc
}

/// `a_1 t + a_2 t^{1/2} + ... + a_m t^{1/m}` on `[0, ∞)`: a non-negative
/// combination of the root functions `t^{1/k}`.
pub fn roots(coeffs: &[f64]) -> Result<ScalarFn> {
    check_coeffs(coeffs, "roots")?;
    if coeffs.iter().any(|&c| c < 0.0) {
        return Err(Error::Parameter("roots coefficients must be non-negative".into()));
    }
    let c: Vec<f64> = coeffs.to_vec();
    let c1 = c.clone();
    let c2 = c.clone();
    let term = |c: &[f64], t: f64, order: u32| -> f64 {
        let mut total = 0.0;
        for (idx, &a) in c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let e = 1.0 / (idx as f64 + 1.0);
            total += match order {
                0 => a * t.powf(e),
                1 => a * e * t.powf(e - 1.0),
                _ => a * e * (e - 1.0) * t.powf(e - 2.0),
            };
        }
        total
    };
    Ok(ScalarFn::with_derivatives(
        format!("roots({})", join_coeffs(coeffs)),
        Interval::nonneg(),
        move |t| term(&c, t, 0),
        move |t| term(&c1, t, 1),
        move |t| term(&c2, t, 2),
    ))
}

/// `t + (t - 1)_+` on `[0, ∞)`: convex, piecewise linear, kink at `t = 1`.
pub fn ramp_plus() -> ScalarFn {
    ScalarFn::with_derivatives(
        "ramp_plus",
        Interval::nonneg(),
        |t| t + (t - 1.0).max(0.0),
        |t| {
            if t < 1.0 {
                1.0
            } else if t > 1.0 {
                2.0
            } else {
                1.5
            }
        },
        |_| 0.0,
    )
}

/// `t - (t - 1)_+ / 2` on `[0, ∞)`: concave, piecewise linear, kink at `t = 1`.
pub fn ramp_minus_half() -> ScalarFn {
    ScalarFn::with_derivatives(
        "ramp_minus_half",
        Interval::nonneg(),
        |t| t - 0.5 * (t - 1.0).max(0.0),
        |t| {
            if t < 1.0 {
                1.0
            } else if t > 1.0 {
                0.5
            } else {
                0.75
            }
        },
        |_| 0.0,
    )
}

/// `t^q`. Domain `[0, ∞)` for `q >= 0` (with `0^q = 0` for `q > 0`) and
/// `(0, ∞)` for `q < 0`.
pub fn pow(q: f64) -> Result<ScalarFn> {
    if !q.is_finite() {
        return Err(Error::Parameter("pow exponent must be finite".into()));
    }
    let domain = if q >= 0.0 { Interval::nonneg() } else { Interval::positive() };
    Ok(ScalarFn::with_derivatives(
        format!("pow({q})"),
        domain,
        move |t| t.powf(q),
        move |t| q * t.powf(q - 1.0),
        move |t| q * (q - 1.0) * t.powf(q - 2.0),
    )
    .with_inverse(move |y| y.powf(1.0 / q)))
}

/// Natural logarithm on `(0, ∞)`.
pub fn log() -> ScalarFn {
    ScalarFn::with_derivatives(
        "log",
        Interval::positive(),
        |t| t.ln(),
        |t| 1.0 / t,
        |t| -1.0 / (t * t),
    )
    .with_inverse(|y| y.exp())
}

/// Exponential on the whole line.
pub fn exp() -> ScalarFn {
    ScalarFn::with_derivatives("exp", Interval::all(), |t| t.exp(), |t| t.exp(), |t| t.exp())
        .with_inverse(|y| y.ln())
}

/// Identity on `[0, ∞)`.
pub fn id() -> ScalarFn {
    ScalarFn::with_derivatives("id", Interval::nonneg(), |t| t, |_| 1.0, |_| 0.0)
        .with_inverse(|y| y)
}

/// Square root on `[0, ∞)`.
pub fn sqrt() -> ScalarFn {
    ScalarFn::with_derivatives(
        "sqrt",
        Interval::nonneg(),
        |t| t.sqrt(),
        |t| 0.5 / t.sqrt(),
        |t| -0.25 * t.powf(-1.5),
    )
    .with_inverse(|y| y * y)
}

/// `t + t * min(t, 1) / 2` on `[0, ∞)`: superadditive (its ratio to `t` is
/// non-decreasing) but not convex, because the slope drops from 2 to 3/2
/// across `t = 1`.
pub fn star_kink() -> ScalarFn {
    ScalarFn::with_derivatives(
        "star_kink",
        Interval::nonneg(),
        |t| t + 0.5 * t * t.min(1.0),
        |t| {
            if t < 1.0 {
                1.0 + t
            } else if t > 1.0 {
                1.5
            } else {
                1.75
            }
        },
        |t| if t < 1.0 { 1.0 } else { 0.0 },
    )
}

/// `min(t, 2 - t)` on `[0, 2]`: concave, vanishing at both endpoints, and in
/// particular not monotone.
pub fn tent() -> ScalarFn {
    ScalarFn::with_derivatives(
        "tent",
        Interval::closed(0.0, 2.0),
        |t| t.min(2.0 - t),
        |t| {
            if t < 1.0 {
                1.0
            } else if t > 1.0 {
                -1.0
            } else {
                0.0
            }
        },
        |_| 0.0,
    )
}

/// `min(t, 2)` on `[0, ∞)`: concave and non-decreasing, constant past `t = 2`.
pub fn cap() -> ScalarFn {
    ScalarFn::with_derivatives(
        "cap",
        Interval::nonneg(),
        |t| t.min(2.0),
        |t| {
            if t < 2.0 {
                1.0
            } else if t > 2.0 {
                0.0
            } else {
                0.5
            }
        },
        |_| 0.0,
    )
}

/// `-exp(-t^2 / 2)` on `[1.05, 3]`: increasing with `φ'' < 0` there, and the
/// ratio `φ'/φ''` is strictly concave, so it fails the ratio-convexity test.
pub fn neg_gauss() -> ScalarFn {
    let g = |t: f64| (-0.5 * t * t).exp();
    ScalarFn::with_derivatives(
        "neg_gauss",
        Interval::closed(1.05, 3.0),
        move |t| -g(t),
        move |t| t * g(t),
        move |t| (1.0 - t * t) * g(t),
    )
}

/// `f(t)^q` with chain-rule derivatives when `f` carries closed forms.
pub fn pow_of(inner: &ScalarFn, q: f64) -> Result<ScalarFn> {
    if !q.is_finite() {
        return Err(Error::Parameter("pow_of exponent must be finite".into()));
    }
    let tag = format!("pow_of(q={q}, inner={})", inner.tag());
    let domain = inner.domain();
    let f = inner.clone();
    let base = ScalarFn::from_closure(tag.clone(), domain, move |t| f.value(t).powf(q));
    if !inner.has_derivatives() {
        return Ok(base);
    }
    let f1 = inner.clone();
    let f2 = inner.clone();
    let mut out = base;
    out.d1 = Some(Arc::new(move |t| {
        let v = f1.value(t);
        q * v.powf(q - 1.0) * f1.d1(t)
    }));
    out.d2 = Some(Arc::new(move |t| {
        let v = f2.value(t);
        let d1 = f2.d1(t);
        q * (q - 1.0) * v.powf(q - 2.0) * d1 * d1 + q * v.powf(q - 1.0) * f2.d2(t)
    }));
    Ok(out)
}

/// Pointwise product `f * g` on the intersection of the two domains.
pub fn product(f: &ScalarFn, g: &ScalarFn) -> ScalarFn {
    let df = f.domain();
    let dg = g.domain();
    let lo = df.lo.max(dg.lo);
    let hi = df.hi.min(dg.hi);
    let lo_open = if df.lo > dg.lo {
        df.lo_open
    } else if dg.lo > df.lo {
        dg.lo_open
    } else {
        df.lo_open || dg.lo_open
    };
    let hi_open = if df.hi < dg.hi {
        df.hi_open
    } else if dg.hi < df.hi {
        dg.hi_open
    } else {
        df.hi_open || dg.hi_open
    };
    let tag = format!("product({}, {})", f.tag(), g.tag());
    let domain = Interval::new(lo, hi, lo_open, hi_open);
    let (a, b) = (f.clone(), g.clone());
    let base = ScalarFn::from_closure(tag, domain, move |t| a.value(t) * b.value(t));
    if !(f.has_derivatives() && g.has_derivatives()) {
        return base;
    }
    let (a1, b1) = (f.clone(), g.clone());
    let (a2, b2) = (f.clone(), g.clone());
    let mut out = base;
    out.d1 = Some(Arc::new(move |t| a1.d1(t) * b1.value(t) + a1.value(t) * b1.d1(t)));
    out.d2 = Some(Arc::new(move |t| {
        a2.d2(t) * b2.value(t) + 2.0 * a2.d1(t) * b2.d1(t) + a2.value(t) * b2.d2(t)
    }));
    out
}

/// Pointwise sum `f + g` on the intersection of the two domains.
pub fn sum(f: &ScalarFn, g: &ScalarFn) -> ScalarFn {
    let prod = product(f, g);
    let domain = prod.domain();
    let tag = format!("sum({}, {})", f.tag(), g.tag());
    let (a, b) = (f.clone(), g.clone());
    let base = ScalarFn::from_closure(tag, domain, move |t| a.value(t) + b.value(t));
    if !(f.has_derivatives() && g.has_derivatives()) {
        return base;
    }
    let (a1, b1) = (f.clone(), g.clone());
    let (a2, b2) = (f.clone(), g.clone());
    let mut out = base;
    out.d1 = Some(Arc::new(move |t| a1.d1(t) + b1.d1(t)));
    out.d2 = Some(Arc::new(move |t| a2.d2(t) + b2.d2(t)));
    out
}

/// `φ(-t)` — used to reduce decreasing `φ` to the increasing case.
pub fn reflect(f: &ScalarFn) -> ScalarFn {
    let d = f.domain();
    let domain = Interval::new(-d.hi, -d.lo, d.hi_open, d.lo_open);
    let tag = format!("reflect({})", f.tag());
    let g = f.clone();
    let base = ScalarFn::from_closure(tag, domain, move |t| g.value(-t));
    if !f.has_derivatives() {
        return base;
    }
    let g1 = f.clone();
    let g2 = f.clone();
    let mut out = base;
    out.d1 = Some(Arc::new(move |t| -g1.d1(-t)));
    out.d2 = Some(Arc::new(move |t| g2.d2(-t)));
    out
}
