//! Symmetric norms and symmetric anti-norms as gauges on ordered singular
//! values, plus the combinators (q-lift, means, weighted forms) that build
//! new anti-norms from old.

pub mod parse;

use std::fmt;

use crate::error::{Error, Result};
use crate::spectral::eig::singular_values;
use crate::spectral::hermitian::HermitianMatrix;
use crate::spectral::matrix::ComplexMatrix;

/// Threshold under which the smallest singular value counts as zero for
/// the negative-exponent Schatten functionals.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// A unitarily invariant norm, described by its gauge on decreasing
/// singular values.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// Sum of the k largest singular values.
    KyFan(usize),
    /// (Σ μ^p)^{1/p}, p ≥ 1.
    Schatten(f64),
    /// Largest singular value.
    OperatorNorm,
}

impl NormSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            NormSpec::KyFan(k) => {
                if *k == 0 || *k > n {
                    return Err(Error::Parameter(format!(
                        "ky_fan order k={k} outside 1..={n}"
                    )));
                }
            }
            NormSpec::Schatten(p) => {
                if !p.is_finite() || *p < 1.0 {
                    return Err(Error::Parameter(format!("schatten exponent p={p} < 1")));
                }
            }
            NormSpec::OperatorNorm => {}
        }
        Ok(())
    }

    /// Gauge on singular values sorted decreasing.
    pub fn gauge(&self, mu: &[f64]) -> Result<f64> {
        self.validate(mu.len())?;
        Ok(match self {
            NormSpec::KyFan(k) => mu[..*k].iter().sum(),
            NormSpec::Schatten(p) => mu.iter().map(|&x| x.powf(*p)).sum::<f64>().powf(1.0 / p),
            NormSpec::OperatorNorm => mu.first().copied().unwrap_or(0.0),
        })
    }

    /// Value on a general matrix, via its singular values.
    pub fn eval_matrix(&self, m: &ComplexMatrix) -> Result<f64> {
        self.gauge(&singular_values(m)?)
    }

    /// Value on a Hermitian matrix: gauge of |eigenvalues| (exact, no
    /// squaring through M*M).
    pub fn eval(&self, a: &HermitianMatrix) -> Result<f64> {
        self.gauge(&abs_spectrum(a)?)
    }
}

/// A symmetric anti-norm, described by its anti-gauge on decreasing
/// singular values. Combinators nest; evaluation is recursive.
#[derive(Debug, Clone, PartialEq)]
pub enum AntiNormSpec {
    /// Sum of all singular values (trace on psd matrices).
    Trace,
    /// Sum of the k smallest singular values.
    KyFanAnti(usize),
    /// (Σ μ^q)^{1/q}, q ∈ (0, 1].
    SchattenAnti(f64),
    /// (Σ μ^r)^{1/r}, r < 0; zero on (numerically) singular matrices.
    SchattenNeg(f64),
    /// det^{1/n} = (∏ μ)^{1/n}.
    Minkowski,
    /// (∏ of the k smallest μ)^{1/k}.
    Delta(usize),
    /// Σ w_k μ_k with non-decreasing non-negative weights against
    /// decreasing singular values.
    WeightedSum(Vec<f64>),
    /// (∏ μ_k^{w_k})^{1/Σw}, same weight convention.
    WeightedGeo(Vec<f64>),
    /// A ↦ inner(A^q)^{1/q}, q ∈ (0, 1).
    QLift { q: f64, inner: Box<AntiNormSpec> },
    /// Pointwise √(a·b).
    GeoMean(Box<AntiNormSpec>, Box<AntiNormSpec>),
    /// Pointwise 2(a⁻¹ + b⁻¹)⁻¹, zero if either factor vanishes.
    HarmonicMean(Box<AntiNormSpec>, Box<AntiNormSpec>),
    /// Pointwise a + b.
    Sum(Box<AntiNormSpec>, Box<AntiNormSpec>),
}

impl AntiNormSpec {
    pub fn q_lift(inner: AntiNormSpec, q: f64) -> Result<AntiNormSpec> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Parameter(format!("q-lift exponent q={q} outside (0,1)")));
        }
        Ok(AntiNormSpec::QLift {
            q,
            inner: Box::new(inner),
        })
    }

    pub fn geo_mean(a: AntiNormSpec, b: AntiNormSpec) -> AntiNormSpec {
        AntiNormSpec::GeoMean(Box::new(a), Box::new(b))
    }

    pub fn harmonic_mean(a: AntiNormSpec, b: AntiNormSpec) -> AntiNormSpec {
        AntiNormSpec::HarmonicMean(Box::new(a), Box::new(b))
    }

    pub fn sum(a: AntiNormSpec, b: AntiNormSpec) -> AntiNormSpec {
        AntiNormSpec::Sum(Box::new(a), Box::new(b))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            AntiNormSpec::Trace | AntiNormSpec::Minkowski => {}
            AntiNormSpec::KyFanAnti(k) | AntiNormSpec::Delta(k) => {
                if *k == 0 || *k > n {
                    return Err(Error::Parameter(format!(
                        "anti-norm order k={k} outside 1..={n}"
                    )));
                }
            }
            AntiNormSpec::SchattenAnti(q) => {
                if !(q.is_finite() && *q > 0.0 && *q <= 1.0) {
                    return Err(Error::Parameter(format!(
                        "schatten_anti exponent q={q} outside (0,1]"
                    )));
                }
            }
            AntiNormSpec::SchattenNeg(r) => {
                if !(r.is_finite() && *r < 0.0) {
                    return Err(Error::Parameter(format!(
                        "schatten_neg exponent r={r} must be negative"
                    )));
                }
            }
            AntiNormSpec::WeightedSum(w) | AntiNormSpec::WeightedGeo(w) => {
                if w.len() != n {
                    return Err(Error::Dimension {
                        context: "weight vector length",
                        got: w.len(),
                        expected: n,
                    });
                }
                if w.first().map_or(true, |&x| x < 0.0) {
                    return Err(Error::Parameter("weights must be non-negative".into()));
                }
                if w.windows(2).any(|p| p[0] > p[1]) {
                    return Err(Error::Parameter(
                        "weights must be non-decreasing".into(),
                    ));
                }
                if matches!(self, AntiNormSpec::WeightedGeo(_))
                    && w.iter().sum::<f64>() <= 0.0
                {
                    return Err(Error::Parameter(
                        "weighted_geo needs a positive weight sum".into(),
                    ));
                }
            }
            AntiNormSpec::QLift { q, inner } => {
                if !(q.is_finite() && *q > 0.0 && *q < 1.0) {
                    return Err(Error::Parameter(format!(
                        "q-lift exponent q={q} outside (0,1)"
                    )));
                }
                inner.validate(n)?;
            }
            AntiNormSpec::GeoMean(a, b)
            | AntiNormSpec::HarmonicMean(a, b)
            | AntiNormSpec::Sum(a, b) => {
                a.validate(n)?;
                b.validate(n)?;
            }
        }
        Ok(())
    }

    /// Anti-gauge on singular values sorted decreasing.
    pub fn anti_gauge(&self, mu: &[f64]) -> Result<f64> {
        self.validate(mu.len())?;
        let n = mu.len();
        Ok(match self {
            AntiNormSpec::Trace => mu.iter().sum(),
            AntiNormSpec::KyFanAnti(k) => mu[n - k..].iter().sum(),
            AntiNormSpec::SchattenAnti(q) => {
                mu.iter().map(|&x| x.powf(*q)).sum::<f64>().powf(1.0 / q)
            }
            AntiNormSpec::SchattenNeg(r) => {
                let mu1 = mu.first().copied().unwrap_or(0.0);
                let mun = mu.last().copied().unwrap_or(0.0);
                if mu1 == 0.0 || mun <= SINGULARITY_THRESHOLD * mu1 {
                    0.0
                } else {
                    mu.iter().map(|&x| x.powf(*r)).sum::<f64>().powf(1.0 / r)
                }
            }
            AntiNormSpec::Minkowski => {
                let inv = 1.0 / n as f64;
                mu.iter().map(|&x| x.powf(inv)).product()
            }
            AntiNormSpec::Delta(k) => {
                let inv = 1.0 / *k as f64;
                mu[n - k..].iter().map(|&x| x.powf(inv)).product()
            }
            AntiNormSpec::WeightedSum(w) => {
                w.iter().zip(mu.iter()).map(|(&wk, &mk)| wk * mk).sum()
            }
            AntiNormSpec::WeightedGeo(w) => {
                let total: f64 = w.iter().sum();
                w.iter()
                    .zip(mu.iter())
                    .map(|(&wk, &mk)| mk.powf(wk / total))
                    .product()
            }
            AntiNormSpec::QLift { q, inner } => {
                let lifted: Vec<f64> = mu.iter().map(|&x| x.powf(*q)).collect();
                inner.anti_gauge(&lifted)?.powf(1.0 / q)
            }
            AntiNormSpec::GeoMean(a, b) => {
                (a.anti_gauge(mu)? * b.anti_gauge(mu)?).sqrt()
            }
            AntiNormSpec::HarmonicMean(a, b) => {
                let x = a.anti_gauge(mu)?;
                let y = b.anti_gauge(mu)?;
                if x == 0.0 || y == 0.0 {
                    0.0
                } else {
                    2.0 / (1.0 / x + 1.0 / y)
                }
            }
            AntiNormSpec::Sum(a, b) => a.anti_gauge(mu)? + b.anti_gauge(mu)?,
        })
    }

    /// Value on a general matrix: the anti-norm of |M|.
    pub fn eval_matrix(&self, m: &ComplexMatrix) -> Result<f64> {
        self.anti_gauge(&singular_values(m)?)
    }

    /// Value on a Hermitian matrix via |eigenvalues| (psd matrices hit
    /// this path with their plain spectrum, up to round-off clipping).
    pub fn eval(&self, a: &HermitianMatrix) -> Result<f64> {
        self.anti_gauge(&abs_spectrum(a)?)
    }

    /// Whether eval(A) = 0 forces A = 0 at dimension n.
    pub fn is_regular(&self, n: usize) -> bool {
        match self {
            AntiNormSpec::Trace | AntiNormSpec::SchattenAnti(_) => true,
            AntiNormSpec::KyFanAnti(k) => *k == n,
            AntiNormSpec::SchattenNeg(_) => false,
            AntiNormSpec::Minkowski | AntiNormSpec::Delta(_) => n == 1,
            AntiNormSpec::WeightedSum(w) => w.first().map_or(false, |&w1| w1 > 0.0),
            AntiNormSpec::WeightedGeo(_) => n == 1,
            AntiNormSpec::QLift { inner, .. } => inner.is_regular(n),
            AntiNormSpec::GeoMean(a, b) | AntiNormSpec::HarmonicMean(a, b) => {
                a.is_regular(n) && b.is_regular(n)
            }
            AntiNormSpec::Sum(a, b) => a.is_regular(n) || b.is_regular(n),
        }
    }
}

/// Either side of the duality: a symmetric norm or a symmetric anti-norm.
/// Lets code that only needs "some gauge on singular values" take both.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeSpec {
    Norm(NormSpec),
    Anti(AntiNormSpec),
}

impl GaugeSpec {
    pub fn is_norm(&self) -> bool {
        matches!(self, GaugeSpec::Norm(_))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            GaugeSpec::Norm(s) => s.validate(n),
            GaugeSpec::Anti(s) => s.validate(n),
        }
    }

    /// Gauge value on decreasing non-negative `mu`.
    pub fn gauge(&self, mu: &[f64]) -> Result<f64> {
        match self {
            GaugeSpec::Norm(s) => s.gauge(mu),
            GaugeSpec::Anti(s) => s.anti_gauge(mu),
        }
    }

    pub fn eval(&self, a: &HermitianMatrix) -> Result<f64> {
        match self {
            GaugeSpec::Norm(s) => s.eval(a),
            GaugeSpec::Anti(s) => s.eval(a),
        }
    }

    pub fn eval_matrix(&self, m: &ComplexMatrix) -> Result<f64> {
        match self {
            GaugeSpec::Norm(s) => s.eval_matrix(m),
            GaugeSpec::Anti(s) => s.eval_matrix(m),
        }
    }
}

impl fmt::Display for GaugeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeSpec::Norm(s) => write!(f, "{s}"),
            GaugeSpec::Anti(s) => write!(f, "{s}"),
        }
    }
}

impl std::str::FromStr for GaugeSpec {
    type Err = Error;

    /// Tries the anti-norm grammar first, then the norm grammar.
    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<AntiNormSpec>() {
            Ok(a) => Ok(GaugeSpec::Anti(a)),
            Err(_) => Ok(GaugeSpec::Norm(s.parse::<NormSpec>()?)),
        }
    }
}

/// |eigenvalues| sorted decreasing — the singular values of a Hermitian
/// matrix, without squaring through M*M.
fn abs_spectrum(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let mut mu: Vec<f64> = a.eigenvalues()?.into_iter().map(f64::abs).collect();
    mu.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(mu)
}

/// Norm of the top-n_wedge corner: the gauge applied to the n_wedge
/// largest singular values of M.
pub fn wedge_norm(spec: &NormSpec, n_wedge: usize, m: &ComplexMatrix) -> Result<f64> {
    let mu = singular_values(m)?;
    if n_wedge > mu.len() {
        return Err(Error::Dimension {
            context: "wedge order",
            got: n_wedge,
            expected: mu.len(),
        });
    }
    spec.gauge(&mu[..n_wedge])
}

/// Same corner norm for a Hermitian matrix, via |eigenvalues|.
pub fn wedge_norm_hermitian(
    spec: &NormSpec,
    n_wedge: usize,
    a: &HermitianMatrix,
) -> Result<f64> {
    let mu = abs_spectrum(a)?;
    if n_wedge > mu.len() {
        return Err(Error::Dimension {
            context: "wedge order",
            got: n_wedge,
            expected: mu.len(),
        });
    }
    spec.gauge(&mu[..n_wedge])
}

/// A named anti-norm in the working catalog.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: AntiNormSpec,
}

/// The anti-norm catalog at dimension n: every primitive kind plus
/// combinator nestings to depth 3.
pub fn catalog(n: usize) -> Vec<CatalogEntry> {
    use AntiNormSpec::*;
    assert!(n >= 1);
    let half = (n + 1) / 2;
    let entry = |spec: AntiNormSpec| CatalogEntry {
        name: parse::display_antinorm(&spec),
        spec,
    };
    let mut specs = vec![
        Trace,
        KyFanAnti(1),
        KyFanAnti(half),
        KyFanAnti(n),
        SchattenAnti(0.3),
        SchattenAnti(0.5),
        SchattenAnti(1.0),
        SchattenNeg(-0.5),
        SchattenNeg(-1.0),
        Minkowski,
        Delta(1),
        Delta(n),
        WeightedSum((0..n).map(|k| k as f64).collect()),
        WeightedGeo((1..=n).map(|k| k as f64).collect()),
        AntiNormSpec::q_lift(KyFanAnti(1), 0.5).unwrap(),
        AntiNormSpec::q_lift(Minkowski, 0.5).unwrap(),
        AntiNormSpec::geo_mean(Trace, Minkowski),
        AntiNormSpec::harmonic_mean(Trace, Minkowski),
        AntiNormSpec::sum(KyFanAnti(1), Minkowski),
        AntiNormSpec::q_lift(AntiNormSpec::geo_mean(Trace, Minkowski), 0.5).unwrap(),
        AntiNormSpec::harmonic_mean(
            SchattenAnti(0.5),
            AntiNormSpec::sum(Trace, Minkowski),
        ),
    ];
    specs.dedup();
    specs.into_iter().map(entry).collect()
}

/// All Ky Fan norms at dimension n.
pub fn ky_fan_norms(n: usize) -> Vec<NormSpec> {
    (1..=n).map(NormSpec::KyFan).collect()
}

/// The norm side of the working catalog: all Ky Fan norms plus Schatten
/// p ∈ {1, 2, 3} (the operator norm is ky_fan(1)).
pub fn norm_catalog(n: usize) -> Vec<NormSpec> {
    let mut v = ky_fan_norms(n);
    v.extend([1.0, 2.0, 3.0].map(NormSpec::Schatten));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::{random_psd, random_unitary, SpectrumLaw};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_mu(values: &[f64]) -> Vec<f64> {
        let mut v = values.to_vec();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    #[test]
    fn norm_gauge_examples() {
        let mu = diag_mu(&[3.0, 2.0, 1.0]);
        assert_eq!(NormSpec::KyFan(2).gauge(&mu).unwrap(), 5.0);
        let mu2 = diag_mu(&[3.0, 4.0]);
        assert!((NormSpec::Schatten(2.0).gauge(&mu2).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(NormSpec::OperatorNorm.gauge(&mu).unwrap(), 3.0);
        assert!(NormSpec::KyFan(4).gauge(&mu).is_err());
        assert!(NormSpec::Schatten(0.5).gauge(&mu).is_err());
    }

    #[test]
    fn schatten_one_equals_trace_of_abs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_psd(4, &SpectrumLaw::Uniform01, &mut rng).unwrap();
        let lhs = NormSpec::Schatten(1.0).eval(&a).unwrap();
        assert!((lhs - a.trace()).abs() < 1e-9 * (1.0 + lhs));
    }

    #[test]
    fn antinorm_gauge_examples() {
        let mu = diag_mu(&[3.0, 2.0, 1.0]);
        assert_eq!(AntiNormSpec::KyFanAnti(2).anti_gauge(&mu).unwrap(), 3.0);
        let mu41 = diag_mu(&[4.0, 1.0]);
        assert!(
            (AntiNormSpec::SchattenAnti(0.5).anti_gauge(&mu41).unwrap() - 9.0).abs() < 1e-12
        );
        assert!((AntiNormSpec::Minkowski.anti_gauge(&mu41).unwrap() - 2.0).abs() < 1e-12);
        let ones = vec![1.0; 3];
        assert!(
            (AntiNormSpec::SchattenNeg(-1.0).anti_gauge(&ones).unwrap() - 1.0 / 3.0).abs()
                < 1e-12
        );
        assert_eq!(
            AntiNormSpec::SchattenNeg(-1.0)
                .anti_gauge(&diag_mu(&[1.0, 0.0]))
                .unwrap(),
            0.0
        );
        assert!(
            (AntiNormSpec::Delta(2).anti_gauge(&mu).unwrap() - 2.0_f64.sqrt()).abs() < 1e-12
        );
    }

    #[test]
    fn minkowski_is_schatten_limit() {
        // det^{1/n} = lim_{q→0} n^{-1/q} (Σ μ^q)^{1/q}; at q = 1e-3 the
        // two factors overflow/underflow separately, so the product is
        // evaluated in log space.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let a = random_psd(4, &SpectrumLaw::Uniform01, &mut rng).unwrap();
            let mink = AntiNormSpec::Minkowski.eval(&a).unwrap();
            let q = 1e-3;
            let mu = a.psd_eigenvalues().unwrap();
            let power_sum: f64 = mu.iter().map(|&x| x.powf(q)).sum();
            let approx = ((power_sum.ln() - (4.0_f64).ln()) / q).exp();
            assert!(
                (mink - approx).abs() <= 1e-2 * (mink.abs() + approx.abs()),
                "minkowski {mink} vs schatten limit {approx}"
            );
        }
    }

    #[test]
    fn qlift_of_trace_is_schatten_anti() {
        let lifted = AntiNormSpec::q_lift(AntiNormSpec::Trace, 0.4).unwrap();
        let mu = diag_mu(&[2.5, 0.7]);
        let direct = AntiNormSpec::SchattenAnti(0.4).anti_gauge(&mu).unwrap();
        assert!((lifted.anti_gauge(&mu).unwrap() - direct).abs() < 1e-12);
        // On the identity: trace lift gives n^{1/q}.
        let ones = vec![1.0; 3];
        assert!(
            (lifted.anti_gauge(&ones).unwrap() - 3.0_f64.powf(1.0 / 0.4)).abs() < 1e-9
        );
    }

    #[test]
    fn qlift_of_minkowski_is_minkowski() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_psd(3, &SpectrumLaw::Uniform01, &mut rng).unwrap();
        let lifted = AntiNormSpec::q_lift(AntiNormSpec::Minkowski, 0.5).unwrap();
        let x = lifted.eval(&a).unwrap();
        let y = AntiNormSpec::Minkowski.eval(&a).unwrap();
        assert!((x - y).abs() < 1e-9 * (1.0 + y));
    }

    #[test]
    fn combine_examples() {
        // Harmonic mean of trace and minkowski on I_2: 2(1/2 + 1/1)^-1 = 4/3.
        let ones = vec![1.0; 2];
        let h = AntiNormSpec::harmonic_mean(AntiNormSpec::Trace, AntiNormSpec::Minkowski);
        assert!((h.anti_gauge(&ones).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        // geo_mean(x, x) is x pointwise.
        let g = AntiNormSpec::geo_mean(AntiNormSpec::Trace, AntiNormSpec::Trace);
        let mu = diag_mu(&[2.0, 0.5]);
        assert!(
            (g.anti_gauge(&mu).unwrap() - AntiNormSpec::Trace.anti_gauge(&mu).unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn weighted_forms_validate_and_evaluate() {
        let mu = diag_mu(&[3.0, 2.0, 1.0]);
        let ws = AntiNormSpec::WeightedSum(vec![0.0, 1.0, 2.0]);
        // 0·3 + 1·2 + 2·1 = 4.
        assert_eq!(ws.anti_gauge(&mu).unwrap(), 4.0);
        let wg = AntiNormSpec::WeightedGeo(vec![1.0, 1.0, 1.0]);
        let mink = AntiNormSpec::Minkowski.anti_gauge(&mu).unwrap();
        assert!((wg.anti_gauge(&mu).unwrap() - mink).abs() < 1e-12);
        // Zero weight means the factor is exactly 1, even at mu = 0: the
        // zero matrix evaluates to 0 (from the positive weights), not NaN.
        let wg0 = AntiNormSpec::WeightedGeo(vec![0.0, 1.0]);
        assert_eq!(wg0.anti_gauge(&[2.0, 1.0]).unwrap(), 1.0);
        assert_eq!(wg0.anti_gauge(&[0.0, 0.0]).unwrap(), 0.0);
        let mu0 = diag_mu(&[2.0, 0.0]);
        assert_eq!(wg0.anti_gauge(&mu0).unwrap(), 0.0);
        assert!(AntiNormSpec::WeightedSum(vec![2.0, 1.0]).anti_gauge(&mu0).is_err());
        assert!(AntiNormSpec::WeightedSum(vec![-1.0, 1.0]).anti_gauge(&mu0).is_err());
    }

    #[test]
    fn parameter_errors() {
        let mu = vec![1.0, 0.5];
        assert!(AntiNormSpec::SchattenAnti(1.5).anti_gauge(&mu).is_err());
        assert!(AntiNormSpec::SchattenNeg(0.5).anti_gauge(&mu).is_err());
        assert!(AntiNormSpec::KyFanAnti(0).anti_gauge(&mu).is_err());
        assert!(AntiNormSpec::Delta(3).anti_gauge(&mu).is_err());
        assert!(AntiNormSpec::q_lift(AntiNormSpec::Trace, 1.0).is_err());
    }

    #[test]
    fn trace_norm_equals_full_ky_fan_anti_on_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let a = random_psd(5, &SpectrumLaw::Uniform01, &mut rng).unwrap();
            let norm = NormSpec::Schatten(1.0).eval(&a).unwrap();
            let anti = AntiNormSpec::KyFanAnti(5).eval(&a).unwrap();
            assert!((norm - anti).abs() < 1e-9 * (1.0 + norm));
        }
    }

    #[test]
    fn permutation_invariance_of_anti_gauge() {
        // All permutations of a 4-entry diagonal give the same value.
        let base = [2.0, 0.7, 1.3, 0.1];
        let specs = catalog(4);
        let reference: Vec<f64> = specs
            .iter()
            .map(|e| e.spec.anti_gauge(&diag_mu(&base)).unwrap())
            .collect();
        let mut perm = base;
        // Walk a few permutations via rotations and swaps.
        for step in 0..8 {
            perm.rotate_left(1);
            if step % 2 == 0 {
                perm.swap(0, 2);
            }
            let a = HermitianMatrix::diag(&perm);
            for (e, &want) in specs.iter().zip(&reference) {
                let got = e.spec.eval(&a).unwrap();
                assert!(
                    (got - want).abs() <= 1e-9 * (1.0 + want.abs()),
                    "{} changed under permutation: {got} vs {want}",
                    e.name
                );
            }
        }
    }

    #[test]
    fn unitary_invariance_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let a = random_psd(4, &SpectrumLaw::Uniform01, &mut rng).unwrap();
        let u = random_unitary(4, &mut rng);
        let conj = a.conjugate_by(&u);
        for e in catalog(4) {
            let x = e.spec.eval(&a).unwrap();
            let y = e.spec.eval(&conj).unwrap();
            assert!(
                (x - y).abs() <= 1e-9 * (1.0 + x.abs()),
                "{} not unitarily invariant",
                e.name
            );
        }
    }

    #[test]
    fn concavity_of_anti_gauge_on_diagonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        use rand::Rng;
        for e in catalog(4) {
            for _ in 0..200 {
                let a: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 2.0).collect();
                let b: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 2.0).collect();
                let t: f64 = rng.gen();
                let mix: Vec<f64> = a
                    .iter()
                    .zip(&b)
                    .map(|(&x, &y)| t * x + (1.0 - t) * y)
                    .collect();
                let fa = e.spec.eval(&HermitianMatrix::diag(&a)).unwrap();
                let fb = e.spec.eval(&HermitianMatrix::diag(&b)).unwrap();
                let fm = e.spec.eval(&HermitianMatrix::diag(&mix)).unwrap();
                let slack = 1e-9 * (1.0 + fa.abs() + fb.abs());
                assert!(
                    fm >= t * fa + (1.0 - t) * fb - slack,
                    "{} not concave on diagonals",
                    e.name
                );
            }
        }
    }

    #[test]
    fn regularity_flags_match_behavior() {
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        // Candidate vanishing points for the non-regular specs.
        let rank_one = HermitianMatrix::diag(&[1.0, 0.0, 0.0, 0.0]);
        let corank_one = HermitianMatrix::diag(&[1.0, 1.0, 1.0, 0.0]);
        for e in catalog(n) {
            if e.spec.is_regular(n) {
                for _ in 0..50 {
                    let a = random_psd(n, &SpectrumLaw::Uniform01, &mut rng).unwrap();
                    if a.frobenius_norm() > 1e-10 {
                        assert!(
                            e.spec.eval(&a).unwrap() > 0.0,
                            "{} claimed regular but vanished",
                            e.name
                        );
                    }
                }
            } else {
                let v1 = e.spec.eval(&rank_one).unwrap();
                let v2 = e.spec.eval(&corank_one).unwrap();
                assert!(
                    v1.min(v2) <= 1e-12,
                    "{} claimed non-regular but positive on both witnesses ({v1}, {v2})",
                    e.name
                );
            }
        }
    }

    #[test]
    fn wedge_norm_examples() {
        let m = ComplexMatrix::diag(&[5.0, 3.0, 1.0]);
        assert_eq!(wedge_norm(&NormSpec::Schatten(1.0), 2, &m).unwrap(), 8.0);
        assert_eq!(wedge_norm(&NormSpec::KyFan(1), 3, &m).unwrap(), 5.0);
        assert!(wedge_norm(&NormSpec::KyFan(1), 4, &m).is_err());
        // n_wedge = dim is the plain norm of |M|.
        let full = wedge_norm(&NormSpec::Schatten(2.0), 3, &m).unwrap();
        assert!((full - NormSpec::Schatten(2.0).eval_matrix(&m).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn catalog_has_depth_three_and_enough_entries() {
        let entries = catalog(4);
        assert!(entries.len() >= 12, "catalog too small: {}", entries.len());
        fn depth(s: &AntiNormSpec) -> usize {
            match s {
                AntiNormSpec::QLift { inner, .. } => 1 + depth(inner),
                AntiNormSpec::GeoMean(a, b)
                | AntiNormSpec::HarmonicMean(a, b)
                | AntiNormSpec::Sum(a, b) => 1 + depth(a).max(depth(b)),
                _ => 1,
            }
        }
        assert!(entries.iter().any(|e| depth(&e.spec) == 3));
        assert!(entries.iter().all(|e| depth(&e.spec) <= 3));
        // Names are unique.
        let mut names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), entries.len());
    }

    #[test]
    fn homogeneity_across_catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let a = random_psd(4, &SpectrumLaw::Uniform01, &mut rng).unwrap();
        for e in catalog(4) {
            let x = e.spec.eval(&a).unwrap();
            let y = e.spec.eval(&a.scale(3.5)).unwrap();
            assert!(
                (y - 3.5 * x).abs() <= 1e-9 * (1.0 + y.abs()),
                "{} not homogeneous",
                e.name
            );
        }
    }

    #[test]
    fn superadditivity_across_catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for e in catalog(3) {
            for _ in 0..100 {
                let a = random_psd(3, &SpectrumLaw::Uniform01, &mut rng).unwrap();
                let b = random_psd(3, &SpectrumLaw::Uniform01, &mut rng).unwrap();
                let s = e.spec.eval(&a.add(&b)).unwrap();
                let x = e.spec.eval(&a).unwrap();
                let y = e.spec.eval(&b).unwrap();
                assert!(
                    s >= x + y - 1e-9 * (s.abs() + x.abs() + y.abs() + 1.0),
                    "{} not superadditive: {s} < {x} + {y}",
                    e.name
                );
            }
        }
    }
}
