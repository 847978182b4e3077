//! The check catalog: every inequality the library covers as a named,
//! hypothesis-gated, randomized check, plus counterexample searches for the
//! known and conjectured failure modes.
//!
//! Conventions shared by every entry:
//!
//! - Margins are normalized slack: `(correct side − other side) / (1 + |lhs| +
//!   |rhs|)`. Positive means the inequality held with room; `worst_margin <
//!   -tol_rel` is a genuine violation and fails the check.
//! - Scalar-function hypotheses are certified once per binding by the grid
//!   predicates before any matrix trial runs; the certificates are embedded in
//!   the report. A binding that fails its gates contributes no trials. If
//!   every binding is gated out the whole check reports `hypotheses-not-met`
//!   and makes no pass/fail claim.
//! - Per-trial randomness is derived as `trial_seed(seed, check_id, dim,
//!   trial)`, so results are independent of execution order and thread count,
//!   and a report is reproducible from its `(check_id, config)` alone.
//! - The `cex_*` / `open_*` entries are searches, not checks. Their
//!   `worst_margin` is the most violating margin of the *underlying*
//!   inequality encountered. For `cex_*` targets a violation is the expected
//!   outcome, so the verdict is `pass` exactly when one is found with margin
//!   beyond `10·tol_rel`. For `open_*` targets the verdict is `pass` when the
//!   search completes, whatever it finds; the notes say what happened.

pub mod checks;
pub mod search;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::ScalarFn;
use crate::norms::{AntiNormSpec, GaugeSpec, NormSpec};
use crate::report::CheckReport;
use crate::spectral::random::SpectrumLaw;

/// Default seed, fixed so published transcripts reproduce.
pub const DEFAULT_SEED: u64 = 0xA17190;
/// Default dimension sweep.
pub const DEFAULT_DIMS: &[usize] = &[2, 3, 4, 6, 8];
/// Default trials per dimension.
pub const DEFAULT_TRIALS: u64 = 1000;
/// Default sample budget for the search targets.
pub const DEFAULT_BUDGET: u64 = 100_000;
/// Default relative tolerance.
pub const DEFAULT_TOL_REL: f64 = 1e-9;

/// Shared configuration for checks and searches. Empty `specs` / `functions`
/// mean "use the per-check defaults"; overrides are parsed with the same
/// grammars the CLI documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckConfig {
    pub dims: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub tol_rel: f64,
    pub spectrum: SpectrumLaw,
    /// Gauge overrides (norm / anti-norm grammar).
    pub specs: Vec<String>,
    /// Function-binding overrides (scalar-function grammar).
    pub functions: Vec<String>,
    /// Exponent overrides for the q-side (0 < q < 1), p-side (p > 1) and the
    /// Schatten r parameter (r < 0 or r in (0, 1]).
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub r: Option<f64>,
    /// Block partition override for the block checks; both or neither.
    pub block_n: Option<usize>,
    pub block_m: Option<usize>,
    /// Sample budget for the search targets.
    pub budget: u64,
    /// Worker threads for `run_suite`; parallelism is across check ids.
    pub threads: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            dims: DEFAULT_DIMS.to_vec(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            tol_rel: DEFAULT_TOL_REL,
            spectrum: SpectrumLaw::Uniform01,
            specs: Vec::new(),
            functions: Vec::new(),
            q: None,
            p: None,
            r: None,
            block_n: None,
            block_m: None,
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::Parameter("config needs at least one dimension".into()));
        }
        if let Some(&bad) = self.dims.iter().find(|&&d| d == 0) {
            return Err(Error::Parameter(format!("dimension {bad} is not positive")));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("config needs trials >= 1".into()));
        }
        if !(self.tol_rel > 0.0) || !self.tol_rel.is_finite() {
            return Err(Error::Parameter(format!(
                "tolerance {} must be a positive real",
                self.tol_rel
            )));
        }
        if self.budget == 0 {
            return Err(Error::Parameter("search budget must be >= 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::Parameter("thread count must be >= 1".into()));
        }
        if let Some(q) = self.q {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::Parameter(format!("q = {q} must lie in (0, 1)")));
            }
        }
        if let Some(p) = self.p {
            if !(p > 1.0) || !p.is_finite() {
                return Err(Error::Parameter(format!("p = {p} must exceed 1")));
            }
        }
        if let Some(r) = self.r {
            let ok = (r < 0.0 && r.is_finite()) || (r > 0.0 && r <= 1.0);
            if !ok {
                return Err(Error::Parameter(format!(
                    "r = {r} must be negative or lie in (0, 1]"
                )));
            }
        }
        match (self.block_n, self.block_m) {
            (None, None) => {}
            (Some(n), Some(m)) => {
                if n == 0 || m == 0 {
                    return Err(Error::Parameter("block sizes must be >= 1".into()));
                }
            }
            _ => {
                return Err(Error::Parameter(
                    "block partition override needs both block_n and block_m".into(),
                ))
            }
        }
        self.parsed_specs()?;
        self.parsed_functions()?;
        Ok(())
    }

    /// The gauge overrides, parsed; empty when none were given.
    pub fn parsed_specs(&self) -> Result<Vec<GaugeSpec>> {
        self.specs.iter().map(|s| GaugeSpec::from_str(s)).collect()
    }

    /// The function overrides, parsed; empty when none were given.
    pub fn parsed_functions(&self) -> Result<Vec<ScalarFn>> {
        self.functions.iter().map(|s| ScalarFn::from_str(s)).collect()
    }
}

/// FNV-1a over the seed, check id, dimension and trial index: cheap, stable
/// across platforms, and good enough to decorrelate trial streams.
pub fn trial_seed(seed: u64, check_id: &str, dim: usize, trial: u64) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    let mut h = OFFSET;
    h = fnv1a(h, &seed.to_le_bytes());
    h = fnv1a(h, check_id.as_bytes());
    h = fnv1a(h, &(dim as u64).to_le_bytes());
    h = fnv1a(h, &trial.to_le_bytes());
    h
}

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Whether an entry runs randomized trials of an inequality or searches for a
/// violating instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Check,
    Search,
}

/// One catalog entry: stable id, kind, and a one-line statement of what is
/// being tested.
#[derive(Debug, Clone, Copy)]
pub struct CheckEntry {
    pub id: &'static str,
    pub kind: CheckKind,
    pub anchor: &'static str,
}

/// The full catalog. Ids are stable; `run_check` accepts exactly these.
pub const REGISTRY: &[CheckEntry] = &[
    CheckEntry {
        id: "rotfeld_trace",
        kind: CheckKind::Check,
        anchor: "Tr f(A+B) <= Tr f(A) + Tr f(B) for concave non-negative f on psd pairs",
    },
    CheckEntry {
        id: "rotfeld_norm",
        kind: CheckKind::Check,
        anchor: "||f(A+B)|| <= ||f(A)|| + ||f(B)|| for every symmetric norm, f concave non-negative",
    },
    CheckEntry {
        id: "lee_block",
        kind: CheckKind::Check,
        anchor: "||f(M)|| <= ||f(A)(+)0|| + ||f(B)(+)0|| for psd block M = [[A,X],[X*,B]], f concave non-negative",
    },
    CheckEntry {
        id: "fisher",
        kind: CheckKind::Check,
        anchor: "det M <= det A * det B for positive definite block M (log-det form)",
    },
    CheckEntry {
        id: "minkowski",
        kind: CheckKind::Check,
        anchor: "det^(1/n)(A+B) >= det^(1/n) A + det^(1/n) B on psd pairs",
    },
    CheckEntry {
        id: "minkowski_convex",
        kind: CheckKind::Check,
        anchor: "det^(1/n) g(A+B) >= det^(1/n) g(A) + det^(1/n) g(B) for convex non-negative g with g(0) = 0",
    },
    CheckEntry {
        id: "jensen_det",
        kind: CheckKind::Check,
        anchor: "det^(1/n) f((A+B)/2) >= (det^(1/n) f(A) + det^(1/n) f(B))/2 for concave non-negative f",
    },
    CheckEntry {
        id: "antinorm_superadd",
        kind: CheckKind::Check,
        anchor: "||g(A+B)||_! >= ||g(A)||_! + ||g(B)||_! for convex non-negative g with g(0) = 0, every anti-norm",
    },
    CheckEntry {
        id: "jensen_antinorm",
        kind: CheckKind::Check,
        anchor: "||f((A+B)/2)||_! >= ||(f(A)+f(B))/2||_! >= (||f(A)||_! + ||f(B)||_!)/2 for concave non-negative f",
    },
    CheckEntry {
        id: "brown_kosaki",
        kind: CheckKind::Check,
        anchor: "||f(Z*AZ)||_! >= ||Z*f(A)Z||_! for contractions Z, concave non-negative f with 0 in its domain",
    },
    CheckEntry {
        id: "thm41_norm",
        kind: CheckKind::Check,
        anchor: "||g(A+B)||^q <= ||g(A)||^q + ||g(B)||^q for convex g with g^q subadditive, 0 < q < 1",
    },
    CheckEntry {
        id: "thm41_antinorm",
        kind: CheckKind::Check,
        anchor: "||f(A+B)||_!^p >= ||f(A)||_!^p + ||f(B)||_!^p for concave f with f^p superadditive, p > 1",
    },
    CheckEntry {
        id: "lemma42_consequence",
        kind: CheckKind::Check,
        anchor: "lambda(A) majorized-from-below by lambda(B) implies ||A||_! >= ||B||_! for every anti-norm",
    },
    CheckEntry {
        id: "cor43",
        kind: CheckKind::Check,
        anchor: "||g(A+B)||^(1/m) <= ||g(A)||^(1/m) + ||g(B)||^(1/m) for degree-m polynomials g with non-negative coefficients",
    },
    CheckEntry {
        id: "cor44_block",
        kind: CheckKind::Check,
        anchor: "||g(M)|| <= (||g(A)||^q + ||g(B)||^q)^(1/q) on psd blocks, convex g with g(0) = 0; 3-block form by recursion",
    },
    CheckEntry {
        id: "cor45",
        kind: CheckKind::Check,
        anchor: "Tr g(A) <= (sum_i g^q(a_ii))^(1/q) for convex g with g(0) = 0 and g^q subadditive",
    },
    CheckEntry {
        id: "cor46_wedge",
        kind: CheckKind::Check,
        anchor: "corner norm of g(M) <= (||g(A)||^q + ||g(B)||^q)^(1/q) for equal-size blocks; no g(0) = 0 needed",
    },
    CheckEntry {
        id: "cor47",
        kind: CheckKind::Check,
        anchor: "||f(A+B)||_!^m >= ||f(A)||_!^m + ||f(B)||_!^m for f(t) = sum_k a_k t^(1/k), a_k >= 0",
    },
    CheckEntry {
        id: "cor48",
        kind: CheckKind::Check,
        anchor: "det^(1/n) h(A+B) >= det^(1/n) h(A) + det^(1/n) h(B) for superadditive, strictly log-concave h > 0",
    },
    CheckEntry {
        id: "cor49_block",
        kind: CheckKind::Check,
        anchor: "||f(M)||_! >= (||f(A)||_!^p + ||f(B)||_!^p)^(1/p) on psd blocks for Schatten r-anti-norms",
    },
    CheckEntry {
        id: "cor410",
        kind: CheckKind::Check,
        anchor: "Tr f(A) >= (sum_i f^p(a_ii))^(1/p) for concave f with f^p superadditive",
    },
    CheckEntry {
        id: "thm52_midpoint",
        kind: CheckKind::Check,
        anchor: "A -> phi(tau(f(A))) is midpoint convex (resp. concave) when the phi'/phi'' ratio certificate holds",
    },
    CheckEntry {
        id: "ex53_pressure",
        kind: CheckKind::Check,
        anchor: "the pressure A -> log tau(exp A) is convex on Hermitian matrices",
    },
    CheckEntry {
        id: "ex54_det",
        kind: CheckKind::Check,
        anchor: "A -> exp tau(log A) = det^(1/n) A is concave on positive definite matrices",
    },
    CheckEntry {
        id: "ex55_schatten",
        kind: CheckKind::Check,
        anchor: "A -> (tau(A^q))^(1/q) is concave for 0 < q < 1 and convex for q > 1 on positive matrices",
    },
    CheckEntry {
        id: "prop56",
        kind: CheckKind::Check,
        anchor: "A -> phi(||f(A)||) is subadditive (norms) / superadditive (anti-norms) under the phi-compose-f gates",
    },
    CheckEntry {
        id: "eq51",
        kind: CheckKind::Check,
        anchor: "((1/n) sum x_i/phi'(t_i))^2 <= [phi'(tbar)/phi''(tbar)] (1/n) sum phi''(t_i) x_i^2/phi'(t_i)^3",
    },
    CheckEntry {
        id: "cex_nonconvex_g",
        kind: CheckKind::Search,
        anchor: "superadditive non-convex g admits rank-one A, B with Tr g(A+B) < Tr g(A) + Tr g(B)",
    },
    CheckEntry {
        id: "cex_expansive_antinorm",
        kind: CheckKind::Search,
        anchor: "expansive Z breaks ||f(Z*AZ)||_! <= ||Z*f(A)Z||_! for Ky Fan anti-norms with k < n",
    },
    CheckEntry {
        id: "open_expansive_schatten",
        kind: CheckKind::Search,
        anchor: "search for expansive-Z violations under Schatten q-anti-norms, 0 < q < 1; none expected",
    },
    CheckEntry {
        id: "open_contraction_symmetric_norm",
        kind: CheckKind::Search,
        anchor: "search for a contraction violation of ||f(Z*AZ)|| >= ||Z*f(A)Z|| for symmetric norms, f concave non-monotone",
    },
];

/// Looks up a catalog entry by id.
pub fn registry_entry(id: &str) -> Option<&'static CheckEntry> {
    REGISTRY.iter().find(|e| e.id == id)
}

/// The norm sweep at dimension `n`: operator norm, all Ky Fan norms, and
/// Schatten p in {1, 2, 3}.
pub fn norm_sweep(n: usize) -> Vec<NormSpec> {
    let mut v = vec![NormSpec::OperatorNorm];
    v.extend((1..=n).map(NormSpec::KyFan));
    v.extend([1.0, 2.0, 3.0].map(NormSpec::Schatten));
    v
}

/// The anti-norm sweep at dimension `n`: the primitive kinds plus a few
/// combinator nestings, mirroring the catalog but trimmed for per-trial cost.
pub fn anti_sweep(n: usize) -> Vec<AntiNormSpec> {
    let mut v = vec![
        AntiNormSpec::Trace,
        AntiNormSpec::Minkowski,
        AntiNormSpec::SchattenAnti(0.5),
        AntiNormSpec::SchattenAnti(0.8),
        AntiNormSpec::SchattenNeg(-1.0),
    ];
    v.extend((1..=n).map(AntiNormSpec::KyFanAnti));
    if n >= 2 {
        v.push(AntiNormSpec::Delta(2));
    }
    v.push(AntiNormSpec::q_lift(AntiNormSpec::KyFanAnti(1), 0.5).expect("q in (0,1]"));
    v.push(AntiNormSpec::geo_mean(AntiNormSpec::Trace, AntiNormSpec::Minkowski));
    v.push(AntiNormSpec::WeightedSum((0..n).map(|k| k as f64).collect()));
    v
}

/// Runs one catalog entry. Search ids delegate to the search module with
/// `config.budget` samples and summarize the outcome as a `CheckReport`.
pub fn run_check(check_id: &str, config: &CheckConfig) -> Result<CheckReport> {
    config.validate()?;
    let entry = registry_entry(check_id)
        .ok_or_else(|| Error::Parameter(format!("unknown check id `{check_id}`")))?;
    match entry.kind {
        CheckKind::Check => checks::run(check_id, config),
        CheckKind::Search => Ok(search::run_search(check_id, config)?.into_report(config.tol_rel)),
    }
}

/// Resolves selectors (`all`, or explicit ids) against the registry,
/// preserving registry order for `all` and argument order otherwise.
pub fn resolve_ids(selectors: &[String]) -> Result<Vec<&'static str>> {
    if selectors.is_empty() || selectors.iter().any(|s| s == "all") {
        return Ok(REGISTRY.iter().map(|e| e.id).collect());
    }
    let mut out = Vec::with_capacity(selectors.len());
    for s in selectors {
        let entry = registry_entry(s)
            .ok_or_else(|| Error::Parameter(format!("unknown check id `{s}`")))?;
        if !out.contains(&entry.id) {
            out.push(entry.id);
        }
    }
    Ok(out)
}

/// Runs a list of checks, parallel across check ids when `config.threads > 1`.
/// Reports come back in the order of `ids` regardless of scheduling.
pub fn run_suite(ids: &[&str], config: &CheckConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    if ids.is_empty() {
        return Ok(Vec::new());
    }
    let workers = config.threads.min(ids.len());
    if workers <= 1 {
        return ids.iter().map(|id| run_check(id, config)).collect();
    }

    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<CheckReport>>>> =
        ids.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= ids.len() {
                    break;
                }
                let report = run_check(ids[i], config);
                *slots[i].lock().expect("result slot poisoned") = Some(report);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("result slot poisoned").expect("worker filled slot"))
        .collect()
}

/// CSV summary of a suite run, one row per report plus the header.
pub fn reports_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from(CheckReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// JSON document for a suite run.
pub fn reports_json(reports: &[CheckReport]) -> Result<String> {
    serde_json::to_string_pretty(reports)
        .map_err(|e| Error::Parameter(format!("report serialization failed: {e}")))
}
