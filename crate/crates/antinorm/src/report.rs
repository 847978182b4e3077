//! Report types shared by the randomized checks and the CLI.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::functions::predicates::PredicateReport;
use crate::spectral::io::MatrixDoc;

/// Serde adapter for floats that may legitimately be NaN or infinite (e.g.
/// "no witness point" markers): JSON has no non-finite literals, so they go
/// out as `null` and come back as NaN.
pub mod nonfinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Outcome of a check. `HypothesesNotMet` means the function bindings failed
/// their predicate certificates, so the check makes no pass/fail claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesesNotMet,
}

impl Verdict {
    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesesNotMet => "hypotheses-not-met",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A matrix attached to a report, keyed by its role in the inequality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: MatrixDoc,
}

/// A non-matrix binding attached to a report (function tags, spec strings,
/// scalar parameters), keyed by role.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Binding {
    pub key: String,
    pub value: String,
}

impl Binding {
    pub fn new(key: impl Into<String>, value: impl Into<String>) -> Self {
        Binding { key: key.into(), value: value.into() }
    }
}

/// The trial that achieved the worst normalized margin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstInstance {
    pub dim: usize,
    pub trial: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// Normalized margin of this trial: `(slack) / (1 + |lhs| + |rhs|)`.
    pub margin: f64,
    pub matrices: Vec<NamedMatrix>,
    pub bindings: Vec<Binding>,
}

/// Full record of one check run. `worst_margin` is normalized, so
/// `Fail ⇔ worst_margin < -tol_rel`; positive margins are slack.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub verdict: Verdict,
    pub worst_margin: f64,
    pub tol_rel: f64,
    /// Hypothesis predicate certificates embedded in the report.
    pub certificates: Vec<PredicateReport>,
    pub worst_instance: Option<WorstInstance>,
    pub notes: Vec<String>,
    /// Wall time; excluded from the determinism contract.
    pub seconds: f64,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>, tol_rel: f64) -> Self {
        CheckReport {
            check_id: check_id.into(),
            dims: Vec::new(),
            trials: 0,
            verdict: Verdict::Pass,
            worst_margin: f64::INFINITY,
            tol_rel,
            certificates: Vec::new(),
            worst_instance: None,
            notes: Vec::new(),
            seconds: 0.0,
        }
    }

    /// Records one trial's normalized margin, keeping the instance only when
    /// it is the new worst.
    pub fn record<F>(&mut self, margin: f64, instance: F)
    where
        F: FnOnce() -> WorstInstance,
    {
        self.trials += 1;
        if margin < self.worst_margin {
            self.worst_margin = margin;
            self.worst_instance = Some(instance());
        }
    }

    /// Settles the verdict from the recorded margins. Leaves
    /// `HypothesesNotMet` alone if it was already set.
    pub fn finish(&mut self) {
        if self.verdict == Verdict::HypothesesNotMet {
            return;
        }
        if self.trials == 0 {
            self.worst_margin = 0.0;
        }
        self.verdict = if self.worst_margin < -self.tol_rel {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
    }

    pub fn mark_hypotheses_not_met(&mut self, why: impl Into<String>) {
        self.verdict = Verdict::HypothesesNotMet;
        self.notes.push(why.into());
    }

    pub const CSV_HEADER: &'static str = "check_id,dims,trials,pass,worst_margin,seconds";

    pub fn csv_row(&self) -> String {
        let dims = self
            .dims
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("|");
        let margin = if self.worst_margin.is_finite() {
            format!("{:.6e}", self.worst_margin)
        } else {
            String::from("nan")
        };
        format!(
            "{},{},{},{},{},{:.3}",
            self.check_id,
            dims,
            self.trials,
            self.verdict.as_str(),
            margin,
            self.seconds
        )
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check_id)?;
        writeln!(f, "  verdict: {}", self.verdict)?;
        writeln!(
            f,
            "  dims: {:?}  trials: {}  tol_rel: {:e}",
            self.dims, self.trials, self.tol_rel
        )?;
        if self.worst_margin.is_finite() {
            writeln!(f, "  worst_margin: {:.6e}", self.worst_margin)?;
        }
        for cert in &self.certificates {
            writeln!(
                f,
                "  certificate: {} on {} -> {} (worst {:.3e} at ({:.6}, {:.6}), {} samples, tol {:e})",
                cert.predicate,
                cert.function,
                if cert.holds { "holds" } else { "fails" },
                cert.worst_margin,
                cert.worst_x,
                cert.worst_y,
                cert.samples,
                cert.tol
            )?;
        }
        if let Some(w) = &self.worst_instance {
            writeln!(
                f,
                "  worst_instance: dim {} trial {} lhs {:.9e} rhs {:.9e} margin {:.6e}",
                w.dim, w.trial, w.lhs, w.rhs, w.margin
            )?;
            for b in &w.bindings {
                writeln!(f, "    {} = {}", b.key, b.value)?;
            }
            for m in &w.matrices {
                writeln!(f, "    matrix {}: n = {}", m.name, m.matrix.n)?;
            }
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        write!(f, "  seconds: {:.3}", self.seconds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_margin_and_tolerance() {
        let mut r = CheckReport::new("demo", 1e-9);
        r.dims = vec![2];
        r.record(1.0, || WorstInstance {
            dim: 2,
            trial: 0,
            lhs: 1.0,
            rhs: 2.0,
            margin: 1.0,
            matrices: vec![],
            bindings: vec![],
        });
        r.record(-5e-10, || WorstInstance {
            dim: 2,
            trial: 1,
            lhs: 2.0,
            rhs: 2.0,
            margin: -5e-10,
            matrices: vec![],
            bindings: vec![],
        });
        r.finish();
        assert_eq!(r.verdict, Verdict::Pass, "within slack");
        assert_eq!(r.trials, 2);
        assert_eq!(r.worst_instance.as_ref().unwrap().trial, 1);

        r.record(-1e-3, || WorstInstance {
            dim: 2,
            trial: 2,
            lhs: 3.0,
            rhs: 2.0,
            margin: -1e-3,
            matrices: vec![],
            bindings: vec![],
        });
        r.finish();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn hypotheses_not_met_sticks() {
        let mut r = CheckReport::new("demo", 1e-9);
        r.mark_hypotheses_not_met("phi fails concavity");
        r.finish();
        assert_eq!(r.verdict, Verdict::HypothesesNotMet);
        assert!(r.csv_row().contains("hypotheses-not-met"));
    }

    #[test]
    fn csv_row_shape() {
        let mut r = CheckReport::new("minkowski", 1e-9);
        r.dims = vec![2, 3, 4];
        r.trials = 30;
        r.worst_margin = 0.25;
        r.finish();
        let row = r.csv_row();
        assert!(row.starts_with("minkowski,2|3|4,30,pass,2.5"));
        assert_eq!(CheckReport::CSV_HEADER.split(',').count(), row.split(',').count());
    }

    #[test]
    fn serializes_to_json() {
        let r = CheckReport::new("demo", 1e-9);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"check_id\":\"demo\""));
        assert!(json.contains("\"verdict\":\"pass\""));
    }
}
