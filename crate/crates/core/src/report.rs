//! Structured verdicts shared by every checker.

use serde::{Deserialize, Serialize};

use crate::exterior::{KForm, Point, Polynomial, VectorField};

/// Strength of a clause verdict, weakest-failure first when aggregated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Holds identically on the patch (exact polynomial identity or nonzero constant).
    Proven,
    /// No counterexample on the sampling grid; weaker than a proof.
    VerifiedOnSamples,
    Failed,
    /// Conclusion deliberately not checked because its hypotheses failed.
    NotAsserted,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Proven => "PASS",
            Status::VerifiedOnSamples => "SAMPLED",
            Status::Failed => "FAIL",
            Status::NotAsserted => "SKIP",
        }
    }

    pub fn is_failure(self) -> bool {
        self == Status::Failed
    }

    /// Combines two verdicts: any failure wins, then sampling, then proof.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (VerifiedOnSamples, _) | (_, VerifiedOnSamples) => VerifiedOnSamples,
            (Proven, _) | (_, Proven) => Proven,
            (NotAsserted, NotAsserted) => NotAsserted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Sampled,
    Numeric,
}

/// A residual or derived quantity attached to a clause.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Form(KForm),
    Scalar(Polynomial),
    Field(VectorField),
    Matrix(Vec<Vec<Polynomial>>),
    Number(f64),
    Point(Point),
    Text(String),
}

impl Value {
    /// True for exact quantities that vanish identically.
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Form(f) => f.is_zero(),
            Value::Scalar(p) => p.is_zero(),
            Value::Field(v) => v.is_zero(),
            Value::Matrix(m) => m.iter().flatten().all(Polynomial::is_zero),
            Value::Number(x) => *x == 0.0,
            Value::Point(_) | Value::Text(_) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub label: String,
    pub status: Status,
    pub mode: Mode,
    pub residual: Option<Value>,
    pub note: Option<String>,
}

impl Clause {
    /// Exact identity clause: proven iff `residual` vanishes identically.
    pub fn exact(label: impl Into<String>, residual: Value) -> Self {
        let ok = residual.is_zero();
        Self {
            label: label.into(),
            status: if ok { Status::Proven } else { Status::Failed },
            mode: Mode::Exact,
            residual: if ok { None } else { Some(residual) },
            note: None,
        }
    }

    pub fn new(label: impl Into<String>, status: Status, mode: Mode) -> Self {
        Self {
            label: label.into(),
            status,
            mode,
            residual: None,
            note: None,
        }
    }

    pub fn failed(label: impl Into<String>, note: impl Into<String>) -> Self {
        Self::new(label, Status::Failed, Mode::Exact).with_note(note)
    }

    pub fn not_asserted(label: impl Into<String>, note: impl Into<String>) -> Self {
        Self::new(label, Status::NotAsserted, Mode::Exact).with_note(note)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_residual(mut self, residual: Value) -> Self {
        self.residual = Some(residual);
        self
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Proven | Status::VerifiedOnSamples)
    }
}

/// Verdicts for one checker invocation, one clause per condition checked.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CheckReport {
    pub title: String,
    pub clauses: Vec<Clause>,
    pub derived: Vec<(String, Value)>,
}

/// Compatibility checkers return the same structure.
pub type CompatReport = CheckReport;

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, clause: Clause) -> &mut Self {
        self.clauses.push(clause);
        self
    }

    pub fn derive(&mut self, name: impl Into<String>, value: Value) -> &mut Self {
        self.derived.push((name.into(), value));
        self
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.clauses.extend(other.clauses);
        self.derived.extend(other.derived);
    }

    pub fn clause(&self, label: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.label == label)
    }

    pub fn derived_value(&self, name: &str) -> Option<&Value> {
        self.derived.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Aggregate status; `NotAsserted` clauses do not count toward the verdict.
    pub fn status(&self) -> Status {
        self.clauses
            .iter()
            .map(|c| c.status)
            .filter(|s| *s != Status::NotAsserted)
            .fold(Status::Proven, Status::combine)
    }

    pub fn passed(&self) -> bool {
        !self.status().is_failure()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation() {
        let mut r = CheckReport::new("t");
        assert_eq!(r.status(), Status::Proven);
        r.push(Clause::exact("a", Value::Scalar(Polynomial::zero())));
        r.push(Clause::not_asserted("b", "hypotheses failed"));
        assert_eq!(r.status(), Status::Proven);
        r.push(Clause::new("c", Status::VerifiedOnSamples, Mode::Sampled));
        assert_eq!(r.status(), Status::VerifiedOnSamples);
        r.push(Clause::exact("d", Value::Scalar(Polynomial::one())));
        assert_eq!(r.status(), Status::Failed);
        assert_eq!(r.clause("d").unwrap().residual, Some(Value::Scalar(Polynomial::one())));
        assert!(r.clause("a").unwrap().residual.is_none());
    }
}
