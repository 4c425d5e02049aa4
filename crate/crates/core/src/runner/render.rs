//! Text and JSON renderings of a [`RunReport`].

use serde::{Deserialize, Serialize};

use super::scenario::{form_doc, TermDoc};
use super::{RunReport, Verdict, SCHEMA_VERSION};
use crate::exterior::{Coordinates, DIM};
use crate::report::{Mode, Status, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown report format {other:?} (expected text or json)")),
        }
    }
}

/// Serialized form of a run report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema: u32,
    pub scenario: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub checks: Vec<CheckDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub arguments: String,
    pub title: String,
    pub status: Status,
    pub clauses: Vec<ClauseDoc>,
    pub derived: Vec<DerivedDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseDoc {
    pub label: String,
    pub status: Status,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<ValueDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedDoc {
    pub name: String,
    pub value: ValueDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueDoc {
    Form {
        degree: usize,
        terms: Vec<TermDoc>,
    },
    Scalar {
        value: String,
    },
    Field {
        components: Vec<String>,
    },
    Matrix {
        rows: Vec<Vec<String>>,
    },
    Number {
        value: f64,
    },
    Point {
        coords: Vec<String>,
    },
    Text {
        value: String,
    },
}

fn value_doc(v: &Value, names: &Coordinates) -> ValueDoc {
    match v {
        Value::Form(f) => {
            let d = form_doc(f, names);
            ValueDoc::Form {
                degree: d.degree,
                terms: d.terms,
            }
        }
        Value::Scalar(p) => ValueDoc::Scalar {
            value: p.display_with(names),
        },
        Value::Field(f) => ValueDoc::Field {
            components: (1..=DIM).map(|i| f.component(i).display_with(names)).collect(),
        },
        Value::Matrix(m) => ValueDoc::Matrix {
            rows: m
                .iter()
                .map(|r| r.iter().map(|p| p.display_with(names)).collect())
                .collect(),
        },
        Value::Number(x) => ValueDoc::Number { value: *x },
        Value::Point(p) => ValueDoc::Point {
            coords: p.coords().iter().map(|q| q.to_string()).collect(),
        },
        Value::Text(s) => ValueDoc::Text { value: s.clone() },
    }
}

impl ReportDoc {
    pub fn from_report(r: &RunReport) -> Self {
        let names = &r.coordinates;
        Self {
            schema: SCHEMA_VERSION,
            scenario: r.scenario.clone(),
            seed: r.seed,
            verdict: r.verdict,
            checks: r
                .outcomes
                .iter()
                .map(|o| CheckDoc {
                    kind: o.check.kind().to_string(),
                    arguments: o.check.arguments(),
                    title: o.report.title.clone(),
                    status: o.report.status(),
                    clauses: o
                        .report
                        .clauses
                        .iter()
                        .map(|c| ClauseDoc {
                            label: c.label.clone(),
                            status: c.status,
                            mode: c.mode,
                            residual: c.residual.as_ref().map(|v| value_doc(v, names)),
                            note: c.note.clone(),
                        })
                        .collect(),
                    derived: o
                        .report
                        .derived
                        .iter()
                        .map(|(n, v)| DerivedDoc {
                            name: n.clone(),
                            value: value_doc(v, names),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

const SUMMARY_LIMIT: usize = 160;

fn summary(v: &Value, names: &Coordinates) -> String {
    let s = match v {
        Value::Form(f) => f.display_with(names),
        Value::Scalar(p) => p.display_with(names),
        Value::Field(f) => f.display_with(names),
        Value::Matrix(m) => {
            let nonzero = m.iter().flatten().filter(|p| !p.is_zero()).count();
            format!("matrix with {nonzero} nonzero entries")
        }
        Value::Number(x) => format!("{x:e}"),
        Value::Point(p) => p.to_string(),
        Value::Text(s) => s.clone(),
    };
    if s.chars().count() > SUMMARY_LIMIT {
        let cut: String = s.chars().take(SUMMARY_LIMIT).collect();
        format!("{cut} …")
    } else {
        s
    }
}

fn mode_label(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Sampled => "sampled",
        Mode::Numeric => "numeric",
    }
}

fn render_text(r: &RunReport) -> String {
    let names = &r.coordinates;
    let mut out = format!("scenario {} (seed {})\n", r.scenario, r.seed);
    for (i, o) in r.outcomes.iter().enumerate() {
        out.push_str(&format!(
            "\n[{}] {}({}): {}\n",
            i + 1,
            o.check.kind(),
            o.check.arguments(),
            o.report.status().label()
        ));
        for c in &o.report.clauses {
            out.push_str(&format!("{} {} ({})", c.status.label(), c.label, mode_label(c.mode)));
            if let Some(note) = &c.note {
                out.push_str(&format!(" [{note}]"));
            }
            if let Some(res) = &c.residual {
                out.push_str(&format!("\n    residual: {}", summary(res, names)));
            }
            out.push('\n');
        }
        for (n, v) in &o.report.derived {
            out.push_str(&format!("    {n} = {}\n", summary(v, names)));
        }
    }
    out.push_str(&format!("\nverdict: {}\n", r.verdict.label()));
    out
}

/// Renders a report. JSON output is deterministic for a fixed scenario and seed.
pub fn render_report(r: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(r),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&ReportDoc::from_report(r))
                .expect("report is serializable");
            s.push('\n');
            s
        }
    }
}
