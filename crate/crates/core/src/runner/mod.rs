//! Scenario files, check orchestration and report rendering.

mod render;
mod scenario;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compat::{
    check_a_compatible, check_b_compatible, check_contact_g2, check_contraction_contact,
    identity_suite, ContactG2Structure, DEFAULT_TRIALS,
};
use crate::contact::{build_acms, contact_certificate, reeb_verify, verify_acms, verify_associated};
use crate::error::Result;
use crate::exterior::{rational, Coordinates};
use crate::g2::{metric_from_phi, project_lambda2, torsion_report, verify_metric_compat, G2Structure};
use crate::report::{CheckReport, Clause, Mode, Status, Value};
use crate::sampling::SamplingSpec;

pub use render::{render_report, CheckDoc, ClauseDoc, DerivedDoc, ReportDoc, ReportFormat, ValueDoc};
pub use scenario::{parse_scenario, AxisRef, Check, FormDoc, TermDoc, Scenario, SCHEMA_VERSION, STANDARD_PHI};

/// Scenarios shipped with the library, by name.
pub const BUNDLED: [(&str, &str); 5] = [
    ("r7_standard", include_str!("../../scenarios/r7_standard.json")),
    ("r7_second", include_str!("../../scenarios/r7_second.json")),
    ("cy_times_r", include_str!("../../scenarios/cy_times_r.json")),
    ("k4_times_r3", include_str!("../../scenarios/k4_times_r3.json")),
    ("tstar_r3", include_str!("../../scenarios/tstar_r3.json")),
];

pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn bundled(name: &str) -> Option<Scenario> {
    bundled_source(name).map(|s| parse_scenario(s.as_bytes()).expect("bundled scenarios are valid"))
}

/// Options for [`run_checks`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub sampling: SamplingSpec,
    /// Tolerance for floating-point checks.
    pub tol: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            sampling: SamplingSpec::default(),
            tol: 1e-9,
        }
    }
}

impl From<SamplingSpec> for RunOptions {
    fn from(sampling: SamplingSpec) -> Self {
        Self {
            sampling,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every asserted clause is proven.
    Pass,
    /// Nothing failed, but some clause holds only on samples.
    SampledOnly,
    Fail,
    NoChecks,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::SampledOnly => "sampled-only",
            Verdict::Fail => "fail",
            Verdict::NoChecks => "no checks",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub check: Check,
    pub report: CheckReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub coordinates: Coordinates,
    pub seed: u64,
    pub outcomes: Vec<CheckOutcome>,
    pub verdict: Verdict,
}

fn structure(sc: &Scenario) -> Result<G2Structure> {
    G2Structure::new(sc.phi(), sc.metric(), sc.orientation)
}

fn run_one(sc: &Scenario, check: &Check, opts: &RunOptions) -> Result<CheckReport> {
    let sampling = &opts.sampling;
    Ok(match check {
        Check::ACompatible { alpha, r } => {
            check_a_compatible(&structure(sc)?, sc.form(alpha), sc.field(r), sampling)
        }
        Check::BCompatible { alpha, x, y } => {
            check_b_compatible(&structure(sc)?, sc.form(alpha), sc.field(x), sc.field(y), sampling)
        }
        Check::ContactG2 { alpha, r, f, g } => {
            let c = ContactG2Structure::new(
                structure(sc)?,
                sc.field(r).clone(),
                sc.form(alpha).clone(),
                sc.scalar(f).clone(),
                sc.scalar(g).clone(),
                sampling,
            )?;
            check_contact_g2(&c, sampling)
        }
        Check::Torsion {} => torsion_report(&structure(sc)?),
        Check::Contact { alpha } => {
            let cert = contact_certificate(sc.form(alpha), sampling);
            let mut r = CheckReport::new("contact form");
            r.push(cert.to_clause());
            r.derive("α∧(dα)³", Value::Form(cert.top));
            r
        }
        Check::Reeb { alpha, r } => reeb_verify(sc.form(alpha), sc.field(r)),
        Check::MetricCompat {} => {
            let g = sc.metric();
            let vol = g.volume(sc.orientation)?;
            verify_metric_compat(&sc.phi(), &g, &vol)
        }
        Check::MetricNumeric { at } => {
            let pt = scenario::check_point(at);
            let nm = metric_from_phi(&sc.phi(), &pt)?;
            let g = sc.metric();
            let mut worst = 0.0f64;
            for i in 0..crate::exterior::DIM {
                for j in 0..crate::exterior::DIM {
                    let d = nm.g[i][j] - rational::to_f64(g.entry(i + 1, j + 1));
                    worst = worst.max(d.abs());
                }
            }
            let mut r = CheckReport::new("metric recovered from φ");
            let status = if worst <= opts.tol { Status::Proven } else { Status::Failed };
            r.push(
                Clause::new("g_φ = g within tolerance", status, Mode::Numeric)
                    .with_note(format!("max |Δ| = {worst:e} at {pt}, tol {:e}", opts.tol))
                    .with_residual(Value::Number(worst)),
            );
            let same = nm.orientation == sc.orientation;
            r.push(if same {
                Clause::new("orientation of φ matches", Status::Proven, Mode::Exact)
            } else {
                Clause::failed("orientation of φ matches", "φ induces the opposite orientation")
            });
            r
        }
        Check::Acms { r } => verify_acms(&build_acms(&structure(sc)?, sc.field(r))?),
        Check::Associated { r, alpha } => {
            let s = structure(sc)?;
            let acms = build_acms(&s, sc.field(r))?;
            let a = alpha.as_ref().map_or(&acms.acs.alpha, |n| sc.form(n));
            verify_associated(&acms.acs.j, &acms.acs.r, a, &acms.g, Some(s.phi()), sampling)
        }
        Check::ContractionContact { x, y, z } => check_contraction_contact(
            &structure(sc)?,
            sc.field(x),
            sc.field(y),
            sc.field(z),
            sampling,
        ),
        Check::IdentitySuite { trials } => {
            identity_suite(&structure(sc)?, trials.unwrap_or(DEFAULT_TRIALS), sampling.seed)
        }
        Check::Lambda2 { beta } => {
            let s = structure(sc)?;
            let b = sc.form(beta);
            let split = project_lambda2(b, &s)?;
            let mut r = split.verify(b, &s);
            r.derive("part7", Value::Form(split.part7));
            r.derive("part14", Value::Form(split.part14));
            r
        }
    })
}

/// Runs every check in scenario order. A check that cannot run becomes a
/// single failed clause; the remaining checks still run.
pub fn run_checks(sc: &Scenario, opts: &RunOptions) -> RunReport {
    let outcomes: Vec<CheckOutcome> = sc
        .checks
        .par_iter()
        .map(|check| {
            let report = run_one(sc, check, opts).unwrap_or_else(|e| {
                let mut r = CheckReport::new(check.kind());
                r.push(Clause::failed("check ran", e.to_string()));
                r
            });
            CheckOutcome {
                check: check.clone(),
                report,
            }
        })
        .collect();
    let verdict = if outcomes.is_empty() {
        Verdict::NoChecks
    } else {
        match outcomes
            .iter()
            .map(|o| o.report.status())
            .fold(Status::Proven, Status::combine)
        {
            Status::Failed => Verdict::Fail,
            Status::VerifiedOnSamples => Verdict::SampledOnly,
            _ => Verdict::Pass,
        }
    };
    RunReport {
        scenario: sc.name.clone(),
        coordinates: sc.coordinates.clone(),
        seed: opts.sampling.seed,
        outcomes,
        verdict,
    }
}
