use g2kit::runner::{
    bundled, bundled_source, parse_scenario, render_report, run_checks, Check, ReportDoc,
    ReportFormat, RunOptions, ValueDoc, Verdict, BUNDLED,
};
use g2kit::{standard_phi, Error, KForm, Polynomial, SamplingSpec, VectorField};

fn quick() -> RunOptions {
    RunOptions::from(SamplingSpec {
        grid: 2,
        samples: 8,
        ..Default::default()
    })
}

fn replace(src: &str, from: &str, to: &str) -> String {
    assert!(src.contains(from), "fixture text {from:?} not found");
    src.replacen(from, to, 1)
}

fn scenario_error(src: &str) -> (String, String) {
    match parse_scenario(src.as_bytes()) {
        Err(Error::Scenario { path, message }) => (path, message),
        other => panic!("expected a scenario error, got {other:?}"),
    }
}

#[test]
fn r7_standard_contents() {
    let sc = bundled("r7_standard").unwrap();
    assert_eq!(sc.phi(), standard_phi());
    let mut alpha0 = KForm::dx(1);
    for (c, i) in [(3, 2), (5, 4), (7, 6)] {
        alpha0 = &alpha0 - &KForm::term(Polynomial::var(c), &[i]);
    }
    assert_eq!(sc.form("alpha0"), &alpha0);
    assert_eq!(sc.field("R"), &VectorField::coordinate(1));
    assert_eq!(sc.field("X"), &VectorField::coordinate(7));
    let kinds: Vec<&str> = sc.checks.iter().map(Check::kind).collect();
    assert_eq!(kinds, ["a_compatible", "b_compatible", "contact_g2", "torsion"]);
}

#[test]
fn every_bundled_scenario_passes() {
    for (name, _) in BUNDLED {
        let sc = bundled(name).unwrap();
        let r = run_checks(&sc, &quick());
        assert_eq!(r.verdict, Verdict::Pass, "{}", render_report(&r, ReportFormat::Text));
    }
}

#[test]
fn r7_standard_contact_volume() {
    let r = run_checks(&bundled("r7_standard").unwrap(), &quick());
    let vol = r.outcomes[0].report.derived_value("contact volume α∧(dα)³").unwrap();
    assert_eq!(
        vol,
        &g2kit::Value::Form(KForm::coordinate_volume().scale_rational(&g2kit::exterior::rational::int(6)))
    );
}

#[test]
fn tstar_a_compatible_and_torsion_free() {
    let r = run_checks(&bundled("tstar_r3").unwrap(), &quick());
    let by_kind = |k: &str| r.outcomes.iter().find(|o| o.check.kind() == k).unwrap();
    assert!(by_kind("a_compatible").report.passed());
    let t = &by_kind("torsion").report;
    assert!(t.clause("dφ = 0").unwrap().passed());
    assert!(t.clause("d(∗φ) = 0").unwrap().passed());
}

#[test]
fn non_increasing_index_is_located() {
    let src = bundled_source("r7_standard").unwrap();
    let bad = replace(
        src,
        r#"{ "index": [1], "coeff": "1" }"#,
        r#"{ "index": [1], "coeff": "1" }, { "index": [2, 2, 3], "coeff": "1" }"#,
    );
    let (path, msg) = scenario_error(&bad);
    // Degree check fires first for a 1-form; use a 3-form to reach index validation.
    assert!(path.starts_with("forms.alpha0.terms[1]"), "{path}: {msg}");
    let bad = replace(
        src,
        r#""forms": {"#,
        r#""forms": { "psi": { "degree": 3, "terms": [ { "index": [2, 2, 3], "coeff": "1" } ] },"#,
    );
    let (path, msg) = scenario_error(&bad);
    assert_eq!(path, "forms.psi.terms[0].index");
    assert!(msg.contains("non-increasing multi-index"), "{msg}");
}

#[test]
fn undefined_field_is_located() {
    let src = bundled_source("r7_standard").unwrap();
    let bad = replace(src, r#""X": "X", "Y": "Y""#, r#""X": "W", "Y": "Y""#);
    let (path, msg) = scenario_error(&bad);
    assert_eq!(path, "checks[1].X");
    assert!(msg.contains("\"W\""), "{msg}");
}

#[test]
fn structural_errors_carry_json_paths() {
    let src = bundled_source("r7_standard").unwrap();
    let bad = replace(src, r#""type": "torsion""#, r#""type": "holonomy""#);
    let (path, msg) = scenario_error(&bad);
    assert!(path.starts_with("checks[3]"), "{path}: {msg}");
    assert!(msg.contains("holonomy"), "{msg}");
    let bad = replace(src, r#""coeff": "-x3""#, r#""coeff": "-x3 +* x1""#);
    let (path, _) = scenario_error(&bad);
    assert_eq!(path, "forms.alpha0.terms[1].coeff");
}

#[test]
fn metric_must_be_symmetric_positive_definite() {
    let src = bundled_source("r7_standard").unwrap();
    let identity_with = |a: &str, b: &str| {
        let rows: Vec<String> = (0..7)
            .map(|i| {
                let row: Vec<String> = (0..7)
                    .map(|j| {
                        let v = match (i, j) {
                            (0, 1) => a,
                            (1, 0) => b,
                            _ if i == j => "1",
                            _ => "0",
                        };
                        format!("\"{v}\"")
                    })
                    .collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        replace(src, r#""phi": "standard","#, &format!(r#""metric": [{}], "phi": "standard","#, rows.join(", ")))
    };
    assert_eq!(scenario_error(&identity_with("1/2", "0")).0, "metric");
    assert_eq!(scenario_error(&identity_with("2", "2")).0, "metric");
    assert!(parse_scenario(identity_with("1/2", "1/2").as_bytes()).is_ok());
}

#[test]
fn json_reports_are_deterministic_and_round_trip() {
    for (name, _) in BUNDLED {
        let sc = bundled(name).unwrap();
        let a = render_report(&run_checks(&sc, &quick()), ReportFormat::Json);
        let b = render_report(&run_checks(&sc, &quick()), ReportFormat::Json);
        assert_eq!(a, b, "{name}");
        let doc: ReportDoc = serde_json::from_str(&a).unwrap();
        let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        assert_eq!(again, a);
    }
}

#[test]
fn scenarios_round_trip_through_canonical_json() {
    for (name, _) in BUNDLED {
        let sc = bundled(name).unwrap();
        let back = parse_scenario(sc.to_json().as_bytes()).unwrap();
        assert_eq!(back, sc, "{name}");
        assert_eq!(back.to_json(), sc.to_json());
    }
}

#[test]
fn text_report_lines() {
    let r = run_checks(&bundled("r7_standard").unwrap(), &quick());
    let text = render_report(&r, ReportFormat::Text);
    assert!(text.lines().any(|l| l == "PASS dα = ι_Rφ (exact)"), "{text}");
    assert!(text.trim_end().ends_with("verdict: pass"));
}

#[test]
fn failing_clause_has_residual_terms_in_json() {
    let src = bundled_source("r7_standard").unwrap();
    let bad = replace(src, r#""R": { "x1": "1" }"#, r#""R": { "x2": "1" }"#);
    let sc = parse_scenario(bad.as_bytes()).unwrap();
    let r = run_checks(&sc, &quick());
    assert_eq!(r.verdict, Verdict::Fail);
    let doc: ReportDoc = serde_json::from_str(&render_report(&r, ReportFormat::Json)).unwrap();
    let clause = doc.checks[0]
        .clauses
        .iter()
        .find(|c| c.label == "dα = ι_Rφ")
        .unwrap();
    match &clause.residual {
        Some(ValueDoc::Form { degree: 2, terms }) => assert!(!terms.is_empty()),
        other => panic!("unexpected residual {other:?}"),
    }
}

#[test]
fn empty_check_list() {
    let src = bundled_source("r7_standard").unwrap();
    let start = src.find(r#""checks": ["#).unwrap();
    let bad = format!("{}\"checks\": []\n}}\n", &src[..start]);
    let sc = parse_scenario(bad.as_bytes()).unwrap();
    let r = run_checks(&sc, &quick());
    assert_eq!(r.verdict, Verdict::NoChecks);
    assert!(render_report(&r, ReportFormat::Text).contains("verdict: no checks"));
}

#[test]
fn check_errors_do_not_abort_the_run() {
    let src = bundled_source("r7_standard").unwrap();
    // A 3-form with an indefinite metric form cannot define a structure, so
    // every structure-based check fails while metric-free checks still run.
    let bad = replace(
        src,
        r#""phi": "standard","#,
        r#""phi": "psi","#,
    );
    let bad = replace(
        &bad,
        r#""forms": {"#,
        r#""forms": { "psi": { "degree": 3, "terms": [ { "index": [1, 2, 3] } ] },"#,
    );
    let bad = replace(
        &bad,
        r#"{ "type": "torsion" }"#,
        r#"{ "type": "torsion" }, { "type": "contact", "alpha": "alpha0" }"#,
    );
    let sc = parse_scenario(bad.as_bytes()).unwrap();
    let r = run_checks(&sc, &quick());
    assert_eq!(r.outcomes.len(), 5);
    assert!(r.outcomes[..4].iter().all(|o| !o.report.passed()));
    assert!(r.outcomes[0].report.clause("check ran").is_some());
    assert!(r.outcomes[4].report.passed());
}

#[test]
fn contraction_contact_check_reports_diagnostic() {
    let src = bundled_source("r7_standard").unwrap();
    let bad = replace(
        src,
        r#""X": { "x7": "1" },"#,
        r#""X": { "x7": "1" }, "X6": { "x6": "1" },"#,
    );
    let bad = replace(
        &bad,
        r#"{ "type": "torsion" }"#,
        r#"{ "type": "contraction_contact", "X": "X", "Y": "X6", "Z": "R" }"#,
    );
    let r = run_checks(&parse_scenario(bad.as_bytes()).unwrap(), &quick());
    assert_eq!(r.verdict, Verdict::Fail);
    let rep = &r.outcomes[3].report;
    assert!(!rep.clause("ι_Zφ = Y♭∧X♭").unwrap().passed());
    assert_eq!(
        rep.clause("α∧(dα)³ = (16/9)‖Z‖⁴ Vol").unwrap().status,
        g2kit::Status::NotAsserted
    );
}
