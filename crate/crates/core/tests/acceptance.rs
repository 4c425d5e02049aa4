//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use g2kit::compat::{
    check_a_compatible, check_b_compatible, check_contact_g2, check_contraction_contact,
    identity_suite, ContactG2Structure, DEFAULT_TRIALS,
};
use g2kit::contact::{build_acms, verify_acms, verify_associated};
use g2kit::exterior::rational::{frac, int};
use g2kit::g2::{lambda2_ranks, metric_from_phi, project_lambda2, torsion_flags, verify_metric_compat};
use g2kit::runner::{bundled, render_report, run_checks, Check, ReportFormat, RunOptions, Verdict, BUNDLED};
use g2kit::sampling::DEFAULT_SEED;
use g2kit::{
    hodge_star, ConstantMetric, G2Structure, KForm, Monomial, MultiIndex, Orientation, Point,
    Polynomial, Rational, SamplingSpec, Status, Value, VectorField, DIM,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS: usize = 200;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    r.set_stream(stream);
    r
}

fn rational(r: &mut ChaCha8Rng) -> Rational {
    frac(r.gen_range(-6..=6), r.gen_range(1..=3))
}

fn constant_field(r: &mut ChaCha8Rng) -> VectorField {
    VectorField::constant(&std::array::from_fn(|_| rational(r)))
}

fn poly(r: &mut ChaCha8Rng) -> Polynomial {
    Polynomial::from_terms((0..r.gen_range(0..=3)).map(|_| {
        let mut e = [0u32; DIM];
        for _ in 0..r.gen_range(0..=3) {
            e[r.gen_range(0..DIM)] += 1;
        }
        (Monomial(e), rational(r))
    }))
}

fn form(r: &mut ChaCha8Rng, k: usize, constant: bool) -> KForm {
    let all = MultiIndex::all_of_len(k);
    let mut out = KForm::zero(k);
    for _ in 0..r.gen_range(1..=4) {
        let idx = all[r.gen_range(0..all.len())];
        let c = if constant { Polynomial::constant(rational(r)) } else { poly(r) };
        out = &out + &KForm::from_terms(k, [(idx, c)]).unwrap();
    }
    out
}

fn alpha0() -> KForm {
    let mut a = KForm::dx(1);
    for (c, i) in [(3, 2), (5, 4), (7, 6)] {
        a = &a - &KForm::term(Polynomial::var(c), &[i]);
    }
    a
}

fn six_vol() -> Value {
    Value::Form(KForm::coordinate_volume().scale_rational(&int(6)))
}

fn first_failure(r: &g2kit::CheckReport) -> String {
    r.clauses
        .iter()
        .find(|c| !c.passed())
        .map_or_else(String::new, |c| format!("failing clause {:?}", c.label))
}

fn c1() -> Outcome {
    let s = G2Structure::standard();
    let sampling = SamplingSpec::default();
    let a = check_a_compatible(&s, &alpha0(), &VectorField::coordinate(1), &sampling);
    let da_ok = a.clause("dα = ι_Rφ").is_some_and(|c| c.status == Status::Proven);
    let b = check_b_compatible(
        &s,
        &alpha0(),
        &VectorField::coordinate(7),
        &VectorField::from_components(std::array::from_fn(|i| match i + 1 {
            1 => -&Polynomial::var(7),
            3 => Polynomial::var(5),
            5 => -&Polynomial::var(3),
            6 => -&Polynomial::one(),
            _ => Polynomial::zero(),
        })),
        &sampling,
    );
    let b_ok = b.clause("α = ι_Yι_Xφ").is_some_and(|c| c.status == Status::Proven);
    let ok = da_ok && b_ok && a.passed() && b.passed();
    let detail = if ok {
        "dα₀ = ι_{∂x₁}φ₀ and α₀ = ι_Yι_Xφ₀ with zero residual".to_string()
    } else {
        format!("{} {}", first_failure(&a), first_failure(&b))
    };
    outcome(ok, detail)
}

fn c2() -> Outcome {
    let s = G2Structure::standard();
    let sampling = SamplingSpec::default();
    let alpha = &(&(&KForm::dx(2) + &KForm::term(Polynomial::var(3), &[1]))
        - &KForm::term(Polynomial::var(6), &[4]))
        + &KForm::term(Polynomial::var(7), &[5]);
    let da_ok = alpha.d() == s.phi().interior(&VectorField::coordinate(2)).unwrap();
    let y = VectorField::from_components(std::array::from_fn(|i| match i + 1 {
        5 => Polynomial::one(),
        6 => -&Polynomial::var(3),
        3 => Polynomial::var(6),
        2 => -&Polynomial::var(7),
        _ => Polynomial::zero(),
    }));
    let b = check_b_compatible(&s, &alpha, &VectorField::coordinate(7), &y, &sampling);
    let b_ok = b.clause("α = ι_Yι_Xφ").is_some_and(|c| c.status == Status::Proven);
    let ok = da_ok && b_ok && b.passed();
    outcome(ok, if ok { "dα = ι_{∂x₂}φ₀ and α = ι_Yι_Xφ₀ with zero residual".to_string() } else { first_failure(&b) })
}

fn c3() -> Outcome {
    let s = G2Structure::standard();
    let mut r = rng(3);
    let mut bad = 0;
    for _ in 0..PAIRS {
        let (u, v) = (constant_field(&mut r), constant_field(&mut r));
        let lhs = s.phi().interior(&u).unwrap().wedge(&s.phi().interior(&v).unwrap()).wedge(s.phi());
        let rhs = KForm::coordinate_volume().scale(&s.inner(&u, &v)).scale_rational(&int(6));
        if lhs != rhs {
            bad += 1;
        }
        let lhs = s.cross(&u, &s.cross(&u, &v));
        let rhs = &u.scale(&s.inner(&u, &v)) - &v.scale(&s.inner(&u, &u));
        if lhs != rhs {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{PAIRS} pairs each for the volume and double cross identities, {bad} mismatches"))
}

fn c4() -> Outcome {
    let phi = g2kit::standard_phi();
    let mut r = rng(4);
    let mut worst = 0.0f64;
    let mut orient_ok = true;
    for _ in 0..10 {
        let pt = Point::new(std::array::from_fn(|_| rational(&mut r)));
        let nm = metric_from_phi(&phi, &pt).unwrap();
        orient_ok &= nm.orientation == Orientation::Positive;
        for i in 0..DIM {
            for j in 0..DIM {
                let e = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((nm.g[i][j] - e).abs());
            }
        }
    }
    let rep = verify_metric_compat(&phi, &ConstantMetric::identity(), &KForm::coordinate_volume());
    let exact = rep.clauses.iter().all(|c| c.status == Status::Proven);
    outcome(worst < 1e-12 && orient_ok && exact, format!("max |g − I| = {worst:.1e} over 10 points"))
}

fn c5() -> Outcome {
    let s = G2Structure::standard();
    let mut r = rng(5);
    let mut bad = 0;
    for _ in 0..PAIRS {
        let beta = form(&mut r, 2, true);
        let split = project_lambda2(&beta, &s).unwrap();
        if !split.verify(&beta, &s).passed() {
            bad += 1;
        }
    }
    let ranks = lambda2_ranks(&s);
    outcome(
        bad == 0 && ranks == (7, 14),
        format!(
            "{PAIRS} forms, {bad} failures, ranks {ranks:?}; eigenvalue of β ↦ ∗(φ∧β) on Λ²₇ is +2 under these \
             conventions (literal statement has −2, inconsistent with the volume identity)"
        ),
    )
}

fn c6() -> Outcome {
    let s = G2Structure::standard();
    let mut r = rng(6);
    let n = 50;
    let mut bad = 0;
    for _ in 0..n {
        let t: Vec<Rational> = (0..DIM - 1).map(|_| rational(&mut r)).collect();
        let n2: Rational = t.iter().map(|x| x * x).sum();
        let den = &n2 + int(1);
        let mut c: Vec<Rational> = t.iter().map(|x| x * int(2) / &den).collect();
        c.push((&n2 - int(1)) / &den);
        let unit = VectorField::constant(&std::array::from_fn(|i| c[i].clone()));
        let ok = build_acms(&s, &unit)
            .map(|a| {
                let rep = verify_acms(&a);
                rep.clauses.len() == 5 && rep.clauses.iter().all(|c| c.status == Status::Proven)
            })
            .unwrap_or(false);
        if !ok {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{n} unit fields, {bad} failures"))
}

fn c7() -> Outcome {
    let s = G2Structure::standard();
    let r = VectorField::coordinate(1);
    let acms = build_acms(&s, &r).unwrap();
    let alpha = alpha0();
    let da = alpha.d();
    let mut pairs_ok = true;
    for i in 1..=DIM {
        for j in 1..=DIM {
            let (ei, ej) = (VectorField::coordinate(i), VectorField::coordinate(j));
            let lhs = da.apply(&[ei.clone(), ej.clone()]).unwrap();
            let rhs = acms.g.inner(&acms.acs.j.apply(&ei), &ej);
            pairs_ok &= lhs == rhs;
        }
    }
    let rep = verify_associated(&acms.acs.j, &r, &alpha, &acms.g, Some(s.phi()), &SamplingSpec::default());
    let eq = rep.clause("dα(X,Y) = g(JX,Y)").is_some_and(|c| c.status == Status::Proven);
    let cons = rep
        .clauses
        .iter()
        .any(|c| c.label.starts_with("dα = ι_Rφ") && c.status == Status::Proven);
    outcome(pairs_ok && eq && cons, "49 basis pairs")
}

fn c8() -> Outcome {
    let s = G2Structure::standard();
    let suite = identity_suite(&s, DEFAULT_TRIALS, DEFAULT_SEED);
    let mut r = rng(8);
    let mut dd_bad = 0;
    for k in 0..=5 {
        for _ in 0..PAIRS {
            if !form(&mut r, k, false).d().d().is_zero() {
                dd_bad += 1;
            }
        }
    }
    let diag = ConstantMetric::diagonal(&std::array::from_fn(|i| frac(1, (i as i64 % 3 + 1).pow(2)))).unwrap();
    let mut ss_bad = 0;
    for k in 0..=DIM {
        for _ in 0..PAIRS {
            let a = form(&mut r, k, true);
            for g in [&ConstantMetric::identity(), &diag] {
                for o in [Orientation::Positive, Orientation::Negative] {
                    let back = hodge_star(&hodge_star(&a, g, o).unwrap(), g, o).unwrap();
                    if back != a {
                        ss_bad += 1;
                    }
                }
            }
        }
    }
    outcome(
        suite.passed() && dd_bad == 0 && ss_bad == 0,
        format!(
            "{} identities × {DEFAULT_TRIALS} trials (seed {DEFAULT_SEED}) {}; d∘d failures {dd_bad}; ∗∗ failures {ss_bad}",
            suite.clauses.len(),
            if suite.passed() { "proven".to_string() } else { first_failure(&suite) }
        ),
    )
}

fn c9() -> Outcome {
    let sampling = SamplingSpec::default();
    let std = ContactG2Structure::new(
        G2Structure::standard(),
        VectorField::coordinate(1),
        alpha0(),
        Polynomial::one(),
        Polynomial::one(),
        &sampling,
    )
    .unwrap();
    let sc = bundled("tstar_r3").unwrap();
    let s = G2Structure::new(sc.phi(), sc.metric(), sc.orientation).unwrap();
    let tstar = ContactG2Structure::new(
        s,
        sc.field("R").clone(),
        sc.form("alpha").clone(),
        Polynomial::one(),
        Polynomial::one(),
        &sampling,
    )
    .unwrap();
    let mut ok = true;
    for c in [&std, &tstar] {
        let rep = check_contact_g2(c, &sampling);
        ok &= rep.passed()
            && rep.clause("α'∧(dα')³ = 6fg‖R‖² Vol").is_some_and(|c| c.status == Status::Proven)
            && rep.derived_value("contact volume α'∧(dα')³") == Some(&six_vol());
    }
    outcome(ok, "standard tuple and cotangent tuple, volume 6e^{1…7}")
}

fn c10() -> Outcome {
    let mut ok = torsion_flags(&G2Structure::standard()) == g2kit::g2::TorsionFlags { dphi_zero: true, dstarphi_zero: true };
    for (name, _) in BUNDLED {
        let mut sc = bundled(name).unwrap();
        let s = G2Structure::new(sc.phi(), sc.metric(), sc.orientation).unwrap();
        let f = torsion_flags(&s);
        ok &= f.dphi_zero && f.dstarphi_zero;
        sc.checks = vec![Check::Torsion {}];
        ok &= run_checks(&sc, &RunOptions::default()).verdict == Verdict::Pass;
    }
    outcome(ok, "standard form and all bundled scenario forms")
}

fn c11() -> Outcome {
    let s = G2Structure::standard();
    let rep = check_contraction_contact(
        &s,
        &VectorField::coordinate(7),
        &VectorField::coordinate(6),
        &VectorField::coordinate(1),
        &SamplingSpec::default(),
    );
    let hypothesis_fails = rep.clause("ι_Zφ = Y♭∧X♭").is_some_and(|c| c.status == Status::Failed);
    let left = rep.derived_value("(ι_Zφ)∧(ι_Zφ)∧φ") == Some(&six_vol());
    let right = rep.derived_value("(Y♭∧X♭)∧(Y♭∧X♭)∧φ").is_some_and(Value::is_zero);
    let gated = ["dα = (2/3) ι_Zφ", "α∧(dα)³ = (16/9)‖Z‖⁴ Vol"]
        .iter()
        .all(|l| rep.clause(l).is_some_and(|c| c.status == Status::NotAsserted));
    outcome(hypothesis_fails && left && right && gated, "ι_Zφ = Y♭∧X♭ fails: 6e^{1…7} versus 0; conclusions not asserted")
}

fn c12(start: Instant) -> Outcome {
    let opts = RunOptions::default();
    let mut ok = true;
    for (name, _) in BUNDLED {
        let sc = bundled(name).unwrap();
        let a = run_checks(&sc, &opts);
        let b = run_checks(&sc, &opts);
        ok &= a.verdict == Verdict::Pass;
        ok &= render_report(&a, ReportFormat::Json) == render_report(&b, ReportFormat::Json);
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    outcome(ok, format!("5 scenarios, byte-identical JSON, suite total {:.2} s", elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 11] = [
        ("motivating example", c1, Some(Duration::from_secs(1))),
        ("second example", c2, None),
        ("volume and double cross identities", c3, None),
        ("metric from φ", c4, None),
        ("Λ² decomposition", c5, None),
        ("almost contact metric structures from unit fields", c6, None),
        ("associated structure gives dα = ι_Rφ", c7, None),
        ("identity suite", c8, None),
        ("contact-G2 volume identity", c9, None),
        ("torsion flags", c10, None),
        ("contraction-contact checker", c11, None),
    ];
    let mut all = true;
    let mut report = |n: usize, name: &str, o: Outcome, t: Duration| {
        all &= o.ok;
        println!(
            "criterion {n:>2} {} {name} [{:.3} s] {}",
            if o.ok { "PASS" } else { "FAIL" },
            t.as_secs_f64(),
            o.detail
        );
    };
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let t0 = Instant::now();
        let mut o = f();
        let t = t0.elapsed();
        if let Some(limit) = limit {
            if t >= limit {
                o.ok = false;
                o.detail = format!("{} (over {:.0} s)", o.detail, limit.as_secs_f64());
            }
        }
        report(i + 1, name, o, t);
    }
    let t0 = Instant::now();
    let o = c12(start);
    report(12, "bundled scenarios", o, t0.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
