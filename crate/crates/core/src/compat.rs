//! Compatibility between G2-structures and contact forms: A- and
//! B-compatibility, contact-G2-structures, the hypothesis chain for contact
//! forms built from `ι_Zφ`, and a randomized suite of the algebraic identities
//! that chain relies on.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::contact::{contact_certificate, pairing};
use crate::error::{Error, Result};
use crate::exterior::rational::{self, Rational};
use crate::exterior::{KForm, MultiIndex, Polynomial, VectorField, DIM};
use crate::g2::G2Structure;
use crate::report::{CheckReport, Clause, CompatReport, Mode, Status, Value};
use crate::sampling::{certify_nonvanishing, Nonvanishing, SamplingSpec};

fn nonvanishing_clause(label: &str, p: &Polynomial, sampling: &SamplingSpec) -> Clause {
    clause_from(label, certify_nonvanishing(p, sampling))
}

fn clause_from(label: &str, nv: Nonvanishing) -> Clause {
    let mode = if nv.status == Status::VerifiedOnSamples {
        Mode::Sampled
    } else {
        Mode::Exact
    };
    let mut c = Clause::new(label, nv.status, mode);
    if let Some(w) = nv.witness {
        c.note = Some(format!("vanishes or changes sign at {w}"));
        c.residual = Some(Value::Point(w));
    } else if nv.status == Status::VerifiedOnSamples {
        c.note = nv.min_abs.map(|m| format!("min |value| on samples = {m}"));
    }
    c
}

fn gated(report: &mut CheckReport, premise_ok: bool, clause: Clause, premise: &str) {
    if premise_ok {
        report.push(clause);
    } else {
        report.push(Clause::not_asserted(clause.label, format!("premise failed: {premise}")));
    }
}

/// `dα = ι_Rφ`, `α(R)` nowhere zero and `α` contact. On success `f = 1/α(R)`
/// makes `fR` the Reeb field of `α`, since `ι_R dα = ι_R ι_R φ = 0`.
pub fn check_a_compatible(
    s: &G2Structure,
    alpha: &KForm,
    r: &VectorField,
    sampling: &SamplingSpec,
) -> CompatReport {
    let mut report = CheckReport::new("A-compatibility");
    if alpha.degree() != 1 {
        report.push(Clause::failed("α is a 1-form", format!("degree {}", alpha.degree())));
        return report;
    }
    let da = alpha.d();
    let i_r_phi = s.phi().contract(r);
    report.push(Clause::exact("dα = ι_Rφ", Value::Form(&i_r_phi - &da)));
    let a_r = pairing(alpha, r);
    report.push(nonvanishing_clause("α(R) ≠ 0", &a_r, sampling));
    let cert = contact_certificate(alpha, sampling);
    report.push(cert.to_clause());
    let premise = report.clause("dα = ι_Rφ").is_some_and(Clause::passed);
    gated(
        &mut report,
        premise,
        Clause::exact("ι_R dα = 0", Value::Form(da.contract(r))),
        "dα = ι_Rφ",
    );
    report.derive("α(R)", Value::Scalar(a_r.clone()));
    report.derive("contact volume α∧(dα)³", Value::Form(cert.top));
    if report.passed() {
        match a_r.as_constant() {
            Some(c) => {
                let f = c.recip();
                report.derive("f", Value::Scalar(Polynomial::constant(f.clone())));
                report.derive("Reeb field fR", Value::Field(r.scale_rational(&f)));
            }
            None => {
                report.derive("f", Value::Text(format!("1/({a_r})")));
            }
        }
    }
    report
}

/// `α = ι_Yι_Xφ` exactly, and `α` contact.
pub fn check_b_compatible(
    s: &G2Structure,
    alpha: &KForm,
    x: &VectorField,
    y: &VectorField,
    sampling: &SamplingSpec,
) -> CompatReport {
    let mut report = CheckReport::new("B-compatibility");
    if alpha.degree() != 1 {
        report.push(Clause::failed("α is a 1-form", format!("degree {}", alpha.degree())));
        return report;
    }
    let iyx = s.phi().contract(x).contract(y);
    report.push(Clause::exact("α = ι_Yι_Xφ", Value::Form(alpha - &iyx)));
    let cert = contact_certificate(alpha, sampling);
    report.push(cert.to_clause());
    report.derive("contact volume α∧(dα)³", Value::Form(cert.top));
    report
}

/// A quintuple `(φ, R, α, f, g)` whose functions `f`, `g` and field `R` have been
/// certified nowhere zero. The defining equations `α(R) = f` and `d(gα) = ι_Rφ`
/// are checked by [`check_contact_g2`], not at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactG2Structure {
    pub s: G2Structure,
    pub r: VectorField,
    pub alpha: KForm,
    pub f: Polynomial,
    pub g_fn: Polynomial,
    certificates: [Clause; 3],
}

impl ContactG2Structure {
    pub fn new(
        s: G2Structure,
        r: VectorField,
        alpha: KForm,
        f: Polynomial,
        g_fn: Polynomial,
        sampling: &SamplingSpec,
    ) -> Result<Self> {
        if alpha.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: alpha.degree(),
            });
        }
        let rn = nonvanishing_clause("R ≠ 0", &s.inner(&r, &r), sampling);
        if rn.status.is_failure() {
            return Err(Error::VanishingField(rn.note.unwrap_or_else(|| "R ≡ 0".into())));
        }
        let fc = nonvanishing_clause("f ≠ 0", &f, sampling);
        let gc = nonvanishing_clause("g ≠ 0", &g_fn, sampling);
        for c in [&fc, &gc] {
            if c.status.is_failure() {
                return Err(Error::InvalidInput(format!(
                    "{} fails: {}",
                    c.label,
                    c.note.as_deref().unwrap_or("identically zero")
                )));
            }
        }
        Ok(Self {
            s,
            r,
            alpha,
            f,
            g_fn,
            certificates: [rn, fc, gc],
        })
    }
}

/// The defining clauses `α(R) = f` and `d(gα) = ι_Rφ`, then their consequences
/// for `α' = gα`: the volume identity `α'∧(dα')³ = 6fg‖R‖² Vol`, the Reeb
/// equations for `R' = R/(fg)` and A-compatibility of `(α', R)`.
pub fn check_contact_g2(c: &ContactG2Structure, sampling: &SamplingSpec) -> CompatReport {
    let mut report = CheckReport::new("contact-G2-structure");
    for cert in &c.certificates {
        report.push(cert.clone());
    }
    let phi = c.s.phi();
    let a_r = pairing(&c.alpha, &c.r);
    report.push(Clause::exact("α(R) = f", Value::Scalar(&a_r - &c.f)));
    let alpha1 = c.alpha.scale(&c.g_fn);
    let da1 = alpha1.d();
    let i_r_phi = phi.contract(&c.r);
    report.push(Clause::exact("d(gα) = ι_Rφ", Value::Form(&da1 - &i_r_phi)));
    let defining_ok = report.passed();
    const PREMISE: &str = "α(R) = f and d(gα) = ι_Rφ";

    let top = alpha1.wedge(&da1.wedge_pow(3));
    let fg = &c.f * &c.g_fn;
    let rhs = c.s.vol().scale(&(&fg * &c.s.inner(&c.r, &c.r))).scale_rational(&rational::int(6));
    gated(
        &mut report,
        defining_ok,
        Clause::exact("α'∧(dα')³ = 6fg‖R‖² Vol", Value::Form(&top - &rhs)),
        PREMISE,
    );
    report.derive("α' = gα", Value::Form(alpha1.clone()));
    report.derive("contact volume α'∧(dα')³", Value::Form(top));

    // R' = R/(fg): ι_{R'}dα' = 0 iff ι_R dα' = 0, and α'(R') = 1 iff α'(R) = fg.
    let reeb_note = match fg.as_constant() {
        Some(k) if !k.is_zero() => {
            report.derive("Reeb field R/(fg)", Value::Field(c.r.scale_rational(&k.recip())));
            "fg constant"
        }
        _ => "fg non-constant: checked in the division-free form ι_R dα' = 0, α'(R) = fg",
    };
    gated(
        &mut report,
        defining_ok,
        Clause::exact("ι_{R'} dα' = 0", Value::Form(da1.contract(&c.r))).with_note(reeb_note),
        PREMISE,
    );
    gated(
        &mut report,
        defining_ok,
        Clause::exact("α'(R') = 1", Value::Scalar(&pairing(&alpha1, &c.r) - &fg))
            .with_note(reeb_note),
        PREMISE,
    );

    let induced = check_a_compatible(&c.s, &alpha1, &c.r, sampling);
    for cl in induced.clauses {
        let label = format!("A-compatibility of (gα, R): {}", cl.label);
        if defining_ok {
            report.push(Clause { label, ..cl });
        } else {
            report.push(Clause::not_asserted(label, format!("premise failed: {PREMISE}")));
        }
    }
    report
}

/// Hypotheses `ι_Zφ = Y♭∧X♭` and `d(ι_Xι_Yφ) = ι_Xι_Y∗φ` for nowhere-zero
/// `X, Y, Z`; the conclusions for `α = Z♭` are asserted only when all hold.
///
/// When the first hypothesis fails, the report carries the necessary
/// condition `(ι_Zφ)∧(ι_Zφ)∧φ = (Y♭∧X♭)∧(Y♭∧X♭)∧φ`. The left side is
/// `6‖Z‖² Vol` and the right side vanishes, so the hypothesis cannot hold for
/// nonzero `Z`.
pub fn check_contraction_contact(
    s: &G2Structure,
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    sampling: &SamplingSpec,
) -> CompatReport {
    let mut report = CheckReport::new("contact form from ι_Zφ = Y♭∧X♭");
    for (name, v) in [("X", x), ("Y", y), ("Z", z)] {
        report.push(nonvanishing_clause(&format!("{name} ≠ 0"), &s.inner(v, v), sampling));
    }
    let nonzero_ok = report.passed();
    let phi = s.phi();
    let (xb, yb) = (s.flat(x), s.flat(y));
    let iz_phi = phi.contract(z);
    let yx = yb.wedge(&xb);
    let h1 = Clause::exact("ι_Zφ = Y♭∧X♭", Value::Form(&iz_phi - &yx));
    let h1_ok = h1.passed();
    report.push(h1);
    let lhs2 = phi.contract(y).contract(x).d();
    let rhs2 = s.star_phi().contract(y).contract(x);
    let h2 = Clause::exact("d(ι_Xι_Yφ) = ι_Xι_Y∗φ", Value::Form(&lhs2 - &rhs2));
    let h2_ok = h2.passed();
    report.push(h2);

    if !h1_ok {
        let left = iz_phi.wedge(&iz_phi).wedge(phi);
        let right = yx.wedge(&yx).wedge(phi);
        report.push(
            Clause::exact(
                "(ι_Zφ)∧(ι_Zφ)∧φ = (Y♭∧X♭)∧(Y♭∧X♭)∧φ (necessary for ι_Zφ = Y♭∧X♭)",
                Value::Form(&left - &right),
            )
            .with_note("a decomposable 2-form squares to zero, while (ι_Zφ)²∧φ = 6‖Z‖² Vol"),
        );
        report.derive("(ι_Zφ)∧(ι_Zφ)∧φ", Value::Form(left));
        report.derive("(Y♭∧X♭)∧(Y♭∧X♭)∧φ", Value::Form(right));
    }

    let alpha = s.flat(z);
    let da = alpha.d();
    let c1 = Clause::exact(
        "dα = (2/3) ι_Zφ",
        Value::Form(&da - &iz_phi.scale_rational(&rational::frac(2, 3))),
    );
    let norm4 = s.inner(z, z).pow(2);
    let c2 = Clause::exact(
        "α∧(dα)³ = (16/9)‖Z‖⁴ Vol",
        Value::Form(
            &alpha.wedge(&da.wedge_pow(3))
                - &s.vol().scale(&norm4).scale_rational(&rational::frac(16, 9)),
        ),
    );
    let ok = nonzero_ok && h1_ok && h2_ok;
    for c in [c1, c2] {
        gated(&mut report, ok, c, "nowhere-zero X, Y, Z and both hypotheses");
    }
    report
}

/// Default trial count for [`identity_suite`].
pub const DEFAULT_TRIALS: usize = 500;

const IDENTITY_LABELS: [&str; 8] = [
    "ι_Xι_Y∗φ = −∗(X♭∧Y♭∧φ)",
    "ι_Xι_Yφ = ∗(Y♭∧X♭∧∗φ)",
    "(ι_vφ)∧∗φ = 3∗v♭",
    "(ι_uφ)∧(ι_vφ)∧φ = 6 g(u,v) Vol",
    "u×(u×v) = −‖u‖²v + g(u,v)u",
    "ι_v∗a = (−1)^k ∗(v♭∧a)",
    "ι_v a = (−1)^(k+1) ∗(v♭∧∗a)",
    "(ι_vλ)∧μ = (−1)^(k+1) λ∧(ι_vμ)",
];

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rational::frac(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

fn random_field(rng: &mut ChaCha8Rng) -> VectorField {
    VectorField::constant(&std::array::from_fn(|_| random_rational(rng)))
}

fn random_form(rng: &mut ChaCha8Rng, k: usize) -> KForm {
    let terms: Vec<(MultiIndex, Polynomial)> = MultiIndex::all_of_len(k)
        .into_iter()
        .filter_map(|idx| {
            rng.gen_bool(0.5)
                .then(|| (idx, Polynomial::constant(random_rational(rng))))
        })
        .collect();
    KForm::from_terms(k, terms).expect("lengths match")
}

fn sign(k: usize) -> Rational {
    rational::int(if k % 2 == 0 { 1 } else { -1 })
}

fn trial_residuals(s: &G2Structure, seed: u64, trial: u64) -> [Value; 8] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let (x, y) = (random_field(&mut rng), random_field(&mut rng));
    let phi = s.phi();
    let (xb, yb) = (s.flat(&x), s.flat(&y));
    let star_phi = s.star_phi();

    let a = &star_phi.contract(&y).contract(&x) + &s.star(&xb.wedge(&yb).wedge(phi));
    let b = &phi.contract(&y).contract(&x) - &s.star(&yb.wedge(&xb).wedge(star_phi));
    let c = &phi.contract(&x).wedge(star_phi) - &s.star(&xb).scale_rational(&rational::int(3));
    let d = {
        let lhs = phi.contract(&x).wedge(&phi.contract(&y)).wedge(phi);
        let rhs = s.vol().scale(&s.inner(&x, &y)).scale_rational(&rational::int(6));
        &lhs - &rhs
    };
    let e = {
        let lhs = s.cross(&x, &s.cross(&x, &y));
        let rhs = &x.scale(&s.inner(&x, &y)) - &y.scale(&s.inner(&x, &x));
        &lhs - &rhs
    };
    let k = rng.gen_range(0..DIM);
    let form = random_form(&mut rng, k);
    let ten = &s.star(&form).contract(&x) - &s.star(&xb.wedge(&form)).scale_rational(&sign(k));
    let k1 = rng.gen_range(1..=DIM);
    let form = random_form(&mut rng, k1);
    let eleven =
        &form.contract(&x) - &s.star(&xb.wedge(&s.star(&form))).scale_rational(&sign(k1 + 1));
    let k2 = rng.gen_range(1..=DIM);
    let lambda = random_form(&mut rng, k2);
    let mu = random_form(&mut rng, DIM + 1 - k2);
    let twelve = &lambda.contract(&x).wedge(&mu)
        - &lambda.wedge(&mu.contract(&x)).scale_rational(&sign(k2 + 1));
    [
        Value::Form(a),
        Value::Form(b),
        Value::Form(c),
        Value::Form(d),
        Value::Field(e),
        Value::Form(ten),
        Value::Form(eleven),
        Value::Form(twelve),
    ]
}

/// Checks the contraction/Hodge-star identities used to build contact forms from
/// a G2-structure, on `trials` random constant fields and forms. Each trial has
/// its own deterministic stream, so the report does not depend on scheduling.
pub fn identity_suite(s: &G2Structure, trials: usize, seed: u64) -> CompatReport {
    let results: Vec<[Value; 8]> = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial_residuals(s, seed, t))
        .collect();
    let mut report = CheckReport::new("G2 identity suite");
    for (i, label) in IDENTITY_LABELS.iter().enumerate() {
        let failing: Vec<usize> = results
            .iter()
            .enumerate()
            .filter(|(_, r)| !r[i].is_zero())
            .map(|(t, _)| t)
            .collect();
        let clause = match failing.first() {
            None if trials == 0 => Clause::new(*label, Status::NotAsserted, Mode::Exact)
                .with_note("no trials"),
            None => Clause::new(*label, Status::Proven, Mode::Exact)
                .with_note(format!("{trials} trials, seed {seed}")),
            Some(&t) => Clause::failed(
                *label,
                format!("{} of {trials} trials fail, first at trial {t}", failing.len()),
            )
            .with_residual(results[t][i].clone()),
        };
        report.push(clause);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::rational::{frac, int};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i)
    }

    fn d(i: usize) -> VectorField {
        VectorField::coordinate(i)
    }

    fn alpha0() -> KForm {
        let mut a = KForm::dx(1);
        for (c, dxi) in [(3, 2), (5, 4), (7, 6)] {
            a = &a - &KForm::term(x(c), &[dxi]);
        }
        a
    }

    fn alpha_second() -> KForm {
        let mut a = &KForm::dx(2) + &KForm::term(x(3), &[1]);
        a = &a - &KForm::term(x(6), &[4]);
        &a + &KForm::term(x(7), &[5])
    }

    fn y0() -> VectorField {
        let mut y = -&d(6);
        y = &y - &d(1).scale(&x(7));
        y = &y + &d(3).scale(&x(5));
        &y - &d(5).scale(&x(3))
    }

    fn sampling() -> SamplingSpec {
        SamplingSpec {
            grid: 2,
            samples: 8,
            ..Default::default()
        }
    }

    #[test]
    fn a_compatible_examples() {
        let s = G2Structure::standard();
        let r = check_a_compatible(&s, &alpha0(), &d(1), &sampling());
        assert_eq!(r.status(), Status::Proven);
        assert_eq!(r.derived_value("f"), Some(&Value::Scalar(Polynomial::one())));
        assert!(check_a_compatible(&s, &alpha_second(), &d(2), &sampling()).passed());
        let r = check_a_compatible(&s, &alpha0(), &d(2), &sampling());
        let c = r.clause("dα = ι_Rφ").unwrap();
        assert_eq!(
            c.residual,
            Some(Value::Form(&s.phi().contract(&d(2)) - &alpha0().d()))
        );
        assert_eq!(r.clause("ι_R dα = 0").unwrap().status, Status::NotAsserted);
    }

    #[test]
    fn b_compatible_examples() {
        let s = G2Structure::standard();
        assert!(check_b_compatible(&s, &alpha0(), &d(7), &y0(), &sampling()).passed());
        let shifted = &y0() + &d(7).scale(&x(1));
        assert!(check_b_compatible(&s, &alpha0(), &d(7), &shifted, &sampling()).passed());
        let r = check_b_compatible(&s, &KForm::dx(1), &d(1), &d(2), &sampling());
        assert_eq!(
            r.clause("α = ι_Yι_Xφ").unwrap().residual,
            Some(Value::Form(&KForm::dx(1) - &KForm::dx(3)))
        );
        let second_y = {
            let mut y = &d(5) - &d(6).scale(&x(3));
            y = &y + &d(3).scale(&x(6));
            &y - &d(2).scale(&x(7))
        };
        assert!(check_b_compatible(&s, &alpha_second(), &d(7), &second_y, &sampling()).passed());
    }

    #[test]
    fn contact_g2_examples() {
        let s = G2Structure::standard();
        let c = ContactG2Structure::new(
            s.clone(),
            d(1),
            alpha0(),
            Polynomial::one(),
            Polynomial::one(),
            &sampling(),
        )
        .unwrap();
        let r = check_contact_g2(&c, &sampling());
        assert!(r.passed(), "{r:#?}");
        assert_eq!(
            r.derived_value("contact volume α'∧(dα')³"),
            Some(&Value::Form(KForm::coordinate_volume().scale_rational(&int(6))))
        );
        let c = ContactG2Structure::new(
            s.clone(),
            d(1),
            alpha0(),
            Polynomial::one(),
            Polynomial::constant(frac(-3, 2)),
            &sampling(),
        )
        .unwrap();
        let r = check_contact_g2(&c, &sampling());
        assert_eq!(
            r.clause("d(gα) = ι_Rφ").unwrap().residual,
            Some(Value::Form(s.phi().contract(&d(1)).scale_rational(&frac(-5, 2))))
        );
        assert_eq!(
            r.clause("α'∧(dα')³ = 6fg‖R‖² Vol").unwrap().status,
            Status::NotAsserted
        );
        assert!(ContactG2Structure::new(
            s.clone(),
            d(1),
            alpha0(),
            Polynomial::zero(),
            Polynomial::one(),
            &sampling()
        )
        .is_err());
        assert!(matches!(
            ContactG2Structure::new(
                s,
                VectorField::zero(),
                alpha0(),
                Polynomial::one(),
                Polynomial::one(),
                &sampling()
            ),
            Err(Error::VanishingField(_))
        ));
    }

    #[test]
    fn contraction_hypothesis_fails_with_diagnostic() {
        let s = G2Structure::standard();
        let r = check_contraction_contact(&s, &d(7), &d(6), &d(1), &sampling());
        let h1 = r.clause("ι_Zφ = Y♭∧X♭").unwrap();
        assert_eq!(h1.status, Status::Failed);
        let expect = &(&KForm::basis(&[2, 3]) + &KForm::basis(&[4, 5])) + &KForm::basis(&[6, 7]);
        // Y♭∧X♭ = dx6∧dx7 here.
        assert_eq!(s.phi().contract(&d(1)), expect);
        assert_eq!(
            r.derived_value("(ι_Zφ)∧(ι_Zφ)∧φ"),
            Some(&Value::Form(KForm::coordinate_volume().scale_rational(&int(6))))
        );
        assert_eq!(
            r.derived_value("(Y♭∧X♭)∧(Y♭∧X♭)∧φ"),
            Some(&Value::Form(KForm::zero(DIM)))
        );
        assert_eq!(r.clause("dα = (2/3) ι_Zφ").unwrap().status, Status::NotAsserted);
        let r = check_contraction_contact(&s, &d(7), &d(6), &VectorField::zero(), &sampling());
        assert_eq!(r.clause("Z ≠ 0").unwrap().status, Status::Failed);
    }

    #[test]
    fn identity_examples() {
        let s = G2Structure::standard();
        let star_phi = s.star_phi();
        let lhs = s.phi().contract(&d(1)).wedge(star_phi);
        assert_eq!(lhs, KForm::basis(&[2, 3, 4, 5, 6, 7]).scale_rational(&int(3)));
        assert_eq!(lhs, s.star(&KForm::dx(1)).scale_rational(&int(3)));
        let direct = s.phi().contract(&d(6)).contract(&d(7));
        let via_star = s.star(&s.flat(&d(6)).wedge(&s.flat(&d(7))).wedge(star_phi));
        assert_eq!(direct, via_star);
        let r = identity_suite(&s, 40, 7);
        assert_eq!(r.status(), Status::Proven, "{r:#?}");
        assert_eq!(r, identity_suite(&s, 40, 7));
    }
}
