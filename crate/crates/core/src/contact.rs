//! Contact forms, Reeb fields and almost contact (metric) structures.

use nalgebra::SMatrix;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::rational::{self, Rational};
use crate::exterior::{ConstantMetric, KForm, Point, Polynomial, VectorField, DIM};
use crate::g2::G2Structure;
use crate::report::{CheckReport, Clause, Mode, Status, Value};
use crate::sampling::{certify_nonvanishing, SamplingSpec};

/// Evidence that `α ∧ (dα)³` is (or is not) nowhere zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactCertificate {
    pub alpha: KForm,
    /// `α ∧ (dα)³`.
    pub top: KForm,
    pub status: Status,
    pub witness: Option<Point>,
    pub min_abs: Option<f64>,
}

impl ContactCertificate {
    pub fn is_contact(&self) -> bool {
        !self.status.is_failure()
    }

    pub fn to_clause(&self) -> Clause {
        let mode = match self.status {
            Status::VerifiedOnSamples => Mode::Sampled,
            _ => Mode::Exact,
        };
        let mut c = Clause::new("α∧(dα)³ ≠ 0", self.status, mode);
        if self.status.is_failure() {
            c.residual = Some(Value::Form(self.top.clone()));
            if let Some(w) = &self.witness {
                c.note = Some(format!("vanishes or changes sign at {w}"));
            }
        } else if self.status == Status::VerifiedOnSamples {
            c.note = self.min_abs.map(|m| format!("min |coefficient| on samples = {m}"));
        }
        c
    }
}

/// Computes `α ∧ (dα)³` exactly; a nonzero constant coefficient is a proof,
/// otherwise the coefficient is checked for zeros and sign changes on the grid.
pub fn contact_certificate(alpha: &KForm, sampling: &SamplingSpec) -> ContactCertificate {
    if alpha.degree() != 1 {
        return ContactCertificate {
            alpha: alpha.clone(),
            top: KForm::zero(DIM),
            status: Status::Failed,
            witness: None,
            min_abs: None,
        };
    }
    let top = alpha.wedge(&alpha.d().wedge_pow(3));
    let nv = certify_nonvanishing(&top.top_coefficient(), sampling);
    ContactCertificate {
        alpha: alpha.clone(),
        top,
        status: nv.status,
        witness: nv.witness,
        min_abs: nv.min_abs,
    }
}

fn two_form_matrix_at(f: &KForm, pt: &Point) -> Vec<Vec<Rational>> {
    let local = f.at_point(pt);
    let mut m = vec![vec![rational::zero(); DIM]; DIM];
    for (idx, c) in local.terms() {
        let axes: Vec<usize> = idx.axes().collect();
        let v = c.as_constant().expect("evaluated");
        m[axes[0] - 1][axes[1] - 1] = v.clone();
        m[axes[1] - 1][axes[0] - 1] = -v;
    }
    m
}

/// Unique `R` with `ι_R dα = 0` and `α(R) = 1` at a rational point, by exact elimination.
pub fn reeb_solve(alpha: &KForm, pt: &Point) -> Result<[Rational; DIM]> {
    if alpha.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: alpha.degree(),
        });
    }
    let a = two_form_matrix_at(&alpha.d(), pt);
    let kernel = rational::nullspace(&a, DIM);
    if kernel.len() != 1 {
        return Err(Error::DegenerateContact(pt.to_string(), kernel.len()));
    }
    let r0 = &kernel[0];
    let local = alpha.at_point(pt);
    let ar0: Rational = (1..=DIM)
        .map(|i| local.coefficient_at(&[i]).as_constant().expect("evaluated") * &r0[i - 1])
        .sum();
    if ar0.is_zero() {
        return Err(Error::AlphaVanishesOnKernel(pt.to_string()));
    }
    Ok(std::array::from_fn(|i| &r0[i] / &ar0))
}

/// Floating-point Reeb solve; singular values below `tol` count as kernel.
pub fn reeb_solve_f64(alpha: &KForm, pt: &[f64; DIM], tol: f64) -> Result<[f64; DIM]> {
    if alpha.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: alpha.degree(),
        });
    }
    let da = alpha.d();
    let mut a = SMatrix::<f64, DIM, DIM>::zeros();
    for (idx, c) in da.terms() {
        let axes: Vec<usize> = idx.axes().collect();
        let v = c.eval_f64(pt);
        a[(axes[0] - 1, axes[1] - 1)] = v;
        a[(axes[1] - 1, axes[0] - 1)] = -v;
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let small: Vec<usize> = (0..DIM).filter(|&i| svd.singular_values[i] < tol).collect();
    let where_ = format!("{pt:?}");
    if small.len() != 1 {
        return Err(Error::DegenerateContact(where_, small.len()));
    }
    let r0: [f64; DIM] = std::array::from_fn(|j| v_t[(small[0], j)]);
    let ar0: f64 = (1..=DIM)
        .map(|i| alpha.coefficient_at(&[i]).eval_f64(pt) * r0[i - 1])
        .sum();
    if ar0.abs() < tol {
        return Err(Error::AlphaVanishesOnKernel(where_));
    }
    Ok(std::array::from_fn(|i| r0[i] / ar0))
}

/// `α(R)` as a polynomial.
pub fn pairing(alpha: &KForm, r: &VectorField) -> Polynomial {
    alpha.contract(r).coefficient(crate::exterior::MultiIndex::EMPTY)
}

/// Exact check of `ι_R dα = 0` and `α(R) = 1`.
pub fn reeb_verify(alpha: &KForm, r: &VectorField) -> CheckReport {
    let mut report = CheckReport::new("Reeb field");
    if alpha.degree() != 1 {
        report.push(Clause::failed("α is a 1-form", format!("degree {}", alpha.degree())));
        return report;
    }
    report.push(Clause::exact("ι_R dα = 0", Value::Form(alpha.d().contract(r))));
    report.push(Clause::exact(
        "α(R) = 1",
        Value::Scalar(&pairing(alpha, r) - &Polynomial::one()),
    ));
    report
}

/// Endomorphism field in the coordinate frame: `entry(i, j)` is the `∂x_i`
/// component of `J(∂x_j)` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Endomorphism([[Polynomial; DIM]; DIM]);

impl Endomorphism {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            m.0[i][i] = Polynomial::one();
        }
        m
    }

    /// From the images of the coordinate fields.
    pub fn from_columns(cols: &[VectorField; DIM]) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| cols[j].component(i + 1).clone())
        }))
    }

    /// `(α ⊗ R)(u) = α(u) R`.
    pub fn tensor(alpha: &KForm, r: &VectorField) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| r.component(i + 1) * &alpha.coefficient_at(&[j + 1]))
        }))
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.0[i - 1][j - 1]
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        self.0.iter().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> VectorField {
        VectorField::from_components(std::array::from_fn(|i| self.0[i][j - 1].clone()))
    }

    pub fn apply(&self, v: &VectorField) -> VectorField {
        VectorField::from_components(std::array::from_fn(|i| {
            let mut c = Polynomial::zero();
            for j in 0..DIM {
                if !self.0[i][j].is_zero() && !v.components()[j].is_zero() {
                    c += &(&self.0[i][j] * &v.components()[j]);
                }
            }
            c
        }))
    }

    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        let cols: [VectorField; DIM] = std::array::from_fn(|j| self.apply(&other.column(j + 1)));
        Self::from_columns(&cols)
    }

    pub fn add(&self, other: &Endomorphism) -> Endomorphism {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| &self.0[i][j] + &other.0[i][j])))
    }

    pub fn sub(&self, other: &Endomorphism) -> Endomorphism {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| &self.0[i][j] - &other.0[i][j])))
    }

    pub fn at_point(&self, pt: &Point) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| Polynomial::constant(self.0[i][j].eval(pt)))
        }))
    }
}

/// `(J, R, α)` with `α(R) = 1` and `J² = −I + α ⊗ R`, both verified exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostContactStructure {
    pub j: Endomorphism,
    pub r: VectorField,
    pub alpha: KForm,
}

impl AlmostContactStructure {
    pub fn new(j: Endomorphism, r: VectorField, alpha: KForm) -> Result<Self> {
        let report = verify_acs(&j, &r, &alpha);
        if !report.passed() {
            return Err(Error::InvalidInput(format!(
                "not an almost contact structure: {}",
                failing_labels(&report)
            )));
        }
        Ok(Self { j, r, alpha })
    }
}

/// An almost contact structure with a metric satisfying `g(Ju, Jv) = g(u, v) − α(u)α(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostContactMetricStructure {
    pub acs: AlmostContactStructure,
    pub g: ConstantMetric,
}

impl AlmostContactMetricStructure {
    pub fn new(acs: AlmostContactStructure, g: ConstantMetric) -> Result<Self> {
        let c = metric_clause(&acs.j, &acs.alpha, &g);
        if !c.passed() {
            return Err(Error::InvalidInput(
                "metric is not compatible with the almost contact structure".into(),
            ));
        }
        Ok(Self { acs, g })
    }

    pub fn verify_associated(&self, phi: Option<&KForm>, sampling: &SamplingSpec) -> CheckReport {
        verify_associated(&self.acs.j, &self.acs.r, &self.acs.alpha, &self.g, phi, sampling)
    }
}

fn failing_labels(r: &CheckReport) -> String {
    r.clauses
        .iter()
        .filter(|c| c.status.is_failure())
        .map(|c| c.label.clone())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Exact checks of `α(R) = 1`, `J² = −I + α⊗R`, `J(R) = 0` and `α∘J = 0`.
///
/// The last two follow from the first two; all four are checked independently.
pub fn verify_acs(j: &Endomorphism, r: &VectorField, alpha: &KForm) -> CheckReport {
    let mut report = CheckReport::new("almost contact structure");
    if alpha.degree() != 1 {
        report.push(Clause::failed("α is a 1-form", format!("degree {}", alpha.degree())));
        return report;
    }
    report.push(Clause::exact(
        "α(R) = 1",
        Value::Scalar(&pairing(alpha, r) - &Polynomial::one()),
    ));
    let target = Endomorphism::tensor(alpha, r).sub(&Endomorphism::identity());
    report.push(Clause::exact(
        "J² = −I + α⊗R",
        Value::Matrix(j.compose(j).sub(&target).rows()),
    ));
    report.push(Clause::exact("J(R) = 0", Value::Field(j.apply(r))));
    // (α∘J)_k = Σ_i α_i J_ik.
    let alpha_j = KForm::from_terms(
        1,
        (1..=DIM).map(|k| {
            let mut c = Polynomial::zero();
            for i in 1..=DIM {
                c += &(&alpha.coefficient_at(&[i]) * j.entry(i, k));
            }
            (
                crate::exterior::MultiIndex::from_axes(&[k]).expect("single axis"),
                c,
            )
        }),
    )
    .expect("degree 1");
    report.push(Clause::exact("α∘J = 0", Value::Form(alpha_j)));
    report
}

fn metric_clause(j: &Endomorphism, alpha: &KForm, g: &ConstantMetric) -> Clause {
    let cols: Vec<VectorField> = (1..=DIM).map(|k| j.column(k)).collect();
    let residual: Vec<Vec<Polynomial>> = (1..=DIM)
        .map(|a| {
            (1..=DIM)
                .map(|b| {
                    let lhs = g.inner(&cols[a - 1], &cols[b - 1]);
                    let rhs = &Polynomial::constant(g.entry(a, b).clone())
                        - &(&alpha.coefficient_at(&[a]) * &alpha.coefficient_at(&[b]));
                    &lhs - &rhs
                })
                .collect()
        })
        .collect();
    Clause::exact("g(Ju,Jv) = g(u,v) − α(u)α(v)", Value::Matrix(residual))
}

/// [`verify_acs`] plus the metric identity `g(Ju,Jv) = g(u,v) − α(u)α(v)`.
pub fn verify_acms(acms: &AlmostContactMetricStructure) -> CheckReport {
    let mut report = verify_acs(&acms.acs.j, &acms.acs.r, &acms.acs.alpha);
    report.title = "almost contact metric structure".into();
    report.push(metric_clause(&acms.acs.j, &acms.acs.alpha, &acms.g));
    report
}

/// `(J_R, R/‖R‖, g(R/‖R‖, ·), g)` with `J_R(u) = R/‖R‖ × u`, re-verified exactly.
pub fn build_acms(s: &G2Structure, r: &VectorField) -> Result<AlmostContactMetricStructure> {
    if r.is_zero() {
        return Err(Error::VanishingField("R is the zero field".into()));
    }
    let norm_sq = s.inner(r, r);
    let Some(n2) = norm_sq.as_constant() else {
        return Err(Error::ExactModeUnavailable(format!(
            "‖R‖² = {norm_sq} is not constant; use build_acms_numeric at a point"
        )));
    };
    if !n2.is_positive() {
        return Err(Error::VanishingField(format!("‖R‖² = {n2}")));
    }
    let Some(n) = rational::sqrt_exact(&n2) else {
        return Err(Error::ExactModeUnavailable(format!(
            "‖R‖ = sqrt({n2}) is irrational; use build_acms_numeric at a point"
        )));
    };
    let unit = r.scale_rational(&n.recip());
    let alpha = s.flat(&unit);
    let cols: [VectorField; DIM] = std::array::from_fn(|j| s.cross(&unit, &VectorField::coordinate(j + 1)));
    let j = Endomorphism::from_columns(&cols);
    let acs = AlmostContactStructure::new(j, unit, alpha)?;
    AlmostContactMetricStructure::new(acs, s.metric().clone())
}

/// Pointwise floating-point construction for fields without rational unit norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericAcms {
    pub j: [[f64; DIM]; DIM],
    pub r: [f64; DIM],
    pub alpha: [f64; DIM],
    /// Largest entry of the residuals of `α(R) = 1`, `J² = −I + α⊗R` and the metric identity.
    pub max_residual: f64,
}

pub fn build_acms_numeric(s: &G2Structure, r: &VectorField, pt: &[f64; DIM]) -> Result<NumericAcms> {
    let g: SMatrix<f64, DIM, DIM> =
        SMatrix::from_fn(|i, j| rational::to_f64(s.metric().entry(i + 1, j + 1)));
    let ginv = g.try_inverse().expect("metric is invertible");
    let rv = nalgebra::SVector::<f64, DIM>::from_fn(|i, _| r.component(i + 1).eval_f64(pt));
    let n2 = (rv.transpose() * g * rv)[(0, 0)];
    if n2 <= 0.0 {
        return Err(Error::VanishingField(format!("R vanishes at {pt:?}")));
    }
    let unit = rv / n2.sqrt();
    let alpha = g * unit;
    // φ_{abc} at the point.
    let phi_at = |a: usize, b: usize, c: usize| -> f64 {
        let mut idx = [a, b, c];
        if a == b || b == c || a == c {
            return 0.0;
        }
        let mut sign = 1.0;
        for i in 0..3 {
            for k in 0..2 - i {
                if idx[k] > idx[k + 1] {
                    idx.swap(k, k + 1);
                    sign = -sign;
                }
            }
        }
        sign * s.phi().coefficient_at(&idx).eval_f64(pt)
    };
    let mut jm = SMatrix::<f64, DIM, DIM>::zeros();
    for col in 0..DIM {
        // (unit × e_col)^k = Σ_l g^{kl} φ(unit, e_col, e_l)
        for k in 0..DIM {
            let mut acc = 0.0;
            for l in 0..DIM {
                let mut p = 0.0;
                for a in 0..DIM {
                    p += unit[a] * phi_at(a + 1, col + 1, l + 1);
                }
                acc += ginv[(k, l)] * p;
            }
            jm[(k, col)] = acc;
        }
    }
    let id = SMatrix::<f64, DIM, DIM>::identity();
    let r1 = (alpha.dot(&unit) - 1.0).abs();
    let r2 = (jm * jm + id - unit * alpha.transpose()).amax();
    let r3 = (jm.transpose() * g * jm - g + alpha * alpha.transpose()).amax();
    Ok(NumericAcms {
        j: std::array::from_fn(|i| std::array::from_fn(|k| jm[(i, k)])),
        r: std::array::from_fn(|i| unit[i]),
        alpha: std::array::from_fn(|i| alpha[i]),
        max_residual: r1.max(r2).max(r3),
    })
}

fn matrix_residual(m: Vec<Vec<Polynomial>>) -> Value {
    let antisymmetric = (0..DIM).all(|i| (0..DIM).all(|j| m[i][j] == -&m[j][i]));
    if antisymmetric {
        let terms = (0..DIM).flat_map(|i| {
            let row = m[i].clone();
            (i + 1..DIM).map(move |j| {
                (
                    crate::exterior::MultiIndex::from_axes(&[i + 1, j + 1]).expect("i < j"),
                    row[j].clone(),
                )
            })
        });
        Value::Form(KForm::from_terms(2, terms).expect("degree 2"))
    } else {
        Value::Matrix(m)
    }
}

/// Checks the associated-structure conditions: the metric identity,
/// `dα(X, Y) = g(JX, Y)`, `J`-invariance of `dα` on `ker α`, and sampled
/// positivity of `dα(X, JX)`. With `phi` given, also asserts the consequence
/// `dα = ι_R φ` when `dα(X, Y) = g(JX, Y)` holds.
pub fn verify_associated(
    j: &Endomorphism,
    r: &VectorField,
    alpha: &KForm,
    g: &ConstantMetric,
    phi: Option<&KForm>,
    sampling: &SamplingSpec,
) -> CheckReport {
    let mut report = CheckReport::new("associated almost contact metric structure");
    if alpha.degree() != 1 {
        report.push(Clause::failed("α is a 1-form", format!("degree {}", alpha.degree())));
        return report;
    }
    let da = alpha.d();
    report.push(metric_clause(j, alpha, g));

    let basis: Vec<VectorField> = (1..=DIM).map(VectorField::coordinate).collect();
    let jcols: Vec<VectorField> = (1..=DIM).map(|k| j.column(k)).collect();
    let eq7: Vec<Vec<Polynomial>> = (0..DIM)
        .map(|a| {
            (0..DIM)
                .map(|b| {
                    let lhs = da.apply(&[basis[a].clone(), basis[b].clone()]).expect("arity 2");
                    &lhs - &g.inner(&jcols[a], &basis[b])
                })
                .collect()
        })
        .collect();
    let eq7_clause = Clause::exact("dα(X,Y) = g(JX,Y)", matrix_residual(eq7));
    let eq7_ok = eq7_clause.passed();
    report.push(eq7_clause);

    // Basis of ker α: X_k = α_p e_k − α_k e_p for a pivot p with α_p ≢ 0.
    let coeffs: Vec<Polynomial> = (1..=DIM).map(|i| alpha.coefficient_at(&[i])).collect();
    let pivot = (0..DIM)
        .find(|&i| coeffs[i].as_constant().is_some_and(|c| !c.is_zero()))
        .or_else(|| (0..DIM).find(|&i| !coeffs[i].is_zero()));
    match pivot {
        None => {
            report.push(Clause::failed("dα(JX,JY) = dα(X,Y) on ker α", "α ≡ 0"));
            report.push(Clause::failed("dα(X,JX) > 0 on ker α", "α ≡ 0"));
        }
        Some(p) => {
            let kernel: Vec<VectorField> = (0..DIM)
                .filter(|&k| k != p)
                .map(|k| {
                    &basis[k].scale(&coeffs[p]) - &basis[p].scale(&coeffs[k])
                })
                .collect();
            let jk: Vec<VectorField> = kernel.iter().map(|x| j.apply(x)).collect();
            let n = kernel.len();
            let residual: Vec<Vec<Polynomial>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let lhs = da.apply(&[jk[a].clone(), jk[b].clone()]).expect("arity");
                            let rhs =
                                da.apply(&[kernel[a].clone(), kernel[b].clone()]).expect("arity");
                            &lhs - &rhs
                        })
                        .collect()
                })
                .collect();
            report.push(Clause::exact("dα(JX,JY) = dα(X,Y) on ker α", Value::Matrix(residual)));

            let quad: Vec<Polynomial> = (0..n)
                .map(|a| da.apply(&[kernel[a].clone(), jk[a].clone()]).expect("arity"))
                .collect();
            let points = sampling.points();
            let bad = points
                .par_iter()
                .find_first(|pt| quad.iter().any(|q| !q.eval(pt).is_positive()));
            let clause = match bad {
                Some(pt) => Clause::new("dα(X,JX) > 0 on ker α", Status::Failed, Mode::Sampled)
                    .with_note(format!("non-positive at {pt}"))
                    .with_residual(Value::Point(pt.clone())),
                None if points.is_empty() => {
                    Clause::failed("dα(X,JX) > 0 on ker α", "empty sample set")
                }
                None => Clause::new(
                    "dα(X,JX) > 0 on ker α",
                    Status::VerifiedOnSamples,
                    Mode::Sampled,
                )
                .with_note(format!("{} points, kernel basis of size {n}", points.len())),
            };
            report.push(clause);
        }
    }

    if let Some(phi) = phi {
        if eq7_ok {
            report.push(Clause::exact(
                "dα = ι_Rφ (consequence of dα(X,Y) = g(JX,Y))",
                Value::Form(&da - &phi.contract(r)),
            ));
        } else {
            report.push(Clause::not_asserted(
                "dα = ι_Rφ (consequence of dα(X,Y) = g(JX,Y))",
                "premise dα(X,Y) = g(JX,Y) failed",
            ));
        }
    }
    report
}
