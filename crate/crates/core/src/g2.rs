//! G2-structures: the model 3-form, metric and volume extraction, the cross
//! product, torsion flags and the splitting of 2-forms into the 7- and
//! 14-dimensional summands.
//!
//! Orientation convention: a [`G2Structure`] always satisfies
//! `(ι_u φ) ∧ (ι_v φ) ∧ φ = 6 g(u, v) Vol` exactly. With that orientation the
//! operator `β ↦ ∗(φ ∧ β)` acts as `+2` on `{ι_v φ}` and as `−1` on the
//! 14-dimensional complement (see [`LAMBDA2_7_EIGENVALUE`]).

use nalgebra::SMatrix;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::rational::{self, Rational};
use crate::exterior::{
    hodge_star, ConstantMetric, KForm, MultiIndex, Orientation, Point, Polynomial, VectorField, DIM,
};
use crate::report::{CheckReport, Clause, Value};

/// Eigenvalue of `β ↦ ∗(φ ∧ β)` on `Λ²₇ = {ι_v φ}` under the orientation fixed by
/// the metric/volume identity.
pub const LAMBDA2_7_EIGENVALUE: i64 = 2;
/// Eigenvalue of `β ↦ ∗(φ ∧ β)` on `Λ²₁₄`.
pub const LAMBDA2_14_EIGENVALUE: i64 = -1;

/// `φ₀ = e¹²³ + e¹⁴⁵ + e¹⁶⁷ + e²⁴⁶ − e²⁵⁷ − e³⁴⁷ − e³⁵⁶`.
pub fn standard_phi() -> KForm {
    const TERMS: [([usize; 3], i64); 7] = [
        ([1, 2, 3], 1),
        ([1, 4, 5], 1),
        ([1, 6, 7], 1),
        ([2, 4, 6], 1),
        ([2, 5, 7], -1),
        ([3, 4, 7], -1),
        ([3, 5, 6], -1),
    ];
    let terms = TERMS.iter().map(|(axes, s)| {
        (
            MultiIndex::from_axes(axes).expect("increasing"),
            Polynomial::from_int(*s),
        )
    });
    KForm::from_terms(3, terms).expect("degree 3")
}

fn require_degree(f: &KForm, degree: usize) -> Result<()> {
    if f.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: f.degree(),
        });
    }
    Ok(())
}

/// Top coefficient of `(ι_{e_i}φ) ∧ (ι_{e_j}φ) ∧ φ` for all pairs, as polynomials.
fn gram_polynomials(phi: &KForm) -> Vec<Vec<Polynomial>> {
    let contractions: Vec<KForm> = (1..=DIM)
        .map(|i| phi.contract(&VectorField::coordinate(i)))
        .collect();
    let mut out = vec![vec![Polynomial::zero(); DIM]; DIM];
    for i in 0..DIM {
        let left = contractions[i].wedge(phi);
        for j in i..DIM {
            let c = contractions[j].wedge(&left).top_coefficient();
            out[i][j] = c.clone();
            out[j][i] = c;
        }
    }
    out
}

/// `B_ij` with `(ι_{e_i}φ) ∧ (ι_{e_j}φ) ∧ φ = 6 B_ij e^{1…7}` evaluated at `pt`.
pub fn gram_from_phi(phi: &KForm, pt: &Point) -> Result<[[Rational; DIM]; DIM]> {
    require_degree(phi, 3)?;
    let local = phi.at_point(pt);
    let g = gram_polynomials(&local);
    let sixth = rational::frac(1, 6);
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| g[i][j].as_constant().expect("constant form") * &sixth)
    }))
}

/// Floating metric recovered from a 3-form at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMetric {
    pub g: [[f64; DIM]; DIM],
    /// `sqrt(det g)`.
    pub volume_scale: f64,
    pub orientation: Orientation,
}

fn definite_orientation(b: &[[Rational; DIM]; DIM]) -> Option<Orientation> {
    if ConstantMetric::new(b.clone()).is_ok() {
        return Some(Orientation::Positive);
    }
    let neg: [[Rational; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| -b[i][j].clone()));
    ConstantMetric::new(neg).ok().map(|_| Orientation::Negative)
}

/// `g = |det B|^{-1/9} · (±B)`, the sign chosen so that `±B` is positive definite;
/// the minus sign means the volume form is `−sqrt(det g) e^{1…7}`.
pub fn metric_from_phi(phi: &KForm, pt: &Point) -> Result<NumericMetric> {
    let b = gram_from_phi(phi, pt)?;
    let orientation = definite_orientation(&b).ok_or_else(|| {
        Error::NotG2(format!(
            "B = (ι_iφ)∧(ι_jφ)∧φ / 6 is indefinite at {pt} (det B = {})",
            rational::determinant(&b.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
        ))
    })?;
    let s = orientation.sign() as f64;
    let bf: SMatrix<f64, DIM, DIM> = SMatrix::from_fn(|i, j| s * rational::to_f64(&b[i][j]));
    let det = bf.determinant();
    let factor = det.powf(-1.0 / 9.0);
    let g = bf * factor;
    Ok(NumericMetric {
        g: std::array::from_fn(|i| std::array::from_fn(|j| g[(i, j)])),
        volume_scale: g.determinant().sqrt(),
        orientation,
    })
}

fn nth_root_exact(q: &Rational, n: u32) -> Option<Rational> {
    let root = |x: &BigInt| {
        let r = x.nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == *x).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// Exact version of [`metric_from_phi`], available when `det B` has a rational ninth root.
pub fn exact_metric_from_phi(phi: &KForm, pt: &Point) -> Result<(ConstantMetric, Orientation)> {
    let b = gram_from_phi(phi, pt)?;
    let orientation = definite_orientation(&b)
        .ok_or_else(|| Error::NotG2(format!("B is indefinite at {pt}")))?;
    let sign = rational::int(orientation.sign());
    let signed: [[Rational; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| &b[i][j] * &sign));
    let det = rational::determinant(&signed.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let root = nth_root_exact(&det, 9).ok_or_else(|| {
        Error::ExactModeUnavailable(format!(
            "det B = {det} has no rational ninth root; use metric_from_phi"
        ))
    })?;
    let g = ConstantMetric::new(std::array::from_fn(|i| {
        std::array::from_fn(|j| &signed[i][j] / &root)
    }))?;
    Ok((g, orientation))
}

/// Checks `(ι_{e_i}φ) ∧ (ι_{e_j}φ) ∧ φ = 6 g_ij vol` on all 28 basis pairs, exactly.
///
/// The residual is the matrix of top coefficients of the residual 7-forms.
pub fn verify_metric_compat(phi: &KForm, g: &ConstantMetric, vol: &KForm) -> CheckReport {
    let mut report = CheckReport::new("metric/volume compatibility");
    if phi.degree() != 3 || vol.degree() != DIM {
        report.push(Clause::failed(
            "(ι_uφ)∧(ι_vφ)∧φ = 6 g(u,v) Vol",
            format!("expected degrees (3, 7), got ({}, {})", phi.degree(), vol.degree()),
        ));
        return report;
    }
    let gram = gram_polynomials(phi);
    let v = vol.top_coefficient();
    let mut failing = Vec::new();
    let residual: Vec<Vec<Polynomial>> = (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| {
                    let r = &gram[i][j] - &v.scale(&(g.entry(i + 1, j + 1) * rational::int(6)));
                    if !r.is_zero() && i <= j {
                        failing.push(format!("({},{})", i + 1, j + 1));
                    }
                    r
                })
                .collect()
        })
        .collect();
    let mut clause = Clause::exact("(ι_uφ)∧(ι_vφ)∧φ = 6 g(u,v) Vol", Value::Matrix(residual));
    if !failing.is_empty() {
        clause = clause.with_note(format!("failing basis pairs: {}", failing.join(" ")));
    }
    report.push(clause);
    report
}

/// A 3-form with a declared constant metric, verified exactly against it.
#[derive(Clone, Debug, PartialEq)]
pub struct G2Structure {
    phi: KForm,
    metric: ConstantMetric,
    vol: KForm,
    orientation: Orientation,
    star_phi: KForm,
}

impl G2Structure {
    pub fn new(phi: KForm, metric: ConstantMetric, orientation: Orientation) -> Result<Self> {
        require_degree(&phi, 3)?;
        let vol = metric.volume(orientation)?;
        let report = verify_metric_compat(&phi, &metric, &vol);
        if !report.passed() {
            let note = report.clauses[0].note.clone().unwrap_or_default();
            return Err(Error::Incompatible(note));
        }
        let star_phi = hodge_star(&phi, &metric, orientation)?;
        Ok(Self {
            phi,
            metric,
            vol,
            orientation,
            star_phi,
        })
    }

    /// `φ₀` with the Euclidean metric and positive orientation.
    pub fn standard() -> Self {
        Self::new(standard_phi(), ConstantMetric::identity(), Orientation::Positive)
            .expect("φ₀ is compatible with the Euclidean metric")
    }

    pub fn phi(&self) -> &KForm {
        &self.phi
    }

    pub fn metric(&self) -> &ConstantMetric {
        &self.metric
    }

    pub fn vol(&self) -> &KForm {
        &self.vol
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn star_phi(&self) -> &KForm {
        &self.star_phi
    }

    /// Hodge star of this structure's metric and orientation.
    pub fn star(&self, a: &KForm) -> KForm {
        hodge_star(a, &self.metric, self.orientation)
            .expect("sqrt(det g) is rational for a constructed structure")
    }

    pub fn flat(&self, v: &VectorField) -> KForm {
        crate::exterior::flat(v, &self.metric)
    }

    pub fn inner(&self, u: &VectorField, v: &VectorField) -> Polynomial {
        self.metric.inner(u, v)
    }

    pub fn cross(&self, u: &VectorField, v: &VectorField) -> VectorField {
        cross_product(u, v, self)
    }
}

/// `(u × v)^k = Σ_l g^{kl} φ(u, v, e_l)`.
pub fn cross_product(u: &VectorField, v: &VectorField, s: &G2Structure) -> VectorField {
    let uv = s.phi.contract(u).contract(v);
    let g = &s.metric;
    VectorField::from_components(std::array::from_fn(|k| {
        let mut c = Polynomial::zero();
        for l in 1..=DIM {
            let ginv = g.inverse_entry(k + 1, l);
            if !ginv.is_zero() {
                c += &uv.coefficient_at(&[l]).scale(ginv);
            }
        }
        c
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionFlags {
    pub dphi_zero: bool,
    pub dstarphi_zero: bool,
}

pub fn torsion_flags(s: &G2Structure) -> TorsionFlags {
    TorsionFlags {
        dphi_zero: s.phi.d().is_zero(),
        dstarphi_zero: s.star_phi.d().is_zero(),
    }
}

/// Torsion-freeness as a report carrying `dφ` and `d∗φ` as residuals.
pub fn torsion_report(s: &G2Structure) -> CheckReport {
    let mut r = CheckReport::new("torsion");
    r.push(Clause::exact("dφ = 0", Value::Form(s.phi.d())));
    r.push(Clause::exact("d(∗φ) = 0", Value::Form(s.star_phi.d())));
    r
}

/// Components of a 2-form in `Λ²₇ ⊕ Λ²₁₄`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda2Split {
    pub part7: KForm,
    pub part14: KForm,
}

impl Lambda2Split {
    /// Exact check of the splitting invariants against the original form.
    pub fn verify(&self, beta: &KForm, s: &G2Structure) -> CheckReport {
        let mut r = CheckReport::new("Λ² splitting");
        r.push(Clause::exact(
            "part7 + part14 = β",
            Value::Form(&(&self.part7 + &self.part14) - beta),
        ));
        let eig7 = rational::int(LAMBDA2_7_EIGENVALUE);
        r.push(Clause::exact(
            "∗(φ∧part7) = 2·part7",
            Value::Form(&s.star(&s.phi.wedge(&self.part7)) - &self.part7.scale_rational(&eig7)),
        ));
        r.push(Clause::exact(
            "∗φ ∧ part14 = 0",
            Value::Form(s.star_phi.wedge(&self.part14)),
        ));
        r
    }
}

/// `part7 = (β + ∗(φ∧β))/3`, `part14 = (2β − ∗(φ∧β))/3`.
pub fn project_lambda2(beta: &KForm, s: &G2Structure) -> Result<Lambda2Split> {
    require_degree(beta, 2)?;
    let t = s.star(&s.phi.wedge(beta));
    let third = rational::frac(1, 3);
    // With eigenvalues a = 2 on Λ²₇ and b = −1 on Λ²₁₄: part7 = (t − bβ)/(a − b).
    let part7 = (beta + &t).scale_rational(&third);
    let part14 = (&beta.scale_rational(&rational::int(2)) - &t).scale_rational(&third);
    Ok(Lambda2Split { part7, part14 })
}

/// Largest singular-value-based rank of a real matrix given as rows.
pub(crate) fn numeric_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    let mat = nalgebra::DMatrix::from_fn(n, m, |i, j| rows[i][j]);
    mat.svd(false, false).rank(tol)
}

/// Numeric ranks of `β ↦ part7` and `β ↦ part14` on the 21 basis 2-forms.
pub fn lambda2_ranks(s: &G2Structure) -> (usize, usize) {
    let basis = MultiIndex::all_of_len(2);
    let mut rows7 = Vec::new();
    let mut rows14 = Vec::new();
    for idx in &basis {
        let beta = KForm::from_terms(2, [(*idx, Polynomial::one())]).expect("degree 2");
        let split = project_lambda2(&beta, s).expect("degree 2");
        let coords = |f: &KForm| -> Vec<f64> {
            basis
                .iter()
                .map(|k| {
                    let c = f.coefficient(*k);
                    rational::to_f64(&c.as_constant().unwrap_or_default())
                })
                .collect()
        };
        rows7.push(coords(&split.part7));
        rows14.push(coords(&split.part14));
    }
    (numeric_rank(&rows7, 1e-9), numeric_rank(&rows14, 1e-9))
}

/// True when the numeric metric reproduces `B` through `B = ±g·sqrt(det g)`.
pub fn metric_residual(nm: &NumericMetric, b: &[[Rational; DIM]; DIM]) -> f64 {
    let s = nm.orientation.sign() as f64;
    let mut worst = 0.0f64;
    for i in 0..DIM {
        for j in 0..DIM {
            let lhs = rational::to_f64(&b[i][j]);
            let rhs = s * nm.g[i][j] * nm.volume_scale;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// Sign of `det B`, useful to tell indefinite forms from oppositely oriented ones.
pub fn gram_determinant(phi: &KForm, pt: &Point) -> Result<Rational> {
    let b = gram_from_phi(phi, pt)?;
    Ok(rational::determinant(&b.iter().map(|r| r.to_vec()).collect::<Vec<_>>()))
}
