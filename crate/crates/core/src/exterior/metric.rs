use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::form::MultiIndex;
use super::rational::{self, Rational};
use super::{KForm, Polynomial, VectorField, DIM};
use crate::error::Error;

/// Sign multiplying `e^{1…7}` in the volume form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Self> {
        match s {
            1 => Some(Orientation::Positive),
            -1 => Some(Orientation::Negative),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// Symmetric positive-definite metric with constant rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantMetric {
    entries: Vec<Vec<Rational>>,
    inverse: Vec<Vec<Rational>>,
    det: Rational,
    sqrt_det: Option<Rational>,
    is_identity: bool,
}

impl ConstantMetric {
    pub fn new(entries: [[Rational; DIM]; DIM]) -> Result<Self, Error> {
        let entries: Vec<Vec<Rational>> = entries.iter().map(|r| r.to_vec()).collect();
        for i in 0..DIM {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Metric(format!(
                        "not symmetric: g[{}][{}] = {} but g[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        entries[i][j],
                        j + 1,
                        i + 1,
                        entries[j][i]
                    )));
                }
            }
        }
        // Sylvester's criterion.
        for k in 1..=DIM {
            let minor: Vec<Vec<Rational>> = entries[..k].iter().map(|r| r[..k].to_vec()).collect();
            let m = rational::determinant(&minor);
            if !m.is_positive() {
                return Err(Error::Metric(format!(
                    "not positive definite: leading principal minor of order {k} is {m}"
                )));
            }
        }
        let det = rational::determinant(&entries);
        let inverse = rational::inverse(&entries).expect("positive definite implies invertible");
        let sqrt_det = rational::sqrt_exact(&det);
        let is_identity = (0..DIM).all(|i| {
            (0..DIM).all(|j| entries[i][j] == if i == j { rational::one() } else { rational::zero() })
        });
        Ok(Self {
            entries,
            inverse,
            det,
            sqrt_det,
            is_identity,
        })
    }

    pub fn identity() -> Self {
        Self::diagonal(&std::array::from_fn(|_| rational::one())).expect("identity is a metric")
    }

    pub fn diagonal(d: &[Rational; DIM]) -> Result<Self, Error> {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { d[i].clone() } else { rational::zero() })
        }))
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i - 1][j - 1]
    }

    pub fn inverse_entry(&self, i: usize, j: usize) -> &Rational {
        &self.inverse[i - 1][j - 1]
    }

    pub fn entries(&self) -> [[Rational; DIM]; DIM] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].clone()))
    }

    pub fn determinant(&self) -> &Rational {
        &self.det
    }

    pub fn sqrt_det(&self) -> Option<&Rational> {
        self.sqrt_det.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity
    }

    /// `g(u, v)` as a polynomial.
    pub fn inner(&self, u: &VectorField, v: &VectorField) -> Polynomial {
        let mut acc = Polynomial::zero();
        for i in 1..=DIM {
            let ui = u.component(i);
            if ui.is_zero() {
                continue;
            }
            for j in 1..=DIM {
                let gij = self.entry(i, j);
                if gij.is_zero() || v.component(j).is_zero() {
                    continue;
                }
                acc += &(ui * v.component(j)).scale(gij);
            }
        }
        acc
    }

    pub fn norm_sq(&self, v: &VectorField) -> Polynomial {
        self.inner(v, v)
    }

    /// `sqrt(det g) · orientation · e^{1…7}`; fails if `sqrt(det g)` is irrational.
    pub fn volume(&self, orientation: Orientation) -> Result<KForm, Error> {
        let s = self.sqrt_det.as_ref().ok_or_else(|| self.irrational_err())?;
        Ok(KForm::coordinate_volume().scale_rational(&(s * rational::int(orientation.sign()))))
    }

    fn irrational_err(&self) -> Error {
        Error::IrrationalVolume(self.det.to_string())
    }

    // Entry (I, K) of the metric induced on k-forms by g⁻¹: det of the I×K minor.
    fn inverse_minor(&self, rows: MultiIndex, cols: MultiIndex) -> Rational {
        let r: Vec<usize> = rows.axes().collect();
        let c: Vec<usize> = cols.axes().collect();
        if r.is_empty() {
            return rational::one();
        }
        let m: Vec<Vec<Rational>> = r
            .iter()
            .map(|&i| c.iter().map(|&j| self.inverse[i - 1][j - 1].clone()).collect())
            .collect();
        rational::determinant(&m)
    }
}

/// `v♭ = g(v, ·)`.
pub fn flat(v: &VectorField, g: &ConstantMetric) -> KForm {
    let mut out = KForm::zero(1);
    for i in 1..=DIM {
        let mut c = Polynomial::zero();
        for j in 1..=DIM {
            let gij = g.entry(i, j);
            if !gij.is_zero() {
                c += &v.component(j).scale(gij);
            }
        }
        out = &out + &KForm::term(c, &[i]);
    }
    out
}

/// Inverse of [`flat`] on 1-forms.
pub fn sharp(a: &KForm, g: &ConstantMetric) -> Result<VectorField, Error> {
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: a.degree(),
        });
    }
    let comps: [Polynomial; DIM] = std::array::from_fn(|k| {
        let mut c = Polynomial::zero();
        for l in 1..=DIM {
            let ginv = g.inverse_entry(k + 1, l);
            if !ginv.is_zero() {
                c += &a.coefficient_at(&[l]).scale(ginv);
            }
        }
        c
    });
    Ok(VectorField::from_components(comps))
}

/// Hodge star, characterised by `b ∧ ∗a = ⟨b, a⟩_g · Vol_g` with
/// `Vol_g = sqrt(det g) · orientation · e^{1…7}`.
pub fn hodge_star(a: &KForm, g: &ConstantMetric, orientation: Orientation) -> Result<KForm, Error> {
    let k = a.degree();
    if k > DIM {
        return Ok(KForm::zero(0));
    }
    let s = g.sqrt_det().ok_or_else(|| g.irrational_err())?;
    let scale = s * rational::int(orientation.sign());
    // Raise indices: a^K = Σ_I a_I G^{IK}.
    let raised: Vec<(MultiIndex, Polynomial)> = if g.is_identity() {
        a.terms().map(|(i, c)| (*i, c.clone())).collect()
    } else {
        MultiIndex::all_of_len(k)
            .into_iter()
            .map(|kk| {
                let mut c = Polynomial::zero();
                for (i, ai) in a.terms() {
                    let m = g.inverse_minor(*i, kk);
                    if !m.is_zero() {
                        c += &ai.scale(&m);
                    }
                }
                (kk, c)
            })
            .collect()
    };
    let terms = raised.into_iter().filter(|(_, c)| !c.is_zero()).map(|(kk, c)| {
        let comp = kk.complement();
        let sign = kk.wedge_sign(comp).expect("complements are disjoint");
        let q = if sign < 0 { -scale.clone() } else { scale.clone() };
        (comp, if q.is_one() { c } else { c.scale(&q) })
    });
    KForm::from_terms(DIM - k, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::rational::int;

    fn e(axes: &[usize]) -> KForm {
        KForm::basis(axes)
    }

    #[test]
    fn rejects_bad_metrics() {
        let mut m: [[Rational; DIM]; DIM] = ConstantMetric::identity().entries();
        m[0][1] = int(1);
        assert!(matches!(ConstantMetric::new(m.clone()), Err(Error::Metric(_))));
        m[1][0] = int(1);
        // [[1,1],[1,1]] block is singular.
        assert!(matches!(ConstantMetric::new(m), Err(Error::Metric(_))));
        let mut d: [Rational; DIM] = std::array::from_fn(|_| int(1));
        d[3] = int(-1);
        assert!(ConstantMetric::diagonal(&d).is_err());
    }

    #[test]
    fn flat_sharp_examples() {
        let id = ConstantMetric::identity();
        assert_eq!(flat(&VectorField::coordinate(1), &id), KForm::dx(1));
        assert_eq!(sharp(&KForm::dx(3), &id).unwrap(), VectorField::coordinate(3));
        let mut d: [Rational; DIM] = std::array::from_fn(|_| int(1));
        d[0] = int(4);
        let g = ConstantMetric::diagonal(&d).unwrap();
        assert_eq!(
            flat(&VectorField::coordinate(1), &g),
            KForm::dx(1).scale_rational(&int(4))
        );
        assert_eq!(sharp(&flat(&VectorField::coordinate(1), &g), &g).unwrap(), VectorField::coordinate(1));
        assert!(sharp(&e(&[1, 2]), &g).is_err());
    }

    #[test]
    fn star_examples() {
        let id = ConstantMetric::identity();
        let p = Orientation::Positive;
        assert_eq!(hodge_star(&e(&[1, 2, 3]), &id, p).unwrap(), e(&[4, 5, 6, 7]));
        let one = KForm::scalar(Polynomial::one());
        assert_eq!(hodge_star(&one, &id, p).unwrap(), KForm::coordinate_volume());
        assert_eq!(hodge_star(&KForm::coordinate_volume(), &id, p).unwrap(), one);
        assert_eq!(
            hodge_star(&e(&[1, 2, 3]), &id, Orientation::Negative).unwrap(),
            -e(&[4, 5, 6, 7])
        );
    }

    #[test]
    fn star_requires_rational_sqrt_det() {
        let mut d: [Rational; DIM] = std::array::from_fn(|_| int(1));
        d[0] = int(2);
        let g = ConstantMetric::diagonal(&d).unwrap();
        assert!(matches!(
            hodge_star(&e(&[1]), &g, Orientation::Positive),
            Err(Error::IrrationalVolume(_))
        ));
        d[1] = int(2);
        let g = ConstantMetric::diagonal(&d).unwrap();
        // det = 4: ∗dx1 = 2 · g^{11} e^{2…7} = e^{234567}.
        assert_eq!(
            hodge_star(&e(&[1]), &g, Orientation::Positive).unwrap(),
            e(&[2, 3, 4, 5, 6, 7])
        );
    }

    #[test]
    fn star_defining_property_with_nondiagonal_metric() {
        let mut m = ConstantMetric::identity().entries();
        m[0][1] = int(1);
        m[1][0] = int(1);
        m[1][1] = int(2);
        let g = ConstantMetric::new(m).unwrap();
        assert_eq!(g.determinant(), &int(1));
        let vol = g.volume(Orientation::Positive).unwrap();
        for (a, b) in [(e(&[1]), e(&[1])), (e(&[1]), e(&[2])), (e(&[1, 2]), e(&[1, 2]))] {
            let lhs = b.wedge(&hodge_star(&a, &g, Orientation::Positive).unwrap());
            // ⟨b, a⟩ through the inverse metric.
            let ia: Vec<usize> = a.terms().next().unwrap().0.axes().collect();
            let ib: Vec<usize> = b.terms().next().unwrap().0.axes().collect();
            let minor: Vec<Vec<Rational>> = ib
                .iter()
                .map(|&i| ia.iter().map(|&j| g.inverse_entry(i, j).clone()).collect())
                .collect();
            let ip = rational::determinant(&minor);
            assert_eq!(lhs, vol.scale_rational(&ip));
        }
    }
}
