use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{self, Rational};
use super::{Coordinates, Point, Polynomial, VectorField, DIM};
use crate::error::Error;

/// Strictly increasing set of axes, stored as a bitmask (bit `i` is axis `i + 1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex(u8);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);
    pub const TOP: MultiIndex = MultiIndex(0x7f);

    /// Builds from 1-based axis labels, which must be strictly increasing.
    pub fn from_axes(axes: &[usize]) -> Result<Self, Error> {
        let mut mask = 0u8;
        let mut prev = 0usize;
        for &a in axes {
            if !(1..=DIM).contains(&a) {
                return Err(Error::InvalidInput(format!("axis {a} out of range 1..=7")));
            }
            if a <= prev {
                return Err(Error::InvalidInput(format!(
                    "non-increasing multi-index {axes:?}"
                )));
            }
            prev = a;
            mask |= 1 << (a - 1);
        }
        Ok(Self(mask))
    }

    pub(crate) fn from_mask(mask: u8) -> Self {
        debug_assert!(mask < 0x80);
        Self(mask)
    }

    pub(crate) fn mask(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// 1-based axes in increasing order.
    pub fn axes(self) -> impl Iterator<Item = usize> + Clone {
        (0..DIM).filter(move |i| self.0 & (1 << i) != 0).map(|i| i + 1)
    }

    pub fn contains(self, axis: usize) -> bool {
        self.0 & (1 << (axis - 1)) != 0
    }

    pub fn complement(self) -> Self {
        Self(!self.0 & 0x7f)
    }

    /// All multi-indices of length `k`, in canonical order.
    pub fn all_of_len(k: usize) -> Vec<MultiIndex> {
        let mut v: Vec<MultiIndex> = (0u8..0x80)
            .filter(|m| m.count_ones() as usize == k)
            .map(MultiIndex)
            .collect();
        v.sort();
        v
    }

    /// Sign of `e^self ∧ e^other` relative to `e^{self ∪ other}`; `None` if they overlap.
    pub fn wedge_sign(self, other: MultiIndex) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0;
        for j in 0..DIM {
            if other.0 & (1 << j) != 0 {
                // Elements of `self` greater than j.
                inversions += (self.0 >> (j + 1)).count_ones();
            }
        }
        Some(if inversions % 2 == 0 { 1 } else { -1 })
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.axes().cmp(other.axes()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e")?;
        for a in self.axes() {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// A differential form of fixed degree with polynomial coefficients.
///
/// Forms of degree above 7 are necessarily zero; they can arise as the result
/// of `wedge` or `d` and carry no terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Polynomial>,
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The 0-form `p`.
    pub fn scalar(p: Polynomial) -> Self {
        let mut f = Self::zero(0);
        f.add_term(MultiIndex::EMPTY, p);
        f
    }

    /// `dx_axis`, 1-based.
    pub fn dx(axis: usize) -> Self {
        Self::basis(&[axis])
    }

    /// The constant basis form `e^{axes}`; panics unless `axes` is strictly increasing.
    pub fn basis(axes: &[usize]) -> Self {
        Self::term(Polynomial::one(), axes)
    }

    pub fn term(coeff: Polynomial, axes: &[usize]) -> Self {
        let idx = MultiIndex::from_axes(axes).expect("basis axes must be strictly increasing");
        let mut f = Self::zero(axes.len());
        f.add_term(idx, coeff);
        f
    }

    /// The coordinate volume form `e^{1234567}`.
    pub fn coordinate_volume() -> Self {
        let mut f = Self::zero(DIM);
        f.add_term(MultiIndex::TOP, Polynomial::one());
        f
    }

    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Polynomial)>,
    ) -> Result<Self, Error> {
        let mut f = Self::zero(degree);
        for (idx, p) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: idx.len(),
                });
            }
            f.add_term(idx, p);
        }
        Ok(f)
    }

    fn add_term(&mut self, idx: MultiIndex, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &p;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, idx: MultiIndex) -> Polynomial {
        self.coeffs.get(&idx).cloned().unwrap_or_default()
    }

    /// Coefficient at the 1-based axes (must be strictly increasing).
    pub fn coefficient_at(&self, axes: &[usize]) -> Polynomial {
        MultiIndex::from_axes(axes)
            .map(|i| self.coefficient(i))
            .unwrap_or_default()
    }

    /// Coefficient of `e^{1…7}`; zero for forms of any other degree.
    pub fn top_coefficient(&self) -> Polynomial {
        if self.degree == DIM {
            self.coefficient(MultiIndex::TOP)
        } else {
            Polynomial::zero()
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.values().all(|p| p.as_constant().is_some())
    }

    pub fn scale(&self, p: &Polynomial) -> Self {
        let mut out = Self::zero(self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(*i, c * p);
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(*i, c.scale(q));
        }
        out
    }

    pub fn wedge(&self, other: &KForm) -> KForm {
        let mut out = KForm::zero(self.degree + other.degree);
        if out.degree > DIM {
            return out;
        }
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                if let Some(sign) = ia.wedge_sign(*ib) {
                    let p = ca * cb;
                    let p = if sign < 0 { -p } else { p };
                    out.add_term(MultiIndex::from_mask(ia.mask() | ib.mask()), p);
                }
            }
        }
        out
    }

    /// `self ∧ self ∧ … ∧ self` (`n` factors); `n = 0` gives the constant 0-form 1.
    pub fn wedge_pow(&self, n: usize) -> KForm {
        let mut acc = KForm::scalar(Polynomial::one());
        for _ in 0..n {
            acc = acc.wedge(self);
        }
        acc
    }

    pub fn d(&self) -> KForm {
        let mut out = KForm::zero(self.degree + 1);
        if out.degree > DIM {
            return out;
        }
        for (idx, c) in &self.coeffs {
            for axis in 1..=DIM {
                if idx.contains(axis) {
                    continue;
                }
                let dc = c.partial(axis);
                if dc.is_zero() {
                    continue;
                }
                let single = MultiIndex::from_mask(1 << (axis - 1));
                let sign = single.wedge_sign(*idx).expect("disjoint by construction");
                out.add_term(
                    MultiIndex::from_mask(single.mask() | idx.mask()),
                    if sign < 0 { -dc } else { dc },
                );
            }
        }
        out
    }

    /// Interior product contracting the first slot; fails on 0-forms.
    pub fn interior(&self, v: &VectorField) -> Result<KForm, Error> {
        if self.degree == 0 {
            return Err(Error::InteriorOfScalar);
        }
        Ok(self.contract(v))
    }

    // Interior product for forms already known to have degree ≥ 1 (or beyond 7).
    pub(crate) fn contract(&self, v: &VectorField) -> KForm {
        let mut out = KForm::zero(self.degree.saturating_sub(1));
        for (idx, c) in &self.coeffs {
            for (p, axis) in idx.axes().enumerate() {
                let comp = v.component(axis);
                if comp.is_zero() {
                    continue;
                }
                let rest = MultiIndex::from_mask(idx.mask() & !(1 << (axis - 1)));
                let term = c * comp;
                out.add_term(rest, if p % 2 == 1 { -term } else { term });
            }
        }
        out
    }

    /// Symbolic evaluation `a(v₁, …, v_k)` as a polynomial, by successive contraction.
    pub fn apply(&self, vectors: &[VectorField]) -> Result<Polynomial, Error> {
        if vectors.len() != self.degree {
            return Err(Error::Arity {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let mut acc = self.clone();
        for v in vectors {
            acc = acc.contract(v);
        }
        Ok(acc.coefficient(MultiIndex::EMPTY))
    }

    /// Substitutes a point into every coefficient, giving a constant form.
    pub fn at_point(&self, pt: &Point) -> KForm {
        let mut out = KForm::zero(self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(*i, Polynomial::constant(c.eval(pt)));
        }
        out
    }

    /// Fully antisymmetric multilinear evaluation on `vectors` at `pt`.
    pub fn eval(&self, pt: &Point, vectors: &[VectorField]) -> Result<Rational, Error> {
        if vectors.len() != self.degree {
            return Err(Error::Arity {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let vals: Vec<[Rational; DIM]> = vectors.iter().map(|v| v.eval(pt)).collect();
        let mut acc = rational::zero();
        for (idx, c) in &self.coeffs {
            let axes: Vec<usize> = idx.axes().collect();
            let m: Vec<Vec<Rational>> = axes
                .iter()
                .map(|&a| vals.iter().map(|v| v[a - 1].clone()).collect())
                .collect();
            let det = if m.is_empty() {
                rational::one()
            } else {
                rational::determinant(&m)
            };
            if !det.is_zero() {
                acc += c.eval(pt) * det;
            }
        }
        Ok(acc)
    }

    /// Renders as `coeff dx2^dx3 + …` using the given coordinate names.
    pub fn display_with(&self, names: &Coordinates) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (idx, c) in &self.coeffs {
            let basis: Vec<String> = idx.axes().map(|a| format!("d{}", names.name(a))).collect();
            let basis = basis.join("^");
            let coeff = match c.as_constant() {
                Some(q) if basis.is_empty() => q.to_string(),
                Some(q) if q.is_one() => String::new(),
                Some(q) if (-q.clone()).is_one() => "-".to_string(),
                Some(q) => format!("{q} "),
                None if basis.is_empty() => c.display_with(names),
                None => format!("({}) ", c.display_with(names)),
            };
            parts.push(format!("{coeff}{basis}"));
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Coordinates::default()))
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm[{}]({})", self.degree, self)
    }
}

fn check_same_degree(a: &KForm, b: &KForm) {
    assert_eq!(
        a.degree, b.degree,
        "cannot add forms of degree {} and {}",
        a.degree, b.degree
    );
}

impl<'a> Add<&'a KForm> for &'a KForm {
    type Output = KForm;
    fn add(self, rhs: &'a KForm) -> KForm {
        check_same_degree(self, rhs);
        let mut out = self.clone();
        for (i, c) in &rhs.coeffs {
            out.add_term(*i, c.clone());
        }
        out
    }
}

impl Add for KForm {
    type Output = KForm;
    fn add(self, rhs: KForm) -> KForm {
        &self + &rhs
    }
}

impl<'a> Sub<&'a KForm> for &'a KForm {
    type Output = KForm;
    fn sub(self, rhs: &'a KForm) -> KForm {
        check_same_degree(self, rhs);
        let mut out = self.clone();
        for (i, c) in &rhs.coeffs {
            out.add_term(*i, -c);
        }
        out
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(self, rhs: KForm) -> KForm {
        &self - &rhs
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        KForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        -&self
    }
}

pub fn wedge(a: &KForm, b: &KForm) -> KForm {
    a.wedge(b)
}

/// Exterior derivative. A 7-form maps to the (empty) zero form of degree 8.
pub fn exterior_derivative(a: &KForm) -> KForm {
    a.d()
}

pub fn interior_product(v: &VectorField, a: &KForm) -> Result<KForm, Error> {
    a.interior(v)
}

pub fn eval_form(a: &KForm, pt: &Point, vectors: &[VectorField]) -> Result<Rational, Error> {
    a.eval(pt, vectors)
}
