use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use super::rational::Rational;
use super::{Coordinates, Point, Polynomial, DIM};

/// A vector field in the coordinate frame `∂x1 .. ∂x7`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VectorField([Polynomial; DIM]);

impl VectorField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_components(components: [Polynomial; DIM]) -> Self {
        Self(components)
    }

    /// Constant field with the given rational components.
    pub fn constant(components: &[Rational; DIM]) -> Self {
        Self(std::array::from_fn(|i| Polynomial::constant(components[i].clone())))
    }

    /// `∂x_axis`, 1-based.
    pub fn coordinate(axis: usize) -> Self {
        let mut v = Self::zero();
        v.0[axis - 1] = Polynomial::one();
        v
    }

    /// Component along `∂x_axis`, 1-based.
    pub fn component(&self, axis: usize) -> &Polynomial {
        &self.0[axis - 1]
    }

    pub fn components(&self) -> &[Polynomial; DIM] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Polynomial::is_zero)
    }

    /// `Some` when every component is a constant.
    pub fn as_constant(&self) -> Option<[Rational; DIM]> {
        let mut out: [Rational; DIM] = std::array::from_fn(|_| Rational::zero());
        for (o, p) in out.iter_mut().zip(self.0.iter()) {
            *o = p.as_constant()?;
        }
        Some(out)
    }

    pub fn scale(&self, p: &Polynomial) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] * p))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self(std::array::from_fn(|i| self.0[i].scale(q)))
    }

    pub fn eval(&self, pt: &Point) -> [Rational; DIM] {
        std::array::from_fn(|i| self.0[i].eval(pt))
    }

    pub fn eval_f64(&self, pt: &[f64; DIM]) -> [f64; DIM] {
        std::array::from_fn(|i| self.0[i].eval_f64(pt))
    }

    pub fn display_with(&self, names: &Coordinates) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                let basis = format!("∂{}", names.name(i + 1));
                match p.as_constant() {
                    Some(q) if q == Rational::from_integer(1.into()) => basis,
                    Some(q) => format!("{q} {basis}"),
                    None => format!("({}) {basis}", p.display_with(names)),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Coordinates::default()))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, rhs: &'a VectorField) -> VectorField {
        VectorField(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &'a VectorField) -> VectorField {
        VectorField(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField(std::array::from_fn(|i| -&self.0[i]))
    }
}
