//! Exact exterior calculus on a 7-dimensional coordinate patch.
//!
//! Scalars are [`Rational`]s, coefficient functions are [`Polynomial`]s in the
//! coordinates `x1..x7`, and differential forms are [`KForm`]s indexed by
//! strictly increasing [`MultiIndex`]es. Axis labels are 1-based everywhere in
//! the public API (`dx1 .. dx7`, `∂x1 .. ∂x7`).
//!
//! Sign conventions: the wedge sign is the parity of the inversion count of the
//! concatenated index sequences, and the interior product contracts the first
//! slot, `ι_v(e^{i₁…i_k}) = Σ_p (−1)^p v^{i_p} e^{…î_p…}`.

mod form;
mod metric;
mod polynomial;
pub mod rational;
mod vector;

pub use form::{eval_form, exterior_derivative, interior_product, wedge, KForm, MultiIndex};
pub use metric::{flat, hodge_star, sharp, ConstantMetric, Orientation};
pub use polynomial::{Monomial, Polynomial};
pub use rational::Rational;
pub use vector::VectorField;

use crate::error::Error;

/// Dimension of every coordinate patch handled by this crate.
pub const DIM: usize = 7;

/// Display/parse names for the seven coordinates. Defaults to `x1..x7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates([String; DIM]);

impl Default for Coordinates {
    fn default() -> Self {
        Self(std::array::from_fn(|i| format!("x{}", i + 1)))
    }
}

impl Coordinates {
    pub fn new(names: [String; DIM]) -> Result<Self, Error> {
        for (i, n) in names.iter().enumerate() {
            let mut chars = n.chars();
            let valid = chars
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
                && chars.all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidInput(format!("invalid coordinate name '{n}'")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidInput(format!("duplicate coordinate name '{n}'")));
            }
        }
        Ok(Self(names))
    }

    /// Name of axis `axis` (1-based).
    pub fn name(&self, axis: usize) -> &str {
        &self.0[axis - 1]
    }

    /// 1-based axis of `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name).map(|i| i + 1)
    }

    pub fn names(&self) -> &[String; DIM] {
        &self.0
    }
}

/// A point of the patch with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point([Rational; DIM]);

impl Point {
    pub fn new(coords: [Rational; DIM]) -> Self {
        Self(coords)
    }

    pub fn origin() -> Self {
        Self(std::array::from_fn(|_| rational::zero()))
    }

    pub fn coords(&self) -> &[Rational; DIM] {
        &self.0
    }

    /// Sets coordinate `axis` (1-based).
    pub fn set(&mut self, axis: usize, value: Rational) {
        self.0[axis - 1] = value;
    }

    pub fn to_f64(&self) -> [f64; DIM] {
        std::array::from_fn(|i| rational::to_f64(&self.0[i]))
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
