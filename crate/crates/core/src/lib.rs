//! Exact exterior calculus on 7-dimensional coordinate patches, with checkers
//! for G2-structures, contact forms, almost contact metric structures and the
//! compatibility conditions relating them.
//!
//! Every identity check runs over exact rationals with polynomial
//! coefficients, so a passing clause is a proof on the whole patch. Only
//! nonvanishing and positivity conditions fall back to sampling, and reports
//! say so.

pub mod compat;
pub mod contact;
pub mod error;
pub mod exterior;
pub mod g2;
pub mod report;
pub mod runner;
pub mod sampling;

pub use error::{Error, Result};
pub use exterior::{
    eval_form, exterior_derivative, flat, hodge_star, interior_product, sharp, wedge,
    ConstantMetric, Coordinates, KForm, Monomial, MultiIndex, Orientation, Point, Polynomial,
    Rational, VectorField, DIM,
};
pub use g2::{standard_phi, G2Structure, Lambda2Split};
pub use report::{CheckReport, Clause, CompatReport, Mode, Status, Value};
pub use sampling::SamplingSpec;
