//! Sampling grids used where exact certification is out of reach
//! (nonvanishing of non-constant coefficients, positivity).

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exterior::rational::{self, Rational};
use crate::exterior::{Point, Polynomial, DIM};
use crate::report::Status;

pub const DEFAULT_SEED: u64 = 0x6732_6b69_74;

/// Lattice `grid^7` over `[-bound, bound]^7` plus `samples` pseudo-random rational points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    pub grid: usize,
    pub bound: i64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            grid: 4,
            bound: 1,
            samples: 64,
            seed: DEFAULT_SEED,
        }
    }
}

impl SamplingSpec {
    /// All sample points in a fixed order: lattice first (row-major), then random points.
    pub fn points(&self) -> Vec<Point> {
        let b = rational::int(self.bound);
        let ticks: Vec<Rational> = match self.grid {
            0 => Vec::new(),
            1 => vec![rational::zero()],
            n => (0..n)
                .map(|i| -b.clone() + &b * rational::frac(2 * i as i64, (n - 1) as i64))
                .collect(),
        };
        let mut out = Vec::new();
        if !ticks.is_empty() {
            let total = ticks.len().pow(DIM as u32);
            out.reserve(total + self.samples);
            for mut flat in 0..total {
                let coords: [Rational; DIM] = std::array::from_fn(|_| {
                    let t = ticks[flat % ticks.len()].clone();
                    flat /= ticks.len();
                    t
                });
                out.push(Point::new(coords));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        const DEN: i64 = 64;
        for _ in 0..self.samples {
            let coords: [Rational; DIM] = std::array::from_fn(|_| {
                let k: i64 = rng.gen_range(-DEN..=DEN);
                rational::frac(k, DEN) * &b
            });
            out.push(Point::new(coords));
        }
        out
    }
}

/// Outcome of a nonvanishing test on a scalar polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Nonvanishing {
    pub status: Status,
    /// Point where the value vanishes or has the opposite sign to the first sample.
    pub witness: Option<Point>,
    pub min_abs: Option<f64>,
}

/// Nonzero constant ⇒ proven; otherwise evaluate exactly on the grid, failing on
/// any zero or sign change.
pub fn certify_nonvanishing(p: &Polynomial, sampling: &SamplingSpec) -> Nonvanishing {
    if let Some(c) = p.as_constant() {
        return if c.is_zero() {
            Nonvanishing {
                status: Status::Failed,
                witness: Some(Point::origin()),
                min_abs: Some(0.0),
            }
        } else {
            Nonvanishing {
                status: Status::Proven,
                witness: None,
                min_abs: Some(rational::to_f64(&c.abs())),
            }
        };
    }
    let points = sampling.points();
    let values: Vec<Rational> = points.par_iter().map(|pt| p.eval(pt)).collect();
    let mut first_sign: Option<bool> = None;
    let mut min_abs: Option<Rational> = None;
    for (pt, v) in points.iter().zip(values.iter()) {
        if v.is_zero() {
            return Nonvanishing {
                status: Status::Failed,
                witness: Some(pt.clone()),
                min_abs: Some(0.0),
            };
        }
        let pos = v.is_positive();
        match first_sign {
            None => first_sign = Some(pos),
            Some(s) if s != pos => {
                return Nonvanishing {
                    status: Status::Failed,
                    witness: Some(pt.clone()),
                    min_abs: min_abs.as_ref().map(rational::to_f64),
                }
            }
            _ => {}
        }
        let a = v.abs();
        if min_abs.as_ref().is_none_or(|m| &a < m) {
            min_abs = Some(a);
        }
    }
    Nonvanishing {
        // An empty sample set certifies nothing.
        status: if points.is_empty() {
            Status::Failed
        } else {
            Status::VerifiedOnSamples
        },
        witness: None,
        min_abs: min_abs.as_ref().map(rational::to_f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let sampling = SamplingSpec {
            grid: 2,
            bound: 1,
            samples: 3,
            seed: 1,
        };
        let pts = sampling.points();
        assert_eq!(pts.len(), 128 + 3);
        assert!(pts[..128]
            .iter()
            .all(|p| p.coords().iter().all(|c| c == &rational::int(1) || c == &rational::int(-1))));
        assert_eq!(pts, sampling.points());
        assert_eq!(SamplingSpec::default().points().len(), 4usize.pow(7) + 64);
    }

    #[test]
    fn nonvanishing_outcomes() {
        let sampling = SamplingSpec {
            grid: 3,
            ..Default::default()
        };
        assert_eq!(certify_nonvanishing(&Polynomial::from_int(6), &sampling).status, Status::Proven);
        assert_eq!(certify_nonvanishing(&Polynomial::zero(), &sampling).status, Status::Failed);
        // x1 vanishes at the grid midpoint.
        let r = certify_nonvanishing(&Polynomial::var(1), &sampling);
        assert_eq!(r.status, Status::Failed);
        assert_eq!(r.witness.unwrap().coords()[0], rational::zero());
        // 1 + x1^2 is positive everywhere.
        let p = &Polynomial::one() + &Polynomial::var(1).pow(2);
        let r = certify_nonvanishing(&p, &sampling);
        assert_eq!(r.status, Status::VerifiedOnSamples);
        assert_eq!(r.min_abs, Some(1.0));
        // x1 + 1/2 has no zero on the 2-point grid but changes sign.
        let even = SamplingSpec {
            grid: 2,
            ..Default::default()
        };
        let q = &Polynomial::var(1) + &Polynomial::constant(rational::frac(1, 2));
        let r = certify_nonvanishing(&q, &even);
        assert_eq!(r.status, Status::Failed, "sign change between -1 and 1");
    }
}
