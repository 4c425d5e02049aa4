//! Sparse multivariate polynomials over exact rationals in seven variables.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded-lexicographic, so equality and serialization are canonical. Zero
//! coefficients are never stored; the zero polynomial is the empty map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};
use super::{Coordinates, Point, DIM};
use crate::error::Error;

/// Exponent vector of a monomial in the seven coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; DIM]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; DIM]);

    /// The monomial `x_axis`, with `axis` in `1..=7`.
    pub fn var(axis: usize) -> Self {
        let mut e = [0; DIM];
        e[axis - 1] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    // Graded lexicographic with x1 > x2 > ... > x7.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::ONE, c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rational::int(n))
    }

    /// The coordinate function `x_axis`, `axis` in `1..=7`.
    pub fn var(axis: usize) -> Self {
        assert!((1..=DIM).contains(&axis), "axis {axis} out of range 1..=7");
        Self::monomial(Monomial::var(axis), rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Exact partial derivative with respect to `x_axis`, `axis` in `1..=7`.
    pub fn partial(&self, axis: usize) -> Self {
        let i = axis - 1;
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[i] -= 1;
            out.add_term(dm, c * rational::int(e as i64));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, pt: &Point) -> Rational {
        let mut acc = rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in pt.coords().iter().zip(m.0.iter()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        acc
    }

    pub fn eval_f64(&self, pt: &[f64; DIM]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = rational::to_f64(c);
                for (x, &e) in pt.iter().zip(m.0.iter()) {
                    if e > 0 {
                        v *= x.powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    /// Renders with the given coordinate names, highest graded-lex term first.
    pub fn display_with(&self, names: &Coordinates) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names.name(i + 1).to_string()),
                    _ => factors.push(format!("{}^{}", names.name(i + 1), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the term grammar `[sign] rational [* var [^ power]]...` joined by `+`/`-`.
    pub fn parse_with(src: &str, names: &Coordinates) -> Result<Self, Error> {
        Parser::new(src, names).parse()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Coordinates::default()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with(s, &Coordinates::default())
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Parser<'a> {
    src: &'a str,
    names: &'a Coordinates,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, names: &'a Coordinates) -> Self {
        Self { src, names }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Polynomial {
            input: self.src.to_string(),
            message: msg.into(),
        }
    }

    fn tokenize(&self) -> Result<Vec<Token>, Error> {
        let chars: Vec<char> = self.src.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    out.push(Token::Plus);
                    i += 1
                }
                '-' => {
                    out.push(Token::Minus);
                    i += 1
                }
                '*' => {
                    out.push(Token::Star);
                    i += 1
                }
                '^' => {
                    out.push(Token::Caret);
                    i += 1
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let mut lit: String = chars[start..i].iter().collect();
                    // A '/' directly inside a literal makes it a fraction.
                    let mut j = i;
                    while j < chars.len() && chars[j] == ' ' {
                        j += 1;
                    }
                    if j < chars.len() && chars[j] == '/' {
                        j += 1;
                        while j < chars.len() && chars[j] == ' ' {
                            j += 1;
                        }
                        let ds = j;
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        if ds == j {
                            return Err(self.err("expected denominator after '/'"));
                        }
                        lit.push('/');
                        lit.extend(&chars[ds..j]);
                        i = j;
                    }
                    let q = rational::parse(&lit)
                        .ok_or_else(|| self.err(format!("invalid rational literal '{lit}'")))?;
                    out.push(Token::Num(q));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    out.push(Token::Ident(chars[start..i].iter().collect()));
                }
                other => return Err(self.err(format!("unexpected character '{other}'"))),
            }
        }
        Ok(out)
    }

    fn parse(&self) -> Result<Polynomial, Error> {
        let toks = self.tokenize()?;
        if toks.is_empty() {
            return Err(self.err("empty polynomial"));
        }
        let mut pos = 0;
        let mut out = Polynomial::zero();
        let mut first = true;
        while pos < toks.len() {
            let mut sign = rational::one();
            let mut saw_sign = false;
            while let Some(t @ (Token::Plus | Token::Minus)) = toks.get(pos) {
                if *t == Token::Minus {
                    sign = -sign;
                }
                saw_sign = true;
                pos += 1;
            }
            if !first && !saw_sign {
                return Err(self.err("expected '+' or '-' between terms"));
            }
            first = false;
            let mut coeff = sign;
            let mut mono = Monomial::ONE;
            loop {
                match toks.get(pos) {
                    Some(Token::Num(q)) => {
                        coeff *= q;
                        pos += 1;
                    }
                    Some(Token::Ident(name)) => {
                        let axis = self
                            .names
                            .index_of(name)
                            .ok_or_else(|| self.err(format!("unknown variable '{name}'")))?;
                        pos += 1;
                        let mut power = 1u32;
                        if toks.get(pos) == Some(&Token::Caret) {
                            pos += 1;
                            match toks.get(pos) {
                                Some(Token::Num(q)) if q.is_integer() && !q.is_negative() => {
                                    power = q
                                        .to_integer()
                                        .try_into()
                                        .map_err(|_| self.err("exponent too large"))?;
                                    pos += 1;
                                }
                                _ => return Err(self.err("expected non-negative integer exponent")),
                            }
                        }
                        mono.0[axis - 1] += power;
                    }
                    _ => return Err(self.err("expected a number or variable")),
                }
                if toks.get(pos) == Some(&Token::Star) {
                    pos += 1;
                    continue;
                }
                break;
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::rational::{frac, int};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&x(3) + &x(3), x(3).scale(&int(2)));
        assert!((&x(3) * &Polynomial::zero()).is_zero());
        let a = &Polynomial::one() + &x(1);
        let b = &Polynomial::one() - &x(1);
        assert_eq!(&a * &b, &Polynomial::one() - &x(1).pow(2));
        assert!((&x(1) - &x(1)).is_zero());
        assert_eq!(-(-x(2)), x(2));
    }

    #[test]
    fn partial_examples() {
        let p = &x(3) * &x(7).pow(2);
        assert_eq!(p.partial(7), (&x(3) * &x(7)).scale(&int(2)));
        assert!(x(3).partial(1).is_zero());
        let q = &x(1).pow(2) + &x(2);
        assert_eq!(q.partial(1), x(1).scale(&int(2)));
    }

    #[test]
    fn eval_examples() {
        let mut pt = Point::origin();
        pt.set(3, int(2));
        pt.set(7, int(3));
        assert_eq!((&x(3) * &x(7)).eval(&pt), int(6));
        assert_eq!(Polynomial::from_int(5).eval(&pt), int(5));
        assert_eq!((&x(1) - &x(1)).eval(&pt), int(0));
        let f = [0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0];
        assert_eq!((&x(3) * &x(7)).eval_f64(&f), 6.0);
    }

    #[test]
    fn parse_and_display() {
        let p: Polynomial = "-3/2*x1^2*x3 + x7 - 5".parse().unwrap();
        assert_eq!(p.to_string(), "-3/2*x1^2*x3 + x7 - 5");
        let q: Polynomial = "2 * x3 * x3 - x3^2".parse().unwrap();
        assert_eq!(q, x(3).pow(2));
        assert_eq!("0".parse::<Polynomial>().unwrap(), Polynomial::zero());
        assert_eq!("- -x2".parse::<Polynomial>().unwrap(), x(2));
        assert_eq!("6/4".parse::<Polynomial>().unwrap(), Polynomial::constant(frac(3, 2)));
        assert!("x8".parse::<Polynomial>().is_err());
        assert!("x1 x2".parse::<Polynomial>().is_err());
        assert!("".parse::<Polynomial>().is_err());
        assert!("x1^-1".parse::<Polynomial>().is_err());
        assert!("1/0".parse::<Polynomial>().is_err());
    }

    #[test]
    fn renamed_coordinates() {
        let names = Coordinates::new(["x1", "x2", "x3", "xi1", "xi2", "xi3", "t"].map(String::from))
            .unwrap();
        let p = Polynomial::parse_with("xi1*t - x1", &names).unwrap();
        assert_eq!(p, &(&x(4) * &x(7)) - &x(1));
        assert_eq!(p.display_with(&names), "xi1*t - x1");
    }

    #[test]
    fn grlex_order() {
        let p: Polynomial = "1 + x7 + x1 + x1*x2 + x2^2".parse().unwrap();
        assert_eq!(p.to_string(), "x1*x2 + x2^2 + x1 + x7 + 1");
    }
}
