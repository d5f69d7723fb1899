//! Sparse polynomials over the rationals in a fixed basis `x1, …, xn`.
//!
//! This is the concrete model of the symmetric algebra of an
//! `n`-dimensional real vector space: degree-one homogeneous polynomials are
//! the vectors, monomials of total degree `k` span the `k`-th graded part,
//! and characters of the algebra are point evaluations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("non-finite evaluation point")]
    NonFinitePoint,
}

/// Exponent vector of a monomial `x1^e1 ⋯ xn^en`.
///
/// Stored densely (one slot per basis element); absent variables carry a zero
/// exponent. Ordered graded-lexicographically: by total degree first, then
/// lexicographically with `x1 > x2 > ⋯`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    /// The basis variable `x_{index+1}` (zero-based index).
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Monomial::new(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial::new(self.exps.iter().map(|a| a * e).collect())
    }

    /// Variable indices repeated by multiplicity, e.g. `x1^2 x3 -> [0, 0, 2]`.
    pub fn factors(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    /// `∏ w_i^{e_i}` for per-variable rational weights.
    pub fn weight(&self, weights: &[Rational]) -> Rational {
        self.exps
            .iter()
            .zip(weights)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, w)| rational::pow(w, e))
            .fold(Rational::one(), |acc, x| acc * x)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.weight(point)
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.exps
            .iter()
            .zip(point)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, x)| x.powi(e as i32))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// All monomials in `nvars` variables of total degree exactly `degree`,
/// in ascending graded-lex order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    if nvars == 0 {
        return if degree == 0 { vec![Monomial::new(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// All monomials of total degree `<= max_degree`, ascending graded-lex.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    (0..=max_degree)
        .flat_map(|d| monomials_of_degree(nvars, d))
        .collect()
}

/// Exact sparse polynomial in a fixed number of variables.
///
/// Zero coefficients are never stored, so the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial::monomial(nvars, Monomial::one(nvars), c)
    }

    /// The basis vector `x_{index+1}` (zero-based index).
    pub fn var(nvars: usize, index: usize) -> Self {
        Polynomial::monomial(nvars, Monomial::var(nvars, index), Rational::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(m, c);
        p
    }

    /// Linear form `Σ a_i x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Polynomial::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(AlgebraError::DimensionMismatch { expected: nvars, found: m.nvars() });
            }
            p.add_term(m, c);
        }
        Ok(p)
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

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    /// True for elements of `V`: homogeneous of degree one, or zero.
    pub fn is_linear_form(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 1)
    }

    /// Coefficient vector of a linear form.
    pub fn linear_coefficients(&self) -> Option<Vec<Rational>> {
        if !self.is_linear_form() {
            return None;
        }
        Some((0..self.nvars).map(|i| self.coefficient(&Monomial::var(self.nvars, i))).collect())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn check_dims(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dims(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `self^e` by repeated squaring; `f^0 = 1`.
    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Decomposition into homogeneous parts keyed by degree.
    pub fn graded_parts(&self) -> GradedParts {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree())
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(m.clone(), c.clone());
        }
        GradedParts { nvars: self.nvars, parts }
    }

    /// Exact evaluation at a rational point (a character of the algebra).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c * m.evaluate(point))
            .fold(Rational::zero(), |acc, x| acc + x))
    }

    /// Floating evaluation. Coefficients are rounded to nearest and the sum is
    /// accumulated in IEEE round-to-nearest arithmetic.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(AlgebraError::NonFinitePoint);
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| rational::to_f64(c) * m.evaluate_f64(point))
            .sum())
    }

    /// Parses expressions such as `"x1*x2 + 2*x1 - 1/10"` or `"3 x1^2 - x2"`.
    ///
    /// The grammar is a sum of products of rational literals and powers of
    /// variables `x1..xn`; parentheses are not supported.
    pub fn parse(nvars: usize, text: &str) -> Result<Polynomial, AlgebraError> {
        Parser { src: text.as_bytes(), pos: 0, nvars }.parse_sum()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&rational::format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rational::format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;

            /// Panics if the operands live in different numbers of variables;
            /// use the `checked_*` method to get an error instead.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial dimension mismatch")
            }
        }

        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Homogeneous parts of a polynomial, keyed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedParts {
    nvars: usize,
    parts: BTreeMap<u32, Polynomial>,
}

impl GradedParts {
    pub fn get(&self, degree: u32) -> Option<&Polynomial> {
        self.parts.get(&degree)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Polynomial)> + '_ {
        self.parts.iter().map(|(k, p)| (*k, p))
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> Polynomial {
        self.parts
            .values()
            .fold(Polynomial::zero(self.nvars), |acc, p| &acc + p)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_sum(&mut self) -> Result<Polynomial, AlgebraError> {
        let mut acc = Polynomial::zero(self.nvars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -Rational::one()
            }
            Some(b'+') => {
                self.pos += 1;
                Rational::one()
            }
            Some(_) => Rational::one(),
            None => return Err(self.err("empty expression")),
        };
        loop {
            let term = self.parse_product()?;
            acc = &acc + &term.scale(&sign);
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
    }

    fn parse_product(&mut self) -> Result<Polynomial, AlgebraError> {
        let mut acc = Polynomial::one(self.nvars);
        loop {
            match self.peek() {
                Some(b'x') | Some(b'X') => {
                    self.pos += 1;
                    let idx = self.parse_uint()? as usize;
                    if idx == 0 || idx > self.nvars {
                        return Err(self.err(&format!("variable x{idx} outside x1..x{}", self.nvars)));
                    }
                    let mut e = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self.parse_uint()? as u32;
                    }
                    acc = &acc * &Polynomial::monomial(
                        self.nvars,
                        Monomial::var(self.nvars, idx - 1).pow(e),
                        Rational::one(),
                    );
                }
                Some(c) if c.is_ascii_digit() || c == b'.' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_digit()
                            || matches!(self.src[self.pos], b'.' | b'/'))
                    {
                        self.pos += 1;
                    }
                    let lit = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let q = rational::parse_rational(lit).map_err(|e| self.err(&e.to_string()))?;
                    acc = acc.scale(&q);
                }
                _ => return Err(self.err("expected a number or a variable")),
            }
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(b'x') | Some(b'X') => {}
                Some(c) if c.is_ascii_digit() => {}
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_uint(&mut self) -> Result<u64, AlgebraError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: Exact,
}

/// Wire form `{"nvars": n, "terms": [{"exp": [..], "coef": "p/q"}]}` with
/// dense exponent arrays and terms in ascending graded-lex order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .map(|(m, c)| TermJson { exp: m.exponents().to_vec(), coef: Exact(c.clone()) })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = AlgebraError;

    fn try_from(j: PolynomialJson) -> Result<Self, AlgebraError> {
        Polynomial::from_terms(
            j.nvars,
            j.terms.into_iter().map(|t| (Monomial::new(t.exp), t.coef.0)),
        )
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolynomialJson::deserialize(d)?;
        Polynomial::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(2, s).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(p("x1 + 1") + p("-x1"), p("1"));
        assert_eq!(Polynomial::zero(2) + p("x1*x2 - 3"), p("x1*x2 - 3"));
        assert_eq!(p("x1 + x2") + p("x1 - x2"), p("2*x1"));
        assert!((p("x1") - p("x1")).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("x1 + x2") * p("x1 - x2"), p("x1^2 - x2^2"));
        assert_eq!(Polynomial::one(2) * p("x1 x2 + 7"), p("x1 x2 + 7"));
        assert_eq!(p("1 + x1").pow(2), p("1 + 2 x1 + x1^2"));
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(3, 0);
        assert_eq!(
            a.checked_add(&b),
            Err(AlgebraError::DimensionMismatch { expected: 2, found: 3 })
        );
        assert!(a.checked_mul(&b).is_err());
        assert!(a.evaluate(&[int(1)]).is_err());
        assert!(a.evaluate_f64(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn graded_parts_examples() {
        let g = p("3 + x1 + x1*x2").graded_parts();
        assert_eq!(g.len(), 3);
        assert_eq!(g.get(0).unwrap(), &p("3"));
        assert_eq!(g.get(1).unwrap(), &p("x1"));
        assert_eq!(g.get(2).unwrap(), &p("x1*x2"));
        assert!(Polynomial::zero(2).graded_parts().is_empty());
        let h = p("x1^2 + x1 x2").graded_parts();
        assert_eq!(h.len(), 1);
        assert_eq!(h.get(2).unwrap(), &p("x1^2 + x1 x2"));
    }

    #[test]
    fn power_examples() {
        let x = Polynomial::parse(1, "x1").unwrap();
        assert_eq!(x.pow(4), Polynomial::parse(1, "x1^4").unwrap());
        assert_eq!(
            Polynomial::parse(1, "x1 - 1").unwrap().pow(2),
            Polynomial::parse(1, "x1^2 - 2x1 + 1").unwrap()
        );
        assert_eq!(p("x1 + 5 x2").pow(0), Polynomial::one(2));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p("x1^2 + x2").evaluate(&[int(2), int(3)]).unwrap(), int(7));
        assert_eq!(p("x1*x2 - 4/3").evaluate(&[int(0), int(0)]).unwrap(), rat(-4, 3));
        assert_eq!(p("x1*x2").evaluate(&[int(1), int(-1)]).unwrap(), int(-1));
        assert_eq!(p("x1^2 + x2").evaluate_f64(&[2.0, 3.0]).unwrap(), 7.0);
    }

    #[test]
    fn ordering_is_graded_lex() {
        let ms = monomials_up_to(2, 2);
        let shown: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["1", "x2", "x1", "x2^2", "x1*x2", "x1^2"]);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 4).len(), 35);
    }

    #[test]
    fn display_and_parse_agree() {
        for s in ["x1^2 - 2*x1*x2 + 1/3", "-x2 + 4", "0", "x1*x2^3 - 7/2*x1"] {
            let q = p(s);
            assert_eq!(Polynomial::parse(2, &q.to_string()).unwrap(), q);
        }
        assert_eq!(p("x1^2 - 2*x1*x2 + 1/3").to_string(), "x1^2 - 2*x1*x2 + 1/3");
        assert!(Polynomial::parse(2, "x3").is_err());
        assert!(Polynomial::parse(2, "x1 +").is_err());
        assert!(Polynomial::parse(2, "").is_err());
    }

    #[test]
    fn json_wire_format() {
        let f = p("x1*x2 - 1/10");
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"nvars":2,"terms":[{"exp":[0,0],"coef":"-1/10"},{"exp":[1,1],"coef":1}]}"#);
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let decimal: Polynomial =
            serde_json::from_str(r#"{"nvars":1,"terms":[{"exp":[2],"coef":"0.5"},{"exp":[2],"coef":0.5}]}"#).unwrap();
        assert_eq!(decimal, Polynomial::parse(1, "x1^2").unwrap());
        let bad = serde_json::from_str::<Polynomial>(r#"{"nvars":2,"terms":[{"exp":[1],"coef":1}]}"#);
        assert!(bad.is_err());
    }
}
