//! Exact integer-coefficient polynomials in one and two variables, the
//! Chebyshev families `T_k` and `U_k`, and the factorization identities that
//! tie the equilateral-triangle eigenfunctions together.
//!
//! Coefficients are arbitrary-precision integers so that an equality check is
//! a proof rather than a floating-point comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::PolyError;

/// Univariate polynomial, `coeffs[i]` is the coefficient of `t^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly1 {
    coeffs: Vec<BigInt>,
}

impl Poly1 {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![BigInt::from(c)])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `t`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + BigRational::from_integer(c.clone()))
    }

    /// Exact evaluation at the binary value of `t`, rounded once. Horner in
    /// `f64` loses about 12 digits for `U_32` near `t = 1`.
    pub fn eval_f64(&self, t: f64) -> f64 {
        match BigRational::from_float(t) {
            Some(r) => self.eval_rational(&r).to_f64().unwrap_or(f64::NAN),
            None => f64::NAN,
        }
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1::new(out)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(BigInt, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "t".to_string(),
                    _ => format!("t^{i}"),
                };
                (c.clone(), mono)
            })
            .collect();
        write_terms(f, &terms)
    }
}

/// Bivariate polynomial in `X`, `Y`, stored sparsely by exponent pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn x() -> Self {
        Self::from_terms([((1, 0), 1)])
    }

    pub fn y() -> Self {
        Self::from_terms([((0, 1), 1)])
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (exp, c) in terms {
            p.add_term(exp, BigInt::from(c));
        }
        p
    }

    /// Embed a univariate polynomial as a polynomial in `X`.
    pub fn from_x(p: &Poly1) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term((i as u32, 0), c.clone());
        }
        out
    }

    /// Embed a univariate polynomial as a polynomial in `Y`.
    pub fn from_y(p: &Poly1) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term((0, i as u32), c.clone());
        }
        out
    }

    fn add_term(&mut self, exp: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// Add `delta` to one coefficient; used to build deliberately wrong polynomials.
    pub fn perturbed(&self, exp: (u32, u32), delta: i64) -> Self {
        let mut p = self.clone();
        p.add_term(exp, BigInt::from(delta));
        p
    }

    pub fn eval_rational(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (&(i, j), c)| {
            acc + BigRational::from_integer(c.clone()) * pow_rational(x, i) * pow_rational(y, j)
        })
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        match (BigRational::from_float(x), BigRational::from_float(y)) {
            (Some(x), Some(y)) => self.eval_rational(&x, &y).to_f64().unwrap_or(f64::NAN),
            _ => f64::NAN,
        }
    }
}

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    (0..exp).fold(BigRational::one(), |acc, _| acc * base)
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&exp, c) in &rhs.terms {
            out.add_term(exp, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&exp, c) in &rhs.terms {
            out.add_term(exp, -c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), a * b);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |v: &str, e: u32| match e {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{e}"),
        };
        let terms: Vec<(BigInt, String)> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), c)| (c.clone(), format!("{}{}", mono("X", i), mono("Y", j))))
            .collect();
        write_terms(f, &terms)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(BigInt, String)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (c, mono)) in terms.iter().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        if k == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        let mag = c.abs();
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}{mono}")?;
        }
    }
    Ok(())
}

/// Polynomial of either arity, for callers that only know the arity at runtime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Poly {
    Uni(Poly1),
    Bi(Poly2),
}

impl Poly {
    pub fn checked_add(&self, rhs: &Poly) -> Result<Poly, PolyError> {
        match (self, rhs) {
            (Poly::Uni(a), Poly::Uni(b)) => Ok(Poly::Uni(a + b)),
            (Poly::Bi(a), Poly::Bi(b)) => Ok(Poly::Bi(a + b)),
            _ => Err(PolyError::ArityMismatch),
        }
    }

    pub fn checked_sub(&self, rhs: &Poly) -> Result<Poly, PolyError> {
        match (self, rhs) {
            (Poly::Uni(a), Poly::Uni(b)) => Ok(Poly::Uni(a - b)),
            (Poly::Bi(a), Poly::Bi(b)) => Ok(Poly::Bi(a - b)),
            _ => Err(PolyError::ArityMismatch),
        }
    }

    pub fn checked_mul(&self, rhs: &Poly) -> Result<Poly, PolyError> {
        match (self, rhs) {
            (Poly::Uni(a), Poly::Uni(b)) => Ok(Poly::Uni(a * b)),
            (Poly::Bi(a), Poly::Bi(b)) => Ok(Poly::Bi(a * b)),
            _ => Err(PolyError::ArityMismatch),
        }
    }

    /// Evaluate at a point whose length must match the arity.
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        match (self, point) {
            (Poly::Uni(p), [t]) => Ok(p.eval_f64(*t)),
            (Poly::Bi(p), [x, y]) => Ok(p.eval_f64(*x, *y)),
            _ => Err(PolyError::ArityMismatch),
        }
    }
}

/// Chebyshev polynomial of the second kind, `sin((k+1)t) = sin(t) U_k(cos t)`.
pub fn cheb_u(k: usize) -> Poly1 {
    three_term(k, Poly1::one(), Poly1::from_i64(&[0, 2]))
}

/// Chebyshev polynomial of the first kind, `cos(kt) = T_k(cos t)`.
pub fn cheb_t(k: usize) -> Poly1 {
    three_term(k, Poly1::one(), Poly1::t())
}

// p_{j+1} = 2t p_j - p_{j-1}
fn three_term(k: usize, p0: Poly1, p1: Poly1) -> Poly1 {
    if k == 0 {
        return p0;
    }
    let two = BigInt::from(2);
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..k {
        let next = &cur.shift().scale(&two) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Q(X, Y) = T_5(X) - X U_2(Y) + T_4(X) U_1(Y)`, the polynomial carried by the
/// second symmetric Dirichlet eigenfunction of the equilateral triangle.
pub fn build_q() -> Poly2 {
    let x = Poly2::x();
    let t5 = Poly2::from_x(&cheb_t(5));
    let t4 = Poly2::from_x(&cheb_t(4));
    let u2 = Poly2::from_y(&cheb_u(2));
    let u1 = Poly2::from_y(&cheb_u(1));
    &(&t5 - &(&x * &u2)) + &(&t4 * &u1)
}

/// The two factors `2X(X+Y) - 1` and `8X^3 - 6X - 2Y` of `Q`.
pub fn q_factors() -> (Poly2, Poly2) {
    let first = Poly2::from_terms([((2, 0), 2), ((1, 1), 2), ((0, 0), -1)]);
    let second = Poly2::from_terms([((3, 0), 8), ((1, 0), -6), ((0, 1), -2)]);
    (first, second)
}

/// Exact check that `q` equals the product of [`q_factors`].
pub fn is_q_factorization(q: &Poly2) -> bool {
    let (a, b) = q_factors();
    *q == &a * &b
}

pub fn verify_q_factorization() -> bool {
    is_q_factorization(&build_q())
}

/// Checks `2 T_n = U_n - U_{n-2}` exactly.
pub fn verify_tu_identity(n: usize) -> Result<bool, PolyError> {
    if n < 2 {
        return Err(PolyError::DegreeTooSmall { n, min: 2 });
    }
    let lhs = cheb_t(n).scale(&BigInt::from(2));
    let rhs = &cheb_u(n) - &cheb_u(n - 2);
    Ok((&lhs - &rhs).is_zero())
}
