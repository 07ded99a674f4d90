//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` ordered by graded lexicographic order, so the
//! leading term is always the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::Rational;

/// Exponent vector, ordered by total degree first and then lexicographically
/// (`x1 > x2 > ...`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn meet(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
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

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    /// The coordinate function `x_{i+1}` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rational::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                count: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(d, c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Exact division; fails if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (lm, lc) = match divisor.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return Err(Error::Invalid("inexact polynomial division".into()));
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quo.add_term(qm, qc);
        }
        Ok(quo)
    }

    /// Scalar multiple with coprime integer coefficients; keeps pseudo-remainder
    /// sequences from growing.
    fn integer_primitive(&self) -> Polynomial {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        if num.is_zero() {
            return self.clone();
        }
        self.scale(&Rational::new(den, num))
    }

    /// Positive integer content and primitive part of an integer polynomial.
    fn integer_content_split(&self) -> (BigInt, Polynomial) {
        let c = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v.numer()));
        if c.is_zero() || c.is_one() {
            return (BigInt::one(), self.clone());
        }
        let inv = Rational::new(BigInt::one(), c.clone());
        (c, self.scale(&inv))
    }

    /// Substitute the integer `x` for variable `v`.
    fn eval_var_int(&self, v: usize, x: &BigInt) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut r = m.clone();
            let e = r.0[v];
            r.0[v] = 0;
            out.add_term(r, c * Rational::from_integer(num_traits::pow(x.clone(), e as usize)));
        }
        out
    }

    fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = it
            .next()
            .cloned()
            .unwrap_or_else(|| Monomial::one(self.nvars));
        it.fold(first, |acc, m| acc.meet(m))
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Coefficients with respect to variable `v`, indexed by power of `v`.
    fn coeffs_in(&self, v: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut r = m.clone();
            r.0[v] = 0;
            out[k].add_term(r, c.clone());
        }
        out
    }

    fn from_coeffs_in(nvars: usize, v: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut xk = Monomial::one(nvars);
            xk.0[v] = k as u32;
            for (m, val) in &c.terms {
                out.add_term(m.mul(&xk), val.clone());
            }
        }
        out
    }

    fn content_in(&self, v: usize) -> Polynomial {
        self.coeffs_in(v)
            .iter()
            .filter(|c| !c.is_zero())
            .fold(Self::zero(self.nvars), |acc, c| gcd(&acc, c))
    }

    /// Pseudo-remainder of `self` by `b` with respect to variable `v`.
    fn prem_in(&self, b: &Polynomial, v: usize) -> Polynomial {
        let db = b.degree_in(v);
        let bc = b.coeffs_in(v);
        let lcb = bc[db as usize].clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lcr = r.coeffs_in(v)[dr as usize].clone();
            let mut shift = Monomial::one(self.nvars);
            shift.0[v] = dr - db;
            let t = (&lcr * b).mul_term(&shift, &Rational::one());
            r = &(&lcb * &r) - &t;
        }
        r
    }
}

/// Monic greatest common divisor over `Q[x1..xn]` (zero if both are zero).
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() || a.is_constant() || b.is_constant() {
        return gcd_prs(a, b);
    }
    if a.is_monomial() || b.is_monomial() || a == b {
        return gcd_prs(a, b);
    }
    match heuristic_gcd(&a.integer_primitive(), &b.integer_primitive(), 0) {
        Some(g) => g.monic(),
        None => gcd_prs(a, b),
    }
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms
        .values()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Evaluation/interpolation gcd of integer polynomials, up to sign. Gives up
/// (returns `None`) after a few unlucky evaluation points.
fn heuristic_gcd(a: &Polynomial, b: &Polynomial, depth: usize) -> Option<Polynomial> {
    let n = a.nvars;
    let v = match (0..n).find(|&v| a.involves(v) || b.involves(v)) {
        Some(v) => v,
        None => {
            let g = a.constant_term().numer().gcd(b.constant_term().numer());
            return Some(Polynomial::constant(n, Rational::from_integer(g)));
        }
    };
    if depth > 8 {
        return None;
    }
    let (ca, a) = a.integer_content_split();
    let (cb, b) = b.integer_content_split();
    let (a, b) = (&a, &b);
    let content = Rational::from_integer(ca.gcd(&cb));
    let norm = max_norm(a).min(max_norm(b));
    let mut xi: BigInt = norm * 2 + 29;
    for _ in 0..6 {
        let av = a.eval_var_int(v, &xi);
        let bv = b.eval_var_int(v, &xi);
        if !av.is_zero() && !bv.is_zero() {
            if let Some(gamma) = heuristic_gcd(&av, &bv, depth + 1) {
                let g = interpolate(&gamma, v, &xi).integer_primitive();
                if !g.is_zero() && a.exact_div(&g).is_ok() && b.exact_div(&g).is_ok() {
                    return Some(g.scale(&content));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// Rebuild a polynomial in `v` from its value at `v = xi` by balanced
/// `xi`-adic expansion of the coefficients.
fn interpolate(gamma: &Polynomial, v: usize, xi: &BigInt) -> Polynomial {
    let n = gamma.nvars;
    let mut out = Polynomial::zero(n);
    let mut rest = gamma.clone();
    let mut k = 0u32;
    while !rest.is_zero() {
        let mut digit = Polynomial::zero(n);
        for (m, c) in &rest.terms {
            let d = symmetric_mod(c.numer(), xi);
            if !d.is_zero() {
                digit.add_term(m.clone(), Rational::from_integer(d));
            }
        }
        let mut shift = Monomial::one(n);
        shift.0[v] = k;
        out = &out + &digit.mul_term(&shift, &Rational::one());
        rest = (&rest - &digit).scale(&Rational::new(BigInt::one(), xi.clone()));
        k += 1;
    }
    out
}

fn gcd_prs(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.nvars;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a.is_monomial() || b.is_monomial() {
        let m = a.min_exponents().meet(&b.min_exponents());
        return Polynomial {
            nvars: n,
            terms: BTreeMap::from([(m, Rational::one())]),
        };
    }
    if a == b {
        return a.monic();
    }
    let v = match (0..n).rev().find(|&v| a.involves(v) || b.involves(v)) {
        Some(v) => v,
        None => return Polynomial::one(n),
    };
    if !a.involves(v) {
        return gcd(a, &b.content_in(v));
    }
    if !b.involves(v) {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.prem_in(&q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_in(&r, v) };
    }
    let g = primitive_in(&p, v);
    (&g * &c).monic()
}

fn primitive_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = p.content_in(v);
    let p = if c.is_one() {
        p.clone()
    } else {
        p.exact_div(&c).expect("content divides")
    };
    p.integer_primitive()
}

// The coefficient-wise helper keeps `Polynomial::from_coeffs_in` reachable for tests.
#[allow(dead_code)]
pub(crate) fn rebuild(nvars: usize, v: usize, coeffs: &[Polynomial]) -> Polynomial {
    Polynomial::from_coeffs_in(nvars, v, coeffs)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl Polynomial {
    /// Render with the given variable names instead of `x1, x2, ...`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        self.write_with(&mut out, |i| names[i].clone()).expect("string write");
        out
    }

    fn write_with(&self, f: &mut impl fmt::Write, name: impl Fn(usize) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            name(i)
                        } else {
                            format!("{}^{}", name(i), e)
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", fmt_rational(&abs))?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, |i| format!("x{}", i + 1))
    }
}

/// Small integer conversion used by display helpers and samplers.
pub fn rational_from(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn heuristic_gcd_agrees_with_prs() {
        let c = |v: i64| Polynomial::from_int(3, v);
        let f = &(&(&x(0) * &x(1)) + &c(3)) - &x(2).pow(2);
        let g = &(&x(0).pow(2) - &x(1)) + &c(-7);
        let h = &(&x(1) * &x(2)).scale(&Rational::from_integer(5.into())) + &x(0);
        for (a, b) in [
            (&f * &g, &f * &h),
            (&(&f * &f) * &g, &(&f * &g) * &h),
            (g.scale(&Rational::from_integer(6.into())), g.scale(&Rational::from_integer(4.into()))),
            (&f * &h, g.clone()),
        ] {
            assert_eq!(gcd(&a, &b), gcd_prs(&a, &b));
        }
        assert_eq!(gcd(&(&f * &g), &(&f * &h)), f.monic());
    }

    #[test]
    fn graded_lex_leading_term() {
        let p = &(&x(0) * &x(0)) + &x(1).pow(3);
        assert_eq!(p.leading().unwrap().0, &Monomial(vec![0, 3, 0]));
    }

    #[test]
    fn derivative_of_cube() {
        let p = x(0).pow(3);
        assert_eq!(
            p.derivative(0).unwrap(),
            x(0).pow(2).scale(&rational_from(3, 1))
        );
        assert_eq!(p.derivative(1).unwrap(), Polynomial::zero(3));
        assert!(p.derivative(3).is_err());
    }

    #[test]
    fn gcd_of_products() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &x(2);
        let c = &(&x(0) * &x(1)) + &Polynomial::one(3);
        let p = &(&a * &b) * &c;
        let q = &(&a * &c).scale(&rational_from(-3, 2)) * &x(2);
        let g = gcd(&p, &q);
        assert_eq!(g, (&a * &c).monic());
    }

    #[test]
    fn gcd_coprime() {
        let p = &x(0).pow(2) - &Polynomial::one(3);
        let q = &x(0) + &x(1);
        assert!(gcd(&p, &q).is_one());
    }

    #[test]
    fn exact_division_detects_remainder() {
        let p = &x(0).pow(2) - &Polynomial::one(3);
        let q = &x(0) - &Polynomial::one(3);
        assert_eq!(p.exact_div(&q).unwrap(), &x(0) + &Polynomial::one(3));
        assert!(p.exact_div(&x(1)).is_err());
    }

    #[test]
    fn rebuild_from_coefficients() {
        let p = &(&x(0).pow(2) * &x(2)) + &x(1);
        let coeffs = p.coeffs_in(2);
        assert_eq!(rebuild(3, 2, &coeffs), p);
    }
}
