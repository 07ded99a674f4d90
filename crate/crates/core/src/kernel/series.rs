//! Truncated series in `q` whose coefficients are Laurent polynomials in `u`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::poly::fmt_rational;
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UQSeries {
    order: usize,
    levels: Vec<BTreeMap<i64, Rational>>,
}

impl UQSeries {
    pub fn zero(order: usize) -> Self {
        UQSeries {
            order,
            levels: vec![BTreeMap::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, Rational::one(), 0, 0)
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        Self::monomial(order, c, 0, 0)
    }

    /// `c · u^u_exp · q^q_exp`, dropped if beyond the truncation order.
    pub fn monomial(order: usize, c: Rational, u_exp: i64, q_exp: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_coeff(u_exp, q_exp, c);
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, u_exp: i64, q_exp: usize) -> Rational {
        self.levels
            .get(q_exp)
            .and_then(|l| l.get(&u_exp))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The `u`-Laurent polynomial multiplying `q^q_exp`.
    pub fn level(&self, q_exp: usize) -> &BTreeMap<i64, Rational> {
        &self.levels[q_exp]
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(BTreeMap::is_empty)
    }

    pub fn add_coeff(&mut self, u_exp: i64, q_exp: usize, c: Rational) {
        if q_exp > self.order || c.is_zero() {
            return;
        }
        let level = &mut self.levels[q_exp];
        let v = level.entry(u_exp).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            level.remove(&u_exp);
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (q, level) in self.levels.iter().enumerate().take(order + 1) {
            s.levels[q] = level.clone();
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        UQSeries {
            order: self.order,
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|(k, v)| (*k, v * c)).collect())
                .collect(),
        }
    }

    /// Multiply by `u^k`.
    pub fn shift_u(&self, k: i64) -> Self {
        UQSeries {
            order: self.order,
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|(e, v)| (e + k, v.clone())).collect())
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse through the truncation order.
    ///
    /// The `q^0` part must be a single `u`-monomial; otherwise the inverse has
    /// infinite `u`-support at fixed `q`-degree.
    pub fn invert(&self) -> Result<Self> {
        let lead = &self.levels[0];
        if lead.len() != 1 {
            return Err(Error::SeriesNotInvertible(format!(
                "q^0 part has {} terms, expected a single u-monomial",
                lead.len()
            )));
        }
        let (&k, c) = lead.iter().next().unwrap();
        let head_inv = Self::monomial(self.order, c.recip(), -k, 0);
        // self = head · (1 + r) with r of positive q-degree
        let mut r = &(self * &head_inv) - &Self::one(self.order);
        r = -&r;
        let mut acc = Self::one(self.order);
        let mut term = Self::one(self.order);
        for _ in 0..self.order {
            term = &term * &r;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(&acc * &head_inv)
    }

    /// Specialize `u` to a nonzero rational; returns the coefficient of each `q^k`.
    pub fn eval_u(&self, u: &Rational) -> Vec<Rational> {
        self.levels
            .iter()
            .map(|l| {
                l.iter().fold(Rational::zero(), |acc, (e, v)| {
                    let p = if *e >= 0 {
                        pow_rat(u, *e as u32)
                    } else {
                        pow_rat(&u.recip(), e.unsigned_abs() as u32)
                    };
                    acc + v * p
                })
            })
            .collect()
    }

    /// Rows `(q-exponent, u-exponent, coefficient)` sorted by `q` then `u`.
    pub fn table(&self) -> Vec<(usize, i64, Rational)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(q, l)| l.iter().map(move |(u, c)| (q, *u, c.clone())))
            .collect()
    }
}

fn pow_rat(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl Add for &UQSeries {
    type Output = UQSeries;
    fn add(self, rhs: &UQSeries) -> UQSeries {
        let mut out = self.truncate(self.order.min(rhs.order));
        for (q, l) in rhs.levels.iter().enumerate() {
            for (u, c) in l {
                out.add_coeff(*u, q, c.clone());
            }
        }
        out
    }
}

impl Neg for &UQSeries {
    type Output = UQSeries;
    fn neg(self) -> UQSeries {
        self.scale(&-Rational::one())
    }
}

impl Sub for &UQSeries {
    type Output = UQSeries;
    fn sub(self, rhs: &UQSeries) -> UQSeries {
        self + &(-rhs)
    }
}

impl Mul for &UQSeries {
    type Output = UQSeries;
    fn mul(self, rhs: &UQSeries) -> UQSeries {
        let order = self.order.min(rhs.order);
        let mut out = UQSeries::zero(order);
        for (q1, l1) in self.levels.iter().enumerate().take(order + 1) {
            for (q2, l2) in rhs.levels.iter().enumerate().take(order + 1 - q1) {
                for (u1, c1) in l1 {
                    for (u2, c2) in l2 {
                        out.add_coeff(u1 + u2, q1 + q2, c1 * c2);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for UQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.table();
        if rows.is_empty() {
            return write!(f, "0");
        }
        for (k, (q, u, c)) in rows.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", fmt_rational(&c.abs()))?;
            if *u != 0 {
                write!(f, " * u^{u}")?;
            }
            if *q != 0 {
                write!(f, " * q^{q}")?;
            }
        }
        Ok(())
    }
}
