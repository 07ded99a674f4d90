use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};

use super::poly::{gcd, Polynomial};
use super::Rational;

/// Reduced fraction of polynomials with a monic denominator, so structural
/// equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

impl RatFunc {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.nvars() != den.nvars() {
            return Err(Error::Shape(format!(
                "numerator has {} variables, denominator {}",
                num.nvars(),
                den.nvars()
            )));
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return RatFunc {
                num,
                den: Polynomial::one(n),
            };
        }
        if den.is_constant() {
            let c = den.constant_term().recip();
            return RatFunc {
                num: num.scale(&c),
                den: Polynomial::one(n),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading_coeff().recip();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        RatFunc {
            num: Polynomial::zero(nvars),
            den: Polynomial::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Polynomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Polynomial::var(nvars, i))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: Polynomial::one(n),
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Exact partial derivative in the zero-based variable `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        let dn = self.num.derivative(i)?;
        if self.den.is_one() {
            return Ok(Self::from_poly(dn));
        }
        let dd = self.den.derivative(i)?;
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Ok(Self::normalize(num, &self.den * &self.den))
    }

    /// Value at a rational point, or `None` at a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    /// Substitute `subs[j]` for the variable `x_j`; the result lives in the
    /// ring of the substituted functions.
    pub fn compose(&self, subs: &[RatFunc]) -> Result<Self> {
        if subs.len() != self.nvars() {
            return Err(Error::Shape(format!(
                "substitution of {} functions into {} variables",
                subs.len(),
                self.nvars()
            )));
        }
        let m = subs.first().map(RatFunc::nvars).unwrap_or(0);
        let num = compose_poly(&self.num, subs, m)?;
        let den = compose_poly(&self.den, subs, m)?;
        num.checked_div(&den)
    }
}

fn compose_poly(p: &Polynomial, subs: &[RatFunc], m: usize) -> Result<RatFunc> {
    let mut acc = RatFunc::zero(m);
    for (mono, c) in p.terms() {
        let mut t = RatFunc::constant(m, c.clone());
        for (s, &e) in subs.iter().zip(&mono.0) {
            if e > 0 {
                t = &t * &s.pow(e as i32)?;
            }
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc {
                    num,
                    den: self.den.clone(),
                };
            }
            return RatFunc::normalize(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let bd = self.den.exact_div(&g).expect("gcd divides");
        let dd = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &dd) + &(&rhs.num * &bd);
        RatFunc::normalize(num, &self.den * &dd)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc {
                num: &self.num * &rhs.num,
                den: self.den.clone(),
            };
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = rhs.den.exact_div(&g1).expect("gcd divides");
        let c = rhs.num.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.leading_coeff().recip();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl RatFunc {
    /// Render with the given variable names; parses back with the same names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        render(self, |p| p.to_string_with(names))
    }
}

fn render(r: &RatFunc, show: impl Fn(&Polynomial) -> String) -> String {
    if r.den.is_one() {
        return show(&r.num);
    }
    let wrap = |p: &Polynomial, strict: bool| {
        let s = show(p);
        if p.num_terms() > 1 || (strict && s.contains(['*', '/', '^'])) {
            format!("({s})")
        } else {
            s
        }
    };
    format!("{}/{}", wrap(&r.num, false), wrap(&r.den, true))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self, |p| p.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly::rational_from;
    use super::*;

    fn x(i: usize) -> RatFunc {
        RatFunc::var(2, i)
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::from_int(2, n)
    }

    #[test]
    fn cancellation_to_zero() {
        let p = &x(0) * &x(0);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn factor_cancellation() {
        let num = (&(&x(0) * &x(0)) - &c(1)).numer().clone();
        let den = (&x(0) - &c(1)).numer().clone();
        let r = RatFunc::new(num, den).unwrap();
        assert_eq!(r, &x(0) + &c(1));
        assert!(r.is_polynomial());
    }

    #[test]
    fn common_denominator() {
        let s = &x(0).recip().unwrap() + &x(1).recip().unwrap();
        let expected = (&x(0) + &x(1)).checked_div(&(&x(0) * &x(1))).unwrap();
        assert_eq!(s, expected);
        assert_eq!(s.to_string(), "(x1 + x2)/(x1*x2)");
    }

    #[test]
    fn zero_denominator_rejected() {
        let r = RatFunc::new(Polynomial::one(1), Polynomial::zero(1));
        assert_eq!(r, Err(Error::DivisionByZero));
        assert!(x(0).checked_div(&c(0)).is_err());
    }

    #[test]
    fn denominator_is_monic() {
        let r = c(1)
            .checked_div(&x(0).scale(&rational_from(-3, 1)))
            .unwrap();
        assert_eq!(r.denom(), x(0).numer());
        assert_eq!(r.numer().constant_term(), rational_from(-1, 3));
    }

    #[test]
    fn derivatives() {
        assert_eq!(
            x(0).pow(3).unwrap().partial(0).unwrap(),
            &c(3) * &x(0).pow(2).unwrap()
        );
        assert_eq!(
            x(0).recip().unwrap().partial(0).unwrap(),
            -x(0).pow(-2).unwrap()
        );
        assert!(x(0).partial(1).unwrap().is_zero());
        assert!(x(0).partial(2).is_err());
    }

    #[test]
    fn composition() {
        // (x1 + 1/x2) with x1 -> x2, x2 -> x1^2
        let f = &x(0) + &x(1).recip().unwrap();
        let g = f.compose(&[x(1), x(0).pow(2).unwrap()]).unwrap();
        assert_eq!(g, &x(1) + &x(0).pow(-2).unwrap());
    }
}
