use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernel::{RatFunc, Rational};

/// Ambient shape: `n` even coordinates and `m` odd generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ambient {
    pub n: usize,
    pub m: usize,
}

impl Ambient {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(m <= 32, "at most 32 odd generators");
        Ambient { n, m }
    }

    /// Size of the combined basis `τ_1..τ_n, ψ_1..ψ_m`.
    pub fn rank(&self) -> usize {
        self.n + self.m
    }

    /// Parity of the `k`-th combined basis element.
    pub fn basis_parity(&self, k: usize) -> u8 {
        u8::from(k >= self.n)
    }

    pub fn check(&self, other: &Ambient) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(self.n, self.m, other.n, other.m))
        }
    }
}

/// Sign of `φ_S · φ_T` after sorting into increasing order.
pub fn koszul_negative(s: u32, t: u32) -> bool {
    let mut count = 0u32;
    let mut rest = t;
    while rest != 0 {
        let b = rest.trailing_zeros();
        count += (s >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    count % 2 == 1
}

/// Element of the free supercommutative algebra: odd monomials `φ_S` (as
/// bitmasks) with rational-function coefficients on the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperScalar {
    amb: Ambient,
    terms: BTreeMap<u32, RatFunc>,
}

impl SuperScalar {
    pub fn zero(amb: Ambient) -> Self {
        SuperScalar {
            amb,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(amb: Ambient) -> Self {
        Self::from_rf(amb, RatFunc::one(amb.n))
    }

    pub fn from_int(amb: Ambient, c: i64) -> Self {
        Self::from_rf(amb, RatFunc::from_int(amb.n, c))
    }

    pub fn constant(amb: Ambient, c: Rational) -> Self {
        Self::from_rf(amb, RatFunc::constant(amb.n, c))
    }

    pub fn from_rf(amb: Ambient, f: RatFunc) -> Self {
        Self::monomial(amb, 0, f)
    }

    /// Coordinate `x_{i+1}`.
    pub fn coord(amb: Ambient, i: usize) -> Self {
        Self::from_rf(amb, RatFunc::var(amb.n, i))
    }

    /// Odd generator `φ_{α+1}`.
    pub fn phi(amb: Ambient, alpha: usize) -> Self {
        Self::monomial(amb, 1 << alpha, RatFunc::one(amb.n))
    }

    pub fn monomial(amb: Ambient, mask: u32, f: RatFunc) -> Self {
        let mut s = Self::zero(amb);
        if !f.is_zero() {
            s.terms.insert(mask, f);
        }
        s
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &RatFunc)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, mask: u32) -> RatFunc {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.amb.n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(RatFunc::is_one)
    }

    /// The body, when the element has no odd part.
    pub fn as_even_rf(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero(self.amb.n)),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// `Some(p)` when homogeneous (zero counts as even).
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|k| (k.count_ones() % 2) as u8);
        let first = it.next().unwrap_or(0);
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn homogeneous_parity(&self) -> Result<u8> {
        self.parity().ok_or(Error::Inhomogeneous)
    }

    pub fn part(&self, parity: u8) -> Self {
        SuperScalar {
            amb: self.amb,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| (k.count_ones() % 2) as u8 == parity)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components as `(parity, part)`.
    pub fn homogeneous_parts(&self) -> Vec<(u8, Self)> {
        [0u8, 1]
            .into_iter()
            .map(|p| (p, self.part(p)))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    /// Grade involution: negates the odd part.
    pub fn involution(&self) -> Self {
        SuperScalar {
            amb: self.amb,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    (
                        *k,
                        if k.count_ones() % 2 == 1 {
                            -v
                        } else {
                            v.clone()
                        },
                    )
                })
                .collect(),
        }
    }

    /// Apply the involution `times` times.
    pub fn involution_pow(&self, times: u8) -> Self {
        if times % 2 == 1 {
            self.involution()
        } else {
            self.clone()
        }
    }

    fn add_term(&mut self, mask: u32, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(v) => {
                *v = &*v + &f;
                if v.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, f);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.amb);
        }
        self.map_rf(|f| f.scale(c))
    }

    pub fn mul_rf(&self, g: &RatFunc) -> Self {
        if g.is_zero() {
            return Self::zero(self.amb);
        }
        self.map_rf(|f| f * g)
    }

    pub fn map_rf(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        let mut out = Self::zero(self.amb);
        for (k, v) in &self.terms {
            out.add_term(*k, f(v));
        }
        out
    }

    pub fn checked_mul(&self, other: &SuperScalar) -> Result<Self> {
        self.amb.check(&other.amb)?;
        let mut out = Self::zero(self.amb);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                if s & t != 0 {
                    continue;
                }
                let prod = a * b;
                out.add_term(s | t, if koszul_negative(*s, *t) { -prod } else { prod });
            }
        }
        Ok(out)
    }

    /// Derivative along the even coordinate `x_{i+1}`, coefficientwise.
    pub fn partial(&self, i: usize) -> Self {
        self.map_rf(|f| f.partial(i).expect("coordinate index within ambient"))
    }

    /// Left odd derivation `ψ_{α+1}`.
    pub fn psi(&self, alpha: usize) -> Self {
        let bit = 1u32 << alpha;
        let mut out = Self::zero(self.amb);
        for (k, v) in &self.terms {
            if k & bit == 0 {
                continue;
            }
            let below = (k & (bit - 1)).count_ones();
            out.add_term(k & !bit, if below % 2 == 1 { -v } else { v.clone() });
        }
        out
    }

    /// Action of the `k`-th combined basis derivation.
    pub fn basis_derivative(&self, k: usize) -> Self {
        if k < self.amb.n {
            self.partial(k)
        } else {
            self.psi(k - self.amb.n)
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.amb);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `φ_β ↦ Σ_γ M[β][γ] φ_γ` (an even algebra map).
    pub fn substitute_odd(&self, images: &[SuperScalar]) -> Self {
        let mut out = Self::zero(self.amb);
        for (k, v) in &self.terms {
            let mut t = Self::from_rf(self.amb, v.clone());
            for (b, img) in images.iter().enumerate() {
                if k & (1 << b) != 0 {
                    t = &t * img;
                }
            }
            out = &out + &t;
        }
        out
    }
}

impl Add for &SuperScalar {
    type Output = SuperScalar;
    fn add(self, rhs: &SuperScalar) -> SuperScalar {
        debug_assert_eq!(self.amb, rhs.amb);
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &SuperScalar {
    type Output = SuperScalar;
    fn sub(self, rhs: &SuperScalar) -> SuperScalar {
        debug_assert_eq!(self.amb, rhs.amb);
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v);
        }
        out
    }
}

impl Neg for &SuperScalar {
    type Output = SuperScalar;
    fn neg(self) -> SuperScalar {
        self.map_rf(|f| -f)
    }
}

impl Mul for &SuperScalar {
    type Output = SuperScalar;
    fn mul(self, rhs: &SuperScalar) -> SuperScalar {
        self.checked_mul(rhs).expect("ambient mismatch")
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use owned_ops;
owned_ops!(SuperScalar);

impl Mul for SuperScalar {
    type Output = SuperScalar;
    fn mul(self, rhs: SuperScalar) -> SuperScalar {
        &self * &rhs
    }
}

pub(crate) fn fmt_mask(mask: u32, letter: &str) -> String {
    (0..32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| format!("{letter}{}", b + 1))
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for SuperScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                if *k == 0 {
                    v.to_string()
                } else if v.is_one() {
                    fmt_mask(*k, "phi")
                } else {
                    format!("({v})*{}", fmt_mask(*k, "phi"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
