//! Seeded random elements for property checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kernel::{rational_from, Monomial, Polynomial, RatFunc, RatMatrix};
use crate::superalg::{Ambient, SuperCovector, SuperScalar, SuperVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoolConfig {
    /// Maximal total degree of polynomial coefficients.
    pub degree: u32,
    /// Integer coefficients are drawn from `-bound..=bound`.
    pub coeff_bound: i64,
    /// Maximal number of odd generators in a monomial.
    pub odd_width: u32,
    /// Maximal number of terms per polynomial.
    pub max_terms: usize,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            degree: 2,
            coeff_bound: 3,
            odd_width: 2,
            max_terms: 3,
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    amb: Ambient,
    cfg: PoolConfig,
}

impl Sampler {
    pub fn new(seed: u64, amb: Ambient, cfg: PoolConfig) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            amb,
            cfg,
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    fn nonzero_coeff(&mut self) -> i64 {
        loop {
            let c = self
                .rng
                .gen_range(-self.cfg.coeff_bound..=self.cfg.coeff_bound);
            if c != 0 {
                return c;
            }
        }
    }

    fn exponents(&mut self) -> Vec<u32> {
        let n = self.amb.n;
        let total = self.rng.gen_range(0..=self.cfg.degree);
        let mut e = vec![0u32; n];
        if n > 0 {
            for _ in 0..total {
                e[self.rng.gen_range(0..n)] += 1;
            }
        }
        e
    }

    /// Nonzero polynomial coefficient.
    pub fn polynomial(&mut self) -> RatFunc {
        let n = self.amb.n;
        loop {
            let k = self.rng.gen_range(1..=self.cfg.max_terms);
            let mut terms = Vec::with_capacity(k);
            for _ in 0..k {
                let c = self.nonzero_coeff();
                terms.push((Monomial(self.exponents()), rational_from(c, 1)));
            }
            let p = Polynomial::from_terms(n, terms);
            if !p.is_zero() {
                return RatFunc::from_poly(p);
            }
        }
    }

    fn odd_mask(&mut self, parity: u8) -> Option<u32> {
        let m = self.amb.m as u32;
        let widths: Vec<u32> = (0..=self.cfg.odd_width.min(m))
            .filter(|w| (w % 2) as u8 == parity)
            .collect();
        if widths.is_empty() {
            return None;
        }
        let w = widths[self.rng.gen_range(0..widths.len())];
        let mut mask = 0u32;
        while mask.count_ones() < w {
            mask |= 1 << self.rng.gen_range(0..m);
        }
        Some(mask)
    }

    /// Homogeneous scalar of the given parity; may be zero only when no such
    /// monomials exist.
    pub fn scalar(&mut self, parity: u8) -> SuperScalar {
        let mut s = SuperScalar::zero(self.amb);
        let k = self.rng.gen_range(1..=2);
        for _ in 0..k {
            if let Some(mask) = self.odd_mask(parity) {
                let f = self.polynomial();
                s = &s + &SuperScalar::monomial(self.amb, mask, f);
            }
        }
        s
    }

    /// Scalar of random parity.
    pub fn any_scalar(&mut self) -> SuperScalar {
        let p = self.parity();
        self.scalar(p)
    }

    /// Element of the even base ring (no odd generators).
    pub fn base(&mut self) -> SuperScalar {
        let f = self.polynomial();
        SuperScalar::from_rf(self.amb, f)
    }

    pub fn parity(&mut self) -> u8 {
        if self.amb.m == 0 {
            0
        } else {
            self.rng.gen_range(0..=1)
        }
    }

    fn components(&mut self, parity: u8) -> Vec<SuperScalar> {
        let rank = self.amb.rank();
        let mut comps = vec![SuperScalar::zero(self.amb); rank];
        let k = self.rng.gen_range(1..=2);
        for _ in 0..k {
            let idx = self.rng.gen_range(0..rank);
            let c = self.scalar((parity + self.amb.basis_parity(idx)) % 2);
            comps[idx] = &comps[idx] + &c;
        }
        comps
    }

    pub fn vector(&mut self, parity: u8) -> SuperVector {
        let comps = self.components(parity);
        SuperVector::from_comps(self.amb, comps)
    }

    pub fn any_vector(&mut self) -> SuperVector {
        let p = self.parity();
        self.vector(p)
    }

    pub fn covector(&mut self, parity: u8) -> SuperCovector {
        let comps = self.components(parity);
        SuperCovector::from_comps(self.amb, comps)
    }

    pub fn any_covector(&mut self) -> SuperCovector {
        let p = self.parity();
        self.covector(p)
    }

    /// Square matrix of pool polynomials with nonzero determinant.
    pub fn invertible_matrix(&mut self, size: usize) -> RatMatrix {
        let n = self.amb.n;
        loop {
            let rows = (0..size)
                .map(|_| (0..size).map(|_| self.polynomial()).collect())
                .collect();
            let m = RatMatrix::from_rows(n, rows).expect("square rows");
            if m.determinant().map(|d| !d.is_zero()).unwrap_or(false) {
                return m;
            }
        }
    }

    pub fn gen_range(&mut self, range: std::ops::Range<usize>) -> usize {
        self.rng.gen_range(range)
    }
}
