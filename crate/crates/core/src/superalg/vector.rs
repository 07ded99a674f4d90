use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::Result;
use crate::kernel::Rational;

use super::scalar::{owned_ops, Ambient, SuperScalar};

macro_rules! component_type {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash)]
        pub struct $name {
            amb: Ambient,
            comps: Vec<SuperScalar>,
        }

        impl $name {
            pub fn zero(amb: Ambient) -> Self {
                $name {
                    amb,
                    comps: vec![SuperScalar::zero(amb); amb.rank()],
                }
            }

            /// The `k`-th element of the combined basis (even block first).
            pub fn basis(amb: Ambient, k: usize) -> Self {
                let mut v = Self::zero(amb);
                v.comps[k] = SuperScalar::one(amb);
                v
            }

            pub fn from_comps(amb: Ambient, comps: Vec<SuperScalar>) -> Self {
                assert_eq!(comps.len(), amb.rank(), "component count");
                $name { amb, comps }
            }

            /// `f · e_k`.
            pub fn single(amb: Ambient, k: usize, f: SuperScalar) -> Self {
                let mut v = Self::zero(amb);
                v.comps[k] = f;
                v
            }

            pub fn ambient(&self) -> Ambient {
                self.amb
            }

            pub fn comp(&self, k: usize) -> &SuperScalar {
                &self.comps[k]
            }

            pub fn comps(&self) -> &[SuperScalar] {
                &self.comps
            }

            pub fn is_zero(&self) -> bool {
                self.comps.iter().all(SuperScalar::is_zero)
            }

            /// `Some(p)` when homogeneous (zero counts as even).
            pub fn parity(&self) -> Option<u8> {
                let mut seen: Option<u8> = None;
                for (k, c) in self.comps.iter().enumerate() {
                    for (mask, _) in c.terms() {
                        let p = ((mask.count_ones() as u8) + self.amb.basis_parity(k)) % 2;
                        match seen {
                            None => seen = Some(p),
                            Some(q) if q != p => return None,
                            _ => {}
                        }
                    }
                }
                Some(seen.unwrap_or(0))
            }

            pub fn homogeneous_parity(&self) -> Result<u8> {
                self.parity().ok_or(crate::error::Error::Inhomogeneous)
            }

            pub fn part(&self, parity: u8) -> Self {
                let comps = self
                    .comps
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.part((parity + self.amb.basis_parity(k)) % 2))
                    .collect();
                $name {
                    amb: self.amb,
                    comps,
                }
            }

            pub fn homogeneous_parts(&self) -> Vec<(u8, Self)> {
                [0u8, 1]
                    .into_iter()
                    .map(|p| (p, self.part(p)))
                    .filter(|(_, s)| !s.is_zero())
                    .collect()
            }

            /// Left multiplication by a scalar.
            pub fn left_mul(&self, f: &SuperScalar) -> Self {
                $name {
                    amb: self.amb,
                    comps: self.comps.iter().map(|c| f * c).collect(),
                }
            }

            pub fn scale(&self, c: &Rational) -> Self {
                $name {
                    amb: self.amb,
                    comps: self.comps.iter().map(|x| x.scale(c)).collect(),
                }
            }

            pub fn map_comps(&self, f: impl Fn(&SuperScalar) -> SuperScalar) -> Self {
                $name {
                    amb: self.amb,
                    comps: self.comps.iter().map(f).collect(),
                }
            }

            pub fn involution(&self) -> Self {
                self.map_comps(SuperScalar::involution)
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name {
                    amb: self.amb,
                    comps: self
                        .comps
                        .iter()
                        .zip(&rhs.comps)
                        .map(|(a, b)| a + b)
                        .collect(),
                }
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name {
                    amb: self.amb,
                    comps: self
                        .comps
                        .iter()
                        .zip(&rhs.comps)
                        .map(|(a, b)| a - b)
                        .collect(),
                }
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name {
                    amb: self.amb,
                    comps: self.comps.iter().map(|a| -a).collect(),
                }
            }
        }

        owned_ops!($name);
    };
}

component_type!(SuperVector);
component_type!(SuperCovector);

impl SuperVector {
    /// `τ_{i+1}`.
    pub fn tau(amb: Ambient, i: usize) -> Self {
        Self::basis(amb, i)
    }

    /// `ψ_{α+1}`.
    pub fn psi(amb: Ambient, alpha: usize) -> Self {
        Self::basis(amb, amb.n + alpha)
    }

    /// Superderivation action on a scalar, `X(f) = Σ X^k e_k(f)`.
    pub fn apply(&self, f: &SuperScalar) -> SuperScalar {
        let mut acc = SuperScalar::zero(self.amb);
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.basis_derivative(k);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// Supercommutator `[X, Y]^l = X(Y^l) - (-1)^{p(X)p(Y)} Y(X^l)`.
    pub fn bracket(&self, other: &SuperVector) -> SuperVector {
        let mut out = SuperVector::zero(self.amb);
        for (px, x) in self.homogeneous_parts() {
            for (py, y) in other.homogeneous_parts() {
                let comps: Vec<SuperScalar> = (0..self.amb.rank())
                    .map(|l| {
                        let a = x.apply(&y.comps[l]);
                        let b = y.apply(&x.comps[l]);
                        if px * py == 1 {
                            &a + &b
                        } else {
                            &a - &b
                        }
                    })
                    .collect();
                out = &out + &SuperVector::from_comps(self.amb, comps);
            }
        }
        out
    }

    /// Pairing with a covector, even and left-linear in `X`:
    /// `⟨X, η⟩ = Σ_k X^k (-1)^{p(e_k)p(η_k)} η_k`.
    pub fn pair(&self, eta: &SuperCovector) -> SuperScalar {
        let mut acc = SuperScalar::zero(self.amb);
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() || eta.comps[k].is_zero() {
                continue;
            }
            let e = eta.comps[k].involution_pow(self.amb.basis_parity(k));
            acc = &acc + &(c * &e);
        }
        acc
    }

    /// Action on covectors: basis forms are killed by basis fields and
    /// `(aτ)(η) = a τ(η) + (-1)^{p(a)(p(τ)+p(η))} ⟨τ, η⟩ ∂a`.
    pub fn act_on_covector(&self, eta: &SuperCovector) -> SuperCovector {
        let mut acc = SuperCovector::zero(self.amb);
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ek_eta = eta.map_comps(|e| e.basis_derivative(k));
            acc = &acc + &ek_eta.left_mul(c);
            let pairing = eta.comps[k].involution_pow(self.amb.basis_parity(k));
            for (r, p) in pairing.homogeneous_parts() {
                let da = SuperCovector::differential(&c.involution_pow(r));
                acc = &acc + &da.left_mul(&p);
            }
        }
        acc
    }
}

impl SuperCovector {
    /// `ω_{i+1}`.
    pub fn omega(amb: Ambient, i: usize) -> Self {
        Self::basis(amb, i)
    }

    /// `ρ_{α+1}`.
    pub fn rho(amb: Ambient, alpha: usize) -> Self {
        Self::basis(amb, amb.n + alpha)
    }

    /// `∂f`, normalized so that `⟨X, ∂f⟩ = X(f)`.
    pub fn differential(f: &SuperScalar) -> Self {
        let amb = f.ambient();
        let comps = (0..amb.rank())
            .map(|k| f.basis_derivative(k).involution_pow(amb.basis_parity(k)))
            .collect();
        SuperCovector::from_comps(amb, comps)
    }
}

fn fmt_comps(
    f: &mut fmt::Formatter<'_>,
    comps: &[SuperScalar],
    n: usize,
    even: &str,
    odd: &str,
) -> fmt::Result {
    let parts: Vec<String> = comps
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let name = if k < n {
                format!("{even}{}", k + 1)
            } else {
                format!("{odd}{}", k - n + 1)
            };
            if c.is_one() {
                name
            } else {
                format!("({c})*{name}")
            }
        })
        .collect();
    if parts.is_empty() {
        write!(f, "0")
    } else {
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for SuperVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_comps(f, &self.comps, self.amb.n, "tau", "psi")
    }
}

impl fmt::Display for SuperCovector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_comps(f, &self.comps, self.amb.n, "omega", "rho")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb() -> Ambient {
        Ambient::new(2, 2)
    }

    fn x(i: usize) -> SuperScalar {
        SuperScalar::coord(amb(), i)
    }

    fn phi(a: usize) -> SuperScalar {
        SuperScalar::phi(amb(), a)
    }

    #[test]
    fn dual_bases() {
        for k in 0..4 {
            for l in 0..4 {
                let p = SuperVector::basis(amb(), k).pair(&SuperCovector::basis(amb(), l));
                assert_eq!(p.is_one(), k == l);
                assert_eq!(p.is_zero(), k != l);
            }
        }
    }

    #[test]
    fn apply_examples() {
        let a1 = Ambient::new(1, 2);
        let x = SuperScalar::coord(a1, 0);
        let f = &(&x * &x) * &SuperScalar::phi(a1, 0);
        let expected = &(&SuperScalar::from_int(a1, 2) * &x) * &SuperScalar::phi(a1, 0);
        assert_eq!(SuperVector::tau(a1, 0).apply(&f), expected);
        let g = &(&x * &SuperScalar::phi(a1, 0)) + &SuperScalar::phi(a1, 1);
        assert_eq!(SuperVector::psi(a1, 0).apply(&g), x);
    }

    #[test]
    fn differential_pairs_to_derivative() {
        let f = &(&x(0) * &phi(0)) + &(&(&x(1) * &phi(0)) * &phi(1));
        let d = SuperCovector::differential(&f);
        for k in 0..4 {
            let e = SuperVector::basis(amb(), k);
            assert_eq!(e.pair(&d), e.apply(&f));
        }
        assert_eq!(
            SuperCovector::differential(&phi(1)),
            SuperCovector::rho(amb(), 1)
        );
    }

    #[test]
    fn bracket_of_odd_fields() {
        // [φ1 ψ2, ψ1] = -ψ1(φ1) ψ2 = -ψ2, since φ1ψ2 is even
        let a = SuperVector::psi(amb(), 1).left_mul(&phi(0));
        let b = SuperVector::psi(amb(), 0);
        assert_eq!(a.bracket(&b), -SuperVector::psi(amb(), 1));
        // odd-odd: [x1 ψ1, ψ1] = 0 while [φ2 τ1 , ...] mixes
        let c = SuperVector::psi(amb(), 0).left_mul(&x(0));
        assert!(c.bracket(&b).is_zero());
    }

    #[test]
    fn homogeneous_split() {
        let v = &SuperVector::tau(amb(), 0) + &SuperVector::psi(amb(), 0);
        assert_eq!(v.parity(), None);
        let parts = v.homogeneous_parts();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].1, SuperVector::tau(amb(), 0));
        assert_eq!(parts[1].1, SuperVector::psi(amb(), 0));
    }
}
