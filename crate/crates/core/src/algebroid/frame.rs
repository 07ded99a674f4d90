use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::kernel::{RatFunc, RatMatrix};
use crate::superalg::{Ambient, SuperCovector, SuperScalar, SuperVector};

/// Element of `T ⊕ Ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebroidElement {
    pub v: SuperVector,
    pub w: SuperCovector,
}

impl AlgebroidElement {
    pub fn zero(amb: Ambient) -> Self {
        AlgebroidElement {
            v: SuperVector::zero(amb),
            w: SuperCovector::zero(amb),
        }
    }

    pub fn vector(v: SuperVector) -> Self {
        let amb = v.ambient();
        AlgebroidElement {
            v,
            w: SuperCovector::zero(amb),
        }
    }

    pub fn covector(w: SuperCovector) -> Self {
        let amb = w.ambient();
        AlgebroidElement {
            v: SuperVector::zero(amb),
            w,
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.v.ambient()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero() && self.w.is_zero()
    }

    pub fn parity(&self) -> Option<u8> {
        match (self.v.parity(), self.w.parity()) {
            (Some(a), Some(b)) if a == b || self.w.is_zero() => Some(a),
            (Some(_), Some(b)) if self.v.is_zero() => Some(b),
            _ => None,
        }
    }

    pub fn left_mul(&self, f: &SuperScalar) -> Self {
        AlgebroidElement {
            v: self.v.left_mul(f),
            w: self.w.left_mul(f),
        }
    }
}

impl Add for &AlgebroidElement {
    type Output = AlgebroidElement;
    fn add(self, rhs: &AlgebroidElement) -> AlgebroidElement {
        AlgebroidElement {
            v: &self.v + &rhs.v,
            w: &self.w + &rhs.w,
        }
    }
}

impl Sub for &AlgebroidElement {
    type Output = AlgebroidElement;
    fn sub(self, rhs: &AlgebroidElement) -> AlgebroidElement {
        AlgebroidElement {
            v: &self.v - &rhs.v,
            w: &self.w - &rhs.w,
        }
    }
}

impl Neg for &AlgebroidElement {
    type Output = AlgebroidElement;
    fn neg(self) -> AlgebroidElement {
        AlgebroidElement {
            v: -&self.v,
            w: -&self.w,
        }
    }
}

impl fmt::Display for AlgebroidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.v.is_zero(), self.w.is_zero()) {
            (_, true) => write!(f, "{}", self.v),
            (true, false) => write!(f, "{}", self.w),
            (false, false) => write!(f, "{} + {}", self.v, self.w),
        }
    }
}

/// `τ̄(f) = Σ_j row[j] ∂f/∂x_j` for the `q`-th row of a frame matrix.
pub(crate) fn derive(fields: &RatMatrix, q: usize, f: &RatFunc) -> RatFunc {
    let mut acc = RatFunc::zero(f.nvars());
    for j in 0..fields.cols() {
        let c = fields.get(q, j);
        if c.is_zero() {
            continue;
        }
        let d = f.partial(j).expect("variable in range");
        if !d.is_zero() {
            acc = &acc + &(c * &d);
        }
    }
    acc
}

fn derive_matrix(fields: &RatMatrix, q: usize, m: &RatMatrix) -> RatMatrix {
    m.map(|e| derive(fields, q, e))
}

/// A frame `{τ̄_i; φ_α}` of `(A, E)`, written against the coordinate frame:
/// `τ̄_i = Σ_j even[i][j] ∂/∂x_j` and `φ_α = Σ_β odd[α][β] φ_β`.
///
/// Carries the induced bases `{τ_i; ψ_α}` of vector fields and their duals
/// `{ω_i; ρ_α}`, all expanded in the coordinate basis.
#[derive(Clone, Debug)]
pub struct Frame {
    id: String,
    amb: Ambient,
    even: RatMatrix,
    odd: RatMatrix,
    holonomic: bool,
    vectors: Vec<SuperVector>,
    covectors: Vec<SuperCovector>,
    generators: Vec<SuperScalar>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.amb == other.amb && self.even == other.even && self.odd == other.odd
    }
}

impl Frame {
    /// Coordinate derivations and the standard odd basis.
    pub fn reference(amb: Ambient) -> Self {
        Self::new(
            "ref",
            amb,
            RatMatrix::identity(amb.n, amb.n),
            RatMatrix::identity(amb.n, amb.m),
            true,
        )
        .expect("identity frame")
    }

    /// `holonomic` asserts that the rows of `even` are coordinate fields of
    /// some chart, hence commute.
    pub fn new(
        id: impl Into<String>,
        amb: Ambient,
        even: RatMatrix,
        odd: RatMatrix,
        holonomic: bool,
    ) -> Result<Self> {
        let (n, m) = (amb.n, amb.m);
        if (even.rows(), even.cols()) != (n, n) || (odd.rows(), odd.cols()) != (m, m) {
            return Err(Error::Shape("frame matrices do not match the ambient".into()));
        }
        let g_inv = even.invert()?;
        let a_inv = odd.invert()?;
        let coords = RatMatrix::identity(n, n);
        let phi: Vec<SuperScalar> = (0..m).map(|a| SuperScalar::phi(amb, a)).collect();
        let lift = |f: &RatFunc| SuperScalar::from_rf(amb, f.clone());

        let d_ainv: Vec<RatMatrix> = (0..n)
            .map(|q| derive_matrix(&coords, q, &a_inv).mul(&odd))
            .collect::<Result<_>>()?;
        let mut vectors = Vec::with_capacity(n + m);
        for i in 0..n {
            let mut comps = vec![SuperScalar::zero(amb); n + m];
            for (p, c) in comps.iter_mut().enumerate().take(n) {
                *c = lift(even.get(i, p));
            }
            // mixed part g^{iαγ} φ_γ ψ_α
            for alpha in 0..m {
                let mut coeff = SuperScalar::zero(amb);
                for (gamma, ph) in phi.iter().enumerate() {
                    let mut s = RatFunc::zero(n);
                    for (q, d) in d_ainv.iter().enumerate() {
                        s = &s + &(even.get(i, q) * d.get(alpha, gamma));
                    }
                    coeff = &coeff + &ph.mul_rf(&s);
                }
                comps[n + alpha] = coeff;
            }
            vectors.push(SuperVector::from_comps(amb, comps));
        }
        for alpha in 0..m {
            let comps = (0..n + m)
                .map(|k| {
                    if k < n {
                        SuperScalar::zero(amb)
                    } else {
                        lift(a_inv.get(k - n, alpha))
                    }
                })
                .collect();
            vectors.push(SuperVector::from_comps(amb, comps));
        }

        let mut covectors = Vec::with_capacity(n + m);
        for i in 0..n {
            let comps = (0..n + m)
                .map(|p| {
                    if p < n {
                        lift(g_inv.get(p, i))
                    } else {
                        SuperScalar::zero(amb)
                    }
                })
                .collect();
            covectors.push(SuperCovector::from_comps(amb, comps));
        }
        for alpha in 0..m {
            let mut comps = vec![SuperScalar::zero(amb); n + m];
            for (i, c) in comps.iter_mut().enumerate().take(n) {
                for (gamma, ph) in phi.iter().enumerate() {
                    let d = derive(&coords, i, odd.get(alpha, gamma));
                    *c = &*c + &ph.mul_rf(&d);
                }
            }
            for mu in 0..m {
                comps[n + mu] = lift(odd.get(alpha, mu));
            }
            covectors.push(SuperCovector::from_comps(amb, comps));
        }

        let generators = (0..m)
            .map(|alpha| {
                (0..m).fold(SuperScalar::zero(amb), |acc, b| {
                    &acc + &phi[b].mul_rf(odd.get(alpha, b))
                })
            })
            .collect();

        Ok(Frame {
            id: id.into(),
            amb,
            even,
            odd,
            holonomic,
            vectors,
            covectors,
            generators,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn even_matrix(&self) -> &RatMatrix {
        &self.even
    }

    pub fn odd_matrix(&self) -> &RatMatrix {
        &self.odd
    }

    pub fn is_holonomic(&self) -> bool {
        self.holonomic
    }

    /// `k < n`: `τ_{k+1}`; otherwise `ψ_{k-n+1}`.
    pub fn vector(&self, k: usize) -> &SuperVector {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[SuperVector] {
        &self.vectors
    }

    /// Dual basis: `k < n`: `ω_{k+1}`; otherwise `ρ_{k-n+1}`.
    pub fn covector(&self, k: usize) -> &SuperCovector {
        &self.covectors[k]
    }

    pub fn covectors(&self) -> &[SuperCovector] {
        &self.covectors
    }

    /// Odd generator `φ_{α+1}` of this frame.
    pub fn generator(&self, alpha: usize) -> &SuperScalar {
        &self.generators[alpha]
    }

    /// Action of `τ̄_{q+1}` on the base ring.
    pub fn derive(&self, q: usize, f: &RatFunc) -> RatFunc {
        derive(&self.even, q, f)
    }

    pub fn derive_matrix(&self, q: usize, m: &RatMatrix) -> RatMatrix {
        derive_matrix(&self.even, q, m)
    }

    /// Left coefficients of `X = Σ c_k e_k` in this frame.
    pub fn vector_coords(&self, x: &SuperVector) -> Vec<SuperScalar> {
        self.covectors.iter().map(|c| x.pair(c)).collect()
    }

    /// Left coefficients of `η = Σ d_k θ_k` in the dual basis.
    pub fn covector_coords(&self, eta: &SuperCovector) -> Vec<SuperScalar> {
        self.vectors
            .iter()
            .enumerate()
            .map(|(k, e)| e.pair(eta).involution_pow(self.amb.basis_parity(k)))
            .collect()
    }

    pub fn vector_from_coords(&self, coords: &[SuperScalar]) -> SuperVector {
        coords
            .iter()
            .zip(&self.vectors)
            .fold(SuperVector::zero(self.amb), |acc, (c, e)| {
                &acc + &e.left_mul(c)
            })
    }

    pub fn covector_from_coords(&self, coords: &[SuperScalar]) -> SuperCovector {
        coords
            .iter()
            .zip(&self.covectors)
            .fold(SuperCovector::zero(self.amb), |acc, (c, e)| {
                &acc + &e.left_mul(c)
            })
    }

    /// The frame obtained from this one by `fc`.
    pub fn changed(&self, id: impl Into<String>, fc: &FrameChange) -> Result<Frame> {
        if fc.base_even != self.even {
            return Err(Error::Invalid("frame change is based on another frame".into()));
        }
        Frame::new(
            id,
            self.amb,
            fc.g.mul(&self.even)?,
            fc.a.mul(&self.odd)?,
            self.holonomic && fc.holonomic,
        )
    }
}

/// `τ̄'_i = g^{ij} τ̄_j`, `φ'_α = A^{αβ} φ_β` relative to a base frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameChange {
    g: RatMatrix,
    a: RatMatrix,
    holonomic: bool,
    base_even: RatMatrix,
}

impl FrameChange {
    pub fn new(base: &Frame, g: RatMatrix, a: RatMatrix, holonomic: bool) -> Result<Self> {
        let amb = base.amb;
        if (g.rows(), g.cols()) != (amb.n, amb.n) || (a.rows(), a.cols()) != (amb.m, amb.m) {
            return Err(Error::Shape("frame change matrices do not match the ambient".into()));
        }
        if g.determinant()?.is_zero() || a.determinant()?.is_zero() {
            return Err(Error::NonInvertible);
        }
        Ok(FrameChange {
            g,
            a,
            holonomic: holonomic && base.holonomic,
            base_even: base.even.clone(),
        })
    }

    /// The change taking `from` to `to`.
    pub fn between(from: &Frame, to: &Frame) -> Result<Self> {
        from.amb.check(&to.amb)?;
        let g = to.even.mul(&from.even.invert()?)?;
        let a = to.odd.mul(&from.odd.invert()?)?;
        Self::new(from, g, a, from.holonomic && to.holonomic)
    }

    pub fn g(&self) -> &RatMatrix {
        &self.g
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn is_holonomic(&self) -> bool {
        self.holonomic
    }

    /// Base-frame derivation `τ̄_{q+1}` applied to a base-ring function.
    pub fn base_derive(&self, q: usize, f: &RatFunc) -> RatFunc {
        derive(&self.base_even, q, f)
    }

    pub fn base_derive_matrix(&self, q: usize, m: &RatMatrix) -> RatMatrix {
        derive_matrix(&self.base_even, q, m)
    }

    /// `g^{iαγ} = g^{iq} τ_q(A^{-1 αμ}) A^{μγ}`.
    pub fn mixed(&self) -> Result<Vec<RatMatrix>> {
        let n = self.g.rows();
        let a_inv = self.a.invert()?;
        let d: Vec<RatMatrix> = (0..n)
            .map(|q| self.base_derive_matrix(q, &a_inv).mul(&self.a))
            .collect::<Result<_>>()?;
        Ok((0..n)
            .map(|i| {
                let mut acc = RatMatrix::zeros(self.g.nvars(), self.a.rows(), self.a.rows());
                for (q, dq) in d.iter().enumerate() {
                    let gi = self.g.get(i, q);
                    if !gi.is_zero() {
                        acc = acc.add(&dq.map(|e| gi * e)).expect("same shape");
                    }
                }
                acc
            })
            .collect())
    }

    /// Trace `g^{iνν}` of the mixed coefficients.
    pub fn mixed_trace(&self) -> Result<Vec<RatFunc>> {
        Ok(self.mixed()?.iter().map(RatMatrix::trace).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisSymbol {
    Tau(usize),
    Psi(usize),
    Omega(usize),
    Rho(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Primed basis in terms of the base frame.
    Forward,
    /// Base frame basis in terms of the primed one.
    Inverse,
}

/// The change-of-frame formulas for a single basis symbol.
pub fn change_frame(
    base: &Frame,
    fc: &FrameChange,
    sym: BasisSymbol,
    dir: Direction,
) -> Result<AlgebroidElement> {
    if fc.base_even != base.even {
        return Err(Error::Invalid("frame change is based on another frame".into()));
    }
    let amb = base.amb;
    let (n, m) = (amb.n, amb.m);
    let lift = |f: &RatFunc| SuperScalar::from_rf(amb, f.clone());
    let g_inv = fc.g.invert()?;
    let a_inv = fc.a.invert()?;
    let mixed = fc.mixed()?;
    check_index(&sym, n, m)?;
    match dir {
        Direction::Forward => Ok(match sym {
            BasisSymbol::Tau(i) => {
                let mut v = SuperVector::zero(amb);
                for p in 0..n {
                    v = &v + &base.vector(p).left_mul(&lift(fc.g.get(i, p)));
                }
                for alpha in 0..m {
                    for gamma in 0..m {
                        let c = base.generator(gamma).mul_rf(mixed[i].get(alpha, gamma));
                        v = &v + &base.vector(n + alpha).left_mul(&c);
                    }
                }
                AlgebroidElement::vector(v)
            }
            BasisSymbol::Psi(alpha) => AlgebroidElement::vector((0..m).fold(
                SuperVector::zero(amb),
                |acc, mu| &acc + &base.vector(n + mu).left_mul(&lift(a_inv.get(mu, alpha))),
            )),
            BasisSymbol::Omega(i) => AlgebroidElement::covector((0..n).fold(
                SuperCovector::zero(amb),
                |acc, p| &acc + &base.covector(p).left_mul(&lift(g_inv.get(p, i))),
            )),
            BasisSymbol::Rho(alpha) => {
                let mut w = SuperCovector::zero(amb);
                for i in 0..n {
                    for gamma in 0..m {
                        let d = fc.base_derive(i, fc.a.get(alpha, gamma));
                        w = &w + &base.covector(i).left_mul(&base.generator(gamma).mul_rf(&d));
                    }
                }
                for mu in 0..m {
                    w = &w + &base.covector(n + mu).left_mul(&lift(fc.a.get(alpha, mu)));
                }
                AlgebroidElement::covector(w)
            }
        }),
        Direction::Inverse => {
            let primed = base.changed("primed", fc)?;
            Ok(match sym {
                BasisSymbol::Tau(q) => {
                    let mut v = SuperVector::zero(amb);
                    for i in 0..n {
                        v = &v + &primed.vector(i).left_mul(&lift(g_inv.get(q, i)));
                    }
                    for alpha in 0..m {
                        for gamma in 0..m {
                            let d = fc.base_derive(q, fc.a.get(alpha, gamma));
                            let c = base.generator(gamma).mul_rf(&d);
                            v = &v + &primed.vector(n + alpha).left_mul(&c);
                        }
                    }
                    AlgebroidElement::vector(v)
                }
                BasisSymbol::Psi(beta) => AlgebroidElement::vector((0..m).fold(
                    SuperVector::zero(amb),
                    |acc, alpha| {
                        &acc + &primed.vector(n + alpha).left_mul(&lift(fc.a.get(alpha, beta)))
                    },
                )),
                BasisSymbol::Omega(j) => AlgebroidElement::covector((0..n).fold(
                    SuperCovector::zero(amb),
                    |acc, p| &acc + &primed.covector(p).left_mul(&lift(fc.g.get(p, j))),
                )),
                BasisSymbol::Rho(beta) => {
                    let mut w = SuperCovector::zero(amb);
                    for alpha in 0..m {
                        w = &w + &primed.covector(n + alpha).left_mul(&lift(a_inv.get(beta, alpha)));
                    }
                    for p in 0..n {
                        for gamma in 0..m {
                            let c = base.generator(gamma).mul_rf(mixed[p].get(beta, gamma));
                            w = &w + &primed.covector(p).left_mul(&c);
                        }
                    }
                    AlgebroidElement::covector(w)
                }
            })
        }
    }
}

fn check_index(sym: &BasisSymbol, n: usize, m: usize) -> Result<()> {
    let (i, count) = match *sym {
        BasisSymbol::Tau(i) | BasisSymbol::Omega(i) => (i, n),
        BasisSymbol::Psi(a) | BasisSymbol::Rho(a) => (a, m),
    };
    if i < count {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, count })
    }
}

/// The basis element named by `sym` in `frame`.
pub fn basis_element(frame: &Frame, sym: BasisSymbol) -> AlgebroidElement {
    let n = frame.amb.n;
    match sym {
        BasisSymbol::Tau(i) => AlgebroidElement::vector(frame.vector(i).clone()),
        BasisSymbol::Psi(a) => AlgebroidElement::vector(frame.vector(n + a).clone()),
        BasisSymbol::Omega(i) => AlgebroidElement::covector(frame.covector(i).clone()),
        BasisSymbol::Rho(a) => AlgebroidElement::covector(frame.covector(n + a).clone()),
    }
}
