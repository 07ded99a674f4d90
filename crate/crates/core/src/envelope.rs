//! Normal forms for the enveloping vertex algebra in conformal weights up to
//! two, the rewriting rules for `(-1)`-products, the quadruple `Q, J, G, L`
//! and the gradings.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;

use crate::algebroid::{Frame, FrameChange, VertexAlgebroid};
use crate::check::{named, Outcome};
use crate::error::{Error, Result};
use crate::kernel::{RatFunc, Rational};
use crate::superalg::{Ambient, SuperCovector, SuperScalar, SuperVector};

fn sign(odd: u8) -> Rational {
    if odd % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn lift(amb: Ambient, f: &RatFunc) -> SuperScalar {
    SuperScalar::from_rf(amb, f.clone())
}

/// Merge per-term gradings; `None` for zero, an error for mixtures.
fn merge(acc: Option<i64>, v: i64) -> Result<Option<i64>> {
    match acc {
        Some(a) if a != v => Err(Error::Inhomogeneous),
        _ => Ok(Some(v)),
    }
}

/// A weight `≤ 1` element `a + X + η` in the splitting of the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct W1Element {
    pub scalar: SuperScalar,
    pub vector: SuperVector,
    pub covector: SuperCovector,
}

impl W1Element {
    pub fn zero(amb: Ambient) -> Self {
        W1Element {
            scalar: SuperScalar::zero(amb),
            vector: SuperVector::zero(amb),
            covector: SuperCovector::zero(amb),
        }
    }

    pub fn scalar(a: SuperScalar) -> Self {
        W1Element {
            scalar: a.clone(),
            ..Self::zero(a.ambient())
        }
    }

    pub fn vector(v: SuperVector) -> Self {
        W1Element {
            vector: v.clone(),
            ..Self::zero(v.ambient())
        }
    }

    pub fn covector(eta: SuperCovector) -> Self {
        W1Element {
            covector: eta.clone(),
            ..Self::zero(eta.ambient())
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.scalar.ambient()
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.vector.is_zero() && self.covector.is_zero()
    }

    /// Componentwise left multiplication.
    pub fn left_mul(&self, f: &SuperScalar) -> Self {
        W1Element {
            scalar: f * &self.scalar,
            vector: self.vector.left_mul(f),
            covector: self.covector.left_mul(f),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        W1Element {
            scalar: self.scalar.scale(c),
            vector: self.vector.scale(c),
            covector: self.covector.scale(c),
        }
    }

    fn upper(&self) -> W1Element {
        W1Element {
            scalar: SuperScalar::zero(self.ambient()),
            ..self.clone()
        }
    }

    /// Conformal weight, `None` for zero.
    pub fn weight(&self) -> Result<Option<i64>> {
        let mut w = None;
        if !self.scalar.is_zero() {
            w = merge(w, 0)?;
        }
        if !self.vector.is_zero() || !self.covector.is_zero() {
            w = merge(w, 1)?;
        }
        Ok(w)
    }

    /// Fermionic charge: `φ`, `ρ` count `+1`, `ψ` counts `-1`.
    pub fn fermionic_charge(&self) -> Result<Option<i64>> {
        let amb = self.ambient();
        let mut f = None;
        for (mask, _) in self.scalar.terms() {
            f = merge(f, mask.count_ones() as i64)?;
        }
        for k in 0..amb.rank() {
            let shift = amb.basis_parity(k) as i64;
            for (mask, _) in self.vector.comp(k).terms() {
                f = merge(f, mask.count_ones() as i64 - shift)?;
            }
            for (mask, _) in self.covector.comp(k).terms() {
                f = merge(f, mask.count_ones() as i64 + shift)?;
            }
        }
        Ok(f)
    }

    /// Parity, `None` for zero; an error for mixtures.
    pub fn parity(&self) -> Result<Option<u8>> {
        let amb = self.ambient();
        let mut p = None;
        for (mask, _) in self.scalar.terms() {
            p = merge(p, (mask.count_ones() % 2) as i64)?;
        }
        for k in 0..amb.rank() {
            let pk = amb.basis_parity(k) as u32;
            for c in [self.vector.comp(k), self.covector.comp(k)] {
                for (mask, _) in c.terms() {
                    p = merge(p, ((mask.count_ones() + pk) % 2) as i64)?;
                }
            }
        }
        Ok(p.map(|v| v as u8))
    }

    /// Homogeneous pieces by parity.
    fn parts(&self) -> Vec<(u8, W1Element)> {
        let amb = self.ambient();
        (0..2u8)
            .map(|p| {
                let vector = SuperVector::from_comps(
                    amb,
                    (0..amb.rank())
                        .map(|k| self.vector.comp(k).part((p + amb.basis_parity(k)) % 2))
                        .collect(),
                );
                let covector = SuperCovector::from_comps(
                    amb,
                    (0..amb.rank())
                        .map(|k| self.covector.comp(k).part((p + amb.basis_parity(k)) % 2))
                        .collect(),
                );
                (
                    p,
                    W1Element {
                        scalar: self.scalar.part(p),
                        vector,
                        covector,
                    },
                )
            })
            .filter(|(_, e)| !e.is_zero())
            .collect()
    }
}

impl Add for &W1Element {
    type Output = W1Element;
    fn add(self, rhs: &W1Element) -> W1Element {
        W1Element {
            scalar: &self.scalar + &rhs.scalar,
            vector: &self.vector + &rhs.vector,
            covector: &self.covector + &rhs.covector,
        }
    }
}

impl Sub for &W1Element {
    type Output = W1Element;
    fn sub(self, rhs: &W1Element) -> W1Element {
        self + &(-rhs)
    }
}

impl Neg for &W1Element {
    type Output = W1Element;
    fn neg(self) -> W1Element {
        W1Element {
            scalar: -&self.scalar,
            vector: -&self.vector,
            covector: -&self.covector,
        }
    }
}

impl fmt::Display for W1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.scalar.is_zero() {
            parts.push(format!("{}", self.scalar));
        }
        if !self.vector.is_zero() {
            parts.push(format!("{}", self.vector));
        }
        if !self.covector.is_zero() {
            parts.push(format!("{}", self.covector));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Weight `≤ 2` normal form relative to a frame:
/// `Σ ω_{s(-1)} u_s + Σ ω_{s(-2)} a_s + Σ ρ_{μ(-1)} v_μ + Σ ψ_{q(-1)} w_q + ∂z + low`,
/// with `v_μ` in the `ψ` directions and `w_q` in the `ω` directions.
#[derive(Clone, Debug, PartialEq)]
pub struct W2Element {
    pub omega1: Vec<W1Element>,
    pub omega2: Vec<SuperScalar>,
    pub rho1: Vec<SuperVector>,
    pub psi1: Vec<SuperCovector>,
    pub del: W1Element,
    pub low: W1Element,
}

impl W2Element {
    pub fn zero(amb: Ambient) -> Self {
        W2Element {
            omega1: vec![W1Element::zero(amb); amb.n],
            omega2: vec![SuperScalar::zero(amb); amb.n],
            rho1: vec![SuperVector::zero(amb); amb.m],
            psi1: vec![SuperCovector::zero(amb); amb.m],
            del: W1Element::zero(amb),
            low: W1Element::zero(amb),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.low.ambient()
    }

    pub fn from_low(x: W1Element) -> Self {
        W2Element {
            low: x.clone(),
            ..Self::zero(x.ambient())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.low.is_zero() && self.high_is_zero()
    }

    fn high_is_zero(&self) -> bool {
        self.omega1.iter().all(W1Element::is_zero)
            && self.omega2.iter().all(SuperScalar::is_zero)
            && self.rho1.iter().all(SuperVector::is_zero)
            && self.psi1.iter().all(SuperCovector::is_zero)
            && self.del.is_zero()
    }

    /// The weight `≤ 1` part when nothing else is present.
    pub fn as_low(&self) -> Option<&W1Element> {
        self.high_is_zero().then_some(&self.low)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        W2Element {
            omega1: self.omega1.iter().map(|u| u.scale(c)).collect(),
            omega2: self.omega2.iter().map(|a| a.scale(c)).collect(),
            rho1: self.rho1.iter().map(|v| v.scale(c)).collect(),
            psi1: self.psi1.iter().map(|w| w.scale(c)).collect(),
            del: self.del.scale(c),
            low: self.low.scale(c),
        }
    }

    pub fn weight(&self) -> Result<Option<i64>> {
        let mut w = self.low.weight()?;
        if !self.high_is_zero() {
            w = merge(w, 2)?;
        }
        Ok(w)
    }

    pub fn fermionic_charge(&self) -> Result<Option<i64>> {
        let mut f = None;
        let mut add = |v: Option<i64>, shift: i64| -> Result<()> {
            if let Some(v) = v {
                f = merge(f, v + shift)?;
            }
            Ok(())
        };
        for u in &self.omega1 {
            add(u.fermionic_charge()?, 0)?;
        }
        for a in &self.omega2 {
            add(W1Element::scalar(a.clone()).fermionic_charge()?, 0)?;
        }
        for v in &self.rho1 {
            add(W1Element::vector(v.clone()).fermionic_charge()?, 1)?;
        }
        for w in &self.psi1 {
            add(W1Element::covector(w.clone()).fermionic_charge()?, -1)?;
        }
        add(self.del.fermionic_charge()?, 0)?;
        add(self.low.fermionic_charge()?, 0)?;
        Ok(f)
    }

    pub fn parity(&self) -> Result<Option<u8>> {
        let mut p: Option<i64> = None;
        let mut add = |v: Option<u8>, shift: u8| -> Result<()> {
            if let Some(v) = v {
                p = merge(p, ((v + shift) % 2) as i64)?;
            }
            Ok(())
        };
        for u in &self.omega1 {
            add(u.parity()?, 0)?;
        }
        for a in &self.omega2 {
            add(W1Element::scalar(a.clone()).parity()?, 0)?;
        }
        for v in &self.rho1 {
            add(W1Element::vector(v.clone()).parity()?, 1)?;
        }
        for w in &self.psi1 {
            add(W1Element::covector(w.clone()).parity()?, 1)?;
        }
        add(self.del.parity()?, 0)?;
        add(self.low.parity()?, 0)?;
        Ok(p.map(|v| v as u8))
    }

    fn zip(&self, rhs: &W2Element, sgn: &Rational) -> W2Element {
        W2Element {
            omega1: self
                .omega1
                .iter()
                .zip(&rhs.omega1)
                .map(|(a, b)| a + &b.scale(sgn))
                .collect(),
            omega2: self
                .omega2
                .iter()
                .zip(&rhs.omega2)
                .map(|(a, b)| a + &b.scale(sgn))
                .collect(),
            rho1: self
                .rho1
                .iter()
                .zip(&rhs.rho1)
                .map(|(a, b)| a + &b.scale(sgn))
                .collect(),
            psi1: self
                .psi1
                .iter()
                .zip(&rhs.psi1)
                .map(|(a, b)| a + &b.scale(sgn))
                .collect(),
            del: &self.del + &rhs.del.scale(sgn),
            low: &self.low + &rhs.low.scale(sgn),
        }
    }
}

impl Add for &W2Element {
    type Output = W2Element;
    fn add(self, rhs: &W2Element) -> W2Element {
        self.zip(rhs, &Rational::one())
    }
}

impl Sub for &W2Element {
    type Output = W2Element;
    fn sub(self, rhs: &W2Element) -> W2Element {
        self.zip(rhs, &-Rational::one())
    }
}

impl fmt::Display for W2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (s, u) in self.omega1.iter().enumerate() {
            if !u.is_zero() {
                parts.push(format!("omega{}_(-1)[{u}]", s + 1));
            }
        }
        for (s, a) in self.omega2.iter().enumerate() {
            if !a.is_zero() {
                parts.push(format!("omega{}_(-2)[{a}]", s + 1));
            }
        }
        for (m, v) in self.rho1.iter().enumerate() {
            if !v.is_zero() {
                parts.push(format!("rho{}_(-1)[{v}]", m + 1));
            }
        }
        for (q, w) in self.psi1.iter().enumerate() {
            if !w.is_zero() {
                parts.push(format!("psi{}_(-1)[{w}]", q + 1));
            }
        }
        if !self.del.is_zero() {
            parts.push(format!("d[{}]", self.del));
        }
        if !self.low.is_zero() {
            parts.push(format!("{}", self.low));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A term `f φ_M e_k` of a frame expansion, `M` a mask of frame generators.
#[derive(Clone, Debug)]
struct Piece {
    k: usize,
    mask: u32,
    f: RatFunc,
}

/// Rewriting in the envelope of the algebroid attached to a frame.
#[derive(Clone, Debug)]
pub struct Envelope {
    alg: VertexAlgebroid,
    to_frame_odd: Vec<SuperScalar>,
}

impl Envelope {
    pub fn new(frame: Frame) -> Result<Self> {
        let amb = frame.ambient();
        let a_inv = frame.odd_matrix().invert()?;
        // φ_ref_γ = Σ_β (A^{-1})_{γβ} φ_β, with φ_β read as frame generators
        let to_frame_odd = (0..amb.m)
            .map(|g| {
                (0..amb.m).fold(SuperScalar::zero(amb), |acc, b| {
                    &acc + &SuperScalar::phi(amb, b).mul_rf(a_inv.get(g, b))
                })
            })
            .collect();
        Ok(Envelope {
            alg: VertexAlgebroid::new(frame),
            to_frame_odd,
        })
    }

    pub fn frame(&self) -> &Frame {
        self.alg.frame()
    }

    pub fn algebroid(&self) -> &VertexAlgebroid {
        &self.alg
    }

    fn amb(&self) -> Ambient {
        self.frame().ambient()
    }

    /// `c = Σ f_M φ_M` in frame generators.
    fn split_odd(&self, c: &SuperScalar) -> Vec<(u32, RatFunc)> {
        c.substitute_odd(&self.to_frame_odd)
            .terms()
            .map(|(m, f)| (m, f.clone()))
            .collect()
    }

    /// `f φ_M` with frame generators in increasing order.
    fn odd_monomial(&self, mask: u32, f: &RatFunc) -> SuperScalar {
        let amb = self.amb();
        let mut t = lift(amb, f);
        for b in 0..amb.m {
            if mask & (1 << b) != 0 {
                t = &t * self.frame().generator(b);
            }
        }
        t
    }

    fn vector_pieces(&self, v: &SuperVector) -> Vec<Piece> {
        let mut out = Vec::new();
        for (k, c) in self.frame().vector_coords(v).iter().enumerate() {
            for (mask, f) in self.split_odd(c) {
                out.push(Piece { k, mask, f });
            }
        }
        out
    }

    fn covector_pieces(&self, eta: &SuperCovector) -> Vec<Piece> {
        let mut out = Vec::new();
        for (k, c) in self.frame().covector_coords(eta).iter().enumerate() {
            for (mask, f) in self.split_odd(c) {
                out.push(Piece { k, mask, f });
            }
        }
        out
    }

    fn unsupported(&self, what: String) -> Error {
        Error::UnsupportedShape(what)
    }

    /// `∂`: functions go to one-forms, weight one goes to the `∂` shape.
    pub fn partial(&self, x: &W1Element) -> W2Element {
        let mut out = W2Element::zero(self.amb());
        out.low = W1Element::covector(SuperCovector::differential(&x.scalar));
        out.del = x.upper();
        out
    }

    /// `a_{(-1)} y = a y - γ(a, y)`.
    fn scalar_product(&self, a: &SuperScalar, y: &W1Element) -> W1Element {
        W1Element {
            scalar: a * &y.scalar,
            vector: y.vector.left_mul(a),
            covector: &y.covector.left_mul(a) - &self.alg.gamma(a, &y.vector),
        }
    }

    /// `x_{(-1)} b` for weight-one `x` and a function `b`.
    fn times_scalar(&self, x: &W1Element, b: &SuperScalar) -> W1Element {
        let mut acc = W1Element::zero(self.amb());
        for (px, xp) in x.parts() {
            for (pb, bp) in b.homogeneous_parts() {
                let s = sign(px * pb);
                let v = &xp.vector.left_mul(&bp).scale(&s);
                let g = self.alg.gamma(&bp, &xp.vector).scale(&s);
                let d = SuperCovector::differential(&xp.vector.apply(&bp));
                let eta = xp.covector.left_mul(&bp).scale(&s);
                acc = &acc
                    + &W1Element {
                        scalar: SuperScalar::zero(self.amb()),
                        vector: v.clone(),
                        covector: &(&eta - &g) + &d,
                    };
            }
        }
        acc
    }

    /// `x_{(-1)} y` by the rewriting lemmas.
    pub fn product_minus1(&self, x: &W1Element, y: &W1Element) -> Result<W2Element> {
        let amb = self.amb();
        let n = amb.n;
        let mut out = W2Element::zero(amb);
        if !x.scalar.is_zero() {
            out.low = &out.low + &self.scalar_product(&x.scalar, y);
        }
        let xu = x.upper();
        if xu.is_zero() {
            return Ok(out);
        }
        if !y.scalar.is_zero() {
            out.low = &out.low + &self.times_scalar(&xu, &y.scalar);
        }
        if y.upper().is_zero() {
            return Ok(out);
        }
        let fr = self.frame();
        let xv = self.vector_pieces(&xu.vector);
        let xc = self.covector_pieces(&xu.covector);
        let yv = self.vector_pieces(&y.vector);
        let yc = self.covector_pieces(&y.covector);
        let single = |mask: u32| (mask.count_ones() == 1).then(|| mask.trailing_zeros() as usize);
        // (f ψ_q)_{(-1)} (g ω_s) = ψ_{q(-1)} (f g ω_s)
        for p in &xv {
            if p.k < n || p.mask != 0 {
                return Err(self.unsupported(format!("first factor term with basis index {} and odd mask {:#b}", p.k, p.mask)));
            }
            if !yv.is_empty() {
                return Err(self.unsupported("psi times a vector field".into()));
            }
            for q in &yc {
                if q.k >= n || q.mask != 0 {
                    return Err(self.unsupported("psi times a non-basic one-form".into()));
                }
                let w = fr.covector(q.k).left_mul(&lift(amb, &(&p.f * &q.f)));
                out.psi1[p.k - n] = &out.psi1[p.k - n] + &w;
            }
        }
        for p in &xc {
            let a = lift(amb, &p.f);
            if !yc.is_empty() {
                return Err(self.unsupported("product of two one-forms".into()));
            }
            match (p.k < n, single(p.mask)) {
                // ω_s with a function coefficient
                (true, None) if p.mask == 0 => {
                    let s = p.k;
                    for q in &yv {
                        let b = lift(amb, &q.f);
                        if q.k < n && q.mask == 0 {
                            let tp = fr.vector(q.k);
                            let u = W1Element {
                                scalar: SuperScalar::zero(amb),
                                vector: tp.left_mul(&(&a * &b)),
                                covector: &SuperCovector::differential(&b).left_mul(&tp.apply(&a))
                                    + &SuperCovector::differential(&a).left_mul(&tp.apply(&b)),
                            };
                            out.omega1[s] = &out.omega1[s] + &u;
                            out.omega2[s] = &out.omega2[s] - &(&b * &tp.apply(&a));
                        } else if let (false, Some(alpha)) = (q.k < n, single(q.mask)) {
                            let beta = q.k - n;
                            let c = self.odd_monomial(q.mask, &(&p.f * &q.f));
                            let mut u = W1Element::vector(fr.vector(q.k).left_mul(&c));
                            if alpha == beta {
                                u.covector = -&SuperCovector::differential(&a).left_mul(&b);
                            }
                            out.omega1[s] = &out.omega1[s] + &u;
                        } else {
                            return Err(self.unsupported(format!(
                                "omega times basis index {} with odd mask {:#b}",
                                q.k, q.mask
                            )));
                        }
                    }
                }
                // φ_γ ω_i with a function coefficient
                (true, Some(gamma)) => {
                    let i = p.k;
                    for q in &yv {
                        if q.k < n || q.mask != 0 {
                            return Err(self.unsupported("odd omega times a non-psi term".into()));
                        }
                        let nu = q.k - n;
                        let b = lift(amb, &q.f);
                        let c = self.odd_monomial(p.mask, &(&p.f * &q.f));
                        let mut u = W1Element::vector(fr.vector(q.k).left_mul(&c));
                        if gamma == nu {
                            u.covector = -&SuperCovector::differential(&b).left_mul(&a);
                            out.omega2[i] = &out.omega2[i] + &(&a * &b);
                        }
                        out.omega1[i] = &out.omega1[i] + &u;
                    }
                }
                // ρ_μ with a function coefficient
                (false, None) if p.mask == 0 => {
                    let mu = p.k - n;
                    for q in &yv {
                        if q.k < n || q.mask != 0 {
                            return Err(self.unsupported("rho times a non-psi term".into()));
                        }
                        let v = fr.vector(q.k).left_mul(&lift(amb, &(&p.f * &q.f)));
                        out.rho1[mu] = &out.rho1[mu] + &v;
                    }
                }
                _ => {
                    return Err(self.unsupported(format!(
                        "one-form term with basis index {} and odd mask {:#b}",
                        p.k, p.mask
                    )))
                }
            }
        }
        Ok(out)
    }

    /// `x_{(k)} z` for `k ≥ 0` and weight `≤ 1` arguments.
    pub fn positive_mode(&self, x: &W1Element, k: u32, z: &W1Element) -> W1Element {
        let amb = self.amb();
        let mut acc = W1Element::zero(amb);
        if k >= 2 {
            return acc;
        }
        for (px, xp) in x.parts() {
            for (pz, zp) in z.parts() {
                let s = sign(px * pz);
                let a = &xp.scalar;
                let (v, eta) = (&xp.vector, &xp.covector);
                let (b, w, th) = (&zp.scalar, &zp.vector, &zp.covector);
                if k == 0 {
                    // a_{(0)} w = -(-1)^{p p} w(a)
                    acc.scalar = &acc.scalar - &w.apply(a).scale(&s);
                    acc.scalar = &acc.scalar + &v.apply(b);
                    acc.vector = &acc.vector + &v.bracket(w);
                    acc.covector = &acc.covector + &self.alg.c(v, w);
                    acc.covector = &acc.covector + &v.act_on_covector(th);
                    // η_{(0)} w = -(-1)^{p p} (w_{(0)} η - ∂⟨w, η⟩)
                    let t = &w.act_on_covector(eta)
                        - &SuperCovector::differential(&w.pair(eta));
                    acc.covector = &acc.covector - &t.scale(&s);
                } else {
                    acc.scalar = &acc.scalar + &self.alg.pair_vectors(v, w);
                    acc.scalar = &acc.scalar + &v.pair(th);
                    acc.scalar = &acc.scalar + &w.pair(eta).scale(&s);
                }
            }
        }
        acc
    }

    /// `x_{(k)} z` for `-2 ≤ k`, within the implemented shapes.
    pub fn mode(&self, x: &W1Element, k: i32, z: &W1Element) -> Result<W2Element> {
        let amb = self.amb();
        if x.is_zero() || z.is_zero() {
            return Ok(W2Element::zero(amb));
        }
        match k {
            k if k >= 0 => Ok(W2Element::from_low(self.positive_mode(x, k as u32, z))),
            -1 => self.product_minus1(x, z),
            -2 => {
                let mut out = W2Element::zero(amb);
                if !z.upper().is_zero() {
                    return Err(self.unsupported("(-2)-product into weight one".into()));
                }
                let c = &z.scalar;
                // a_{(-2)} c = (∂a)_{(-1)} c = (-1)^{p(a)p(c)} c ∂a
                for (pa, ap) in x.scalar.homogeneous_parts() {
                    for (pc, cp) in c.homogeneous_parts() {
                        let d = SuperCovector::differential(&ap).left_mul(&cp);
                        out.low.covector = &out.low.covector + &d.scale(&sign(pa * pc));
                    }
                }
                let xu = x.upper();
                if xu.is_zero() {
                    return Ok(out);
                }
                if let Some(c0) = c.as_even_rf().and_then(|f| f.as_constant()) {
                    out.del = &out.del + &xu.scale(&c0);
                    return Ok(out);
                }
                for s in 0..amb.n {
                    if xu == W1Element::covector(self.frame().covector(s).clone()) {
                        out.omega2[s] = &out.omega2[s] + c;
                        return Ok(out);
                    }
                }
                Err(self.unsupported("(-2)-product of a general weight-one element".into()))
            }
            _ => Err(self.unsupported(format!("mode {k}"))),
        }
    }

    /// `(x_{(-1)} y)_{(n)} z` summed over the pairs, by the Wick formula.
    pub fn quadratic_mode(&self, pairs: &[(W1Element, W1Element)], n: i32, z: &W1Element) -> Result<W2Element> {
        let amb = self.amb();
        let mut acc = W2Element::zero(amb);
        let low = |e: W2Element| -> Result<W1Element> {
            e.as_low()
                .cloned()
                .ok_or_else(|| Error::UnsupportedShape("inner product above weight one".into()))
        };
        for (x, y) in pairs {
            let px = x.parity()?.unwrap_or(0);
            let py = y.parity()?.unwrap_or(0);
            let s = sign(px * py);
            for j in 0..=2i32 {
                if n + j >= 0 {
                    let inner = low(self.mode(y, n + j, z)?)?;
                    acc = &acc + &self.mode(x, -1 - j, &inner)?;
                }
                let inner = low(self.mode(x, j, z)?)?;
                acc = &acc + &self.mode(y, n - 1 - j, &inner)?.scale(&s);
            }
        }
        Ok(acc)
    }

    fn basis_w1(&self, k: usize) -> W1Element {
        W1Element::vector(self.frame().vector(k).clone())
    }

    fn cobasis_w1(&self, k: usize) -> W1Element {
        W1Element::covector(self.frame().covector(k).clone())
    }

    /// `J = φ_{α(-1)} ψ_α` as a list of factor pairs.
    pub fn j_pairs(&self) -> Vec<(W1Element, W1Element)> {
        let amb = self.amb();
        (0..amb.m)
            .map(|a| {
                (
                    W1Element::scalar(self.frame().generator(a).clone()),
                    self.basis_w1(amb.n + a),
                )
            })
            .collect()
    }

    /// `L = ω_{i(-1)} τ_i + ρ_{α(-1)} ψ_α` as a list of factor pairs.
    pub fn l_pairs(&self) -> Vec<(W1Element, W1Element)> {
        let amb = self.amb();
        let mut v: Vec<_> = (0..amb.n).map(|i| (self.cobasis_w1(i), self.basis_w1(i))).collect();
        v.extend((0..amb.m).map(|a| (self.cobasis_w1(amb.n + a), self.basis_w1(amb.n + a))));
        v
    }

    /// The generators `τ_i, ψ_α, ω_i, ρ_α` of the frame.
    pub fn generators(&self) -> Vec<(String, W1Element)> {
        let amb = self.amb();
        let mut out = Vec::new();
        for k in 0..amb.rank() {
            let name = if k < amb.n {
                format!("tau{}", k + 1)
            } else {
                format!("psi{}", k - amb.n + 1)
            };
            out.push((name, self.basis_w1(k)));
        }
        for k in 0..amb.rank() {
            let name = if k < amb.n {
                format!("omega{}", k + 1)
            } else {
                format!("rho{}", k - amb.n + 1)
            };
            out.push((name, self.cobasis_w1(k)));
        }
        out
    }

    /// `J_0` on a normal form, extended from generators as a derivation of
    /// `(-1)`; acts by the fermionic charge of each homogeneous term.
    pub fn j0(&self, x: &W2Element) -> Result<W2Element> {
        graded_scale(x, |e| e.fermionic_charge())
    }

    /// `L_0` on a normal form: conformal weight of each term.
    pub fn l0(&self, x: &W2Element) -> Result<W2Element> {
        graded_scale(x, |e| e.weight())
    }
}

fn w1_terms(x: &W1Element) -> Vec<W1Element> {
    let amb = x.ambient();
    let mut out = Vec::new();
    for (mask, f) in x.scalar.terms() {
        out.push(W1Element::scalar(SuperScalar::monomial(amb, mask, f.clone())));
    }
    for k in 0..amb.rank() {
        for (mask, f) in x.vector.comp(k).terms() {
            out.push(W1Element::vector(SuperVector::single(
                amb,
                k,
                SuperScalar::monomial(amb, mask, f.clone()),
            )));
        }
        for (mask, f) in x.covector.comp(k).terms() {
            out.push(W1Element::covector(SuperCovector::single(
                amb,
                k,
                SuperScalar::monomial(amb, mask, f.clone()),
            )));
        }
    }
    out
}

/// Scale every monomial term by its grading.
fn graded_scale(x: &W2Element, grade: impl Fn(&W2Element) -> Result<Option<i64>>) -> Result<W2Element> {
    let amb = x.ambient();
    let mut out = W2Element::zero(amb);
    let mut push = |e: W2Element| -> Result<()> {
        if let Some(g) = grade(&e)? {
            out = &out + &e.scale(&Rational::from_integer(g.into()));
        }
        Ok(())
    };
    for (s, u) in x.omega1.iter().enumerate() {
        for t in w1_terms(u) {
            let mut e = W2Element::zero(amb);
            e.omega1[s] = t;
            push(e)?;
        }
    }
    for (s, a) in x.omega2.iter().enumerate() {
        for t in w1_terms(&W1Element::scalar(a.clone())) {
            let mut e = W2Element::zero(amb);
            e.omega2[s] = t.scalar;
            push(e)?;
        }
    }
    for (m, v) in x.rho1.iter().enumerate() {
        for t in w1_terms(&W1Element::vector(v.clone())) {
            let mut e = W2Element::zero(amb);
            e.rho1[m] = t.vector;
            push(e)?;
        }
    }
    for (q, w) in x.psi1.iter().enumerate() {
        for t in w1_terms(&W1Element::covector(w.clone())) {
            let mut e = W2Element::zero(amb);
            e.psi1[q] = t.covector;
            push(e)?;
        }
    }
    for t in w1_terms(&x.del) {
        let mut e = W2Element::zero(amb);
        e.del = t;
        push(e)?;
    }
    for t in w1_terms(&x.low) {
        push(W2Element::from_low(t))?;
    }
    Ok(out)
}

/// `Q, J` of weight one and `G, L` of weight two, in the normal forms of
/// the frame `frame_id`.
#[derive(Clone, Debug, PartialEq)]
pub struct SusyQuadruple {
    pub frame_id: String,
    pub q: W1Element,
    pub j: W1Element,
    pub g: W2Element,
    pub l: W2Element,
}

/// Differences `X_{g'} - X_g` in the normal forms of the base frame.
#[derive(Clone, Debug, PartialEq)]
pub struct SusyDeltas {
    pub q: W1Element,
    pub j: W1Element,
    pub g: W2Element,
    pub l: W2Element,
}

fn require_cotangent_natural(frame: &Frame) -> Result<()> {
    let even = frame.even_matrix();
    if frame.odd_matrix() != &even.invert()?.transpose() {
        return Err(Error::NonNatural(format!(
            "frame {} is not a natural frame of the cotangent bundle",
            frame.id()
        )));
    }
    Ok(())
}

fn low_of(e: W2Element) -> Result<W1Element> {
    e.as_low()
        .cloned()
        .ok_or_else(|| Error::Consistency("weight-one product left weight one".into()))
}

impl Envelope {
    /// `Q, J, G, L` built from the generators `(φ'_i, τ'_i, ψ'_i, ω'_i, ρ'_i)`
    /// of `primed`, all expanded in this envelope's frame.
    fn quadruple_of(&self, primed: &Frame) -> Result<SusyQuadruple> {
        let amb = self.amb();
        let n = amb.n;
        let mut q = W1Element::zero(amb);
        let mut j = W1Element::zero(amb);
        let mut g = W2Element::zero(amb);
        let mut l = W2Element::zero(amb);
        for i in 0..n {
            let phi = W1Element::scalar(primed.generator(i).clone());
            let tau = W1Element::vector(primed.vector(i).clone());
            let psi = W1Element::vector(primed.vector(n + i).clone());
            let omega = W1Element::covector(primed.covector(i).clone());
            let rho = W1Element::covector(primed.covector(n + i).clone());
            q = &q + &low_of(self.product_minus1(&phi, &tau)?)?;
            j = &j + &low_of(self.product_minus1(&phi, &psi)?)?;
            g = &g + &self.product_minus1(&psi, &omega)?;
            l = &l + &self.product_minus1(&omega, &tau)?;
            l = &l + &self.product_minus1(&rho, &psi)?;
        }
        Ok(SusyQuadruple {
            frame_id: primed.id().to_string(),
            q,
            j,
            g,
            l,
        })
    }
}

pub fn build_susy(frame: &Frame) -> Result<SusyQuadruple> {
    require_cotangent_natural(frame)?;
    if frame.ambient().n != frame.ambient().m {
        return Err(Error::NonNatural("odd rank differs from the dimension".into()));
    }
    Envelope::new(frame.clone())?.quadruple_of(frame)
}

/// `∂{tr(g^{-1} τ_r(g)) φ_r}` and `-tr(g^{-1} ∂g)`.
pub fn susy_closed_deltas(from: &Frame, to: &Frame) -> Result<(W1Element, W1Element)> {
    let amb = from.ambient();
    let fc = FrameChange::between(from, to)?;
    let g = fc.g();
    let g_inv = g.invert()?;
    let mut s = SuperScalar::zero(amb);
    for r in 0..amb.n {
        let t = g_inv.mul(&fc.base_derive_matrix(r, g))?.trace();
        s = &s + &from.generator(r).mul_rf(&t);
    }
    let dq = W1Element::covector(SuperCovector::differential(&s));
    let mut tr = SuperCovector::zero(amb);
    for p in 0..amb.n {
        for i in 0..amb.n {
            let dg = SuperCovector::differential(&lift(amb, g.get(i, p)));
            tr = &tr + &dg.left_mul(&lift(amb, g_inv.get(p, i)));
        }
    }
    Ok((dq, W1Element::covector(-&tr)))
}

/// The quadruple of `to` expressed in the normal forms of `from`, with the
/// differences checked against the closed transformation laws.
pub fn transform_susy(sq: &SusyQuadruple, from: &Frame, to: &Frame) -> Result<(SusyQuadruple, SusyDeltas)> {
    require_cotangent_natural(from)?;
    require_cotangent_natural(to)?;
    if sq.frame_id != from.id() {
        return Err(Error::Invalid(format!(
            "quadruple belongs to frame {}, not {}",
            sq.frame_id,
            from.id()
        )));
    }
    let fc = FrameChange::between(from, to)?;
    if !fc.is_holonomic() {
        return Err(Error::NonHolonomic);
    }
    let env = Envelope::new(from.clone())?;
    let primed = env.quadruple_of(to)?;
    let deltas = SusyDeltas {
        q: &primed.q - &sq.q,
        j: &primed.j - &sq.j,
        g: &primed.g - &sq.g,
        l: &primed.l - &sq.l,
    };
    let (dq, dj) = susy_closed_deltas(from, to)?;
    let checks: [(&str, bool, String); 4] = [
        ("Q", deltas.q == dq, format!("{} vs {}", deltas.q, dq)),
        ("J", deltas.j == dj, format!("{} vs {}", deltas.j, dj)),
        ("G", deltas.g.is_zero(), deltas.g.to_string()),
        ("L", deltas.l.is_zero(), deltas.l.to_string()),
    ];
    for (name, ok, detail) in checks {
        if !ok {
            return Err(Error::Consistency(format!("{name} transformation law: {detail}")));
        }
    }
    Ok((primed, deltas))
}

/// `Σ φ'_i τ'_i - Σ φ_i τ_i` as superderivations.
pub fn classical_q_difference(from: &Frame, to: &Frame) -> SuperVector {
    let amb = from.ambient();
    let sum = |f: &Frame| {
        (0..amb.n).fold(SuperVector::zero(amb), |acc, i| {
            &acc + &f.vector(i).left_mul(f.generator(i))
        })
    };
    &sum(to) - &sum(from)
}

/// `γ(φ'_i, τ'_i) + ∂{tr(τ_r(g) g^{-1}) φ_r}` in the algebroid of `from`.
pub fn gamma_lemma_residual(from: &Frame, to: &Frame) -> Result<SuperCovector> {
    let amb = from.ambient();
    let alg = VertexAlgebroid::new(from.clone());
    let mut lhs = SuperCovector::zero(amb);
    for i in 0..amb.n {
        lhs = &lhs + &alg.gamma(to.generator(i), to.vector(i));
    }
    let fc = FrameChange::between(from, to)?;
    let g = fc.g();
    let g_inv = g.invert()?;
    let mut s = SuperScalar::zero(amb);
    for r in 0..amb.n {
        let t = fc.base_derive_matrix(r, g).mul(&g_inv)?.trace();
        s = &s + &from.generator(r).mul_rf(&t);
    }
    Ok(&lhs + &SuperCovector::differential(&s))
}

/// All transformation checks for a pair of cotangent natural frames.
pub fn verify_susy(from: &Frame, to: &Frame) -> Result<Vec<Outcome>> {
    let ids = || vec![named("frames", &format!("{} -> {}", from.id(), to.id()))];
    let mut classical = Outcome::new("susy.classical-q", "phi'_i tau'_i = phi_i tau_i");
    let r = classical_q_difference(from, to);
    classical.record_residual(&r, r.is_zero(), ids);
    let mut lemma = Outcome::new("susy.gamma-lemma", "gamma(phi'_i, tau'_i) = -d{tr(tau_r(g) g^-1) phi_r}");
    let r = gamma_lemma_residual(from, to)?;
    lemma.record_residual(&r, r.is_zero(), ids);
    let sq = build_susy(from)?;
    let env = Envelope::new(from.clone())?;
    let primed = env.quadruple_of(to)?;
    let (dq, dj) = susy_closed_deltas(from, to)?;
    let mut out = vec![classical, lemma];
    let laws: [(&str, &str, W2Element); 4] = [
        ("susy.q", "Q' = Q + d{tr(g^-1 tau_r(g)) phi_r}", W2Element::from_low(&(&primed.q - &sq.q) - &dq)),
        ("susy.j", "J' = J - tr(g^-1 dg)", W2Element::from_low(&(&primed.j - &sq.j) - &dj)),
        ("susy.g", "G' = G", &primed.g - &sq.g),
        ("susy.l", "L' = L", &primed.l - &sq.l),
    ];
    for (id, anchor, r) in laws {
        let mut o = Outcome::new(id, anchor);
        o.record_residual(&r, r.is_zero(), ids);
        out.push(o);
    }
    Ok(out)
}

/// `J_0`, `L_0` and `L_{(0)}` on each generator against charge, weight and `∂`.
pub fn verify_generator_gradings(env: &Envelope, functions: &[SuperScalar]) -> Result<Vec<Outcome>> {
    let mut j0 = Outcome::new("grading.fermionic-charge", "J_0 x = F(x) x on generators");
    let mut l0 = Outcome::new("grading.conformal-weight", "L_0 x = wt(x) x on generators");
    let mut l_1 = Outcome::new("grading.translation", "L_(0) x = dx on generators");
    let jp = env.j_pairs();
    let lp = env.l_pairs();
    let mut gens: Vec<(String, W1Element)> = functions
        .iter()
        .map(|a| (a.to_string(), W1Element::scalar(a.clone())))
        .collect();
    gens.extend(env.generators());
    for (name, x) in gens {
        let xe = W2Element::from_low(x.clone());
        let inputs = || vec![named("generator", &name)];
        let r = &env.quadratic_mode(&jp, 0, &x)? - &env.j0(&xe)?;
        j0.record_residual(&r, r.is_zero(), inputs);
        let r = &env.quadratic_mode(&lp, 1, &x)? - &env.l0(&xe)?;
        l0.record_residual(&r, r.is_zero(), inputs);
        let r = &env.quadratic_mode(&lp, 0, &x)? - &env.partial(&x);
        l_1.record_residual(&r, r.is_zero(), inputs);
    }
    Ok(vec![j0, l0, l_1])
}

/// `(a^{-1} ∂a)_{(0)} x` for weight `≤ 1` elements `x`.
pub fn log_derivative_action(env: &Envelope, a: &SuperScalar, x: &W1Element) -> Result<W1Element> {
    let amb = a.ambient();
    let inv = a
        .as_even_rf()
        .ok_or_else(|| Error::Invalid("expected an even function".into()))?
        .recip()?;
    let u = SuperCovector::differential(a).left_mul(&lift(amb, &inv));
    Ok(env.positive_mode(&W1Element::covector(u), 0, x))
}

