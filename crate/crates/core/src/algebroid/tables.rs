//! Closed-form values of `γ`, `⟨,⟩` and `c` on generator shapes in the
//! coordinate frame, and on primed basis fields after a change of frame.

use num_traits::One;

use crate::error::{Error, Result};
use crate::kernel::{rational_from, RatFunc, Rational};
use crate::superalg::{Ambient, SuperCovector, SuperScalar, SuperVector};

use super::frame::{AlgebroidElement, FrameChange};

/// `a` or `a φ_r` with `a` in the base ring.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarShape {
    Even(RatFunc),
    Odd(RatFunc, usize),
}

/// Weight-one generator terms `b τ_i`, `b φ_ν ψ_μ`, `b ψ_μ`.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorShape {
    Tau { b: RatFunc, i: usize },
    PhiPsi { b: RatFunc, nu: usize, mu: usize },
    Psi { b: RatFunc, mu: usize },
}

struct Ctx {
    amb: Ambient,
}

impl Ctx {
    fn lift(&self, f: &RatFunc) -> SuperScalar {
        SuperScalar::from_rf(self.amb, f.clone())
    }

    fn phi(&self, f: &RatFunc, r: usize) -> SuperScalar {
        SuperScalar::phi(self.amb, r).mul_rf(f)
    }

    fn d(&self, f: &SuperScalar) -> SuperCovector {
        SuperCovector::differential(f)
    }

    fn de(&self, f: &RatFunc) -> SuperCovector {
        self.d(&self.lift(f))
    }

    fn tau(&self, i: usize, f: &RatFunc) -> RatFunc {
        f.partial(i).expect("variable in range")
    }
}

fn half() -> Rational {
    rational_from(1, 2)
}

fn delta(a: usize, b: usize) -> bool {
    a == b
}

pub fn gamma_table(amb: Ambient, a: &ScalarShape, y: &VectorShape) -> SuperCovector {
    let cx = Ctx { amb };
    let zero = SuperCovector::zero(amb);
    match (a, y) {
        (ScalarShape::Even(a), VectorShape::Tau { b, i }) => {
            // γ(a, bτ_i) = -τ_i(a)∂b - τ_i(b)∂a
            -&(&cx.de(b).left_mul(&cx.lift(&cx.tau(*i, a)))
                + &cx.de(a).left_mul(&cx.lift(&cx.tau(*i, b))))
        }
        (ScalarShape::Even(a), VectorShape::PhiPsi { b, nu, mu }) => {
            if delta(*nu, *mu) {
                cx.de(a).left_mul(&cx.lift(b))
            } else {
                zero
            }
        }
        (ScalarShape::Even(_), VectorShape::Psi { .. }) => zero,
        (ScalarShape::Odd(a, beta), VectorShape::Psi { b, mu }) => {
            if delta(*beta, *mu) {
                cx.de(b).left_mul(&cx.lift(a))
            } else {
                zero
            }
        }
        (ScalarShape::Odd(a, r), VectorShape::Tau { b, i }) => {
            // -τ_i(a) φ_r ∂b - τ_i(b) ∂(a φ_r)
            let t1 = cx.de(b).left_mul(&cx.phi(&cx.tau(*i, a), *r));
            let t2 = cx.d(&cx.phi(a, *r)).left_mul(&cx.lift(&cx.tau(*i, b)));
            -&(&t1 + &t2)
        }
        (ScalarShape::Odd(a, r), VectorShape::PhiPsi { b, nu: s, mu: p }) => {
            let mut acc = zero;
            if delta(*r, *p) {
                acc = &acc - &cx.d(&cx.phi(b, *s)).left_mul(&cx.lift(a));
            }
            if delta(*s, *p) {
                acc = &acc + &cx.d(&cx.phi(a, *r)).left_mul(&cx.lift(b));
            }
            acc
        }
    }
}

pub fn pairing_table(amb: Ambient, x: &VectorShape, y: &VectorShape) -> SuperScalar {
    let cx = Ctx { amb };
    let zero = SuperScalar::zero(amb);
    match (x, y) {
        (VectorShape::Tau { b: a, i }, VectorShape::Tau { b, i: j }) => {
            let t1 = b * &cx.tau(*i, &cx.tau(*j, a));
            let t2 = a * &cx.tau(*j, &cx.tau(*i, b));
            let t3 = &cx.tau(*i, b) * &cx.tau(*j, a);
            cx.lift(&-(&(&t1 + &t2) + &t3))
        }
        (VectorShape::PhiPsi { b: a, nu: alpha, mu: beta }, VectorShape::Tau { b, i })
        | (VectorShape::Tau { b, i }, VectorShape::PhiPsi { b: a, nu: alpha, mu: beta }) => {
            if delta(*alpha, *beta) {
                cx.lift(&(b * &cx.tau(*i, a)))
            } else {
                zero
            }
        }
        (
            VectorShape::PhiPsi { b: a, nu: alpha, mu: beta },
            VectorShape::PhiPsi { b, nu: alpha2, mu: beta2 },
        ) => {
            if delta(*beta, *alpha2) && delta(*beta2, *alpha) {
                cx.lift(&(a * b))
            } else {
                zero
            }
        }
        // anything paired with b ψ_μ vanishes
        _ => zero,
    }
}

pub fn c_table(amb: Ambient, x: &VectorShape, y: &VectorShape) -> SuperCovector {
    let cx = Ctx { amb };
    let zero = SuperCovector::zero(amb);
    match (x, y) {
        (VectorShape::Tau { b: a, i }, VectorShape::Tau { b, i: j }) => {
            let tib = cx.tau(*i, b);
            let tja = cx.tau(*j, a);
            let first = &cx.de(&tja).left_mul(&cx.lift(&tib)) - &cx.de(&tib).left_mul(&cx.lift(&tja));
            let inner = &(b * &cx.tau(*i, &tja)) - &(a * &cx.tau(*j, &tib));
            (&first + &cx.de(&inner)).scale(&half())
        }
        (VectorShape::PhiPsi { b: a, nu: alpha, mu }, VectorShape::PhiPsi { b, nu: beta, mu: nu })
        => {
            if delta(*mu, *beta) && delta(*nu, *alpha) {
                (&cx.de(b).left_mul(&cx.lift(a)) - &cx.de(a).left_mul(&cx.lift(b))).scale(&half())
            } else {
                zero
            }
        }
        (VectorShape::PhiPsi { b: a, nu: alpha, mu }, VectorShape::Tau { b, i }) => {
            if delta(*mu, *alpha) {
                cx.de(&(b * &cx.tau(*i, a))).scale(&-half())
            } else {
                zero
            }
        }
        (VectorShape::Tau { .. }, VectorShape::PhiPsi { .. }) => -&c_table(amb, y, x),
        // c vanishes whenever an argument is a pure ψ-term
        _ => zero,
    }
}

/// Split a scalar into tabulated shapes.
pub fn decompose_scalar(a: &SuperScalar) -> Result<Vec<ScalarShape>> {
    a.terms()
        .map(|(mask, f)| match mask.count_ones() {
            0 => Ok(ScalarShape::Even(f.clone())),
            1 => Ok(ScalarShape::Odd(f.clone(), mask.trailing_zeros() as usize)),
            _ => Err(Error::UnsupportedShape(format!(
                "scalar term with {} odd generators",
                mask.count_ones()
            ))),
        })
        .collect()
}

/// Split a vector field in the coordinate frame into tabulated shapes.
pub fn decompose_vector(x: &SuperVector) -> Result<Vec<VectorShape>> {
    let amb = x.ambient();
    let mut out = Vec::new();
    for (k, c) in x.comps().iter().enumerate() {
        for (mask, f) in c.terms() {
            let b = f.clone();
            out.push(match (k < amb.n, mask.count_ones()) {
                (true, 0) => VectorShape::Tau { b, i: k },
                (false, 0) => VectorShape::Psi { b, mu: k - amb.n },
                (false, 1) => VectorShape::PhiPsi {
                    b,
                    nu: mask.trailing_zeros() as usize,
                    mu: k - amb.n,
                },
                _ => {
                    return Err(Error::UnsupportedShape(format!(
                        "vector component {k} has a term with {} odd generators",
                        mask.count_ones()
                    )))
                }
            });
        }
    }
    Ok(out)
}

/// `γ(a, y)` by bilinear dispatch onto the tables.
pub fn gamma_eval(a: &SuperScalar, y: &SuperVector) -> Result<SuperCovector> {
    let amb = a.ambient();
    amb.check(&y.ambient())?;
    let ys = decompose_vector(y)?;
    let mut acc = SuperCovector::zero(amb);
    for s in decompose_scalar(a)? {
        for t in &ys {
            acc = &acc + &gamma_table(amb, &s, t);
        }
    }
    Ok(acc)
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// `⟨x, y⟩` on `T ⊕ Ω`; the vector-vector part uses the tables.
pub fn pairing_eval(x: &AlgebroidElement, y: &AlgebroidElement) -> Result<SuperScalar> {
    let amb = x.ambient();
    amb.check(&y.ambient())?;
    let xs = decompose_vector(&x.v)?;
    let ys = decompose_vector(&y.v)?;
    let mut acc = x.v.pair(&y.w);
    for (pw, w) in x.w.homogeneous_parts() {
        for (pv, v) in y.v.homogeneous_parts() {
            acc = &acc + &v.pair(&w).scale(&sign(pw * pv == 1));
        }
    }
    for s in &xs {
        for t in &ys {
            acc = &acc + &pairing_table(amb, s, t);
        }
    }
    Ok(acc)
}

/// `c(x, y)`, vanishing on the `Ω` parts.
pub fn c_eval(x: &AlgebroidElement, y: &AlgebroidElement) -> Result<SuperCovector> {
    let amb = x.ambient();
    amb.check(&y.ambient())?;
    let xs = decompose_vector(&x.v)?;
    let ys = decompose_vector(&y.v)?;
    let mut acc = SuperCovector::zero(amb);
    for s in &xs {
        for t in &ys {
            acc = &acc + &c_table(amb, s, t);
        }
    }
    Ok(acc)
}

/// Closed forms for the coordinate-frame structure evaluated on the primed
/// basis of a change of frame based at the coordinate frame.
pub struct PrimedForms<'a> {
    fc: &'a FrameChange,
    amb: Ambient,
    mixed: Vec<crate::kernel::RatMatrix>,
}

impl<'a> PrimedForms<'a> {
    pub fn new(amb: Ambient, fc: &'a FrameChange) -> Result<Self> {
        Ok(PrimedForms {
            fc,
            amb,
            mixed: fc.mixed()?,
        })
    }

    fn lift(&self, f: &RatFunc) -> SuperScalar {
        SuperScalar::from_rf(self.amb, f.clone())
    }

    fn de(&self, f: &RatFunc) -> SuperCovector {
        SuperCovector::differential(&self.lift(f))
    }

    fn tau(&self, q: usize, f: &RatFunc) -> RatFunc {
        self.fc.base_derive(q, f)
    }

    /// `γ(a, τ'_p) = -τ_q(a)∂g^{pq} - τ_q(g^{pq})∂a + g^{pμμ}∂a`.
    pub fn gamma_tau(&self, a: &RatFunc, p: usize) -> SuperCovector {
        let g = self.fc.g();
        let mut acc = self.de(a).left_mul(&self.lift(&self.mixed[p].trace()));
        for q in 0..self.amb.n {
            acc = &acc - &self.de(g.get(p, q)).left_mul(&self.lift(&self.tau(q, a)));
            acc = &acc - &self.de(a).left_mul(&self.lift(&self.tau(q, g.get(p, q))));
        }
        acc
    }

    /// `γ(a φ'_μ, ψ'_α) = a A^{μβ} ∂A^{-1 βα}`.
    pub fn gamma_phi_psi(&self, a: &RatFunc, mu: usize, alpha: usize) -> Result<SuperCovector> {
        let am = self.fc.a();
        let a_inv = am.invert()?;
        let mut acc = SuperCovector::zero(self.amb);
        for beta in 0..self.amb.m {
            let c = a * am.get(mu, beta);
            acc = &acc + &self.de(a_inv.get(beta, alpha)).left_mul(&self.lift(&c));
        }
        Ok(acc)
    }

    /// `⟨τ'_i, τ'_j⟩`.
    pub fn pairing_tau_tau(&self, i: usize, j: usize) -> Result<SuperScalar> {
        let n = self.amb.n;
        let g = self.fc.g();
        let am = self.fc.a();
        let a_inv = am.invert()?;
        let two = RatFunc::from_int(n, 2);
        let mut acc = RatFunc::zero(n);
        for p in 0..n {
            for q in 0..n {
                acc = &acc - &(&two * &(g.get(i, p) * &self.tau(q, &self.tau(p, g.get(j, q)))));
                acc = &acc - &(&self.tau(p, g.get(j, q)) * &self.tau(q, g.get(i, p)));
            }
            acc = &acc + &(&two * &(g.get(i, p) * &self.tau(p, &self.mixed[j].trace())));
        }
        for p in 0..n {
            for q in 0..n {
                let gg = g.get(i, p) * g.get(j, q);
                if gg.is_zero() {
                    continue;
                }
                let dp = self.fc.base_derive_matrix(p, &a_inv).mul(am)?;
                let dq = self.fc.base_derive_matrix(q, &a_inv).mul(am)?;
                let tr = dp.mul(&dq)?.trace();
                acc = &acc + &(&gg * &tr);
            }
        }
        Ok(self.lift(&acc))
    }

    /// `c(τ'_i, τ'_j)`.
    pub fn c_tau_tau(&self, i: usize, j: usize) -> SuperCovector {
        let (n, m) = (self.amb.n, self.amb.m);
        let g = self.fc.g();
        let mut acc = SuperCovector::zero(self.amb);
        for p in 0..n {
            for q in 0..n {
                let a = self.tau(p, g.get(j, q));
                let b = self.tau(q, g.get(i, p));
                acc = &acc + &self.de(&b).left_mul(&self.lift(&a));
                acc = &acc - &self.de(&a).left_mul(&self.lift(&b));
            }
        }
        for mu in 0..m {
            for nu in 0..m {
                let gi = self.mixed[i].get(mu, nu);
                let gj = self.mixed[j].get(nu, mu);
                acc = &acc + &self.de(gj).left_mul(&self.lift(gi));
                acc = &acc - &self.de(gi).left_mul(&self.lift(gj));
            }
        }
        acc.scale(&half())
    }
}
