use num_traits::One;

use crate::kernel::{rational_from, Rational};
use crate::superalg::{Ambient, SuperCovector, SuperScalar, SuperVector};

use super::frame::{AlgebroidElement, Frame};

fn sign(odd: u8) -> Rational {
    if odd % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn half() -> Rational {
    rational_from(1, 2)
}

/// The vertex superalgebroid attached to a frame.
///
/// On the frame basis `γ(f, e_k)`, `⟨e_k, e_l⟩` and `c(e_k, e_l)` vanish;
/// every other value follows from the rescaling rules for `γ`, `⟨,⟩` and `c`
/// in their first argument together with (skew) supersymmetry.
#[derive(Clone, Debug)]
pub struct VertexAlgebroid {
    frame: Frame,
    c_defect: Option<SuperScalar>,
}

impl VertexAlgebroid {
    pub fn new(frame: Frame) -> Self {
        VertexAlgebroid {
            frame,
            c_defect: None,
        }
    }

    /// Structure with `c` perturbed by the skew term
    /// `(X^1 Y^2 - (-1)^{p(X)p(Y)} Y^1 X^2) ∂a`, for negative controls.
    pub fn with_corrupted_c(frame: Frame, a: SuperScalar) -> Self {
        VertexAlgebroid {
            frame,
            c_defect: Some(a),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn ambient(&self) -> Ambient {
        self.frame.ambient()
    }

    fn basis_parity(&self, k: usize) -> u8 {
        self.ambient().basis_parity(k)
    }

    /// Homogeneous pieces `(p(c), c, k)` of `X = Σ c_k e_k`.
    fn pieces(&self, x: &SuperVector) -> Vec<(u8, SuperScalar, usize)> {
        let mut out = Vec::new();
        for (k, c) in self.frame.vector_coords(x).into_iter().enumerate() {
            for (p, part) in c.homogeneous_parts() {
                out.push((p, part, k));
            }
        }
        out
    }

    /// `γ(a, c e_k)` for homogeneous `a`, `c`.
    fn gamma_piece(&self, pa: u8, a: &SuperScalar, pc: u8, c: &SuperScalar, k: usize) -> SuperCovector {
        let e = self.frame.vector(k);
        let pe = self.basis_parity(k);
        let t1 = SuperCovector::differential(c).left_mul(&e.apply(a));
        let t2 = SuperCovector::differential(a).left_mul(&e.apply(c));
        let s1 = sign(1 + pe * (pa + pc));
        let s2 = sign(1 + pa * pc + pe * pa + pe * pc);
        &t1.scale(&s1) + &t2.scale(&s2)
    }

    /// `γ: A × T → Ω`.
    pub fn gamma(&self, a: &SuperScalar, x: &SuperVector) -> SuperCovector {
        let mut acc = SuperCovector::zero(self.ambient());
        for (pa, ap) in a.homogeneous_parts() {
            for (pc, c, k) in self.pieces(x) {
                acc = &acc + &self.gamma_piece(pa, &ap, pc, &c, k);
            }
        }
        acc
    }

    /// `⟨e_k, Y⟩` for homogeneous `Y`.
    fn pair_basis_left(&self, k: usize, y: &SuperVector) -> SuperScalar {
        let pk = self.basis_parity(k);
        let ek = self.frame.vector(k);
        let mut acc = SuperScalar::zero(self.ambient());
        for (pb, b, l) in self.pieces(y) {
            let pl = self.basis_parity(l);
            // ⟨e_k, b e_l⟩ = (-1)^{p_k(p_b+p_l)} ⟨b e_l, e_k⟩
            let inner = self.frame.vector(l).apply(&ek.apply(&b));
            let s = sign(1 + pk * (pb + pl) + pb * (pl + pk));
            acc = &acc + &inner.scale(&s);
        }
        acc
    }

    /// Pairing on `T × T`.
    pub fn pair_vectors(&self, x: &SuperVector, y: &SuperVector) -> SuperScalar {
        let mut acc = SuperScalar::zero(self.ambient());
        for (py, yp) in y.homogeneous_parts() {
            for (pa, a, k) in self.pieces(x) {
                let pk = self.basis_parity(k);
                let first = &a * &self.pair_basis_left(k, &yp);
                let second = self.frame.vector(k).apply(&yp.apply(&a));
                acc = &acc + &(&first - &second.scale(&sign(pa * (pk + py))));
            }
        }
        acc
    }

    /// Supersymmetric pairing on `T ⊕ Ω`, zero on `Ω × Ω`.
    pub fn pairing(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> SuperScalar {
        let tt = self.pair_vectors(&x.v, &y.v);
        let tw = x.v.pair(&y.w);
        let mut wt = SuperScalar::zero(self.ambient());
        for (pw, w) in x.w.homogeneous_parts() {
            for (pv, v) in y.v.homogeneous_parts() {
                wt = &wt + &v.pair(&w).scale(&sign(pw * pv));
            }
        }
        &(&tt + &tw) + &wt
    }

    /// `c(b e_l, e_k)`.
    fn c_piece_basis_right(&self, pb: u8, b: &SuperScalar, l: usize, k: usize) -> SuperCovector {
        let pl = self.basis_parity(l);
        let pk = self.basis_parity(k);
        let inner = self.frame.vector(l).apply(&self.frame.vector(k).apply(b));
        SuperCovector::differential(&inner).scale(&(&sign(pb * (pl + pk)) * &half()))
    }

    /// `c(e_k, Y)` for homogeneous `Y` of parity `py`.
    fn c_basis_left(&self, k: usize, py: u8, y: &SuperVector) -> SuperCovector {
        let pk = self.basis_parity(k);
        let mut acc = SuperCovector::zero(self.ambient());
        for (pb, b, l) in self.pieces(y) {
            acc = &acc + &self.c_piece_basis_right(pb, &b, l, k);
        }
        acc.scale(&sign(1 + pk * py))
    }

    /// Skew-supersymmetric `c: T × T → Ω`.
    pub fn c(&self, x: &SuperVector, y: &SuperVector) -> SuperCovector {
        let amb = self.ambient();
        let mut acc = SuperCovector::zero(amb);
        for (py, yp) in y.homogeneous_parts() {
            for (pa, a, k) in self.pieces(x) {
                let pk = self.basis_parity(k);
                let ek = self.frame.vector(k);
                let s = sign(pa * (pk + py));
                let mut term = self.c_basis_left(k, py, &yp).left_mul(&a);
                term = &term + &self.gamma(&a, &ek.bracket(&yp));
                let pairing = self.pair_basis_left(k, &yp);
                let t5 = SuperCovector::differential(&a).left_mul(&pairing);
                let t6 = SuperCovector::differential(&ek.apply(&yp.apply(&a)));
                term = &term + &(&t6 - &t5).scale(&(&s * &half()));
                acc = &acc + &term;
            }
            if let Some(f) = &self.c_defect {
                acc = &acc + &self.defect(x, py, &yp, f);
            }
        }
        acc
    }

    fn defect(&self, x: &SuperVector, py: u8, y: &SuperVector, f: &SuperScalar) -> SuperCovector {
        let amb = self.ambient();
        if amb.n < 2 {
            return SuperCovector::zero(amb);
        }
        let mut acc = SuperCovector::zero(amb);
        for (px, xp) in x.homogeneous_parts() {
            let a = xp.comp(0) * y.comp(1);
            let b = y.comp(0) * xp.comp(1);
            let s = &a - &b.scale(&sign(px * py));
            acc = &acc + &SuperCovector::differential(f).left_mul(&s);
        }
        acc
    }

    /// `c` extended to `T ⊕ Ω` by zero on the `Ω` parts.
    pub fn c_elements(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> SuperCovector {
        self.c(&x.v, &y.v)
    }

    /// The `T × Ω` pairing, intrinsic to the extended Lie algebroid.
    pub fn pair_tw(&self, x: &SuperVector, w: &SuperCovector) -> SuperScalar {
        x.pair(w)
    }


}
