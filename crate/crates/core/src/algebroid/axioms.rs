use num_traits::One;

use crate::check::{named, Outcome};
use crate::error::{Error, Result};
use crate::kernel::{rational_from, RatFunc, Rational};
use crate::sample::{PoolConfig, Sampler};
use crate::superalg::{d_lie, SuperCovector, SuperScalar, SuperVector};

use super::frame::FrameChange;
use super::structure::VertexAlgebroid;

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

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    PairingDifferential,
    ActionLeibniz,
    ActionRescaling,
    PairingInvariance,
    GammaRescaling,
    PairingRescaling,
    CRescaling,
    PairingBracket,
    CDifferential,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::PairingDifferential,
        Axiom::ActionLeibniz,
        Axiom::ActionRescaling,
        Axiom::PairingInvariance,
        Axiom::GammaRescaling,
        Axiom::PairingRescaling,
        Axiom::CRescaling,
        Axiom::PairingBracket,
        Axiom::CDifferential,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Axiom::PairingDifferential => "lie.pairing-differential",
            Axiom::ActionLeibniz => "lie.action-leibniz",
            Axiom::ActionRescaling => "lie.action-rescaling",
            Axiom::PairingInvariance => "lie.pairing-invariance",
            Axiom::GammaRescaling => "vertex.gamma-rescaling",
            Axiom::PairingRescaling => "vertex.pairing-rescaling",
            Axiom::CRescaling => "vertex.c-rescaling",
            Axiom::PairingBracket => "vertex.pairing-bracket",
            Axiom::CDifferential => "vertex.c-differential",
        }
    }

    pub fn anchor(&self) -> &'static str {
        match self {
            Axiom::PairingDifferential => "<τ, ∂a> = τ(a)",
            Axiom::ActionLeibniz => "τ(aω) = τ(a)ω ± aτ(ω)",
            Axiom::ActionRescaling => "(aτ)(ω) = aτ(ω) ± <τ,ω>∂a",
            Axiom::PairingInvariance => "τ<ν,ω> = <[τ,ν],ω> ± <ν,τ(ω)>",
            Axiom::GammaRescaling => "γ(a, bτ) rescaling",
            Axiom::PairingRescaling => "<aτ1, τ2> rescaling",
            Axiom::CRescaling => "c(aτ1, τ2) rescaling",
            Axiom::PairingBracket => "invariance of <,> with c-correction",
            Axiom::CDifferential => "d_Lie c = -1/2 ∂{…}",
        }
    }

    pub fn from_id(id: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.id() == id)
    }
}

struct Draw<'a> {
    s: &'a mut Sampler,
}

impl Draw<'_> {
    fn scalar(&mut self) -> (u8, SuperScalar) {
        let p = self.s.parity();
        (p, self.s.scalar(p))
    }

    fn vector(&mut self) -> (u8, SuperVector) {
        let p = self.s.parity();
        (p, self.s.vector(p))
    }

    fn covector(&mut self) -> (u8, SuperCovector) {
        let p = self.s.parity();
        (p, self.s.covector(p))
    }
}

/// Check the chosen axioms on `samples` seeded random inputs each.
pub fn verify_axioms(
    alg: &VertexAlgebroid,
    seed: u64,
    samples: usize,
    cfg: PoolConfig,
    which: &[Axiom],
) -> Vec<Outcome> {
    which
        .iter()
        .map(|&ax| {
            let mut sampler = Sampler::new(seed ^ ((ax as u64 + 1) << 32), alg.ambient(), cfg);
            let mut out = Outcome::new(ax.id(), ax.anchor());
            for _ in 0..samples {
                check_one(alg, ax, &mut Draw { s: &mut sampler }, &mut out);
            }
            out
        })
        .collect()
}

fn check_one(alg: &VertexAlgebroid, ax: Axiom, d: &mut Draw, out: &mut Outcome) {
    match ax {
        Axiom::PairingDifferential => {
            let (_, t) = d.vector();
            let (_, a) = d.scalar();
            let r = &t.pair(&SuperCovector::differential(&a)) - &t.apply(&a);
            out.record_residual(&r, r.is_zero(), || vec![named("τ", &t), named("a", &a)]);
        }
        Axiom::ActionLeibniz => {
            let (pt, t) = d.vector();
            let (pa, a) = d.scalar();
            let (_, w) = d.covector();
            let lhs = t.act_on_covector(&w.left_mul(&a));
            let rhs = &w.left_mul(&t.apply(&a))
                + &t.act_on_covector(&w).left_mul(&a).scale(&sign(pt * pa));
            let r = &lhs - &rhs;
            out.record_residual(&r, r.is_zero(), || {
                vec![named("τ", &t), named("a", &a), named("ω", &w)]
            });
        }
        Axiom::ActionRescaling => {
            let (pt, t) = d.vector();
            let (pa, a) = d.scalar();
            let (pw, w) = d.covector();
            let lhs = t.left_mul(&a).act_on_covector(&w);
            let rhs = &t.act_on_covector(&w).left_mul(&a)
                + &SuperCovector::differential(&a)
                    .left_mul(&t.pair(&w))
                    .scale(&sign(pa * (pt + pw)));
            let r = &lhs - &rhs;
            out.record_residual(&r, r.is_zero(), || {
                vec![named("τ", &t), named("a", &a), named("ω", &w)]
            });
        }
        Axiom::PairingInvariance => {
            let (pt, t) = d.vector();
            let (pn, nu) = d.vector();
            let (_, w) = d.covector();
            let lhs = t.apply(&nu.pair(&w));
            let rhs = &t.bracket(&nu).pair(&w)
                + &nu.pair(&t.act_on_covector(&w)).scale(&sign(pt * pn));
            let r = &lhs - &rhs;
            out.record_residual(&r, r.is_zero(), || {
                vec![named("τ", &t), named("ν", &nu), named("ω", &w)]
            });
        }
        Axiom::GammaRescaling => {
            let (pa, a) = d.scalar();
            let (pb, b) = d.scalar();
            let (pt, t) = d.vector();
            let lhs = alg.gamma(&a, &t.left_mul(&b));
            let mut rhs = &alg.gamma(&(&a * &b), &t) - &alg.gamma(&b, &t).left_mul(&a);
            rhs = &rhs
                - &SuperCovector::differential(&b)
                    .left_mul(&t.apply(&a))
                    .scale(&sign(pt * (pa + pb)));
            rhs = &rhs
                - &SuperCovector::differential(&a)
                    .left_mul(&t.apply(&b))
                    .scale(&sign(pa * pb + pt * pa + pt * pb));
            let r = &lhs - &rhs;
            out.record_residual(&r, r.is_zero(), || {
                vec![named("a", &a), named("b", &b), named("τ", &t)]
            });
        }
        Axiom::PairingRescaling => {
            let (pa, a) = d.scalar();
            let (p1, t1) = d.vector();
            let (p2, t2) = d.vector();
            let lhs = alg.pair_vectors(&t1.left_mul(&a), &t2);
            let g = alg.gamma(&a, &t1);
            let g_t2 = t2.pair(&g).scale(&sign((pa + p1) * p2));
            let rhs = &(&(&a * &alg.pair_vectors(&t1, &t2)) + &g_t2)
                - &t1.apply(&t2.apply(&a)).scale(&sign(pa * (p1 + p2)));
            let r = &lhs - &rhs;
            out.record_residual(&r, r.is_zero(), || {
                vec![named("a", &a), named("τ1", &t1), named("τ2", &t2)]
            });
        }
        Axiom::CRescaling => {
            let (pa, a) = d.scalar();
            let (p1, t1) = d.vector();
            let (p2, t2) = d.vector();
            let r = c_rescaling_residual(alg, (pa, &a), (p1, &t1), (p2, &t2));
            out.record_residual(&r, r.is_zero(), || {
                vec![named("a", &a), named("τ1", &t1), named("τ2", &t2)]
            });
        }
        Axiom::PairingBracket => {
            let (p1, t1) = d.vector();
            let (p2, t2) = d.vector();
            let (p3, t3) = d.vector();
            let pr = |x: &SuperVector, y: &SuperVector| alg.pair_vectors(x, y);
            let s12 = sign(p1 * p2);
            let s3 = sign(p3 * (p1 + p2));
            let lhs = &pr(&t1.bracket(&t2), &t3) + &pr(&t2, &t1.bracket(&t3)).scale(&s12);
            let mut rhs = t1.apply(&pr(&t2, &t3));
            rhs = &rhs - &t2.apply(&pr(&t1, &t3)).scale(&(&s12 * &half()));
            rhs = &rhs - &t3.apply(&pr(&t1, &t2)).scale(&(&s3 * &half()));
            rhs = &rhs + &t2.pair(&alg.c(&t1, &t3)).scale(&s12);
            rhs = &rhs + &t3.pair(&alg.c(&t1, &t2)).scale(&s3);
            let r = &lhs - &rhs;
            out.record_residual(&r, r.is_zero(), || {
                vec![named("τ1", &t1), named("τ2", &t2), named("τ3", &t3)]
            });
        }
        Axiom::CDifferential => {
            let (_, t1) = d.vector();
            let (_, t2) = d.vector();
            let (_, t3) = d.vector();
            match c_differential_residual(alg, &t1, &t2, &t3) {
                Ok(r) => out.record_residual(&r, r.is_zero(), || {
                    vec![named("τ1", &t1), named("τ2", &t2), named("τ3", &t3)]
                }),
                Err(e) => out.record_residual(&e, false, Vec::new),
            }
        }
    }
}

fn c_rescaling_residual(
    alg: &VertexAlgebroid,
    (pa, a): (u8, &SuperScalar),
    (p1, t1): (u8, &SuperVector),
    (p2, t2): (u8, &SuperVector),
) -> SuperCovector {
    let lhs = alg.c(&t1.left_mul(a), t2);
    let s_a = sign(pa * (p1 + p2));
    let s_2 = sign(p2 * (p1 + pa));
    let g = alg.gamma(a, t1);
    let mut rhs = alg.c(t1, t2).left_mul(a);
    rhs = &rhs + &alg.gamma(a, &t1.bracket(t2));
    rhs = &rhs - &alg.gamma(&t2.apply(a), t1).scale(&s_2);
    rhs = &rhs + &t2.act_on_covector(&g).scale(&s_2);
    rhs = &rhs
        - &SuperCovector::differential(a)
            .left_mul(&alg.pair_vectors(t1, t2))
            .scale(&(&s_a * &half()));
    rhs = &rhs + &SuperCovector::differential(&t1.apply(&t2.apply(a))).scale(&(&s_a * &half()));
    rhs = &rhs - &SuperCovector::differential(&t2.pair(&g)).scale(&(&s_2 * &half()));
    &lhs - &rhs
}

/// Residual of `d_Lie c(τ1,τ2,τ3) = -1/2 ∂{…}` at homogeneous fields.
pub fn c_differential_residual(
    alg: &VertexAlgebroid,
    t1: &SuperVector,
    t2: &SuperVector,
    t3: &SuperVector,
) -> Result<SuperCovector> {
    let p1 = t1.homogeneous_parity()?;
    let p2 = t2.homogeneous_parity()?;
    let p3 = t3.homogeneous_parity()?;
    let taus = [t1.clone(), t2.clone(), t3.clone()];
    let c = |args: &[SuperVector]| -> Result<SuperCovector> { Ok(alg.c(&args[0], &args[1])) };
    let lhs = d_lie(&taus, 0, &c)?;
    let pr = |x: &SuperVector, y: &SuperVector| alg.pair_vectors(x, y);
    let mut inner = pr(&t1.bracket(t2), t3);
    inner = &inner + &pr(&t1.bracket(t3), t2).scale(&sign(p2 * p3));
    inner = &inner - &pr(&t2.bracket(t3), t1).scale(&sign(p1 * (p2 + p3)));
    inner = &inner - &t1.apply(&pr(t2, t3));
    inner = &inner + &t2.apply(&pr(t1, t3)).scale(&sign(p1 * p2));
    inner = &inner
        - &t3
            .pair(&alg.c(t1, t2))
            .scale(&(&sign(p3 * (p1 + p2)) * &rational_from(2, 1)));
    let rhs = SuperCovector::differential(&inner).scale(&-half());
    Ok(&lhs - &rhs)
}

/// Residuals of the Jacobian identities for a holonomic change, named by
/// the identity they test. Every residual must vanish.
pub fn matrix_identities(fc: &FrameChange) -> Result<Vec<(&'static str, RatFunc)>> {
    if !fc.is_holonomic() {
        return Err(Error::NonHolonomic);
    }
    let g = fc.g();
    let n = g.rows();
    let g_inv = g.invert()?;
    let tau = |q: usize, f: &RatFunc| fc.base_derive(q, f);
    let gtr = fc.mixed_trace()?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for q in 0..n {
                let mut r = RatFunc::zero(g.nvars());
                for p in 0..n {
                    r = &r + &(g.get(i, p) * &tau(p, g.get(j, q)));
                    r = &r - &(g.get(j, p) * &tau(p, g.get(i, q)));
                }
                out.push(("g-derivative-symmetry", r));
            }
            let mut r = RatFunc::zero(g.nvars());
            for p in 0..n {
                for q in 0..n {
                    r = &r + &(g.get(i, p) * &tau(q, &tau(p, g.get(j, q))));
                    r = &r - &(g.get(j, q) * &tau(p, &tau(q, g.get(i, p))));
                }
            }
            out.push(("g-second-derivative-symmetry", r));
            let mut r = RatFunc::zero(g.nvars());
            for p in 0..n {
                r = &r + &(g.get(i, p) * &tau(p, &gtr[j]));
                r = &r - &(g.get(j, p) * &tau(p, &gtr[i]));
            }
            out.push(("mixed-trace-symmetry", r));
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r_ in 0..n {
                let r = &tau(p, g_inv.get(q, r_)) - &tau(q, g_inv.get(p, r_));
                out.push(("inverse-derivative-symmetry", r));
            }
        }
    }
    out.extend(trace_symmetry(fc)?);
    Ok(out)
}

/// `tr{τ_p(A) τ_q(A^{-1})}` is symmetric in `p, q` for any invertible `A`.
pub fn trace_symmetry(fc: &FrameChange) -> Result<Vec<(&'static str, RatFunc)>> {
    let a = fc.a();
    let a_inv = a.invert()?;
    let n = fc.g().rows();
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let l = fc
                .base_derive_matrix(p, a)
                .mul(&fc.base_derive_matrix(q, &a_inv))?
                .trace();
            let r = fc
                .base_derive_matrix(q, a)
                .mul(&fc.base_derive_matrix(p, &a_inv))?
                .trace();
            out.push(("trace-symmetry", &l - &r));
        }
    }
    Ok(out)
}
