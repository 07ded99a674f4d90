//! Gluing data between the algebroids of two or three frames: the maps `h`,
//! the three-form `b` and the two-form `a`, each computed from its definition
//! and from the trace formulas.

use crate::algebroid::{Frame, FrameChange, VertexAlgebroid};
use crate::charts::{BundleKind, BundleSpec, ChartSystem};
use crate::check::{named, Outcome};
use crate::error::{Error, Result};
use crate::kernel::{rational_from, RatFunc, RatMatrix, Rational};
use crate::superalg::{de_rham_d, Ambient, PolyForm, SuperCovector, SuperScalar, SuperVector};

fn lift(amb: Ambient, f: &RatFunc) -> SuperScalar {
    SuperScalar::from_rf(amb, f.clone())
}

fn half() -> Rational {
    rational_from(1, 2)
}

fn holonomic_change(from: &Frame, to: &Frame) -> Result<FrameChange> {
    let fc = FrameChange::between(from, to)?;
    if !fc.is_holonomic() {
        return Err(Error::NonHolonomic);
    }
    Ok(fc)
}

/// `M^{-1} τ_i(M)` for the even fields of `frame`.
fn log_derivative(frame: &Frame, i: usize, m: &RatMatrix) -> Result<RatMatrix> {
    m.invert()?.mul(&frame.derive_matrix(i, m))
}

/// `h = h_Ω - h_E` for the change `from → to`, with `h(τ'_i) = h^{ij} ω_j`.
#[derive(Clone, Debug)]
pub struct HMap {
    from: VertexAlgebroid,
    to: Frame,
    pub h: RatMatrix,
    pub h_omega: RatMatrix,
    pub h_e: RatMatrix,
}

impl HMap {
    /// Closed formulas for `h_Ω` and `h_E`.
    pub fn new(from: &Frame, to: &Frame) -> Result<Self> {
        let fc = holonomic_change(from, to)?;
        let n = from.ambient().n;
        let g = fc.g();
        let g_inv = g.invert()?;
        let a = fc.a();
        let a_inv = a.invert()?;
        let tau = |q: usize, f: &RatFunc| fc.base_derive(q, f);
        let gtr = fc.mixed_trace()?;
        let d_ainv_a: Vec<RatMatrix> = (0..n)
            .map(|q| fc.base_derive_matrix(q, &a_inv).mul(a))
            .collect::<Result<_>>()?;
        let mut h_omega = RatMatrix::zeros(n, n, n);
        let mut h_e = RatMatrix::zeros(n, n, n);
        for i in 0..n {
            for j in 0..n {
                let mut w = RatFunc::zero(n);
                for p in 0..n {
                    w = &w + &tau(p, &tau(j, g.get(i, p)));
                    for q in 0..n {
                        let t = &tau(q, g.get(i, p)) * &half_rf(n);
                        for r in 0..n {
                            w = &w + &(&(&t * &tau(p, g.get(r, q))) * g_inv.get(j, r));
                        }
                    }
                }
                h_omega.set(i, j, w);
                let mut e = tau(j, &gtr[i]);
                for q in 0..n {
                    if g.get(i, q).is_zero() {
                        continue;
                    }
                    let tr = d_ainv_a[j].mul(&d_ainv_a[q])?.trace();
                    e = &e + &(&(g.get(i, q) * &tr) * &half_rf(n));
                }
                h_e.set(i, j, e);
            }
        }
        Ok(HMap {
            from: VertexAlgebroid::new(from.clone()),
            to: to.clone(),
            h: h_omega.sub(&h_e)?,
            h_omega,
            h_e,
        })
    }

    pub fn from_frame(&self) -> &Frame {
        self.from.frame()
    }

    pub fn to_frame(&self) -> &Frame {
        &self.to
    }

    /// `h(τ'_i) = Σ_j h^{ij} ω_j`.
    pub fn on_basis(&self, i: usize) -> SuperCovector {
        let f = self.from.frame();
        let amb = f.ambient();
        (0..amb.n).fold(SuperCovector::zero(amb), |acc, j| {
            &acc + &f.covector(j).left_mul(&lift(amb, self.h.get(i, j)))
        })
    }

    /// `h(Σ y_k e'_k) = Σ (y_k h(e'_k) - γ(y_k, e'_k))`, with `γ` of the
    /// source algebroid; `h(ψ'_α) = 0`.
    pub fn apply(&self, x: &SuperVector) -> SuperCovector {
        let amb = self.to.ambient();
        let mut acc = SuperCovector::zero(amb);
        for (k, y) in self.to.vector_coords(x).into_iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            if k < amb.n {
                acc = &acc + &self.on_basis(k).left_mul(&y);
            }
            acc = &acc - &self.from.gamma(&y, self.to.vector(k));
        }
        acc
    }
}

fn half_rf(n: usize) -> RatFunc {
    RatFunc::constant(n, half())
}

/// `h^{ij}` from the defining condition `<x', h(y')> = -1/2 <x', y'>`,
/// with the pairing of the source algebroid.
pub fn h_from_pairing(from: &Frame, to: &Frame) -> Result<RatMatrix> {
    let fc = holonomic_change(from, to)?;
    let n = from.ambient().n;
    let alg = VertexAlgebroid::new(from.clone());
    let g_inv = fc.g().invert()?;
    let mut gram = RatMatrix::zeros(n, n, n);
    for k in 0..n {
        for i in 0..n {
            let p = alg.pair_vectors(to.vector(k), to.vector(i));
            let p = p
                .as_even_rf()
                .ok_or_else(|| Error::Consistency(format!("<τ'{k}, τ'{i}> is not a function")))?;
            gram.set(k, i, p);
        }
    }
    // h(τ'_i) = -1/2 Σ_k <τ'_k, τ'_i> ω'_k and ω'_k = g^{-1 jk} ω_j
    let mut h = RatMatrix::zeros(n, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = RatFunc::zero(n);
            for k in 0..n {
                acc = &acc + &(gram.get(k, i) * g_inv.get(j, k));
            }
            h.set(i, j, acc.scale(&-half()));
        }
    }
    Ok(h)
}

/// `h^{ij} = 2 τ_p τ_j(g^{ip})` for natural frames of the tangent bundle.
pub fn h_natural_tangent(from: &Frame, to: &Frame) -> Result<RatMatrix> {
    let fc = holonomic_change(from, to)?;
    if fc.a() != fc.g() {
        return Err(Error::NonNatural("odd matrix differs from the even one".into()));
    }
    let n = from.ambient().n;
    let g = fc.g();
    let mut h = RatMatrix::zeros(n, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = RatFunc::zero(n);
            for p in 0..n {
                acc = &acc + &fc.base_derive(p, &fc.base_derive(j, g.get(i, p)));
            }
            h.set(i, j, acc.scale(&rational_from(2, 1)));
        }
    }
    Ok(h)
}

/// Residuals of `<x', h(y')> + 1/2 <x', y'>` over primed basis pairs, with
/// `<x', y'>` from the closed primed-frame forms.
pub fn h_condition_residuals(hm: &HMap) -> Result<Vec<SuperScalar>> {
    let from = hm.from.frame();
    let to = &hm.to;
    let fc = holonomic_change(from, to)?;
    let amb = from.ambient();
    let n = amb.n;
    let primed = crate::algebroid::tables::PrimedForms::new(amb, &fc)?;
    let mut out = Vec::new();
    for k in 0..amb.rank() {
        for i in 0..amb.rank() {
            let pairing = if k < n && i < n {
                primed.pairing_tau_tau(k, i)?
            } else {
                SuperScalar::zero(amb)
            };
            let hv = if i < n {
                hm.on_basis(i)
            } else {
                SuperCovector::zero(amb)
            };
            let r = &to.vector(k).pair(&hv) + &pairing.scale(&half());
            out.push(r);
        }
    }
    Ok(out)
}

type PairTable = Vec<Vec<SuperCovector>>;

/// `b(τ'_i, τ'_j) = c(τ'_i, τ'_j) - τ'_i(h(τ'_j)) + τ'_j(h(τ'_i))`.
pub fn b_definitional_table(from: &Frame, to: &Frame) -> Result<PairTable> {
    let n = from.ambient().n;
    let alg = VertexAlgebroid::new(from.clone());
    let h = h_from_pairing(from, to)?;
    let amb = from.ambient();
    let hv: Vec<SuperCovector> = (0..n)
        .map(|i| {
            (0..n).fold(SuperCovector::zero(amb), |acc, j| {
                &acc + &from.covector(j).left_mul(&lift(amb, h.get(i, j)))
            })
        })
        .collect();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = alg.c(to.vector(i), to.vector(j));
                    let a = to.vector(i).act_on_covector(&hv[j]);
                    let b = to.vector(j).act_on_covector(&hv[i]);
                    &(&c - &a) + &b
                })
                .collect()
        })
        .collect())
}

/// `-1/2 tr{X_i X_j X_r - X_j X_i X_r} ω'_r` with `X_k = M^{-1} τ'_k(M)`.
fn cubic_trace_table(to: &Frame, m: &RatMatrix) -> Result<PairTable> {
    let amb = to.ambient();
    let n = amb.n;
    let xs: Vec<RatMatrix> = (0..n)
        .map(|k| log_derivative(to, k, m))
        .collect::<Result<_>>()?;
    let mut out = vec![vec![SuperCovector::zero(amb); n]; n];
    for i in 0..n {
        for j in 0..n {
            let xij = xs[i].mul(&xs[j])?.sub(&xs[j].mul(&xs[i])?)?;
            let mut acc = SuperCovector::zero(amb);
            for (r, xr) in xs.iter().enumerate() {
                let t = xij.mul(xr)?.trace().scale(&-half());
                acc = &acc + &to.covector(r).left_mul(&lift(amb, &t));
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// The `Ω` and `E` parts of `b` on primed basis pairs, by trace formulas.
pub fn b_trace_parts(from: &Frame, to: &Frame) -> Result<(PairTable, PairTable)> {
    let fc = holonomic_change(from, to)?;
    Ok((cubic_trace_table(to, fc.g())?, cubic_trace_table(to, fc.a())?))
}

pub fn b_trace_table(from: &Frame, to: &Frame) -> Result<PairTable> {
    let (bo, be) = b_trace_parts(from, to)?;
    Ok(bo
        .iter()
        .zip(&be)
        .map(|(ro, re)| ro.iter().zip(re).map(|(x, y)| x - y).collect())
        .collect())
}

/// Extend values on primed `τ'` pairs to the coordinate basis; `ψ'`
/// arguments give zero.
fn form_from_pairs(to: &Frame, table: &PairTable) -> Result<PolyForm> {
    let amb = to.ambient();
    let n = amb.n;
    let coords: Vec<Vec<SuperScalar>> = (0..amb.rank())
        .map(|k| to.vector_coords(&SuperVector::basis(amb, k)))
        .collect();
    PolyForm::from_basis_fn(amb, 3, |t| {
        let mut acc = SuperCovector::zero(amb);
        for k in 0..n {
            for l in 0..n {
                let c = &coords[t[0]][k] * &coords[t[1]][l];
                if !c.is_zero() {
                    acc = &acc + &table[k][l].left_mul(&c);
                }
            }
        }
        Ok(acc)
    })
}

fn compare_tables(what: &str, a: &PairTable, b: &PairTable) -> Result<()> {
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
            if x != y {
                return Err(Error::Consistency(format!(
                    "{what} at ({i}, {j}): definition gives {x}, trace formula gives {y}"
                )));
            }
        }
    }
    Ok(())
}

/// The three-form `b` of `from → to`, after checking that the definition
/// and the trace formulas agree.
pub fn b_of_change(from: &Frame, to: &Frame) -> Result<PolyForm> {
    let def = b_definitional_table(from, to)?;
    compare_tables("b", &def, &b_trace_table(from, to)?)?;
    form_from_pairs(to, &def)
}

/// `a = h_{01} + h_{12} - h_{02}` on the coordinate basis.
pub fn a_definitional(f0: &Frame, f1: &Frame, f2: &Frame) -> Result<PolyForm> {
    let h01 = HMap::new(f0, f1)?;
    let h12 = HMap::new(f1, f2)?;
    let h02 = HMap::new(f0, f2)?;
    let amb = f0.ambient();
    PolyForm::from_basis_fn(amb, 2, |t| {
        let x = SuperVector::basis(amb, t[0]);
        Ok(&(&h01.apply(&x) + &h12.apply(&x)) - &h02.apply(&x))
    })
}

/// `1/2 tr{M'^{-1} τ''_i(M') τ''_r(M) M^{-1} - (i ↔ r)} ω''_r`.
fn quadratic_trace_table(f2: &Frame, m: &RatMatrix, mp: &RatMatrix) -> Result<Vec<SuperCovector>> {
    let amb = f2.ambient();
    let n = amb.n;
    let left: Vec<RatMatrix> = (0..n)
        .map(|k| log_derivative(f2, k, mp))
        .collect::<Result<_>>()?;
    let m_inv = m.invert()?;
    let right: Vec<RatMatrix> = (0..n)
        .map(|k| f2.derive_matrix(k, m).mul(&m_inv))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = SuperCovector::zero(amb);
        for r in 0..n {
            let t = &left[i].mul(&right[r])?.trace() - &left[r].mul(&right[i])?.trace();
            acc = &acc + &f2.covector(r).left_mul(&lift(amb, &t.scale(&half())));
        }
        out.push(acc);
    }
    Ok(out)
}

/// The `Ω` and `E` parts of `a(τ''_i)` by trace formulas.
pub fn a_trace_parts(
    f0: &Frame,
    f1: &Frame,
    f2: &Frame,
) -> Result<(Vec<SuperCovector>, Vec<SuperCovector>)> {
    let c01 = holonomic_change(f0, f1)?;
    let c12 = holonomic_change(f1, f2)?;
    Ok((
        quadratic_trace_table(f2, c01.g(), c12.g())?,
        quadratic_trace_table(f2, c01.a(), c12.a())?,
    ))
}

pub fn a_trace(f0: &Frame, f1: &Frame, f2: &Frame) -> Result<PolyForm> {
    let (ao, ae) = a_trace_parts(f0, f1, f2)?;
    let vals: Vec<SuperCovector> = ao.iter().zip(&ae).map(|(x, y)| x - y).collect();
    form_from_singles(f2, &vals)
}

fn form_from_singles(f2: &Frame, vals: &[SuperCovector]) -> Result<PolyForm> {
    let amb = f2.ambient();
    PolyForm::from_basis_fn(amb, 2, |t| {
        let coords = f2.vector_coords(&SuperVector::basis(amb, t[0]));
        Ok(vals
            .iter()
            .zip(&coords)
            .fold(SuperCovector::zero(amb), |acc, (v, c)| &acc + &v.left_mul(c)))
    })
}

/// The two-form `a` of `f0 → f1 → f2`, after checking the definition
/// against the trace formulas.
pub fn a_of_triple(f0: &Frame, f1: &Frame, f2: &Frame) -> Result<PolyForm> {
    let def = a_definitional(f0, f1, f2)?;
    let tr = a_trace(f0, f1, f2)?;
    if def != tr {
        return Err(Error::Consistency(format!(
            "a: definition gives {def}, trace formula gives {tr}"
        )));
    }
    Ok(def)
}

/// Signs `(s_12, s_02, s_01)` with `d a_{012} = s_12 b_{12} + s_02 b_{02} + s_01 b_{01}`.
pub const MIXED_SIGNS: [i64; 3] = [-1, 1, -1];

fn signed_sum(terms: &[(i64, &PolyForm)], amb: Ambient, degree: usize) -> PolyForm {
    terms.iter().fold(PolyForm::zero(amb, degree), |acc, (s, f)| {
        if *s >= 0 {
            &acc + *f
        } else {
            &acc - *f
        }
    })
}

/// Closedness of `b`, the alternating sum of `a` over four frames, and the
/// mixed relation between `d a` and `b`.
pub fn cech_consistency(frames: &[Frame]) -> Result<Vec<Outcome>> {
    let k = frames.len();
    let amb = frames
        .first()
        .map(Frame::ambient)
        .ok_or_else(|| Error::Invalid("no frames".into()))?;
    let mut b = vec![vec![None; k]; k];
    let mut closed = Outcome::new("cocycle.b-closed", "d b = 0");
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let bij = b_of_change(&frames[i], &frames[j])?;
            let d = de_rham_d(&bij)?;
            closed.record_residual(&d, d.is_zero(), || {
                vec![
                    ("from".into(), frames[i].id().to_string()),
                    ("to".into(), frames[j].id().to_string()),
                ]
            });
            b[i][j] = Some(bij);
        }
    }
    let mut a: std::collections::BTreeMap<(usize, usize, usize), PolyForm> = Default::default();
    let mut get_a = |i: usize, j: usize, l: usize| -> Result<PolyForm> {
        if let Some(v) = a.get(&(i, j, l)) {
            return Ok(v.clone());
        }
        let v = a_of_triple(&frames[i], &frames[j], &frames[l])?;
        a.insert((i, j, l), v.clone());
        Ok(v)
    };
    let mut alternating = Outcome::new(
        "cocycle.a-alternating",
        "a_123 - a_124 + a_134 - a_234 = 0",
    );
    let mut mixed = Outcome::new("cocycle.a-b-mixed", "d a_012 = -b_12 + b_02 - b_01");
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let aijl = get_a(i, j, l)?;
                let da = de_rham_d(&aijl)?;
                let bs = [
                    b[j][l].as_ref().expect("pair computed"),
                    b[i][l].as_ref().expect("pair computed"),
                    b[i][j].as_ref().expect("pair computed"),
                ];
                let rhs = signed_sum(
                    &[(MIXED_SIGNS[0], bs[0]), (MIXED_SIGNS[1], bs[1]), (MIXED_SIGNS[2], bs[2])],
                    amb,
                    3,
                );
                let r = &da - &rhs;
                mixed.record_residual(&r, r.is_zero(), || {
                    vec![named("frames", &format!(
                        "{}, {}, {}",
                        frames[i].id(),
                        frames[j].id(),
                        frames[l].id()
                    ))]
                });
                for m in l + 1..k {
                    let terms = [
                        get_a(j, l, m)?,
                        get_a(i, l, m)?,
                        get_a(i, j, m)?,
                        get_a(i, j, l)?,
                    ];
                    let s = signed_sum(
                        &[(1, &terms[0]), (-1, &terms[1]), (1, &terms[2]), (-1, &terms[3])],
                        amb,
                        2,
                    );
                    alternating.record_residual(&s, s.is_zero(), || {
                        vec![named("frames", &format!("{i}{j}{l}{m}"))]
                    });
                }
            }
        }
    }
    Ok(vec![closed, alternating, mixed])
}

/// `(a, b)` for a bundle and its dual agree on a frame triple.
pub fn dual_compare(
    frames: &[Frame; 3],
    dual: &[Frame; 3],
) -> Result<Vec<Outcome>> {
    let mut a_out = Outcome::new("cocycle.dual-a", "a_{E*} = a_E");
    let a = a_of_triple(&frames[0], &frames[1], &frames[2])?;
    let ad = a_of_triple(&dual[0], &dual[1], &dual[2])?;
    let ra = &a - &ad;
    a_out.record_residual(&ra, ra.is_zero(), || vec![named("a_E", &a), named("a_E*", &ad)]);
    let mut b_out = Outcome::new("cocycle.dual-b", "b_{E*} = b_E");
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let b = b_of_change(&frames[i], &frames[j])?;
        let bd = b_of_change(&dual[i], &dual[j])?;
        let rb = &b - &bd;
        b_out.record_residual(&rb, rb.is_zero(), || vec![named("b_E", &b), named("b_E*", &bd)]);
    }
    Ok(vec![a_out, b_out])
}

/// `tr{A^t τ_i((A^t)^{-1}) τ_j((B^t)^{-1}) B^t} - tr{A^{-1} τ_i(A) τ_j(B) B^{-1}}`
/// and the companion cubic identity, for each pair of directions.
pub fn transpose_trace_residuals(
    frame: &Frame,
    a: &RatMatrix,
    b: &RatMatrix,
) -> Result<Vec<RatFunc>> {
    let n = frame.ambient().n;
    let at = a.transpose();
    let bt = b.transpose();
    let at_inv = at.invert()?;
    let bt_inv = bt.invert()?;
    let a_inv = a.invert()?;
    let b_inv = b.invert()?;
    let d = |k: usize, m: &RatMatrix| frame.derive_matrix(k, m);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let l = at.mul(&d(i, &at_inv))?.mul(&d(j, &bt_inv))?.mul(&bt)?.trace();
            let r = a_inv.mul(&d(i, a))?.mul(&d(j, b))?.mul(&b_inv)?.trace();
            out.push(&l - &r);
            for r_ in 0..n {
                let x = |k: usize| at.mul(&d(k, &at_inv));
                let y = |k: usize| a_inv.mul(&d(k, a));
                let l = x(i)?.mul(&x(j)?)?.mul(&x(r_)?)?.trace();
                let r = y(r_)?.mul(&y(j)?)?.mul(&y(i)?)?.trace();
                out.push(&l + &r);
            }
        }
    }
    Ok(out)
}

/// Every gluing check for a chart system with a bundle, as outcomes.
pub fn verify_cocycles(sys: &ChartSystem, bundle: &BundleSpec) -> Result<Vec<Outcome>> {
    let frames = sys.frames(bundle)?;
    let k = frames.len();
    let ids = |fs: &[usize]| -> Vec<(String, String)> {
        vec![named(
            "frames",
            &fs.iter().map(|&i| frames[i].id()).collect::<Vec<_>>().join(" -> "),
        )]
    };
    let mut h_paths = Outcome::new("cocycle.h-two-paths", "closed h = -1/2 pairing in the dual frame");
    let mut b_paths = Outcome::new("cocycle.b-two-paths", "b by definition = b by trace formula");
    let mut a_paths = Outcome::new("cocycle.a-two-paths", "a by definition = a by trace formula");
    let mut natural = Outcome::new("cocycle.natural-frames", natural_anchor(bundle));
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let hm = HMap::new(&frames[i], &frames[j])?;
            let hp = h_from_pairing(&frames[i], &frames[j])?;
            let r = hm.h.sub(&hp)?;
            h_paths.record_residual(&r, r.entries().iter().all(RatFunc::is_zero), || ids(&[i, j]));
            let def = b_definitional_table(&frames[i], &frames[j])?;
            let tr = b_trace_table(&frames[i], &frames[j])?;
            let ok = compare_tables("b", &def, &tr);
            b_paths.record(ok.is_ok(), || crate::check::Witness {
                inputs: ids(&[i, j]),
                residual: ok.err().map(|e| e.to_string()).unwrap_or_default(),
            });
            if let Some(expect) = natural_h(bundle, &frames[i], &frames[j])? {
                let r = hm.h.sub(&expect)?;
                natural.record_residual(&r, r.entries().iter().all(RatFunc::is_zero), || ids(&[i, j]));
                let b = form_from_pairs(&frames[j], &def)?;
                natural.record_residual(&b, b.is_zero(), || ids(&[i, j]));
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let def = a_definitional(&frames[i], &frames[j], &frames[l])?;
                let tr = a_trace(&frames[i], &frames[j], &frames[l])?;
                let r = &def - &tr;
                a_paths.record_residual(&r, r.is_zero(), || ids(&[i, j, l]));
                if matches!(bundle.kind, BundleKind::Tangent | BundleKind::Cotangent) {
                    natural.record_residual(&def, def.is_zero(), || ids(&[i, j, l]));
                }
            }
        }
    }
    let mut out = vec![h_paths, b_paths, a_paths];
    if matches!(bundle.kind, BundleKind::Tangent | BundleKind::Cotangent) {
        out.push(natural);
    }
    if out.iter().all(Outcome::passed) {
        out.extend(cech_consistency(&frames)?);
        if k >= 3 {
            let dual = sys.frames(&bundle.dual()?)?;
            out.extend(dual_compare(
                &[frames[0].clone(), frames[1].clone(), frames[2].clone()],
                &[dual[0].clone(), dual[1].clone(), dual[2].clone()],
            )?);
        }
    }
    let mut tr = Outcome::new("cocycle.transpose-traces", "trace identities under A -> (A^t)^{-1}");
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let fc = holonomic_change(&frames[i], &frames[j])?;
            let (a, b) = (fc.a(), fc.g());
            for r in transpose_trace_residuals(&frames[j], a, b)? {
                tr.record_residual(&r, r.is_zero(), || ids(&[i, j]));
            }
        }
    }
    out.push(tr);
    Ok(out)
}

fn natural_anchor(bundle: &BundleSpec) -> &'static str {
    match bundle.kind {
        BundleKind::Tangent => "h = 2 τ_p τ_j(g^{ip}), a = b = 0",
        _ => "h = 0, a = b = 0",
    }
}

fn natural_h(bundle: &BundleSpec, from: &Frame, to: &Frame) -> Result<Option<RatMatrix>> {
    let n = from.ambient().n;
    Ok(match bundle.kind {
        BundleKind::Tangent => Some(h_natural_tangent(from, to)?),
        BundleKind::Cotangent => Some(RatMatrix::zeros(n, n, n)),
        BundleKind::General(_) => None,
    })
}
