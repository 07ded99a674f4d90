use chiral_core::algebroid::tables::{c_eval, gamma_eval, pairing_eval, PrimedForms};
use chiral_core::algebroid::{
    basis_element, change_frame, matrix_identities, trace_symmetry, verify_axioms, Axiom,
    BasisSymbol, Direction,
};
use chiral_core::kernel::{jacobian_of_map, parse_ratfunc};
use chiral_core::sample::{PoolConfig, Sampler};
use chiral_core::*;

fn rf(s: &str, n: usize) -> RatFunc {
    parse_ratfunc(s, n).unwrap()
}

fn lift(amb: Ambient, s: &str) -> SuperScalar {
    SuperScalar::from_rf(amb, rf(s, amb.n))
}

fn small() -> PoolConfig {
    PoolConfig {
        degree: 2,
        coeff_bound: 2,
        odd_width: 2,
        max_terms: 2,
    }
}

/// Chart `(x1, x2) -> (1/x1, x2/x1)` of the projective plane.
fn p2_change() -> RatMatrix {
    jacobian_of_map(&[rf("1/x1", 2), rf("x2/x1", 2)]).unwrap()
}

fn p2_frames(m: usize) -> Vec<Frame> {
    let amb = Ambient::new(2, m);
    let base = Frame::reference(amb);
    let g = p2_change();
    let mut out = vec![base.clone()];
    if m == 2 {
        let tangent = FrameChange::new(&base, g.clone(), g.clone(), true).unwrap();
        out.push(base.changed("tangent", &tangent).unwrap());
        let cot = g.invert().unwrap().transpose();
        let cotangent = FrameChange::new(&base, g.clone(), cot, true).unwrap();
        out.push(base.changed("cotangent", &cotangent).unwrap());
    }
    let a = RatMatrix::identity(2, m).map(|e| &(e * &rf("x1 + 1", 2)) + &RatFunc::zero(2));
    let mixed = FrameChange::new(&base, g, a, true).unwrap();
    out.push(base.changed("scaled", &mixed).unwrap());
    out
}

#[test]
fn spec_examples_from_tables() {
    let amb = Ambient::new(1, 1);
    let x = lift(amb, "x1");
    let tau = SuperVector::tau(amb, 0);
    let v = AlgebroidElement::vector;
    assert_eq!(
        gamma_eval(&x, &tau.left_mul(&x)).unwrap(),
        SuperCovector::omega(amb, 0).scale(&Rational::from_integer((-2).into()))
    );
    let b = lift(amb, "x1^2 + 3");
    let a = lift(amb, "x1 - 5");
    assert!(gamma_eval(&a, &SuperVector::psi(amb, 0).left_mul(&b)).unwrap().is_zero());
    assert_eq!(
        pairing_eval(&v(tau.left_mul(&x)), &v(tau.left_mul(&x))).unwrap(),
        SuperScalar::from_int(amb, -1)
    );
    let pp = SuperVector::psi(amb, 0).left_mul(&SuperScalar::phi(amb, 0));
    assert_eq!(
        c_eval(&v(pp.left_mul(&x)), &v(pp.clone())).unwrap(),
        SuperCovector::omega(amb, 0).scale(&-Rational::new(1.into(), 2.into()))
    );
    assert!(c_eval(&v(tau.left_mul(&x)), &v(tau.left_mul(&x))).unwrap().is_zero());
    assert!(c_eval(&v(tau.left_mul(&a)), &v(SuperVector::psi(amb, 0).left_mul(&b)))
        .unwrap()
        .is_zero());

    let amb = Ambient::new(2, 2);
    let a = lift(amb, "x1*x2 + 1");
    let p12 = SuperVector::psi(amb, 1).left_mul(&SuperScalar::phi(amb, 0));
    let p21 = SuperVector::psi(amb, 0).left_mul(&SuperScalar::phi(amb, 1));
    assert_eq!(pairing_eval(&v(p12.left_mul(&a)), &v(p21)).unwrap(), a);
    let x1phi = SuperScalar::phi(amb, 0).mul_rf(&rf("x1", 2));
    assert_eq!(
        gamma_eval(&x1phi, &SuperVector::psi(amb, 0).left_mul(&lift(amb, "x2"))).unwrap(),
        SuperCovector::omega(amb, 1).left_mul(&lift(amb, "x1"))
    );
    let w = AlgebroidElement::covector;
    assert!(pairing_eval(&w(SuperCovector::omega(amb, 0)), &w(SuperCovector::rho(amb, 1)))
        .unwrap()
        .is_zero());
}

#[test]
fn structure_matches_tables_in_coordinate_frame() {
    for (n, m) in [(1, 1), (2, 2), (1, 2)] {
        let amb = Ambient::new(n, m);
        let alg = VertexAlgebroid::new(Frame::reference(amb));
        let mut s = Sampler::new(11, amb, PoolConfig { odd_width: 1, ..small() });
        // table shapes: base-ring or single-φ scalars, τ / φψ / ψ vectors
        let draw_vec = |s: &mut Sampler| {
            let k = s.gen_range(0..3);
            let b = SuperScalar::from_rf(amb, s.polynomial());
            match k {
                0 => SuperVector::tau(amb, s.gen_range(0..n)).left_mul(&b),
                1 => SuperVector::psi(amb, s.gen_range(0..m))
                    .left_mul(&SuperScalar::phi(amb, s.gen_range(0..m)))
                    .left_mul(&b),
                _ => SuperVector::psi(amb, s.gen_range(0..m)).left_mul(&b),
            }
        };
        for _ in 0..40 {
            let a = if s.gen_range(0..2) == 0 {
                SuperScalar::from_rf(amb, s.polynomial())
            } else {
                SuperScalar::phi(amb, s.gen_range(0..m)).mul_rf(&s.polynomial())
            };
            let x = &draw_vec(&mut s) + &draw_vec(&mut s);
            let y = draw_vec(&mut s);
            assert_eq!(alg.gamma(&a, &y), gamma_eval(&a, &y).unwrap(), "γ({a}, {y})");
            let (ex, ey) = (AlgebroidElement::vector(x.clone()), AlgebroidElement::vector(y.clone()));
            assert_eq!(alg.pairing(&ex, &ey), pairing_eval(&ex, &ey).unwrap(), "<{x}, {y}>");
            assert_eq!(alg.c(&x, &y), c_eval(&ex, &ey).unwrap(), "c({x}, {y})");
        }
    }
}

#[test]
fn shapes_outside_tables_are_rejected() {
    let amb = Ambient::new(1, 2);
    let two_phi = SuperScalar::phi(amb, 0).checked_mul(&SuperScalar::phi(amb, 1)).unwrap();
    let y = SuperVector::tau(amb, 0).left_mul(&two_phi);
    let a = SuperScalar::one(amb);
    assert!(matches!(gamma_eval(&a, &y), Err(Error::UnsupportedShape(_))));
}

#[test]
fn axioms_hold_on_projective_plane_frames() {
    for frame in p2_frames(2) {
        let alg = VertexAlgebroid::new(frame.clone());
        for o in verify_axioms(&alg, 7, 12, small(), &Axiom::ALL) {
            assert!(o.passed(), "{} on frame {}: {:?}", o.id, frame.id(), o.witness);
            assert_eq!(o.samples, 12);
        }
    }
}

#[test]
fn axioms_hold_with_one_odd_direction() {
    for frame in p2_frames(1) {
        let alg = VertexAlgebroid::new(frame.clone());
        for o in verify_axioms(&alg, 3, 10, small(), &Axiom::ALL) {
            assert!(o.passed(), "{} on frame {}: {:?}", o.id, frame.id(), o.witness);
        }
    }
}

#[test]
fn corrupted_c_is_caught_with_witness() {
    let amb = Ambient::new(2, 2);
    let alg = VertexAlgebroid::with_corrupted_c(Frame::reference(amb), lift(amb, "x1*x2"));
    let out = verify_axioms(&alg, 5, 20, small(), &[Axiom::CDifferential]);
    assert!(!out[0].passed());
    let w = out[0].witness.as_ref().expect("witness");
    assert_eq!(w.inputs.len(), 3);
    assert_ne!(w.residual, "0");
}

#[test]
fn jacobian_identities_vanish() {
    let base = Frame::reference(Ambient::new(2, 2));
    let g = p2_change();
    for a in [g.clone(), RatMatrix::identity(2, 2), g.invert().unwrap().transpose()] {
        let fc = FrameChange::new(&base, g.clone(), a, true).unwrap();
        for (name, r) in matrix_identities(&fc).unwrap() {
            assert!(r.is_zero(), "{name}: {r}");
        }
    }
    let flagged = FrameChange::new(&base, g.clone(), g.clone(), false).unwrap();
    assert!(matches!(matrix_identities(&flagged), Err(Error::NonHolonomic)));
    // the trace identity needs no holonomy
    let arbitrary = RatMatrix::from_rows(
        2,
        vec![vec![rf("x1", 2), rf("x2^2", 2)], vec![rf("1", 2), rf("x1 + x2", 2)]],
    )
    .unwrap();
    let fc = FrameChange::new(&base, arbitrary.clone(), arbitrary, false).unwrap();
    for (name, r) in trace_symmetry(&fc).unwrap() {
        assert!(r.is_zero(), "{name}: {r}");
    }
}

#[test]
fn projective_line_tangent_frame() {
    let amb = Ambient::new(1, 1);
    let base = Frame::reference(amb);
    let g = jacobian_of_map(&[rf("1/x1", 1)]).unwrap();
    assert_eq!(g.get(0, 0), &rf("-x1^2", 1));
    let fc = FrameChange::new(&base, g.clone(), g, true).unwrap();
    let t = change_frame(&base, &fc, BasisSymbol::Tau(0), Direction::Forward).unwrap();
    let expect = &SuperVector::tau(amb, 0).left_mul(&lift(amb, "-x1^2"))
        + &SuperVector::psi(amb, 0).left_mul(&SuperScalar::phi(amb, 0).mul_rf(&rf("2*x1", 1)));
    assert_eq!(t.v, expect);
    assert!(t.w.is_zero());
}

#[test]
fn identity_change_is_trivial() {
    let amb = Ambient::new(2, 2);
    let base = Frame::reference(amb);
    let fc = FrameChange::new(&base, RatMatrix::identity(2, 2), RatMatrix::identity(2, 2), true)
        .unwrap();
    for sym in [BasisSymbol::Tau(1), BasisSymbol::Psi(0), BasisSymbol::Omega(0), BasisSymbol::Rho(1)] {
        for dir in [Direction::Forward, Direction::Inverse] {
            assert_eq!(change_frame(&base, &fc, sym, dir).unwrap(), basis_element(&base, sym));
        }
    }
}

#[test]
fn change_round_trip() {
    for base in p2_frames(2) {
        for target in p2_frames(2) {
            let fc = FrameChange::between(&base, &target).unwrap();
            let primed = base.changed("primed", &fc).unwrap();
            assert_eq!(primed, target);
            for k in 0..2 {
                for sym in [BasisSymbol::Tau(k), BasisSymbol::Psi(k), BasisSymbol::Omega(k), BasisSymbol::Rho(k)] {
                    let fwd = change_frame(&base, &fc, sym, Direction::Forward).unwrap();
                    assert_eq!(fwd, basis_element(&primed, sym), "{sym:?} forward");
                    let inv = change_frame(&base, &fc, sym, Direction::Inverse).unwrap();
                    assert_eq!(inv, basis_element(&base, sym), "{sym:?} inverse");
                }
            }
        }
    }
}

#[test]
fn dual_bases_are_dual() {
    for frame in p2_frames(2) {
        let amb = frame.ambient();
        for k in 0..amb.rank() {
            for l in 0..amb.rank() {
                let p = frame.vector(k).pair(frame.covector(l));
                let want = if k == l { SuperScalar::one(amb) } else { SuperScalar::zero(amb) };
                assert_eq!(p, want, "frame {} ({k}, {l})", frame.id());
            }
        }
    }
}

#[test]
fn primed_closed_forms_match_structure() {
    let amb = Ambient::new(2, 2);
    let base = Frame::reference(amb);
    let alg = VertexAlgebroid::new(base.clone());
    let g = p2_change();
    let odd_choices = [g.clone(), g.invert().unwrap().transpose(), RatMatrix::identity(2, 2)];
    for a in odd_choices {
        let fc = FrameChange::new(&base, g.clone(), a, true).unwrap();
        let primed = base.changed("p", &fc).unwrap();
        let forms = PrimedForms::new(amb, &fc).unwrap();
        let f = rf("x1^2 + x2", 2);
        let fs = SuperScalar::from_rf(amb, f.clone());
        for i in 0..2 {
            assert_eq!(alg.gamma(&fs, primed.vector(i)), forms.gamma_tau(&f, i));
            for alpha in 0..2 {
                let ph = primed.generator(i).mul_rf(&f);
                assert_eq!(
                    alg.gamma(&ph, primed.vector(2 + alpha)),
                    forms.gamma_phi_psi(&f, i, alpha).unwrap()
                );
                assert!(alg.pair_vectors(primed.vector(i), primed.vector(2 + alpha)).is_zero());
                assert!(alg.pair_vectors(primed.vector(2 + i), primed.vector(2 + alpha)).is_zero());
                assert!(alg.c(primed.vector(i), primed.vector(2 + alpha)).is_zero());
                assert!(alg.c(primed.vector(2 + i), primed.vector(2 + alpha)).is_zero());
            }
            for j in 0..2 {
                assert_eq!(
                    alg.pair_vectors(primed.vector(i), primed.vector(j)),
                    forms.pairing_tau_tau(i, j).unwrap(),
                    "<τ'{i}, τ'{j}>"
                );
                assert_eq!(alg.c(primed.vector(i), primed.vector(j)), forms.c_tau_tau(i, j), "c(τ'{i}, τ'{j})");
            }
        }
    }
}
