use chiral_core::charts::{BundleSpec, ChartSystem};
use chiral_core::envelope::*;
use chiral_core::kernel::parse_ratfunc;
use chiral_core::sample::{PoolConfig, Sampler};
use chiral_core::*;

fn rf(s: &str, n: usize) -> RatFunc {
    parse_ratfunc(s, n).unwrap()
}

fn cotangent(sys: &ChartSystem) -> Vec<Frame> {
    sys.frames(&BundleSpec::cotangent()).unwrap()
}

fn line_env() -> (Envelope, Ambient) {
    let f = cotangent(&ChartSystem::projective_line()).remove(0);
    let amb = f.ambient();
    (Envelope::new(f).unwrap(), amb)
}

fn scal(amb: Ambient, s: &str) -> SuperScalar {
    SuperScalar::from_rf(amb, rf(s, amb.n))
}

#[test]
fn omega_times_tau() {
    let (env, amb) = line_env();
    let x = scal(amb, "x1");
    let lhs = W1Element::covector(SuperCovector::omega(amb, 0).left_mul(&x));
    let tau = W1Element::vector(SuperVector::tau(amb, 0));
    let got = env.product_minus1(&lhs, &tau).unwrap();
    let mut want = W2Element::zero(amb);
    want.omega1[0] = W1Element::vector(SuperVector::tau(amb, 0).left_mul(&x));
    want.omega2[0] = -SuperScalar::one(amb);
    assert_eq!(got, want, "{got}");
    assert_eq!(got.weight().unwrap(), Some(2));
}

#[test]
fn function_times_psi_is_module_product() {
    let (env, amb) = line_env();
    let a = scal(amb, "x1^2 + 3");
    let psi = SuperVector::psi(amb, 0);
    let got = env
        .product_minus1(&W1Element::scalar(a.clone()), &W1Element::vector(psi.clone()))
        .unwrap();
    assert_eq!(got, W2Element::from_low(W1Element::vector(psi.left_mul(&a))));
}

#[test]
fn rho_times_psi() {
    let (env, amb) = line_env();
    let (f, g) = (scal(amb, "x1"), scal(amb, "x1 + 1"));
    let got = env
        .product_minus1(
            &W1Element::covector(SuperCovector::rho(amb, 0).left_mul(&f)),
            &W1Element::vector(SuperVector::psi(amb, 0).left_mul(&g)),
        )
        .unwrap();
    let mut want = W2Element::zero(amb);
    want.rho1[0] = SuperVector::psi(amb, 0).left_mul(&(&f * &g));
    assert_eq!(got, want);
}

#[test]
fn odd_omega_times_psi() {
    let (env, amb) = line_env();
    let (f, g) = (scal(amb, "x1"), scal(amb, "x1^2"));
    let phi = SuperScalar::phi(amb, 0);
    let got = env
        .product_minus1(
            &W1Element::covector(SuperCovector::omega(amb, 0).left_mul(&(&f * &phi))),
            &W1Element::vector(SuperVector::psi(amb, 0).left_mul(&g)),
        )
        .unwrap();
    let mut want = W2Element::zero(amb);
    want.omega1[0] = W1Element {
        scalar: SuperScalar::zero(amb),
        vector: SuperVector::psi(amb, 0).left_mul(&(&(&f * &g) * &phi)),
        covector: -&SuperCovector::differential(&g).left_mul(&f),
    };
    want.omega2[0] = &f * &g;
    assert_eq!(got, want, "{got}");
}

#[test]
fn unsupported_shapes_are_reported() {
    let (env, amb) = line_env();
    let tau = W1Element::vector(SuperVector::tau(amb, 0));
    assert!(matches!(env.product_minus1(&tau, &tau), Err(Error::UnsupportedShape(_))));
    let om = W1Element::covector(SuperCovector::omega(amb, 0));
    assert!(matches!(env.product_minus1(&om, &om), Err(Error::UnsupportedShape(_))));
}

#[test]
fn quadruple_in_its_own_frame() {
    let fr = cotangent(&ChartSystem::projective_plane());
    let sq = build_susy(&fr[1]).unwrap();
    assert_eq!(sq.q.weight().unwrap(), Some(1));
    assert_eq!(sq.j.fermionic_charge().unwrap(), Some(0));
    assert!(sq.l.low.is_zero() && sq.g.low.is_zero());
    assert!(sq.l.psi1.iter().all(SuperCovector::is_zero));
    assert_eq!(sq.l.fermionic_charge().unwrap(), Some(0));
    assert_eq!(sq.g.fermionic_charge().unwrap(), Some(-1));
    assert_eq!(sq.q.fermionic_charge().unwrap(), Some(1));
    let t = ChartSystem::projective_plane().frames(&BundleSpec::tangent()).unwrap();
    assert!(matches!(build_susy(&t[1]), Err(Error::NonNatural(_))));
}

#[test]
fn projective_line_transformation() {
    let fr = cotangent(&ChartSystem::projective_line());
    let amb = fr[0].ambient();
    let sq = build_susy(&fr[0]).unwrap();
    let (_, d) = transform_susy(&sq, &fr[0], &fr[1]).unwrap();
    let two_phi_over_x = &scal(amb, "2/x1") * &SuperScalar::phi(amb, 0);
    assert_eq!(d.q, W1Element::covector(SuperCovector::differential(&two_phi_over_x)));
    assert_eq!(
        d.j,
        W1Element::covector(SuperCovector::omega(amb, 0).left_mul(&scal(amb, "-2/x1")))
    );
    assert!(d.g.is_zero() && d.l.is_zero());
}

#[test]
fn transformation_laws_on_all_charts() {
    for sys in [ChartSystem::projective_line(), ChartSystem::projective_plane()] {
        let fr = cotangent(&sys);
        for from in &fr[..2] {
            let sq = build_susy(from).unwrap();
            for to in &fr {
                transform_susy(&sq, from, to).unwrap();
                for o in verify_susy(from, to).unwrap() {
                    assert!(o.passed(), "{} {} -> {}: {:?}", o.id, from.id(), to.id(), o.witness);
                }
            }
        }
    }
}

#[test]
fn transform_rejects_foreign_quadruple() {
    let fr = cotangent(&ChartSystem::projective_line());
    let sq = build_susy(&fr[1]).unwrap();
    assert!(matches!(transform_susy(&sq, &fr[0], &fr[1]), Err(Error::Invalid(_))));
}

#[test]
fn gradings_on_generators() {
    let p2 = cotangent(&ChartSystem::projective_plane());
    let p1 = cotangent(&ChartSystem::projective_line());
    for f in [&p1[0], &p1[1], &p2[0], &p2[3]] {
        let amb = f.ambient();
        let env = Envelope::new(f.clone()).unwrap();
        let phi0 = f.generator(0).clone();
        let fns = vec![
            scal(amb, "x1^2 + 1"),
            &scal(amb, "x1") * &phi0,
            &phi0 * f.generator(amb.m - 1),
        ];
        for o in verify_generator_gradings(&env, &fns).unwrap() {
            assert!(o.passed(), "{} in {}: {:?}", o.id, f.id(), o.witness);
        }
    }
}

#[test]
fn log_derivative_kills_weight_one() {
    let fr = cotangent(&ChartSystem::projective_line());
    let amb = fr[0].ambient();
    let env = Envelope::new(fr[0].clone()).unwrap();
    let mut s = Sampler::new(11, amb, PoolConfig::default());
    for a in ["x1", "x1^2", "1 + x1"] {
        let a = scal(amb, a);
        for _ in 0..20 {
            let z = W1Element {
                scalar: s.any_scalar(),
                vector: s.any_vector(),
                covector: s.any_covector(),
            };
            let r = log_derivative_action(&env, &a, &z).unwrap();
            assert!(r.is_zero(), "{a} on {z}: {r}");
        }
    }
}

#[test]
fn charge_matches_parity_on_monomials() {
    let amb = Ambient::new(2, 2);
    let mut s = Sampler::new(7, amb, PoolConfig::default());
    for _ in 0..100 {
        let mask = s.gen_range(0..4) as u32;
        let k = s.gen_range(0..amb.rank());
        let c = SuperScalar::monomial(amb, mask, s.polynomial());
        if c.is_zero() {
            continue;
        }
        let e = match s.gen_range(0..3) {
            0 => W1Element::scalar(c),
            1 => W1Element::vector(SuperVector::single(amb, k, c)),
            _ => W1Element::covector(SuperCovector::single(amb, k, c)),
        };
        let f = e.fermionic_charge().unwrap().unwrap();
        let p = e.parity().unwrap().unwrap();
        assert_eq!(f.rem_euclid(2) as u8, p, "{e}");
    }
}

#[test]
fn inhomogeneous_charge_is_an_error() {
    let amb = Ambient::new(1, 1);
    let e = W1Element::scalar(&SuperScalar::one(amb) + &SuperScalar::phi(amb, 0));
    assert!(matches!(e.fermionic_charge(), Err(Error::Inhomogeneous)));
}

#[test]
fn products_add_charges() {
    let (env, amb) = line_env();
    let mut s = Sampler::new(5, amb, PoolConfig::default());
    let phi = SuperScalar::phi(amb, 0);
    for _ in 0..20 {
        let (f, g) = (s.base(), s.base());
        let cases = [
            (
                W1Element::covector(SuperCovector::omega(amb, 0).left_mul(&f)),
                W1Element::vector(SuperVector::tau(amb, 0).left_mul(&g)),
            ),
            (
                W1Element::covector(SuperCovector::omega(amb, 0).left_mul(&f)),
                W1Element::vector(SuperVector::psi(amb, 0).left_mul(&(&g * &phi))),
            ),
            (
                W1Element::covector(SuperCovector::omega(amb, 0).left_mul(&(&f * &phi))),
                W1Element::vector(SuperVector::psi(amb, 0).left_mul(&g)),
            ),
            (
                W1Element::covector(SuperCovector::rho(amb, 0).left_mul(&f)),
                W1Element::vector(SuperVector::psi(amb, 0).left_mul(&g)),
            ),
            (
                W1Element::vector(SuperVector::psi(amb, 0).left_mul(&f)),
                W1Element::covector(SuperCovector::omega(amb, 0).left_mul(&g)),
            ),
        ];
        for (x, y) in cases {
            let p = env.product_minus1(&x, &y).unwrap();
            if p.is_zero() {
                continue;
            }
            let fx = x.fermionic_charge().unwrap().unwrap();
            let fy = y.fermionic_charge().unwrap().unwrap();
            assert_eq!(p.fermionic_charge().unwrap(), Some(fx + fy), "{x} * {y} = {p}");
            assert_eq!(p.weight().unwrap(), Some(2));
        }
    }
}
