use chiral_core::genus::*;
use chiral_core::*;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn ri(n: i64) -> Rational {
    r(n, 1)
}

#[test]
fn character_examples() {
    let s = char_sym(&[ri(2)], &Weight::new(1, 0, 1), 4).unwrap();
    for k in 0..=4 {
        assert_eq!(s.coeff(0, k), ri(1 << k));
    }
    let e = char_ext(&[ri(2)], &Weight::new(1, 2, 1), 4);
    assert_eq!(e.table(), vec![(0, 0, ri(1)), (1, 2, ri(2))]);
    assert_eq!(char_ext(&[], &Weight::new(1, 2, 1), 4), UQSeries::one(4));
    assert!(matches!(
        char_sym(&[ri(2)], &Weight::new(1, 2, 0), 4),
        Err(Error::NonconvergentTruncation(_))
    ));
}

#[test]
fn theta_quotient_leading_term() {
    let t = theta_series(&ri(2), 3).unwrap().series;
    assert_eq!(t.level(0).iter().map(|(k, v)| (*k, v.clone())).collect::<Vec<_>>(), vec![(-1, ri(-1)), (1, ri(2))]);
    assert!(matches!(theta_series(&ri(1), 3), Err(Error::SimplicityViolation(_))));
    assert!(matches!(theta_series(&ri(0), 3), Err(Error::SimplicityViolation(_))));
}

#[test]
fn quotient_equals_plain_theta_ratio_at_fixed_u() {
    // θ(λ u0², q)/θ(λ, q) from the unnormalized product, at u0 = 3 and λ = 4 = 2²
    let n = 5;
    let theta = plain_theta(n);
    let at = |u: i64| {
        let v = theta.eval_u(&ri(u));
        let mut s = UQSeries::zero(n);
        for (k, c) in v.into_iter().enumerate() {
            s.add_coeff(0, k, c);
        }
        s
    };
    let ratio = &at(6) * &at(2).invert().unwrap();
    let q = theta_series(&ri(4), n).unwrap().series.eval_u(&ri(3));
    for k in 0..=n {
        assert_eq!(ratio.coeff(0, k), q[k], "q^{k}");
    }
}

#[test]
fn local_identity_through_q8() {
    let lambdas = [ri(2), ri(3), ri(5), r(1, 2), ri(-2)];
    for d in 1..=2 {
        for (i, l) in lambdas.iter().enumerate() {
            let mut eig = vec![l.clone()];
            if d == 2 {
                eig.push(lambdas[(i + 1) % lambdas.len()].clone());
            }
            let fp = FixedPointDatum::new(eig.clone()).unwrap();
            let local = local_contribution(&fp, 8).unwrap();
            let theta = ThetaQuotient::of_eigenvalues(&eig, 8).unwrap().series;
            assert_eq!(local, theta, "{eig:?}");
        }
    }
    let fp = FixedPointDatum::new(vec![ri(2)]).unwrap();
    let l = local_contribution(&fp, 0).unwrap();
    assert_eq!(l.table(), vec![(0, -1, ri(-1)), (0, 1, ri(2))]);
    assert_eq!(local_contribution(&FixedPointDatum::new(vec![]).unwrap(), 3).unwrap(), UQSeries::one(3));
}

#[test]
fn genus_at_y_one_counts_fixed_points() {
    for (name, count) in [("p1", 2), ("p2", 3)] {
        let input = GenusInput::builtin(name, 8).unwrap().unwrap();
        let t = genus_trace(&input).unwrap();
        let v = t.eval_u(&ri(1));
        assert_eq!(v[0], ri(count));
        assert!(v[1..].iter().all(|c| *c == ri(0)), "{name}: {v:?}");
    }
    let p2 = GenusInput::builtin("p2", 2).unwrap().unwrap();
    let eig: Vec<Vec<Rational>> = p2.points.iter().map(|p| p.eigenvalues().to_vec()).collect();
    assert_eq!(eig, vec![vec![ri(2), ri(3)], vec![r(1, 2), r(3, 2)], vec![r(1, 3), r(2, 3)]]);
}

#[test]
fn projective_line_is_sum_of_two_quotients() {
    let input = GenusInput::projective(&[ri(2)], 6).unwrap();
    let t = genus_trace(&input).unwrap();
    let want = &theta_series(&ri(2), 6).unwrap().series + &theta_series(&r(1, 2), 6).unwrap().series;
    assert_eq!(t, want);
    let t0 = genus_trace(&GenusInput::projective(&[ri(2)], 0).unwrap()).unwrap();
    assert_eq!(t0.order(), 0);
}

#[test]
fn degenerate_inputs_are_rejected() {
    assert!(matches!(FixedPointDatum::new(vec![ri(1)]), Err(Error::SimplicityViolation(_))));
    assert!(matches!(GenusInput::projective(&[ri(1)], 4), Err(Error::SimplicityViolation(_))));
    // equal weights give an eigenvalue 1 at another fixed point
    assert!(matches!(GenusInput::projective(&[ri(2), ri(2)], 4), Err(Error::SimplicityViolation(_))));
    assert!(GenusInput::new(vec![], 4).is_err());
}

#[test]
fn pbw_examples() {
    let t = pbw_count(1, 3).unwrap();
    assert_eq!(t.get(&(0, 0)), Some(&1));
    assert_eq!(t.get(&(0, 1)), Some(&1));
    let row1: Vec<_> = t.iter().filter(|((w, _), _)| *w == 1).map(|((_, c), k)| (*c, *k)).collect();
    assert_eq!(row1, vec![(-1, 1), (0, 3), (1, 3), (2, 1)]);
    assert_eq!(row1.iter().map(|(_, k)| k).sum::<u64>(), 8);
    assert!(pbw_count(3, 2).is_err());
    assert!(pbw_count(1, 5).is_err());
}

#[test]
fn pbw_counts_match_character() {
    for (d, cap) in [(1, 3), (1, 4), (2, 2), (2, 3)] {
        let counts = count_series(&pbw_count(d, cap).unwrap(), cap);
        assert_eq!(counts, pbw_character(d, cap).unwrap(), "d = {d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sym_times_ext_is_one(n in -6i64..6, d in 1i64..5, u in -2i64..3, q in 1usize..3) {
        prop_assume!(n != 0);
        let l = vec![r(n, d)];
        let s = char_sym(&l, &Weight::new(1, u, q), 6).unwrap();
        let e = char_ext(&l, &Weight::new(-1, u, q), 6);
        prop_assert_eq!(&s * &e, UQSeries::one(6));
    }

    #[test]
    fn quotient_is_one_at_u_one(n in -6i64..6, d in 1i64..5) {
        prop_assume!(n != 0 && n != d);
        let v = theta_series(&r(n, d), 5).unwrap().series.eval_u(&ri(1));
        prop_assert_eq!(v[0].clone(), ri(1));
        prop_assert!(v[1..].iter().all(|c| *c == ri(0)));
    }

    #[test]
    fn local_matches_theta(a in 2i64..7, b in 1i64..4, c in -5i64..5) {
        prop_assume!(c != 0 && c != 1);
        let eig = vec![r(a, b), ri(c)];
        prop_assume!(eig[0] != ri(1));
        let fp = FixedPointDatum::new(eig.clone()).unwrap();
        prop_assert_eq!(
            local_contribution(&fp, 4).unwrap(),
            ThetaQuotient::of_eigenvalues(&eig, 4).unwrap().series
        );
    }
}
