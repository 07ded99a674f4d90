use chiral_core::charts::{BundleSpec, ChartSystem};
use chiral_core::cocycles::*;
use chiral_core::kernel::parse_ratfunc;
use chiral_core::sample::{PoolConfig, Sampler};
use chiral_core::superalg::de_rham_d;
use chiral_core::*;

fn rf(s: &str, n: usize) -> RatFunc {
    parse_ratfunc(s, n).unwrap()
}

fn m(rows: &[&[&str]], n: usize) -> RatMatrix {
    RatMatrix::from_rows(n, rows.iter().map(|r| r.iter().map(|e| rf(e, n)).collect()).collect())
        .unwrap()
}

fn is_zero(m: &RatMatrix) -> bool {
    m.entries().iter().all(RatFunc::is_zero)
}

fn random_general(sys: &ChartSystem, rank: usize, seed: u64) -> BundleSpec {
    let cfg = PoolConfig {
        degree: 1,
        max_terms: 2,
        ..Default::default()
    };
    let mut s = Sampler::new(seed, Ambient::new(sys.dim(), 0), cfg);
    BundleSpec::general((0..sys.charts.len()).map(|_| s.invertible_matrix(rank)).collect())
}

fn three_space() -> ChartSystem {
    ChartSystem::from_text(
        "p3",
        &["x", "y", "z"],
        &[
            ("U0", &["x", "y", "z"]),
            ("U1", &["1/x", "y/x", "z/x"]),
            ("V", &["x", "y + x^2", "z + x*y"]),
            ("W", &["x + z", "y", "z"]),
        ],
    )
    .unwrap()
}

#[test]
fn identity_change_is_trivial() {
    let sys = ChartSystem::projective_plane();
    let frames = sys.frames(&random_general(&sys, 2, 3)).unwrap();
    let f = &frames[1];
    assert!(is_zero(&HMap::new(f, f).unwrap().h));
    assert!(b_of_change(f, f).unwrap().is_zero());
    assert!(a_of_triple(f, f, f).unwrap().is_zero());
}

#[test]
fn projective_line_values() {
    let sys = ChartSystem::projective_line();
    let t = sys.frames(&BundleSpec::tangent()).unwrap();
    let h = HMap::new(&t[0], &t[1]).unwrap();
    assert_eq!(h.h.get(0, 0), &rf("-4", 1));
    assert_eq!(h_natural_tangent(&t[0], &t[1]).unwrap(), h.h);
    assert!(b_of_change(&t[0], &t[1]).unwrap().is_zero());
    // x -> 1/x is an involution
    assert_eq!(HMap::new(&t[1], &t[0]).unwrap().h.get(0, 0), &rf("-4", 1));

    let c = sys.frames(&BundleSpec::cotangent()).unwrap();
    assert!(is_zero(&HMap::new(&c[0], &c[1]).unwrap().h));
    assert!(matches!(h_natural_tangent(&c[0], &c[1]), Err(Error::NonNatural(_))));
}

#[test]
fn h_satisfies_its_defining_condition() {
    let sys = ChartSystem::projective_plane();
    for bundle in [BundleSpec::tangent(), random_general(&sys, 2, 11)] {
        let fr = sys.frames(&bundle).unwrap();
        for (i, j) in [(0, 1), (1, 2), (3, 2)] {
            let hm = HMap::new(&fr[i], &fr[j]).unwrap();
            assert_eq!(hm.h, h_from_pairing(&fr[i], &fr[j]).unwrap());
            assert!(h_condition_residuals(&hm).unwrap().iter().all(SuperScalar::is_zero));
        }
    }
}

#[test]
fn odd_directions_and_symmetries() {
    let sys = three_space();
    let bundle = BundleSpec::general(vec![
        m(&[&["1", "x1"], &["x3", "1"]], 3),
        m(&[&["x3 + 1", "x1"], &["x2", "1"]], 3),
        m(&[&["1", "2*x2"], &["x1 + x3", "3"]], 3),
        m(&[&["1", "0"], &["0", "1"]], 3),
    ]);
    let fr = sys.frames(&bundle).unwrap();
    let hm = HMap::new(&fr[0], &fr[1]).unwrap();
    let amb = fr[0].ambient();
    for a in 0..amb.m {
        assert!(hm.apply(&fr[1].vector(amb.n + a).clone()).is_zero());
    }
    let b = b_of_change(&fr[0], &fr[1]).unwrap();
    assert!(!b.is_zero());
    assert!(b.is_purely_even());
    assert!(b.is_graded_skew());
    let a = a_of_triple(&fr[0], &fr[1], &fr[2]).unwrap();
    assert!(a.is_purely_even());
    for alpha in 0..amb.m {
        let psi = fr[2].vector(amb.n + alpha).clone();
        assert!(a.eval(&[psi]).unwrap().is_zero());
    }
}

#[test]
fn two_paths_agree_on_projective_plane() {
    let sys = ChartSystem::projective_plane();
    for bundle in [BundleSpec::tangent(), random_general(&sys, 2, 7)] {
        let fr = sys.frames(&bundle).unwrap();
        assert_eq!(
            b_definitional_table(&fr[0], &fr[1]).unwrap(),
            b_trace_table(&fr[0], &fr[1]).unwrap()
        );
        assert_eq!(
            a_definitional(&fr[0], &fr[1], &fr[2]).unwrap(),
            a_trace(&fr[0], &fr[1], &fr[2]).unwrap()
        );
    }
}

#[test]
fn natural_frames_vanish() {
    for sys in [ChartSystem::projective_line(), ChartSystem::projective_plane()] {
        for bundle in [BundleSpec::tangent(), BundleSpec::cotangent()] {
            let out = verify_cocycles(&sys, &bundle).unwrap();
            assert!(out.iter().any(|o| o.id == "cocycle.natural-frames"));
            for o in out {
                assert!(o.passed(), "{} {}: {o:?}", sys.name, bundle.name());
            }
        }
    }
}

#[test]
fn duality_on_projective_plane() {
    let sys = ChartSystem::projective_plane();
    let bundle = random_general(&sys, 2, 5);
    let fr = sys.frames(&bundle).unwrap();
    let du = sys.frames(&bundle.dual().unwrap()).unwrap();
    let a = a_of_triple(&fr[0], &fr[1], &fr[2]).unwrap();
    assert!(!a.is_zero());
    for o in dual_compare(
        &[fr[0].clone(), fr[1].clone(), fr[2].clone()],
        &[du[0].clone(), du[1].clone(), du[2].clone()],
    )
    .unwrap()
    {
        assert!(o.passed(), "{o:?}");
    }
    let fc = FrameChange::between(&fr[0], &fr[1]).unwrap();
    for r in transpose_trace_residuals(&fr[1], fc.a(), fc.g()).unwrap() {
        assert!(r.is_zero());
    }
}

#[test]
fn cech_relations_in_three_variables() {
    let sys = three_space();
    let bundle = BundleSpec::general(vec![
        m(&[&["1", "x1"], &["0", "1"]], 3),
        m(&[&["x3 + 1", "0"], &["x2", "1"]], 3),
        m(&[&["1", "2*x2"], &["x1", "3"]], 3),
        m(&[&["2", "0"], &["x2", "1"]], 3),
    ]);
    let fr = sys.frames(&bundle).unwrap();
    let out = cech_consistency(&fr).unwrap();
    assert_eq!(out.len(), 3);
    for o in &out {
        assert!(o.passed(), "{o:?}");
    }
    // d a is nonzero here, so the mixed relation is not vacuous
    let a = a_of_triple(&fr[0], &fr[1], &fr[2]).unwrap();
    assert!(!de_rham_d(&a).unwrap().is_zero());
}

#[test]
fn non_holonomic_frames_are_rejected() {
    let amb = Ambient::new(1, 1);
    let f0 = Frame::reference(amb);
    let g = m(&[&["x1 + 1"]], 1);
    let f1 = Frame::new("twisted", amb, g.clone(), g, false).unwrap();
    assert!(matches!(HMap::new(&f0, &f1), Err(Error::NonHolonomic)));
}
