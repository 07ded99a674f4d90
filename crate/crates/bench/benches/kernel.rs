use criterion::{black_box, criterion_group, criterion_main, Criterion};

use chiral_core::algebroid::{verify_axioms, Axiom, VertexAlgebroid};
use chiral_core::charts::{BundleSpec, ChartSystem};
use chiral_core::cocycles::{a_of_triple, b_of_change};
use chiral_core::genus::{genus_trace, local_contribution, pbw_count, FixedPointDatum, GenusInput};
use chiral_core::kernel::parse_ratfunc;
use chiral_core::sample::PoolConfig;
use chiral_core::Rational;

fn ratfunc(c: &mut Criterion) {
    let f = parse_ratfunc("(x1^2 + 3*x1*x2 - 1)/(x1 - x2 + 2)", 2).unwrap();
    let g = parse_ratfunc("(x2^3 - x1)/(x1*x2 + 1)", 2).unwrap();
    c.bench_function("ratfunc mul+add", |b| b.iter(|| black_box(&(&f * &g) + &f)));
    c.bench_function("ratfunc partial", |b| b.iter(|| black_box(f.partial(0).unwrap())));
}

fn axioms(c: &mut Criterion) {
    let frame = ChartSystem::projective_plane().frame(0, &BundleSpec::tangent()).unwrap();
    let alg = VertexAlgebroid::new(frame);
    c.bench_function("P2 axioms, 10 samples", |b| {
        b.iter(|| verify_axioms(&alg, 1, 10, PoolConfig::default(), &Axiom::ALL))
    });
}

fn cocycles(c: &mut Criterion) {
    let fr = ChartSystem::projective_plane().frames(&BundleSpec::tangent()).unwrap();
    let mut g = c.benchmark_group("cocycles");
    g.sample_size(10);
    g.bench_function("P2 b", |b| b.iter(|| b_of_change(&fr[0], &fr[1]).unwrap()));
    g.bench_function("P2 a", |b| b.iter(|| a_of_triple(&fr[0], &fr[1], &fr[2]).unwrap()));
    g.finish();
}

fn genus(c: &mut Criterion) {
    let two = Rational::from_integer(2.into());
    let three = Rational::from_integer(3.into());
    let fp = FixedPointDatum::new(vec![two, three]).unwrap();
    c.bench_function("local contribution d=2 q^8", |b| b.iter(|| local_contribution(&fp, 8).unwrap()));
    let p2 = GenusInput::builtin("p2", 6).unwrap().unwrap();
    c.bench_function("P2 genus q^6", |b| b.iter(|| genus_trace(&p2).unwrap()));
    c.bench_function("PBW d=2 weight 2", |b| b.iter(|| pbw_count(2, 2).unwrap()));
}

criterion_group!(benches, ratfunc, axioms, cocycles, genus);
criterion_main!(benches);
