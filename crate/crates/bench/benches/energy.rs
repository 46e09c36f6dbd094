use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpcvt::gradient::energy_and_gradient;
use lpcvt::optimize::initial_seeds;
use lpcvt::oracles::random_simplex;
use lpcvt::quadrature::simplex_energy;
use lpcvt::{build_rvd, evaluate, Domain, SimplexDim, TensorField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn simplex(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tet = random_simplex(&mut rng, SimplexDim::Tetrahedron);
    let mut g = c.benchmark_group("simplex");
    for p in [2u32, 4, 8] {
        g.bench_with_input(BenchmarkId::new("energy", p), &p, |b, &p| {
            b.iter(|| simplex_energy(black_box(&tet), p).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("energy_and_gradient", p), &p, |b, &p| {
            b.iter(|| energy_and_gradient(black_box(&tet), p).unwrap())
        });
    }
    g.finish();
}

fn diagram(c: &mut Criterion) {
    let domain = Domain::unit_cube();
    let field = TensorField::identity();
    let mut g = c.benchmark_group("diagram");
    g.sample_size(20);
    for k in [100usize, 1000] {
        let seeds = initial_seeds(&domain, k, 0).unwrap();
        g.bench_with_input(BenchmarkId::new("build_rvd", k), &seeds, |b, s| {
            b.iter(|| build_rvd(s, &domain, &field).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("evaluate_p4", k), &seeds, |b, s| {
            b.iter(|| evaluate(s, &domain, &field, 4).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, simplex, diagram);
criterion_main!(benches);
