use chevlab::building::BuildingOptions;
use chevlab::homology::integral_homology;
use chevlab::linalg::smith_normal_form;
use chevlab::{EnumerateOptions, GroupSpec, Rationals, RootSystem, TitsBuilding, WeylGroup};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn weyl(c: &mut Criterion) {
    let e6 = RootSystem::from_label("E", 6).unwrap();
    let mut g = c.benchmark_group("weyl");
    g.sample_size(10);
    g.bench_function("enumerate_E6", |b| {
        b.iter(|| WeylGroup::enumerate(black_box(&e6), &EnumerateOptions::default()).unwrap())
    });
    g.finish();
}

fn building(c: &mut Criterion) {
    let spec = GroupSpec::sl(4, 2).unwrap();
    let mut g = c.benchmark_group("building");
    g.sample_size(10);
    g.bench_function("build_SL4_F2", |b| {
        b.iter(|| TitsBuilding::build(black_box(spec), &BuildingOptions::default()).unwrap())
    });
    let built = TitsBuilding::build(spec, &BuildingOptions::default()).unwrap();
    g.bench_function("integral_homology_SL4_F2", |b| b.iter(|| integral_homology(black_box(built.complex()))));
    g.bench_function("steinberg_Q_SL4_F2", |b| b.iter(|| built.steinberg(black_box(&Rationals)).dimension));
    let top = built.complex().boundary_matrix(built.complex().dim());
    g.bench_function("snf_top_boundary_SL4_F2", |b| b.iter(|| smith_normal_form(black_box(&top))));
    g.finish();
}

criterion_group!(benches, weyl, building);
criterion_main!(benches);
