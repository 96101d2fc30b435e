use criterion::{criterion_group, criterion_main, Criterion};

use nikulin_core::families::{build_family, FamilySpec};
use nikulin_core::lattice::{discriminant_form, standard_lattice, IntLattice, LatticeKind};
use nikulin_core::surface::{classify_surface, quotient_surface};
use nikulin_core::theorem::{admissible_d_search, SearchConstraints};

fn classify(c: &mut Criterion) {
    let x3 = build_family(&FamilySpec::xd(3)).unwrap();
    let xp7 = build_family(&FamilySpec::x_prime(7)).unwrap();
    c.bench_function("classify X_3", |b| b.iter(|| classify_surface(&x3).unwrap()));
    c.bench_function("classify X'_7", |b| b.iter(|| classify_surface(&xp7).unwrap()));
    c.bench_function("quotient X_3", |b| b.iter(|| quotient_surface(&x3).unwrap()));
}

fn forms(c: &mut Criterion) {
    let m15 = standard_lattice(LatticeKind::Md(15)).unwrap();
    let e8 = standard_lattice(LatticeKind::E8).unwrap();
    let d16 = standard_lattice(LatticeKind::D(16)).unwrap();
    let both = IntLattice::direct_sum(&[&e8, &d16]);
    c.bench_function("discriminant form M_15", |b| b.iter(|| discriminant_form(&m15).unwrap()));
    c.bench_function("discriminant form E8 + D16", |b| b.iter(|| discriminant_form(&both).unwrap()));
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("admissible d", |b| b.iter(|| admissible_d_search(&SearchConstraints::default())));
    g.finish();
}

criterion_group!(benches, classify, forms, search);
criterion_main!(benches);
