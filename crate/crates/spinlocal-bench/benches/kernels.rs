use criterion::{black_box, criterion_group, criterion_main, Criterion};
use spinlocal_core::hecke::{composite_checks, Hecke};
use spinlocal_core::lattices::VertexSpace;
use spinlocal_core::spaces::split_quadratic;
use spinlocal_core::thetadef::{rep_number, short_vectors, GramTarget, ZLattice};
use spinlocal_core::weil::{fourier_full, s_table, SchwartzFn};

fn hecke(c: &mut Criterion) {
    let h = Hecke::new(5);
    let base = h.base();
    c.bench_function("t2 at q=5", |b| b.iter(|| h.t2(black_box(&base))));
    c.bench_function("theta_plus at q=5", |b| b.iter(|| h.theta_plus(black_box(&base))));
    let h3 = Hecke::new(3);
    let base3 = h3.base();
    c.bench_function("composite checks at q=3", |b| b.iter(|| composite_checks(&h3, black_box(&base3))));
    let vs = VertexSpace::new(5);
    c.bench_function("vertex lattice of a paramodular lattice", |b| {
        let p = h.theta_plus_list(&base)[0];
        b.iter(|| vs.vertex_lattice_of(black_box(&p)))
    });
}

fn weil(c: &mut Criterion) {
    c.bench_function("s-table at q=5", |b| b.iter(|| s_table(black_box(5), 1).unwrap()));
    let one = SchwartzFn::lattice_indicator(3, split_quadratic(1), 1).unwrap();
    c.bench_function("fourier of 1_L on a split 3-space", |b| b.iter(|| fourier_full(black_box(&one)).unwrap()));
}

fn theta(c: &mut Criterion) {
    let z5 = ZLattice::standard(5);
    c.bench_function("short vectors of Z^5 up to 6", |b| b.iter(|| short_vectors(black_box(&z5), 6)));
    let t = GramTarget::Two(2, 0, 2);
    c.bench_function("rep number of diag(2,2) by Z^5", |b| b.iter(|| rep_number(black_box(&z5), t)));
}

criterion_group!(benches, hecke, weil, theta);
criterion_main!(benches);
