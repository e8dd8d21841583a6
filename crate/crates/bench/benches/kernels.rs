use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gravsig_bench::{toy_setup, two_level};
use gravsig_core::feasibility;
use gravsig_core::graviton::{self, DysonToy, GWPolarization, GwKind};
use gravsig_core::interferometry::split_operator::SplitOperator;
use gravsig_core::interferometry::{self, Branch, ForceProfile};
use gravsig_core::quasiatom::{self, OrbitalLabel};
use gravsig_core::trajectory::{self, TrajectoryFamilyParam};
use gravsig_core::units::Constants;

fn bench_trajectory(c: &mut Criterion) {
    let xi = TrajectoryFamilyParam::optimal();
    c.bench_function("s_functional", |b| {
        b.iter(|| trajectory::s_functional(black_box(&xi), 1e-12))
    });
    c.bench_function("brute_force_deg5_x8", |b| {
        b.iter(|| trajectory::brute_force_minimize(5, 8, black_box(1)))
    });
}

fn bench_interferometry(c: &mut Criterion) {
    let k = Constants::planck();
    let setup = toy_setup();
    c.bench_function("averaged_visibility", |b| {
        b.iter(|| interferometry::averaged_visibility(setup.m, setup.d, setup.sigma, setup.tau_a, setup.delta_t, &k))
    });
    let solver = SplitOperator {
        x_min: -20.0,
        x_max: 20.0,
        n: 1024,
        dt: 1e-3,
        hbar: 1.0,
        m: 1.0,
    };
    let profile = ForceProfile::ImpulsePair { tau_a: 1.0, d: 1.0 };
    let mut g = c.benchmark_group("split_operator");
    g.sample_size(10);
    g.bench_function("n1024_dt1e-3", |b| {
        b.iter(|| interferometry::split_operator::compare_with_analytic(&solver, &profile, Branch::Plus, 1.0))
    });
    g.finish();
}

fn bench_atomic(c: &mut Criterion) {
    let mut g = c.benchmark_group("matrix_elements");
    g.sample_size(10);
    g.bench_function("dipole_volume_1s_2p0", |b| {
        b.iter(|| {
            quasiatom::volume_matrix_element(OrbitalLabel::ONE_S, OrbitalLabel::TWO_P0, 1.0, |r, th, _| r * th.cos())
        })
    });
    let pol = GWPolarization::along_z(GwKind::Plus);
    let d = OrbitalLabel::new(3, 2, 2).unwrap();
    g.bench_function("quadrupole_quadrature_1s_3d2", |b| {
        b.iter(|| graviton::quadrupole_matrix_element(OrbitalLabel::ONE_S, d, &pol, 1.0))
    });
    g.bench_function("quadrupole_decomposed_1s_3d2", |b| {
        b.iter(|| graviton::quadrupole_matrix_element_decomposed(OrbitalLabel::ONE_S, d, &pol, 1.0))
    });
    g.finish();
}

fn bench_dyson(c: &mut Criterion) {
    let toy = DysonToy {
        t: 200.0,
        n_detunings: 201,
        ..DysonToy::default()
    };
    let mut g = c.benchmark_group("dyson");
    g.sample_size(10);
    g.bench_function("oracle_t200", |b| b.iter(|| graviton::dyson_oracle(black_box(&toy))));
    g.finish();
}

fn bench_feasibility(c: &mut Criterion) {
    let k = Constants::planck();
    let s = two_level();
    c.bench_function("check_ftl_chain", |b| b.iter(|| black_box(&s).check(&k)));
    let grid = feasibility::linspace(0.01, 1.0, 10_000).unwrap();
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("E0_1e4", |b| b.iter(|| feasibility::sweep(&s, "E0", &grid, &k)));
    g.finish();
}

criterion_group!(
    benches,
    bench_trajectory,
    bench_interferometry,
    bench_atomic,
    bench_dyson,
    bench_feasibility
);
criterion_main!(benches);
