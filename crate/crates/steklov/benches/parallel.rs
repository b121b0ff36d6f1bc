//! Parallel-vs-sequential benches for the two data-parallel cores: the
//! Schur complement's independent column solves and the per-mode sweep of
//! the full FEM spectrum. With the default `parallel` feature both arms
//! differ by the rayon dispatch; build with `--no-default-features` to
//! confirm the sequential fallback matches the `_seq` arm.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use steklov::fem;
use steklov::geometry::{make_profile, ProfileKind, ProfileParams};
use steklov::linalg::{schur_complement, schur_complement_seq, SparseSym, SparseSymBuilder};
use steklov::mesh::{generate_mesh, Mesh2D, MeshParams};

/// Banded SPD matrix shaped like a meridian stiffness matrix: n unknowns,
/// symmetric band of the given width, strictly diagonally dominant.
fn banded_spd(n: usize, band: usize) -> SparseSym {
    let mut builder = SparseSymBuilder::new(n);
    let off = -0.5 / band as f64;
    for i in 0..n {
        builder.add(i, i, 2.0 + 0.25 * (i % 7) as f64);
        for d in 1..=band.min(i) {
            builder.add(i, i - d, off);
        }
    }
    builder.build().expect("banded SPD build")
}

/// Every eighth node marked, mimicking a boundary share of a meridian mesh.
fn boundary_mask(n: usize) -> Vec<bool> {
    (0..n).map(|i| i % 8 == 0).collect()
}

fn annulus_mesh(h: f64) -> Mesh2D {
    let profile =
        make_profile(ProfileKind::Annulus, ProfileParams::annulus(0.5)).expect("profile");
    generate_mesh(&profile, &MeshParams::uniform(h)).expect("mesh")
}

fn bench_schur(c: &mut Criterion) {
    let a = banded_spd(1600, 40);
    let mask = boundary_mask(a.n());
    let mut group = c.benchmark_group("schur_complement");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| schur_complement(&a, &mask).expect("schur"))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| schur_complement_seq(&a, &mask).expect("schur"))
    });
    group.finish();
}

fn bench_full_spectrum(c: &mut Criterion) {
    let mesh = annulus_mesh(0.08);
    let mut group = c.benchmark_group("full_spectrum");
    group.sample_size(10);
    group.measurement_time(Duration::from_secs(8));
    group.bench_function("parallel", |b| {
        b.iter(|| fem::full_spectrum(&mesh, 3, 3).expect("spectrum"))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| fem::full_spectrum_seq(&mesh, 3, 3).expect("spectrum"))
    });
    group.finish();
}

criterion_group!(benches, bench_schur, bench_full_spectrum);
criterion_main!(benches);
