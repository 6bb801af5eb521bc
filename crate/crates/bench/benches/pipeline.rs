use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use quadtrap::oracle::{sample, Grid};
use quadtrap::*;

fn spectral(c: &mut Criterion) {
    let h = random_trap_hamiltonian(3, 42);
    c.bench_function("ladder_system n=3", |b| {
        b.iter(|| ladder_system(black_box(&h)).unwrap())
    });

    let l = ladder_system(&h).unwrap();
    c.bench_function("covariance n=3", |b| b.iter(|| covariance(black_box(&l)).unwrap()));
    c.bench_function("extremal_state n=3", |b| {
        b.iter(|| extremal_state(black_box(&l)).unwrap())
    });
}

fn penning(c: &mut Criterion) {
    let p = PenningParams::from_delta(2.0, 0.5, 0.5).unwrap();
    c.bench_function("penning pipeline", |b| {
        b.iter(|| {
            let l = penning_ladder(black_box(&p)).unwrap();
            covariance(&l).unwrap()
        })
    });
    c.bench_function("uncertainty_surface 50x50", |b| {
        b.iter(|| uncertainty_surface(2.0, (0.05, 0.95), (-0.9, 0.9), black_box(50)).unwrap())
    });
}

fn wavefunction(c: &mut Criterion) {
    let l = ladder_system(&random_trap_hamiltonian(2, 7)).unwrap();
    let (d, g) = extremal_state(&l).unwrap();
    let s = displacement_vectors(&[Complex64::new(0.5, 0.2), Complex64::new(-0.1, 0.3)], &d);
    let grid = Grid::for_state(&g, &s.position_shift, 256).unwrap();
    c.bench_function("coherent wavefunction 256x256", |b| {
        b.iter(|| sample(|x| coherent_wavefunction(&g, &s, x), black_box(&grid)))
    });
}

criterion_group!(benches, spectral, penning, wavefunction);
criterion_main!(benches);
