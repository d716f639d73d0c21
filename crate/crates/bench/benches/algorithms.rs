use std::collections::BTreeSet;
use std::hint::black_box;

use ahaut_core::curves::{mobius_stabilizer, CurveModel, CurvePoint, P1Point};
use ahaut_core::datum::{validate_datum, RawCoefficient, RawDatum};
use ahaut_core::galois::{brute_force_h1, cohomology, smith_normal_form, IntMatrix, InvolutionLattice};
use ahaut_core::lifting::lift_group;
use ahaut_core::polyhedra::RationalVector;
use ahaut_core::{Cone, EllipticCurve};
use criterion::{criterion_group, criterion_main, Criterion};

fn snf(c: &mut Criterion) {
    let m = IntMatrix::from_rows(&[
        vec![2, 4, 4, 1, 0, 3],
        vec![-6, 6, 12, 0, 2, 1],
        vec![10, -4, -16, 5, 1, 0],
        vec![1, 1, 1, 1, 1, 1],
        vec![0, 3, -2, 7, 1, 4],
        vec![5, 0, 1, -3, 2, 2],
    ])
    .unwrap();
    c.bench_function("smith_normal_form 6x6", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn h1(c: &mut Criterion) {
    let sigma = IntMatrix::from_rows(&[
        vec![1, 0, 0, 0, 0],
        vec![0, -1, 0, 0, 0],
        vec![0, 0, -1, 0, 0],
        vec![0, 0, 0, 0, 1],
        vec![0, 0, 0, 1, 0],
    ])
    .unwrap();
    let l = InvolutionLattice::new(sigma).unwrap();
    c.bench_function("cohomology rank 5", |b| b.iter(|| cohomology(black_box(&l)).unwrap()));
    c.bench_function("brute_force_h1 rank 5 bound 3", |b| b.iter(|| brute_force_h1(black_box(&l), 3).unwrap()));
}

fn lifting(c: &mut Criterion) {
    let line = |s: &str| CurvePoint::Line(s.parse::<P1Point>().unwrap());
    let raw = RawDatum {
        torus_rank: 2,
        tail_rays: vec![vec![1, 0], vec![0, 1]],
        curve: CurveModel::P1,
        coefficients: vec![
            RawCoefficient { point: line("0"), vertices: vec![RationalVector::from_ints(&[0, 1]), RationalVector::from_ints(&[1, 0])], rays: None },
            RawCoefficient { point: line("1"), vertices: vec![RationalVector::from_ints(&[1, 2]), RationalVector::from_ints(&[2, 1])], rays: None },
            RawCoefficient { point: line("inf"), vertices: vec![RationalVector::from_ints(&[-1, 0]), RationalVector::from_ints(&[0, -1])], rays: None },
        ],
    };
    let d = validate_datum(&raw).unwrap();
    c.bench_function("lift_group three rigid points", |b| b.iter(|| lift_group(black_box(&d)).unwrap()));

    let punctured = ahaut_core::AHDatum::trivial(Cone::zero(1), CurveModel::p1_minus(["0", "inf"].map(|s| s.parse().unwrap())).unwrap());
    c.bench_function("lift_group torus family", |b| b.iter(|| lift_group(black_box(&punctured)).unwrap()));

    let six: BTreeSet<P1Point> = ["0", "1", "-1", "2", "1/2", "inf"].iter().map(|s| s.parse().unwrap()).collect();
    c.bench_function("mobius_stabilizer six points", |b| b.iter(|| mobius_stabilizer(black_box(&six))));
}

fn torsion(c: &mut Criterion) {
    for (a, b) in [(-1, 0), (0, 1), (-43, 166)] {
        let e = EllipticCurve::from_ints(a, b).unwrap();
        c.bench_function(&format!("torsion_points y^2 = x^3 + {a}x + {b}"), |bch| bch.iter(|| black_box(&e).torsion_points().unwrap()));
    }
}

criterion_group!(benches, snf, h1, lifting, torsion);
criterion_main!(benches);
