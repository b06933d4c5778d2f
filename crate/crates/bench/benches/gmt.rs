use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use projperm::acceptance::{cubic_example, cubic_field};
use projperm::permpoly::{interpolate_univariate, verify_agw, verify_permutation, Domain};
use projperm::projective::enumerate_pg;
use projperm::{Basis, FieldCtx, FieldSpec, GmtContext, InverseRoute};

fn field_build(c: &mut Criterion) {
    let spec: FieldSpec = "p=3;auto;n=4".parse().unwrap();
    c.bench_function("build F_81 over F_3", |b| b.iter(|| spec.build().unwrap()));
    let spec: FieldSpec = "p=2;base=[1,1,0,1];n=3".parse().unwrap();
    c.bench_function("build F_512 over F_8", |b| b.iter(|| spec.build().unwrap()));
}

fn psi_roundtrip(c: &mut Criterion) {
    let ctx = Arc::new(FieldCtx::auto(3, 1, 4).unwrap());
    let w = Basis::powers(&ctx, ctx.generator()).unwrap();
    let gmt = GmtContext::new(ctx.clone(), w).unwrap();
    let points = enumerate_pg(&ctx);
    c.bench_function("psi over PG(3,3)", |b| {
        b.iter(|| points.iter().map(|p| gmt.psi(p)).collect::<Vec<_>>())
    });
    let images: Vec<_> = points.iter().map(|p| gmt.psi(p)).collect();
    for (name, route) in [("t-poly", InverseRoute::TPoly), ("trace", InverseRoute::Trace)] {
        c.bench_function(&format!("psi inverse via {name} over PG(3,3)"), |b| {
            b.iter(|| images.iter().map(|&x| gmt.psi_inverse(black_box(x), route)).collect::<Vec<_>>())
        });
    }
}

fn cubic_pipeline(c: &mut Criterion) {
    let ctx = cubic_field().unwrap();
    let omega = ctx.generator();
    c.bench_function("construct cubic example", |b| b.iter(|| cubic_example(&ctx, black_box(omega)).unwrap()));
    let perm = cubic_example(&ctx, omega).unwrap();
    c.bench_function("exhaustive permutation check on F_512", |b| {
        b.iter(|| verify_permutation(&ctx, |x| perm.eval(x)))
    });
    c.bench_function("multiplicative criterion on F_512", |b| b.iter(|| verify_agw(&perm)));
    c.bench_function("interpolate cubic example", |b| {
        b.iter(|| interpolate_univariate(&perm, Domain::Full).unwrap())
    });
}

criterion_group!(benches, field_build, psi_roundtrip, cubic_pipeline);
criterion_main!(benches);
