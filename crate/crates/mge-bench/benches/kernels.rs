//! Benchmarks for the hot kernels: morphism enumeration, canonical forms,
//! substitution colimits, and evaluation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use mge_core::{
    canonical_form, colimit_graph_of_graphs, corolla, enumerate_etale,
    enumerate_star_morphisms, evaluate, evaluate_species, genus_presentation, genus_species,
    line, wheel, GraphOfGraphs, Palette, Piece, XGraph,
};

fn bench_enumeration(c: &mut Criterion) {
    let src = line(3);
    let tgt = wheel(6);
    c.bench_function("etale line3 -> wheel6", |b| {
        b.iter(|| enumerate_etale(black_box(&src), black_box(&tgt), None).unwrap().len())
    });
    let w = wheel(6);
    let w2 = wheel(2);
    c.bench_function("etale wheel6 -> wheel2", |b| {
        b.iter(|| enumerate_etale(black_box(&w), black_box(&w2), None).unwrap().len())
    });
    let l4 = line(4);
    c.bench_function("star line4 -> wheel2", |b| {
        b.iter(|| {
            enumerate_star_morphisms(black_box(&l4), black_box(&w2), None)
                .unwrap()
                .len()
        })
    });
}

fn bench_canonical_form(c: &mut Criterion) {
    let g = wheel(8);
    let x = XGraph::new(g.clone(), vec![]).unwrap();
    c.bench_function("canonical form wheel8", |b| {
        b.iter(|| canonical_form(black_box(&x)))
    });
}

fn bench_colimit(c: &mut Criterion) {
    // substitute a 2-line into every vertex of a 4-wheel
    let base = wheel(4);
    let piece = line(2);
    let gog = GraphOfGraphs::new(
        base,
        (0..4)
            .map(|_| Piece {
                graph: piece.clone(),
                ports: vec![0, 5],
            })
            .collect(),
    )
    .unwrap();
    c.bench_function("colimit line2^4 over wheel4", |b| {
        b.iter(|| colimit_graph_of_graphs(black_box(&gog)).unwrap())
    });
}

fn bench_evaluation(c: &mut Criterion) {
    let s = genus_species(&Palette::monochrome(), 4, 6).unwrap();
    let p = genus_presentation(&s, 6, false).unwrap();
    let g = wheel(3);
    let x = XGraph::new(g.clone(), vec![]).unwrap();
    let st = evaluate_species(&s, &g, None)
        .unwrap()
        .into_iter()
        .find(|st| evaluate(&p, &x, st, None).is_ok())
        .unwrap();
    c.bench_function("evaluate wheel3 over genus", |b| {
        b.iter(|| evaluate(black_box(&p), black_box(&x), black_box(&st), None).unwrap())
    });
    let c3 = corolla(3);
    c.bench_function("structures on corolla3 over genus", |b| {
        b.iter(|| evaluate_species(black_box(&s), black_box(&c3), None).unwrap().len())
    });
}

criterion_group!(
    benches,
    bench_enumeration,
    bench_canonical_form,
    bench_colimit,
    bench_evaluation
);
criterion_main!(benches);
