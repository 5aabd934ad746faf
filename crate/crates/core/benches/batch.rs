//! Parallel against sequential batch evaluation on two workloads: the
//! transitivity check over every complex on four vertices, and
//! functoriality of subdivision over a batch of selection composites.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gensimplex::par;
use gensimplex::subdivision::{barycentric_map, generate_prefix, transitivity_step};
use gensimplex::{Complex, Face, SimplicialMap, VertexName};

/// Every complex on vertices `0..4`, one per closed set of faces.
fn complexes_on_four() -> Vec<Complex> {
    let faces: Vec<Face> =
        (1u32..16).filter(|m| m.count_ones() >= 2).map(|m| Face::atoms((0..4).filter(|i| m >> i & 1 == 1))).collect();
    let vertices: Vec<Face> = (0..4).map(|i| Face::atoms([i])).collect();
    let mut out = Vec::new();
    for pick in 0u32..1 << faces.len() {
        let chosen: Vec<Face> =
            faces.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, f)| f.clone()).collect();
        let c = Complex::closure_from_facets(vertices.iter().chain(&chosen).cloned());
        if c.len() == vertices.len() + chosen.len() {
            out.push(c);
        }
    }
    out
}

fn transitivity_batch(c: &Complex) -> bool {
    let edges: Vec<Face> = c.faces_of_dim(1).cloned().collect();
    edges.iter().all(|e| {
        let (a0, a1) = (&e.vertices()[0], &e.vertices()[1]);
        edges.iter().filter(|f| f.contains(a1)).all(|f| {
            let a2: &VertexName = f.vertices().iter().find(|v| *v != a1).unwrap();
            transitivity_step(c, a0, a1, a2).unwrap().verified
        })
    })
}

fn composites() -> Vec<(SimplicialMap, SimplicialMap)> {
    (0..32)
        .map(|seed| {
            let p = generate_prefix(&Complex::standard_simplex(2), 2, seed);
            (p.morphism(0).map().clone(), p.morphism(1).map().clone())
        })
        .collect()
}

fn functorial(pair: &(SimplicialMap, SimplicialMap)) -> bool {
    let (f, g) = pair;
    let lhs = barycentric_map(&f.compose(g).unwrap()).unwrap();
    let rhs = barycentric_map(f).unwrap().compose(&barycentric_map(g).unwrap()).unwrap();
    lhs.assignment() == rhs.assignment()
}

fn bench(c: &mut Criterion) {
    let all = complexes_on_four();
    let mut g = c.benchmark_group("transitivity");
    g.bench_function("parallel", |b| b.iter(|| par::all(black_box(&all), transitivity_batch)));
    g.bench_function("sequential", |b| b.iter(|| par::seq::all(black_box(&all), transitivity_batch)));
    g.finish();

    let pairs = composites();
    let mut g = c.benchmark_group("functoriality");
    g.sample_size(20);
    g.bench_function("parallel", |b| b.iter(|| par::map(black_box(&pairs), functorial)));
    g.bench_function("sequential", |b| b.iter(|| par::seq::map(black_box(&pairs), functorial)));
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
