use criterion::{black_box, criterion_group, criterion_main, Criterion};
use optwist::brace::{insert, t_oo, BraceTree};
use optwist::classical::{parse_ger, Ger};
use optwist::complexes::br_slice;
use optwist::hochschild::{brace_act, random_cochain, FiniteAlgebraData};
use optwist::twisting::Tw;
use optwist::Operad;
use rand::SeedableRng;
use std::collections::BTreeMap;

fn insertions(c: &mut Criterion) {
    let u = parse_ger("{a2,a3}a1{a4,a5}").unwrap();
    let w = parse_ger("{a1,a2}").unwrap();
    c.bench_function("ger insertion", |b| b.iter(|| Ger.compose_elem(black_box(&w), 1, black_box(&u))));
    let tp = BraceTree::parse("(root (L2 (L3 (L1) (L5) (L4)) (L6)))").unwrap();
    c.bench_function("bt insertion", |b| b.iter(|| insert(black_box(&tp), 2, &t_oo())));
}

fn twisting(c: &mut Criterion) {
    c.bench_function("tw ger differential, arity 2", |b| {
        b.iter(|| {
            let tw = Tw::new(Ger, 2);
            for x in tw.basis_elems(2).unwrap() {
                black_box(tw.diff_elem(&x));
            }
        })
    });
}

fn cohomology(c: &mut Criterion) {
    c.bench_function("H(Br(3))", |b| b.iter(|| br_slice(3, -3, 1).unwrap().cohomology_dims()));
}

fn hochschild(c: &mut Criterion) {
    let a = FiniteAlgebraData { degrees: vec![0, 1], m: BTreeMap::new() };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let ps = [
        random_cochain(&a, 2, 2, &mut rng),
        random_cochain(&a, 1, 1, &mut rng),
        random_cochain(&a, 3, 3, &mut rng),
        random_cochain(&a, 0, 1, &mut rng),
    ];
    let t = BraceTree::parse("(root (L3 (L1 (L2)) (L4)))").unwrap();
    c.bench_function("brace action, four cochains", |b| b.iter(|| brace_act(&a, black_box(&t), &ps).unwrap()));
}

criterion_group!(benches, insertions, twisting, cohomology, hochschild);
criterion_main!(benches);
