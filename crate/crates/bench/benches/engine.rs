use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pq_census::atlas::{self, AtlasEntry, Family, RowParams};
use pq_census::census::{verify_tables, TablesOptions};
use pq_census::frobenius::{find_regular_frobenius, SearchBudget};
use pq_census::graphs::orbital_graphs;
use pq_census::nc::nc_enumerate;
use pq_census::structure::classify;
use pq_census::{build_chain, PermGroup, DEFAULT_SEED};

fn row(family: Family, q: u64) -> PermGroup {
    let params = RowParams {
        q: Some(q),
        ..RowParams::default()
    };
    let entry = AtlasEntry::from_params(family, params).unwrap();
    atlas::build(&entry, DEFAULT_SEED).unwrap().target
}

fn chains(c: &mut Criterion) {
    let a11 = row(Family::AqPairs, 11);
    let m23 = row(Family::M23Pairs, 23);
    c.bench_function("chain A_11 on 55", |b| b.iter(|| build_chain(black_box(&a11), 7)));
    c.bench_function("chain M_23 on 253", |b| b.iter(|| build_chain(black_box(&m23), 7)));
}

fn structure(c: &mut Criterion) {
    let m11 = row(Family::M11Pairs, 11);
    c.bench_function("classify M_11 on 55", |b| b.iter(|| classify(black_box(&m11))));
    c.bench_function("orbital graphs M_11 on 55", |b| {
        b.iter(|| orbital_graphs(black_box(&m11)).unwrap())
    });
}

fn nc(c: &mut Criterion) {
    c.bench_function("nc enumerate 10^6", |b| {
        b.iter(|| nc_enumerate(black_box(1_000_000)).unwrap())
    });
}

fn frobenius(c: &mut Criterion) {
    let a7 = row(Family::AqPairs, 7);
    let m11 = row(Family::M11Pairs, 11);
    c.bench_function("frobenius A_7 on 21", |b| {
        b.iter(|| find_regular_frobenius(&a7, 3, 7, DEFAULT_SEED).unwrap())
    });
    c.bench_function("frobenius M_11 on 55", |b| {
        b.iter(|| find_regular_frobenius(&m11, 5, 11, DEFAULT_SEED).unwrap())
    });
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("tables");
    group.sample_size(10);
    let opts = TablesOptions {
        max_degree: 60,
        seed: DEFAULT_SEED,
        budget: SearchBudget::default(),
    };
    group.bench_function("verify tables to 60", |b| b.iter(|| verify_tables(black_box(&opts))));
    group.finish();
}

criterion_group!(benches, chains, structure, nc, frobenius, tables);
criterion_main!(benches);
