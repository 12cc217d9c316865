//! Sequential vs parallel throughput on batch workloads: derivation
//! replay, normalization, and oracle sweeps over a sequent grid.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spcalc::calculus::{check, Derivation, System};
use spcalc::corpus::{random_derivation, random_formula, random_tree_with_nodes, TreeShape};
use spcalc::formula::Formula;
use spcalc::normalize::normalize;
use spcalc::prover::{entails_kplus_batch, entails_kplus_batch_seq};

fn derivation_corpus(n: usize) -> Vec<Derivation> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..n)
        .map(|_| {
            let start = random_tree_with_nodes(&mut rng, &TreeShape::default(), 6);
            random_derivation(&mut rng, start, &System::RC, 6, 40)
        })
        .collect()
}

fn sequent_grid(n: usize) -> Vec<(Formula, Formula)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let shape = TreeShape::default();
    (0..n)
        .map(|_| {
            (
                random_formula(&mut rng, 3, &shape),
                random_formula(&mut rng, 3, &shape),
            )
        })
        .collect()
}

fn replay_all_seq(ds: &[Derivation]) -> usize {
    ds.iter()
        .filter(|d| check(d, &System::RC).is_ok())
        .count()
}

#[cfg(feature = "parallel")]
fn replay_all_par(ds: &[Derivation]) -> usize {
    use rayon::prelude::*;
    ds.par_iter()
        .filter(|d| check(d, &System::RC).is_ok())
        .count()
}

fn normalize_all_seq(ds: &[Derivation]) -> usize {
    ds.iter().filter(|d| normalize(d, &System::RC).is_ok()).count()
}

#[cfg(feature = "parallel")]
fn normalize_all_par(ds: &[Derivation]) -> usize {
    use rayon::prelude::*;
    ds.par_iter()
        .filter(|d| normalize(d, &System::RC).is_ok())
        .count()
}

fn bench_replay(c: &mut Criterion) {
    let corpus = derivation_corpus(512);
    let mut group = c.benchmark_group("replay_batch");
    group.bench_function("sequential", |b| {
        b.iter_batched(|| corpus.clone(), |ds| replay_all_seq(&ds), BatchSize::SmallInput)
    });
    #[cfg(feature = "parallel")]
    group.bench_function("rayon", |b| {
        b.iter_batched(|| corpus.clone(), |ds| replay_all_par(&ds), BatchSize::SmallInput)
    });
    group.finish();
}

fn bench_normalize(c: &mut Criterion) {
    let corpus = derivation_corpus(96);
    let mut group = c.benchmark_group("normalize_batch");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter_batched(|| corpus.clone(), |ds| normalize_all_seq(&ds), BatchSize::SmallInput)
    });
    #[cfg(feature = "parallel")]
    group.bench_function("rayon", |b| {
        b.iter_batched(|| corpus.clone(), |ds| normalize_all_par(&ds), BatchSize::SmallInput)
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let grid = sequent_grid(4096);
    let mut group = c.benchmark_group("oracle_grid");
    group.bench_function("sequential", |b| {
        b.iter(|| entails_kplus_batch_seq(&grid))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("rayon", |b| b.iter(|| entails_kplus_batch(&grid)));
    group.finish();
}

criterion_group!(benches, bench_replay, bench_normalize, bench_oracle);
criterion_main!(benches);
