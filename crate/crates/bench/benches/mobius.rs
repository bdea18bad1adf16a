use std::hint::black_box;

use compmu_core::sweep::formula_sweep;
use compmu_core::{mobius_formula, mobius_recurrence, parse_word, HatPoset, Poset, Word};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn pairs(h: &HatPoset) -> Vec<(&'static str, Word, Word)> {
    [
        ("21113/2211133", "21113", "2211133"),
        ("21/3322", "21", "3322"),
        ("1/231312", "1", "231312"),
    ]
    .into_iter()
    .map(|(name, u, w)| (name, parse_word(u, h).unwrap(), parse_word(w, h).unwrap()))
    .collect()
}

fn formula_vs_recurrence(c: &mut Criterion) {
    let h = HatPoset::new(Poset::chain(3).unwrap());
    let mut group = c.benchmark_group("mobius");
    for (name, u, w) in pairs(&h) {
        group.bench_with_input(BenchmarkId::new("formula", name), &(&u, &w), |b, (u, w)| {
            b.iter(|| mobius_formula(black_box(u), black_box(w), &h).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("recurrence", name),
            &(&u, &w),
            |b, (u, w)| b.iter(|| mobius_recurrence(black_box(u), black_box(w), &h).unwrap()),
        );
    }
    group.finish();
}

fn oracle_sweep(c: &mut Criterion) {
    let h = HatPoset::new(Poset::chain(3).unwrap());
    let mut group = c.benchmark_group("formula_sweep");
    group.sample_size(10);
    for max_len in [3, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(max_len), &max_len, |b, &n| {
            b.iter(|| formula_sweep(&h, n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, formula_vs_recurrence, oracle_sweep);
criterion_main!(benches);
