use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zerosum::oracle::naive_length_set;
use zerosum::{length_set, named_invariant, AbelianGroup, GroupTable, Invariant, SearchConfig, Sequence};

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Sequential search against the rayon search at full width. Built without
/// the `parallel` feature both arms run sequentially.
fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.measurement_time(Duration::from_secs(10)).sample_size(10);
    let cases: [(&[u64], Invariant); 4] = [
        (&[2, 2, 2, 2, 2], Invariant::Eta),
        (&[3, 9], Invariant::Eta),
        (&[3, 9], Invariant::Egz),
        (&[5, 5], Invariant::Egz),
    ];
    for (factors, inv) in cases {
        let g = AbelianGroup::new(factors).unwrap();
        let id = format!("{}({g})", inv.name());
        for (label, cfg) in [
            ("sequential", SearchConfig::sequential()),
            ("parallel", SearchConfig::default().with_threads(threads())),
        ] {
            group.bench_with_input(BenchmarkId::new(label, &id), &g, |b, g| {
                b.iter(|| named_invariant(g, inv, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

/// Bitset dynamic program against subset enumeration.
fn length_sets(c: &mut Criterion) {
    let mut group = c.benchmark_group("length_set");
    let g = AbelianGroup::new(&[4, 4]).unwrap();
    let table = GroupTable::new(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for len in [8usize, 12, 16] {
        let s = Sequence::from_indices(&g, (0..len).map(|_| rng.gen_range(0..16u32))).unwrap();
        group.bench_with_input(BenchmarkId::new("dp", len), &s, |b, s| b.iter(|| length_set(&table, s).unwrap()));
        group.bench_with_input(BenchmarkId::new("naive", len), &s, |b, s| b.iter(|| naive_length_set(&table, s)));
    }
    group.finish();
}

criterion_group!(benches, search, length_sets);
criterion_main!(benches);
