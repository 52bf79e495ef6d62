use std::hint::black_box;
use std::path::Path;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diagcat::cat::{preorder_from_covers, SetFunctor};
use diagcat::finset::{enumerate_nattrans_finset, parse_set};
use diagcat::formats::load_set_functor;
use diagcat::yoneda::{check_yoneda_roundtrips, Y0Instance};
use diagcat::EnumConfig;

/// A spawned thread switches the allocator off its single-threaded fast
/// path for good; do it up front so neither mode gets that advantage.
fn modes() -> [(&'static str, EnumConfig); 2] {
    let cfg = EnumConfig::default();
    std::thread::spawn(|| ()).join().unwrap();
    [
        ("sequential", cfg.sequential()),
        ("parallel", cfg.parallel()),
    ]
}

/// Natural endomorphisms of a constant functor on a four-element chain: one
/// survivor per first component, so the search does most of the work.
fn nat_search(c: &mut Criterion) {
    let chain = Arc::new(
        preorder_from_covers(
            (0..4).map(|i| i.to_string()),
            (0..3).map(|i| (i.to_string(), (i + 1).to_string())),
        )
        .unwrap(),
    );
    let f = Arc::new(SetFunctor::constant(
        chain,
        &parse_set("{a,b,c,d}").unwrap(),
    ));
    let mut group = c.benchmark_group("nattrans chain4 const4");
    for (name, cfg) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| {
                enumerate_nattrans_finset(black_box(&f), &f, cfg)
                    .unwrap()
                    .len()
            })
        });
    }
    group.finish();
}

fn yoneda_kite(c: &mut Criterion) {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let f = Arc::new(load_set_functor(&corpus.join("kite_F.fun")).unwrap());
    let a = parse_set("{p,q}").unwrap();
    let mut group = c.benchmark_group("yoneda round trips kite");
    for (name, cfg) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| {
                for x in ["1", "2", "3", "4", "5"] {
                    let inst = Y0Instance::new(Arc::clone(&f), a.clone(), x, cfg).unwrap();
                    black_box(check_yoneda_roundtrips(&inst, cfg).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, nat_search, yoneda_kite);
criterion_main!(benches);
