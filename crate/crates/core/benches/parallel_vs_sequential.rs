use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use toprec_core::airy_engine::{airy_recursion, kw_tensors};
use toprec_core::enumerative::transitive_factorizations;
use toprec_core::spectral_curve::CatalogCurve;
use toprec_core::tr_engine::CorrelatorStore;

type Workload = (&'static str, Box<dyn Fn() + Sync>);

fn single_thread() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()
}

fn bench_workloads(c: &mut Criterion) {
    let serial = single_thread();
    let mut group = c.benchmark_group("parallel_vs_sequential");
    group.sample_size(10);

    let workloads: Vec<Workload> = vec![
        ("tr_kappa_gen2_chi4", Box::new(|| {
            CorrelatorStore::build(CatalogCurve::KappaGen(2).build(), 4).unwrap();
        })),
        ("airy_recursion_kw_chi6", Box::new(|| {
            airy_recursion(&kw_tensors(), 6).unwrap();
        })),
        ("hurwitz_oracle_g1_d5", Box::new(|| {
            transitive_factorizations(1, &[2, 3]).unwrap();
        })),
    ];

    for (name, work) in &workloads {
        group.bench_with_input(BenchmarkId::new("rayon", name), name, |b, _| b.iter(work));
        group.bench_with_input(BenchmarkId::new("one_thread", name), name, |b, _| b.iter(|| serial.install(work)));
    }
    group.finish();
}

criterion_group!(benches, bench_workloads);
criterion_main!(benches);
