use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use swd_core::datagen::{gen_corpus_with, GenConfig};
use swd_core::filter::FilterConfig;
use swd_core::ma::MaConfig;
use swd_core::model::Model;
use swd_core::par::Execution;
use swd_core::pipeline::{detect, extract_corpus, DetectConfig};
use swd_core::train::{train, TrainConfig};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn small_gen() -> GenConfig {
    GenConfig {
        n_per_class: 60,
        ..GenConfig::default()
    }
}

fn bench_gen(c: &mut Criterion) {
    let cfg = small_gen();
    let mut g = c.benchmark_group("gen_corpus");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| gen_corpus_with(&cfg, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_extract(c: &mut Criterion) {
    let corpus = gen_corpus_with(&small_gen(), Execution::default()).unwrap();
    let filter = FilterConfig::default();
    let mut g = c.benchmark_group("extract_corpus");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| extract_corpus(&corpus, MaConfig::default(), &filter, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_detect(c: &mut Criterion) {
    let corpus = gen_corpus_with(&small_gen(), Execution::default()).unwrap();
    let filter = FilterConfig::default();
    let records =
        extract_corpus(&corpus, MaConfig::default(), &filter, Execution::default()).unwrap();
    let post: Vec<_> = records.into_iter().map(|r| r.post).collect();
    let cfg = TrainConfig::default();
    let outcome = train(&post, &cfg).unwrap();
    let model = Model::from_outcome(&outcome, MaConfig::default(), filter, cfg);
    let det = DetectConfig {
        window_s: 2.0,
        hop_s: 1.0,
        threshold: 0.5,
    };
    let mut g = c.benchmark_group("detect");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| detect(&model, &corpus, &det, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_gen, bench_extract, bench_detect);
criterion_main!(benches);
