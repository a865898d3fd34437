//! Sequential vs parallel execution of the batch sweeps.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mathworld::assessment::{build_report_with, AssessmentInput, GroupInput, InterpretationBands, ItemInput};
use mathworld::problem_gen::{enumerate_space_with, Generator, TopicId};
use mathworld::Exec;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn generation(c: &mut Criterion) {
    let generator = Generator::default();
    let mut group = c.benchmark_group("generate_batch");
    for topic in [TopicId::AddWithoutRegrouping, TopicId::SubRegroupTensHundredsZero, TopicId::DivDividendsTo81] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, topic.code()), &topic, |b, &t| {
                b.iter(|| black_box(generator.generate_batch(t, 0..10_000, exec)))
            });
        }
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_space");
    group.sample_size(10);
    for topic in [TopicId::AddWithRegrouping, TopicId::SubRegroupHundredsZero] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, topic.code()), &topic, |b, &t| {
                b.iter(|| black_box(enumerate_space_with(t, exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn reports(c: &mut Criterion) {
    // a survey-sized input: 200 groups of 8 items, 40 responses each
    let input = AssessmentInput {
        groups: (0..200)
            .map(|g| GroupInput {
                name: format!("group {g}"),
                items: (0..8)
                    .map(|i| ItemInput::with_responses(format!("item {i}"), (0..40).map(|r| ((g + i + r) % 5 + 1) as u8).collect()))
                    .collect(),
            })
            .collect(),
        overall_label: None,
    };
    let bands = InterpretationBands::equal_width();
    let mut group = c.benchmark_group("build_report");
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| black_box(build_report_with(&input, &bands, exec).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, generation, enumeration, reports);
criterion_main!(benches);
