use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use umlf::codegen::generate;
use umlf::conformance::{conforms, expand, Mode, Trace};
use umlf::dsl::{parse, print};
use umlf::instantiate::{instantiate, parse_spec};
use umlf::transform::{parse_bindings, transform_all};
use umlf::{classify_variation_points, validate, Event, MethodRef, SequencePattern};

const FIG3: &str = include_str!("../../core/tests/fixtures/fig3.umlf");
const FIG8: &str = include_str!("../../core/tests/fixtures/fig8.umlf");
const BINDINGS: &str = include_str!("../../core/tests/fixtures/case.bind");
const SPEC: &str = include_str!("../../core/tests/fixtures/fig10.inst");

fn front_end(c: &mut Criterion) {
    let model = parse(FIG3).unwrap();
    c.bench_function("parse", |b| b.iter(|| parse(black_box(FIG3)).unwrap()));
    c.bench_function("print", |b| b.iter(|| print(black_box(&model))));
    c.bench_function("validate", |b| b.iter(|| validate(black_box(&model))));
    c.bench_function("classify", |b| {
        b.iter(|| classify_variation_points(black_box(&model)).unwrap())
    });
}

fn rewrites(c: &mut Criterion) {
    let model = parse(FIG3).unwrap();
    let bindings = parse_bindings(BINDINGS).unwrap();
    let framework = parse(FIG8).unwrap();
    let spec = parse_spec(SPEC).unwrap();
    c.bench_function("transform", |b| {
        b.iter(|| transform_all(black_box(&model), &bindings).unwrap())
    });
    c.bench_function("instantiate", |b| {
        b.iter(|| instantiate(black_box(&framework), &spec).unwrap())
    });
    c.bench_function("generate", |b| {
        b.iter(|| generate(black_box(&framework)).unwrap())
    });
    c.bench_function("pipeline", |b| {
        b.iter(|| {
            let m = parse(black_box(FIG3)).unwrap();
            let fw = transform_all(&m, &bindings).unwrap();
            let app = instantiate(&fw, &spec).unwrap();
            (generate(&fw).unwrap(), generate(&app).unwrap())
        })
    });
}

fn traces(c: &mut Criterion) {
    // Six events, every other one optional.
    let pattern = SequencePattern {
        name: "P".into(),
        owner: MethodRef::new("C", "m"),
        events: (0..6)
            .map(|i| {
                let name = format!("e{i}");
                if i % 2 == 0 {
                    Event::optional(name)
                } else {
                    Event::mandatory(name)
                }
            })
            .collect(),
    };
    let trace = Trace::new(["e0", "e1", "e3", "e4", "e5"]);
    c.bench_function("conforms", |b| {
        b.iter(|| conforms(black_box(&trace), &pattern, Mode::Strict))
    });
    c.bench_function("expand", |b| {
        b.iter(|| expand(black_box(&pattern)).unwrap())
    });
}

criterion_group!(benches, front_end, rewrites, traces);
criterion_main!(benches);
