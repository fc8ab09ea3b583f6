// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ksigraph_core::centrality::DEFAULT_DENSE_LIMIT;
use ksigraph_core::{
    algebraic_connectivity, centrality_all, cheeger_number, ksi_matrix, weibull_mle, CentralityKind, Model,
};

fn centrality(c: &mut Criterion) {
    let mut group = c.benchmark_group("centrality_all");
    for model in [
        Model::Ba { n: 10_000, m: 3 },
        Model::Er { n: 2000, p: 0.05 },
        Model::Ws {
            n: 10_000,
            k: 10,
            p: 0.1,
        },
    ] {
        let g = model.generate(1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(model), &g, |b, g| {
            b.iter(|| centrality_all(black_box(g), CentralityKind::Ksi))
        });
    }
    group.finish();

    let g = Model::Er { n: 300, p: 0.1 }.generate(1).unwrap();
    c.bench_function("ksi_matrix/er_n300", |b| {
        b.iter(|| ksi_matrix(black_box(&g), DEFAULT_DENSE_LIMIT))
    });
}

fn generators(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    for model in [
        Model::Er { n: 4000, p: 0.01 },
        Model::Ws { n: 4000, k: 20, p: 0.3 },
        Model::Ba { n: 4000, m: 10 },
        Model::Bhl {
            n0: 100,
            m: 20,
            n: 4000,
        },
    ] {
        group.bench_function(model.to_string(), |b| b.iter(|| model.generate(black_box(7)).unwrap()));
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let small = Model::Er { n: 18, p: 0.3 }.generate(3).unwrap();
    c.bench_function("cheeger/er_n18", |b| {
        b.iter(|| cheeger_number(black_box(&small)).unwrap())
    });
    let mid = Model::Ba { n: 400, m: 3 }.generate(3).unwrap();
    c.bench_function("lambda2/ba_n400", |b| {
        b.iter(|| algebraic_connectivity(black_box(&mid)).unwrap())
    });
}

fn weibull(c: &mut Criterion) {
    let g = Model::Ba { n: 10_000, m: 2 }.generate(5).unwrap();
    let values = centrality_all(&g, CentralityKind::Ksi).values;
    c.bench_function("weibull_mle/ba_ksi_10k", |b| {
        b.iter(|| weibull_mle(black_box(&values)).unwrap())
    });
}

criterion_group!(benches, centrality, generators, spectral, weibull);
criterion_main!(benches);
