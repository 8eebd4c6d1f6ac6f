use std::hint::black_box;

use apart_bench::{chains, corpus};
use apart_core::{all_pairs, apartness, bisimilarity, build_game, solve, strategy_to_proof, GameKind};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn fixed_points(c: &mut Criterion) {
    let strong = corpus(50, 7, 0.0, 1);
    let branching = corpus(50, 6, 0.3, 1);
    let mut group = c.benchmark_group("fixed_points");
    group.bench_function("strong_apartness", |b| {
        b.iter(|| strong.iter().map(|l| apartness(l, GameKind::Strong).len()).sum::<usize>())
    });
    group.bench_function("strong_bisimilarity", |b| {
        b.iter(|| strong.iter().map(|l| bisimilarity(l, GameKind::Strong).len()).sum::<usize>())
    });
    group.bench_function("branching_apartness", |b| {
        b.iter(|| branching.iter().map(|l| apartness(l, GameKind::Branching).len()).sum::<usize>())
    });
    group.finish();
}

fn games(c: &mut Criterion) {
    let mut group = c.benchmark_group("games");
    for (name, kind, lts) in
        [("strong", GameKind::Strong, corpus(50, 7, 0.0, 2)), ("branching", GameKind::Branching, corpus(50, 6, 0.3, 2))]
    {
        let built: Vec<_> = lts.iter().map(|l| build_game(l, kind, &all_pairs(l)).unwrap()).collect();
        group.bench_function(BenchmarkId::new("build", name), |b| {
            b.iter(|| lts.iter().map(|l| build_game(l, kind, &all_pairs(l)).unwrap().len()).sum::<usize>())
        });
        group.bench_function(BenchmarkId::new("solve", name), |b| {
            b.iter(|| built.iter().map(|g| solve(black_box(g)).len()).sum::<usize>())
        });
    }
    group.finish();
}

fn chain_proofs(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain_proof");
    for n in [8usize, 32, 128] {
        let lts = chains(n);
        let p0 = lts.state_by_name("p0").unwrap();
        let q0 = lts.state_by_name("q0").unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &lts, |b, lts| {
            b.iter(|| {
                let game = build_game(lts, GameKind::Strong, &[(p0, q0)]).unwrap();
                let sol = solve(&game);
                strategy_to_proof(&game, &sol, game.roots()[0]).unwrap().depth()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, fixed_points, games, chain_proofs);
criterion_main!(benches);
