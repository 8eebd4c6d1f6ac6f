//! Acceptance suite. Prints one PASS/FAIL line per criterion; every limit
//! and corpus parameter is fixed below.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use apart_core::invariants::Analysis;
use apart_core::random::{LtsGenerator, RandomLtsParams};
use apart_core::{
    apartness, build_game, build_proof, check_determinacy, check_proof, enumerate_plays, fixtures, proof_to_strategy,
    solve, strategy_to_proof, write_aut, ApartnessProof, Disjunct, GameConfig, GameKind, Lts, PlayOutcome, Reply,
    StateId,
};

const FIXTURE_LIMIT: Duration = Duration::from_secs(1);
const STRONG_LIMIT: Duration = Duration::from_secs(60);
const BRANCHING_LIMIT: Duration = Duration::from_secs(120);

const STRONG_COUNT: usize = 500;
const STRONG_SEED: u64 = 1;
const STRONG_PARAMS: RandomLtsParams =
    RandomLtsParams { max_states: 7, max_labels: 3, tau_probability: 0.0, density: 0.25 };

const BRANCHING_COUNT: usize = 200;
const BRANCHING_SEED: u64 = 1;
const BRANCHING_PARAMS: RandomLtsParams =
    RandomLtsParams { max_states: 6, max_labels: 3, tau_probability: 0.3, density: 0.25 };

/// Expected fixture values.
const FIG1_RANK: usize = 2;
const FIG2_RANK: usize = 2;

type Outcome = Result<String, String>;
type Criterion = (usize, fn() -> Outcome, Option<Duration>);

fn corpus(params: RandomLtsParams, seed: u64, count: usize) -> Vec<Lts> {
    LtsGenerator::new(params, seed).take(count).collect()
}

fn strong_corpus() -> Vec<Lts> {
    corpus(STRONG_PARAMS, STRONG_SEED, STRONG_COUNT)
}

fn branching_corpus() -> Vec<Lts> {
    corpus(BRANCHING_PARAMS, BRANCHING_SEED, BRANCHING_COUNT)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counterexample(lts: &Lts, x: StateId, y: StateId, what: &str) -> String {
    format!("{what} at ({}, {})\n{}", lts.state_name(x), lts.state_name(y), write_aut(lts))
}

/// Level, game membership and rank of one fixture pair.
fn fixture_pair(lts: &Lts, kind: GameKind, expected: usize) -> Result<(StateId, StateId, ApartnessProof), String> {
    let x0 = lts.state_by_name("x0").unwrap();
    let y0 = lts.state_by_name("y0").unwrap();
    let level = apartness(lts, kind).level(x0, y0);
    ensure(level == Some(expected), || format!("level {level:?}"))?;
    let game = build_game(lts, kind, &[(x0, y0)]).unwrap();
    let sol = solve(&game);
    let root = game.roots()[0];
    ensure(sol.spoiler_wins(root), || "root not in W_S".into())?;
    ensure(sol.rank(root) == Some(expected), || format!("rank {:?}", sol.rank(root)))?;
    let proof = build_proof(lts, kind, x0, y0).map_err(|e| e.to_string())?;
    let check = check_proof(lts, kind, &proof);
    ensure(check.valid, || format!("proof rejected: {:?}", check.failures))?;
    ensure(proof.depth() == expected, || format!("proof depth {}", proof.depth()))?;
    Ok((x0, y0, proof))
}

fn criterion_1() -> Outcome {
    let lts = fixtures::fig1();
    let (x0, y0, proof) = fixture_pair(&lts, GameKind::Strong, FIG1_RANK)?;
    let name = |s: StateId| lts.state_name(s);
    // x0 -a-> x1, answered only by y1, and x1 # y1 by symmetry from y1 -c-> y3
    let ApartnessProof::Rule { left, right, label, target, subgoals } = &proof else {
        return Err("root is not a rule".into());
    };
    ensure((*left, *right) == (x0, y0), || "root pair".into())?;
    ensure(lts.label_name(*label) == "a" && name(*target) == "x1", || "root challenge".into())?;
    ensure(subgoals.len() == 1, || format!("{} subgoals", subgoals.len()))?;
    ensure(matches!(subgoals[0].reply, Reply::Strong { target } if name(target) == "y1"), || "reply".into())?;
    let ApartnessProof::Sym { child, .. } = &subgoals[0].proof else {
        return Err("x1 # y1 is not by symmetry".into());
    };
    let ApartnessProof::Rule { left, label, target, subgoals, .. } = child.as_ref() else {
        return Err("symmetric child is not a rule".into());
    };
    ensure(name(*left) == "y1" && lts.label_name(*label) == "c" && name(*target) == "y3", || "leaf challenge".into())?;
    ensure(subgoals.is_empty(), || "leaf challenge is not vacuous".into())?;
    ensure(proof.sym_count() == 1 && proof.node_count() == 3, || "proof shape".into())?;
    Ok("level = rank = depth = 2, one symmetry node, vacuous c-leaf".into())
}

fn criterion_2() -> Outcome {
    let lts = fixtures::fig2();
    let (_, _, proof) = fixture_pair(&lts, GameKind::Branching, FIG2_RANK)?;
    let name = |s: StateId| lts.state_name(s);
    // x0 -tau-> x2; y0 idles; the right disjunct x2 # y0 holds by y0 -a-> y1
    let ApartnessProof::Rule { label, target, subgoals, .. } = &proof else {
        return Err("root is not a rule".into());
    };
    ensure(lts.is_tau(*label) && name(*target) == "x2", || "root challenge".into())?;
    ensure(subgoals.len() == 1, || format!("{} subgoals", subgoals.len()))?;
    let g = &subgoals[0];
    ensure(
        matches!(g.reply, Reply::Branching { pivot, target } if name(pivot) == "y0" && name(target) == "y0"),
        || "reply".into(),
    )?;
    ensure(g.disjunct == Some(Disjunct::Target), || format!("disjunct {:?}", g.disjunct))?;
    let ApartnessProof::Sym { child, .. } = &g.proof else {
        return Err("x2 # y0 is not by symmetry".into());
    };
    let ApartnessProof::Rule { left, label, target, subgoals, .. } = child.as_ref() else {
        return Err("symmetric child is not a rule".into());
    };
    ensure(name(*left) == "y0" && lts.label_name(*label) == "a" && name(*target) == "y1", || "leaf".into())?;
    ensure(subgoals.is_empty(), || "leaf challenge is not vacuous".into())?;
    Ok("level = rank = depth = 2, disjunct path [target], vacuous a-leaf".into())
}

fn criterion_3() -> Outcome {
    let mut pairs = 0;
    for lts in strong_corpus() {
        let apart = apartness(&lts, GameKind::Strong);
        let bisim = apart_core::strong_bisimilarity(&lts);
        for x in lts.states() {
            for y in lts.states() {
                pairs += 1;
                ensure(apart.contains(x, y) != bisim.contains(x, y), || counterexample(&lts, x, y, "duality"))?;
            }
        }
    }
    Ok(format!("{STRONG_COUNT} LTSs, {pairs} pairs"))
}

fn agreement(corpus: &[Lts], kind: GameKind) -> Result<(usize, usize), String> {
    let (mut pairs, mut configs) = (0, 0);
    for lts in corpus {
        let a = Analysis::new(lts, kind);
        ensure(check_determinacy(&a.game, &a.solution), || format!("determinacy\n{}", write_aut(lts)))?;
        configs += a.game.len();
        for x in lts.states() {
            for y in lts.states() {
                pairs += 1;
                let c = a.pair(x, y);
                let ws = a.solution.spoiler_wins(c);
                ensure(ws == a.apartness.contains(x, y), || counterexample(lts, x, y, "W_S vs apartness"))?;
                ensure(!ws == a.bisimilarity.contains(x, y), || counterexample(lts, x, y, "W_D vs bisimilarity"))?;
                ensure(a.apartness.contains(x, y) != a.bisimilarity.contains(x, y), || {
                    counterexample(lts, x, y, "duality")
                })?;
            }
        }
    }
    Ok((pairs, configs))
}

fn criterion_4() -> Outcome {
    let (pairs, configs) = agreement(&strong_corpus(), GameKind::Strong)?;
    Ok(format!("{pairs} pairs agree, {configs} configurations determined"))
}

fn criterion_5() -> Outcome {
    let (pairs, configs) = agreement(&branching_corpus(), GameKind::Branching)?;
    Ok(format!("{BRANCHING_COUNT} LTSs, {pairs} pairs agree, {configs} configurations determined"))
}

fn round_trips(corpus: &[Lts], kind: GameKind) -> Result<(usize, usize), String> {
    let (mut apart_pairs, mut plays) = (0, 0);
    for lts in corpus {
        let a = Analysis::new(lts, kind);
        for (x, y) in a.apartness.pairs() {
            apart_pairs += 1;
            let root = a.pair(x, y);
            let fail = |what: &str| counterexample(lts, x, y, what);
            let rank = a.solution.rank(root).ok_or_else(|| fail("apart pair without rank"))?;
            let level = a.apartness.level(x, y).unwrap();
            let proof = strategy_to_proof(&a.game, &a.solution, root).map_err(|e| fail(&e.to_string()))?;
            let check = check_proof(lts, kind, &proof);
            ensure(check.valid, || fail(&format!("proof rejected: {:?}", check.failures)))?;
            ensure(proof.depth() == level && level == rank, || {
                fail(&format!("depth {} level {level} rank {rank}", proof.depth()))
            })?;
            let strategy = proof_to_strategy(&proof, &a.game).map_err(|e| fail(&e.to_string()))?;
            for play in enumerate_plays(&a.game, &strategy, root, rank).map_err(|e| fail(&e.to_string()))? {
                plays += 1;
                ensure(play.outcome == PlayOutcome::SpoilerWon && play.rounds <= rank, || {
                    fail(&format!("play {:?} after {} rounds", play.outcome, play.rounds))
                })?;
            }
        }
    }
    Ok((apart_pairs, plays))
}

fn criterion_6() -> Outcome {
    let (s_pairs, s_plays) = round_trips(&strong_corpus(), GameKind::Strong)?;
    let (b_pairs, b_plays) = round_trips(&branching_corpus(), GameKind::Branching)?;
    Ok(format!("{} apart pairs round-trip, {} plays won within rank", s_pairs + b_pairs, s_plays + b_plays))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut games = vec![(fixtures::fig2(), None)];
    games.extend(branching_corpus().into_iter().map(|l| (l, None)));
    let fig2 = fixtures::fig2();
    games.push((fig2.clone(), Some((fig2.state_by_name("x0").unwrap(), fig2.state_by_name("y0").unwrap()))));
    for (lts, root) in &games {
        let roots = match root {
            Some(p) => vec![*p],
            None => apart_core::all_pairs(lts),
        };
        let game = build_game(lts, GameKind::Branching, &roots).unwrap();
        for c in game.ids() {
            if let GameConfig::Challenge { label, .. } = game.config(c) {
                if lts.is_tau(*label) {
                    checked += 1;
                    ensure(!game.moves(c).is_empty(), || {
                        format!("stuck silent challenge {}\n{}", game.config(c).describe(lts), write_aut(lts))
                    })?;
                }
            }
        }
    }
    Ok(format!("{checked} silent challenges across {} games all answerable", games.len()))
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_apart");
    let out = Command::new(bin).args(["prove", "fixture:fig1", "x3", "y2"]).output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(3), || format!("prove exit {:?}", out.status.code()))?;
    ensure(text.lines().any(|l| l.trim() == "(x3, y2)"), || format!("no (x3, y2) in\n{text}"))?;
    for fixture in ["fixture:fig1", "fixture:fig2"] {
        for kind in ["strong", "branching"] {
            let out = Command::new(bin).args(["check", fixture, "--kind", kind]).output().map_err(|e| e.to_string())?;
            ensure(out.status.code() == Some(0), || format!("check {fixture} {kind}: exit {:?}", out.status.code()))?;
        }
    }
    Ok("prove exits 3 with a witness; check exits 0 on both fixtures".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        (1, criterion_1, Some(FIXTURE_LIMIT)),
        (2, criterion_2, Some(FIXTURE_LIMIT)),
        (3, criterion_3, Some(STRONG_LIMIT)),
        (4, criterion_4, None),
        (5, criterion_5, Some(BRANCHING_LIMIT)),
        (6, criterion_6, None),
        (7, criterion_7, None),
        (8, criterion_8, None),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for (n, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:?}, limit {limit:?}")),
            (r, _) => r,
        };
        let line = match &result {
            Ok(detail) => format!("criterion {n}: PASS ({:.0?}) {detail}", elapsed),
            Err(e) => {
                failed.push(n);
                format!("criterion {n}: FAIL ({:.0?}) {e}", elapsed)
            }
        };
        // written directly so the lines show without --nocapture
        writeln!(stdout, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
