//! Executable versions of the correctness properties linking the LTS
//! queries, the games, the fixed points and the proofs.
//!
//! [`Analysis`] computes everything once for an LTS and a game kind; each
//! property in [`PROPERTIES`] then checks one relationship and reports the
//! first counterexample it finds.

use std::collections::BTreeSet;

use crate::aut::{parse_aut, write_aut};
use crate::game::{all_pairs, build_game, ConfigId, GameConfig, GameGraph, GameKind, Player};
use crate::lts::{Lts, StateId};
use crate::proof::{bisimulation_witness, build_proof_with, check_proof, proof_to_strategy, strategy_to_proof};
use crate::relation::{apartness, bisimilarity, Relation, RelationWithLevels};
use crate::solver::{check_determinacy, enumerate_plays, solve, PlayOutcome, Solution};

/// Everything computed for one LTS and one kind of equivalence.
pub struct Analysis<'a> {
    pub lts: &'a Lts,
    pub kind: GameKind,
    /// Game over all pairs of states.
    pub game: GameGraph,
    pub solution: Solution,
    pub apartness: RelationWithLevels,
    pub bisimilarity: Relation,
}

impl<'a> Analysis<'a> {
    pub fn new(lts: &'a Lts, kind: GameKind) -> Self {
        let game = build_game(lts, kind, &all_pairs(lts)).expect("all pairs are valid roots");
        let solution = solve(&game);
        Analysis { lts, kind, apartness: apartness(lts, kind), bisimilarity: bisimilarity(lts, kind), game, solution }
    }

    pub fn pair(&self, x: StateId, y: StateId) -> ConfigId {
        self.game.pair(x, y).expect("every pair is a root")
    }

    fn names(&self, x: StateId, y: StateId) -> String {
        format!("({}, {})", self.lts.state_name(x), self.lts.state_name(y))
    }
}

pub type Check = fn(&Analysis) -> Result<(), String>;

/// All properties, by name.
pub const PROPERTIES: &[(&str, Check)] = &[
    ("lts.tau_closure", tau_closure),
    ("lts.optional_step", optional_step),
    ("lts.aut_round_trip", aut_round_trip),
    ("game.typing", game_typing),
    ("game.out_degree", out_degree),
    ("game.closure_consistency", closure_consistency),
    ("game.tau_idling", tau_idling),
    ("solver.determinacy", determinacy),
    ("solver.rank_stratification", rank_stratification),
    ("solver.duplicator_safety", duplicator_safety),
    ("solver.rank_decrease", rank_decrease),
    ("solver.plays", plays),
    ("relation.apartness_shape", apartness_shape),
    ("relation.duality", duality),
    ("relation.game_agreement", game_agreement),
    ("relation.level_rank", level_rank),
    ("proof.minimal_proofs", minimal_proofs),
    ("proof.strategy_round_trip", strategy_round_trip),
    ("proof.bisimulation_witness", witnesses),
];

/// Runs every property, returning the first violation as `(property, detail)`.
pub fn check_all(analysis: &Analysis) -> Result<(), (&'static str, String)> {
    for (name, check) in PROPERTIES {
        check(analysis).map_err(|e| (*name, e))?;
    }
    Ok(())
}

fn tau_closure(a: &Analysis) -> Result<(), String> {
    let lts = a.lts;
    for x in lts.states() {
        let reach = lts.tau_reach(x).unwrap();
        if !reach.contains(&x) {
            return Err(format!("{} not in its own silent closure", lts.state_name(x)));
        }
        for &x1 in reach {
            if !lts.tau_reach(x1).unwrap().iter().all(|s| reach.contains(s)) {
                return Err(format!("silent closure of {} not transitive", lts.state_name(x)));
            }
        }
        if let Some(tau) = lts.tau() {
            if !lts.branching_answers(x, tau).unwrap().contains(&(x, x)) {
                return Err(format!("{} cannot idle on a silent challenge", lts.state_name(x)));
            }
        }
    }
    Ok(())
}

fn optional_step(a: &Analysis) -> Result<(), String> {
    let lts = a.lts;
    for x in lts.states() {
        for l in lts.labels() {
            let mut expected: BTreeSet<StateId> = lts.successors(x, l).unwrap().into_iter().collect();
            if lts.is_tau(l) {
                expected.insert(x);
            }
            let opt: BTreeSet<StateId> = lts.optional_step(x, l).unwrap().into_iter().collect();
            if opt != expected {
                return Err(format!("optional step of {} on {}", lts.state_name(x), lts.label_name(l)));
            }
        }
    }
    Ok(())
}

fn aut_round_trip(a: &Analysis) -> Result<(), String> {
    let text = write_aut(a.lts);
    // unused labels are not representable in the format, so compare by name
    let observable = |lts: &Lts| {
        let ts: BTreeSet<(String, String, String, bool)> = lts
            .transitions()
            .iter()
            .map(|t| {
                let name = |s: StateId| lts.state_name(s).to_string();
                (name(t.source), lts.label_name(t.label).to_string(), name(t.target), lts.is_tau(t.label))
            })
            .collect();
        let states: Vec<&str> = lts.states().map(|s| lts.state_name(s)).collect();
        (states.join("\n"), lts.initial(), ts)
    };
    match parse_aut(&text) {
        Ok(back) if observable(&back) == observable(a.lts) => Ok(()),
        Ok(_) => Err("re-parsed LTS differs".into()),
        Err(e) => Err(format!("written LTS does not parse: {e}")),
    }
}

fn game_typing(a: &Analysis) -> Result<(), String> {
    a.game.check_typing()
}

fn out_degree(a: &Analysis) -> Result<(), String> {
    for c in a.game.ids() {
        if let GameConfig::Challenge { label, responder, .. } = *a.game.config(c) {
            let expected = match a.kind {
                GameKind::Strong => a.lts.successors(responder, label).unwrap().len(),
                GameKind::Branching => a.lts.branching_answers(responder, label).unwrap().len(),
            };
            if a.game.moves(c).len() != expected {
                return Err(format!(
                    "{} has {} replies, expected {expected}",
                    a.game.config(c).describe(a.lts),
                    a.game.moves(c).len()
                ));
            }
        }
    }
    Ok(())
}

fn edges_from(game: &GameGraph, configs: &BTreeSet<ConfigId>) -> BTreeSet<(GameConfig, GameConfig)> {
    configs.iter().flat_map(|&c| game.moves(c).iter().map(move |m| (*game.config(c), *game.config(m.target)))).collect()
}

fn closure_consistency(a: &Analysis) -> Result<(), String> {
    for (x, y) in all_pairs(a.lts) {
        let reach = a.game.reachable_from(a.pair(x, y));
        let single = build_game(a.lts, a.kind, &[(x, y)]).unwrap();
        let single_configs: BTreeSet<ConfigId> = single.ids().collect();
        let left: BTreeSet<GameConfig> = reach.iter().map(|&c| *a.game.config(c)).collect();
        let right: BTreeSet<GameConfig> = single.configs().iter().copied().collect();
        if left != right || edges_from(&a.game, &reach) != edges_from(&single, &single_configs) {
            return Err(format!("game rooted at {} differs from the restricted full game", a.names(x, y)));
        }
    }
    Ok(())
}

fn tau_idling(a: &Analysis) -> Result<(), String> {
    if a.kind != GameKind::Branching {
        return Ok(());
    }
    for c in a.game.ids() {
        if let GameConfig::Challenge { label, .. } = *a.game.config(c) {
            if a.lts.is_tau(label) && a.game.moves(c).is_empty() {
                return Err(format!("Duplicator stuck on silent challenge {}", a.game.config(c).describe(a.lts)));
            }
        }
    }
    Ok(())
}

fn determinacy(a: &Analysis) -> Result<(), String> {
    if check_determinacy(&a.game, &a.solution) {
        Ok(())
    } else {
        Err("winning regions do not partition the configurations".into())
    }
}

/// Spoiler's winning pairs by synchronous rounds of the one-round operator,
/// independently of the solver's worklist: entry `c` is the first round in
/// which pair `c` is won.
pub fn reference_pair_ranks(game: &GameGraph) -> Vec<Option<usize>> {
    let mut rank: Vec<Option<usize>> = vec![None; game.len()];
    let won = |rank: &Vec<Option<usize>>, c: ConfigId| rank[c.0].is_some();
    let mut round = 0;
    loop {
        round += 1;
        let mut fresh = Vec::new();
        for p in game.ids() {
            if game.config(p).as_pair().is_none() || won(&rank, p) {
                continue;
            }
            let wins = game.moves(p).iter().any(|challenge| {
                game.moves(challenge.target).iter().all(|reply| match game.config(reply.target) {
                    GameConfig::Pair { .. } => won(&rank, reply.target),
                    GameConfig::Split { .. } => game.moves(reply.target).iter().any(|side| won(&rank, side.target)),
                    GameConfig::Challenge { .. } => false,
                })
            });
            if wins {
                fresh.push(p);
            }
        }
        if fresh.is_empty() {
            return rank;
        }
        for p in fresh {
            rank[p.0] = Some(round);
        }
    }
}

fn rank_stratification(a: &Analysis) -> Result<(), String> {
    let reference = reference_pair_ranks(&a.game);
    let sol = &a.solution;
    for c in a.game.ids() {
        let config = a.game.config(c);
        let expect = match config {
            GameConfig::Pair { .. } => reference[c.0],
            GameConfig::Challenge { .. } => {
                let replies: Vec<Option<usize>> = a.game.moves(c).iter().map(|m| sol.rank(m.target)).collect();
                if replies.iter().all(Option::is_some) {
                    Some(replies.into_iter().flatten().max().unwrap_or(0))
                } else {
                    None
                }
            }
            GameConfig::Split { .. } => a.game.moves(c).iter().filter_map(|m| reference[m.target.0]).min(),
        };
        if sol.rank(c) != expect {
            return Err(format!("rank of {} is {:?}, expected {:?}", config.describe(a.lts), sol.rank(c), expect));
        }
    }
    Ok(())
}

fn duplicator_safety(a: &Analysis) -> Result<(), String> {
    let sol = &a.solution;
    for c in a.game.ids() {
        if sol.spoiler_wins(c) {
            continue;
        }
        let ok = match a.game.owner(c) {
            Player::Spoiler => a.game.moves(c).iter().all(|m| !sol.spoiler_wins(m.target)),
            Player::Duplicator => sol
                .duplicator_strategy
                .get(c)
                .is_some_and(|t| !sol.spoiler_wins(t) && a.game.moves(c).iter().any(|m| m.target == t)),
        };
        if !ok {
            return Err(format!("Duplicator cannot stay safe at {}", a.game.config(c).describe(a.lts)));
        }
    }
    Ok(())
}

fn rank_decrease(a: &Analysis) -> Result<(), String> {
    let sol = &a.solution;
    for c in a.game.ids() {
        let Some(n) = sol.rank(c) else { continue };
        if a.game.config(c).as_pair().is_none() {
            continue;
        }
        let challenge = sol.spoiler_strategy.get(c).ok_or("missing Spoiler move")?;
        for reply in a.game.moves(challenge) {
            let next = match a.game.config(reply.target) {
                GameConfig::Split { .. } => sol.spoiler_strategy.get(reply.target).ok_or("missing split move")?,
                _ => reply.target,
            };
            if sol.rank(next).is_none_or(|r| r + 1 > n) {
                return Err(format!("strategy at {} does not decrease rank", a.game.config(c).describe(a.lts)));
            }
        }
    }
    Ok(())
}

fn plays(a: &Analysis) -> Result<(), String> {
    let sol = &a.solution;
    for (x, y) in all_pairs(a.lts) {
        let c = a.pair(x, y);
        let result = match sol.rank(c) {
            Some(n) => enumerate_plays(&a.game, &sol.spoiler_strategy, c, n)
                .map(|ps| ps.iter().all(|p| p.outcome == PlayOutcome::SpoilerWon && p.rounds <= n)),
            None => enumerate_plays(&a.game, &sol.duplicator_strategy, c, 2)
                .map(|ps| ps.iter().all(|p| p.outcome.winner() == Player::Duplicator)),
        };
        match result {
            Ok(true) => {}
            Ok(false) => return Err(format!("a play from {} is lost by the region's owner", a.names(x, y))),
            Err(e) => return Err(format!("enumerating plays from {}: {e}", a.names(x, y))),
        }
    }
    Ok(())
}

fn apartness_shape(a: &Analysis) -> Result<(), String> {
    for (x, y) in a.apartness.pairs() {
        if x == y {
            return Err(format!("{} apart from itself", a.lts.state_name(x)));
        }
        if a.apartness.level(x, y) != a.apartness.level(y, x) {
            return Err(format!("levels of {} not symmetric", a.names(x, y)));
        }
    }
    if !a.bisimilarity.is_bisimulation(a.lts) {
        return Err("bisimilarity is not a bisimulation".into());
    }
    Ok(())
}

fn duality(a: &Analysis) -> Result<(), String> {
    for (x, y) in all_pairs(a.lts) {
        if a.apartness.contains(x, y) == a.bisimilarity.contains(x, y) {
            return Err(format!(
                "{} is {} apart and bisimilar",
                a.names(x, y),
                if a.apartness.contains(x, y) { "both" } else { "neither" }
            ));
        }
    }
    Ok(())
}

fn game_agreement(a: &Analysis) -> Result<(), String> {
    for (x, y) in all_pairs(a.lts) {
        let c = a.pair(x, y);
        let spoiler = a.solution.winner(c) == Player::Spoiler;
        if a.apartness.contains(x, y) != spoiler || a.bisimilarity.contains(x, y) == spoiler {
            return Err(format!("winner of {} disagrees with the relations", a.names(x, y)));
        }
    }
    Ok(())
}

fn level_rank(a: &Analysis) -> Result<(), String> {
    for (x, y) in a.apartness.pairs() {
        let rank = a.solution.rank(a.pair(x, y));
        if rank != a.apartness.level(x, y) {
            return Err(format!("{}: level {:?}, rank {:?}", a.names(x, y), a.apartness.level(x, y), rank));
        }
    }
    Ok(())
}

fn minimal_proofs(a: &Analysis) -> Result<(), String> {
    for (x, y) in a.apartness.pairs() {
        let proof = build_proof_with(a.lts, &a.apartness, x, y).map_err(|e| e.to_string())?;
        let check = check_proof(a.lts, a.kind, &proof);
        if !check.valid {
            return Err(format!("proof of {} rejected: {:?}", a.names(x, y), check.failures));
        }
        if Some(proof.depth()) != a.apartness.level(x, y) {
            return Err(format!("proof of {} has depth {}", a.names(x, y), proof.depth()));
        }
    }
    Ok(())
}

fn strategy_round_trip(a: &Analysis) -> Result<(), String> {
    for (x, y) in a.apartness.pairs() {
        let c = a.pair(x, y);
        let rank = a.solution.rank(c).ok_or("apart pair not won by Spoiler")?;
        let proof = strategy_to_proof(&a.game, &a.solution, c).map_err(|e| e.to_string())?;
        let check = check_proof(a.lts, a.kind, &proof);
        if !check.valid {
            return Err(format!("strategy proof of {} rejected: {:?}", a.names(x, y), check.failures));
        }
        if proof.depth() != rank || a.apartness.level(x, y) != Some(rank) {
            return Err(format!("{}: depth {}, rank {rank}", a.names(x, y), proof.depth()));
        }
        let strategy = proof_to_strategy(&proof, &a.game).map_err(|e| e.to_string())?;
        let plays = enumerate_plays(&a.game, &strategy, c, rank).map_err(|e| e.to_string())?;
        if !plays.iter().all(|p| p.outcome == PlayOutcome::SpoilerWon && p.rounds <= rank) {
            return Err(format!("strategy from the proof of {} does not win", a.names(x, y)));
        }
    }
    Ok(())
}

fn witnesses(a: &Analysis) -> Result<(), String> {
    for (x, y) in a.bisimilarity.pairs() {
        let w =
            bisimulation_witness(&a.game, &a.solution, a.pair(x, y), a.lts.num_states()).map_err(|e| e.to_string())?;
        if !w.contains(x, y) || !w.is_bisimulation(a.lts) {
            return Err(format!("witness for {} is not a bisimulation containing it", a.names(x, y)));
        }
    }
    Ok(())
}
