//! Winning regions, ranks and positional strategies.
//!
//! Spoiler plays a reachability game: she wins once Duplicator is stuck.
//! Her winning region is computed as an attractor, one round at a time, so
//! that the rank of a pair is the number of challenges Spoiler needs in the
//! worst case. Everything outside the attractor is Duplicator's.

use std::collections::BTreeMap;

use crate::error::GameError;
use crate::game::{ConfigId, GameConfig, GameGraph, Move, Player};

/// A positional strategy: for each owned configuration, the chosen successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub player: Player,
    moves: BTreeMap<ConfigId, ConfigId>,
}

impl Strategy {
    pub fn new(player: Player) -> Self {
        Strategy { player, moves: BTreeMap::new() }
    }

    pub fn get(&self, c: ConfigId) -> Option<ConfigId> {
        self.moves.get(&c).copied()
    }

    pub fn set(&mut self, c: ConfigId, target: ConfigId) -> Option<ConfigId> {
        self.moves.insert(c, target)
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ConfigId, ConfigId)> + '_ {
        self.moves.iter().map(|(&k, &v)| (k, v))
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    winner: Vec<Player>,
    rank: Vec<Option<usize>>,
    pub spoiler_strategy: Strategy,
    pub duplicator_strategy: Strategy,
}

impl Solution {
    pub fn winner(&self, c: ConfigId) -> Player {
        self.winner[c.0]
    }

    pub fn spoiler_wins(&self, c: ConfigId) -> bool {
        self.winner[c.0] == Player::Spoiler
    }

    /// Rank of a configuration in Spoiler's region.
    ///
    /// For a pair this is the number of challenges Spoiler needs to get
    /// Duplicator stuck. A challenge has the largest rank among its replies
    /// (0 when there are none) and a split the smallest among its sides.
    pub fn rank(&self, c: ConfigId) -> Option<usize> {
        self.rank[c.0]
    }

    pub fn spoiler_region(&self) -> impl Iterator<Item = ConfigId> + '_ {
        self.winner.iter().enumerate().filter(|(_, &p)| p == Player::Spoiler).map(|(i, _)| ConfigId(i))
    }

    pub fn duplicator_region(&self) -> impl Iterator<Item = ConfigId> + '_ {
        self.winner.iter().enumerate().filter(|(_, &p)| p == Player::Duplicator).map(|(i, _)| ConfigId(i))
    }

    pub fn len(&self) -> usize {
        self.winner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winner.is_empty()
    }

    /// The positional strategy of `player`.
    pub fn strategy(&self, player: Player) -> &Strategy {
        match player {
            Player::Spoiler => &self.spoiler_strategy,
            Player::Duplicator => &self.duplicator_strategy,
        }
    }
}

/// Solves the game.
///
/// Rounds are processed in increasing order with a per-challenge counter of
/// replies not yet known to be losing for Duplicator, so each edge is looked
/// at a constant number of times.
pub fn solve(game: &GameGraph) -> Solution {
    let n = game.len();
    let preds = game.predecessors();
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut remaining: Vec<usize> = game.ids().map(|c| game.moves(c).len()).collect();

    let mut challenges: Vec<ConfigId> = Vec::new();
    for c in game.ids() {
        if game.owner(c) == Player::Duplicator && remaining[c.0] == 0 {
            rank[c.0] = Some(0);
            challenges.push(c);
        }
    }

    let mut round = 0;
    loop {
        // challenges won at `round` make their challenging pairs won at `round + 1`
        let mut pairs = Vec::new();
        for &c in &challenges {
            for &p in &preds[c.0] {
                if rank[p.0].is_none() {
                    rank[p.0] = Some(round + 1);
                    pairs.push(p);
                }
            }
        }
        if pairs.is_empty() {
            break;
        }
        round += 1;

        let mut next = Vec::new();
        for &p in &pairs {
            for &q in &preds[p.0] {
                match game.config(q) {
                    GameConfig::Challenge { .. } => {
                        remaining[q.0] -= 1;
                        if remaining[q.0] == 0 {
                            rank[q.0] = Some(round);
                            next.push(q);
                        }
                    }
                    GameConfig::Split { .. } => {
                        if rank[q.0].is_some() {
                            continue;
                        }
                        rank[q.0] = Some(round);
                        for &d in &preds[q.0] {
                            remaining[d.0] -= 1;
                            if remaining[d.0] == 0 {
                                rank[d.0] = Some(round);
                                next.push(d);
                            }
                        }
                    }
                    GameConfig::Pair { .. } => unreachable!("pair-to-pair move"),
                }
            }
        }
        challenges = next;
    }

    let winner: Vec<Player> =
        rank.iter().map(|r| if r.is_some() { Player::Spoiler } else { Player::Duplicator }).collect();

    let mut spoiler_strategy = Strategy::new(Player::Spoiler);
    let mut duplicator_strategy = Strategy::new(Player::Duplicator);
    for c in game.ids() {
        match (game.owner(c), winner[c.0]) {
            (Player::Spoiler, Player::Spoiler) => {
                let best = game
                    .moves(c)
                    .iter()
                    .filter_map(|m| rank[m.target.0].map(|r| (r, m.target)))
                    .min()
                    .expect("won Spoiler configuration has a winning move");
                spoiler_strategy.set(c, best.1);
            }
            (Player::Duplicator, Player::Duplicator) => {
                let stay = game
                    .moves(c)
                    .iter()
                    .map(|m| m.target)
                    .filter(|t| winner[t.0] == Player::Duplicator)
                    .min()
                    .expect("Duplicator configuration outside the attractor has a safe move");
                duplicator_strategy.set(c, stay);
            }
            _ => {}
        }
    }

    Solution { winner, rank, spoiler_strategy, duplicator_strategy }
}

/// True iff every configuration is won by exactly one player.
pub fn check_determinacy(game: &GameGraph, sol: &Solution) -> bool {
    sol.len() == game.len()
        && game.ids().all(|c| {
            let in_spoiler = sol.spoiler_wins(c) && sol.rank(c).is_some();
            let in_duplicator = sol.winner(c) == Player::Duplicator && sol.rank(c).is_none();
            in_spoiler != in_duplicator
        })
}

/// How a maximal (or cut-off) play ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlayOutcome {
    /// Duplicator is stuck at the last configuration.
    SpoilerWon,
    /// Spoiler is stuck at the last configuration.
    DuplicatorWon,
    /// The play reached the round bound; counted as a Duplicator win.
    CutOff,
}

impl PlayOutcome {
    pub fn winner(self) -> Player {
        match self {
            PlayOutcome::SpoilerWon => Player::Spoiler,
            PlayOutcome::DuplicatorWon | PlayOutcome::CutOff => Player::Duplicator,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    pub configs: Vec<ConfigId>,
    /// Number of challenges made.
    pub rounds: usize,
    pub outcome: PlayOutcome,
}

/// Enumerates every maximal play from `root` consistent with `strategy`, the
/// other player branching over all of their moves.
///
/// Plays are cut off once `round_bound` challenges have been made and Spoiler
/// could challenge again. The strategy owner must have a move defined at
/// every configuration of theirs the play reaches.
pub fn enumerate_plays(
    game: &GameGraph,
    strategy: &Strategy,
    root: ConfigId,
    round_bound: usize,
) -> Result<Vec<Play>, GameError> {
    if round_bound < 1 {
        return Err(GameError::RoundBound);
    }
    if root.0 >= game.len() {
        return Err(GameError::UnknownConfig(format!("{root:?}")));
    }
    if !matches!(game.config(root), GameConfig::Pair { .. }) {
        return Err(GameError::NotSpoilerOwned(format!("{root:?}")));
    }

    let mut plays = Vec::new();
    let mut path = vec![root];
    extend(game, strategy, round_bound, &mut path, 0, &mut plays)?;
    Ok(plays)
}

fn extend(
    game: &GameGraph,
    strategy: &Strategy,
    round_bound: usize,
    path: &mut Vec<ConfigId>,
    rounds: usize,
    plays: &mut Vec<Play>,
) -> Result<(), GameError> {
    let here = *path.last().unwrap();
    let moves = game.moves(here);
    if moves.is_empty() {
        let outcome = match game.owner(here) {
            Player::Duplicator => PlayOutcome::SpoilerWon,
            Player::Spoiler => PlayOutcome::DuplicatorWon,
        };
        plays.push(Play { configs: path.clone(), rounds, outcome });
        return Ok(());
    }
    let is_pair = matches!(game.config(here), GameConfig::Pair { .. });
    if is_pair && rounds >= round_bound {
        plays.push(Play { configs: path.clone(), rounds, outcome: PlayOutcome::CutOff });
        return Ok(());
    }
    let next_rounds = if is_pair { rounds + 1 } else { rounds };

    let chosen: Vec<ConfigId> = if game.owner(here) == strategy.player {
        let target = strategy.get(here).ok_or_else(|| GameError::StrategyUndefined(format!("{here:?}")))?;
        if !moves.iter().any(|m: &Move| m.target == target) {
            return Err(GameError::StrategyUndefined(format!("{here:?} (illegal move)")));
        }
        vec![target]
    } else {
        moves.iter().map(|m| m.target).collect()
    };

    for target in chosen {
        path.push(target);
        extend(game, strategy, round_bound, path, next_rounds, plays)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::{all_pairs, build_branching_game, build_strong_game, GameKind};
    use crate::lts::{Lts, LtsBuilder, StateId};

    fn st(lts: &Lts, n: &str) -> StateId {
        lts.state_by_name(n).unwrap()
    }

    #[test]
    fn fig1_root_rank_two() {
        let lts = fixtures::fig1();
        let game = build_strong_game(&lts, &[(st(&lts, "x0"), st(&lts, "y0"))]).unwrap();
        let sol = solve(&game);
        let root = game.roots()[0];
        assert!(sol.spoiler_wins(root));
        assert_eq!(sol.rank(root), Some(2));
        assert!(check_determinacy(&game, &sol));
    }

    #[test]
    fn deadlock_pair_is_duplicator_win() {
        let mut b = LtsBuilder::new();
        b.state("d");
        b.state("e");
        let lts = b.build().unwrap();
        let game = build_strong_game(&lts, &[(StateId(0), StateId(1))]).unwrap();
        let sol = solve(&game);
        assert_eq!(sol.winner(ConfigId(0)), Player::Duplicator);
        assert_eq!(sol.rank(ConfigId(0)), None);
    }

    #[test]
    fn fig2_branching_rank_two() {
        let lts = fixtures::fig2();
        let game = build_branching_game(&lts, &[(st(&lts, "x0"), st(&lts, "y0"))]).unwrap();
        let sol = solve(&game);
        let root = game.roots()[0];
        assert!(sol.spoiler_wins(root));
        assert_eq!(sol.rank(root), Some(2));
        assert!(check_determinacy(&game, &sol));
        // strategy opens with the silent challenge x0 -tau-> x2
        let first = sol.spoiler_strategy.get(root).unwrap();
        assert_eq!(game.config(first).describe(&lts), "<x0, tau, x2, y0>");
    }

    #[test]
    fn empty_game_is_determined() {
        let game = GameGraph::empty(GameKind::Strong);
        let sol = solve(&game);
        assert!(check_determinacy(&game, &sol));
    }

    #[test]
    fn fig1_spoiler_plays_all_won_within_two_rounds() {
        let lts = fixtures::fig1();
        let game = build_strong_game(&lts, &[(st(&lts, "x0"), st(&lts, "y0"))]).unwrap();
        let sol = solve(&game);
        let plays = enumerate_plays(&game, &sol.spoiler_strategy, game.roots()[0], game.len() + 1).unwrap();
        assert!(!plays.is_empty());
        for p in &plays {
            assert_eq!(p.outcome, PlayOutcome::SpoilerWon);
            assert!(p.rounds <= 2);
        }
    }

    #[test]
    fn fig1_deadlocked_pair_single_empty_play() {
        let lts = fixtures::fig1();
        let game = build_strong_game(&lts, &all_pairs(&lts)).unwrap();
        let sol = solve(&game);
        let root = game.pair(st(&lts, "x3"), st(&lts, "y2")).unwrap();
        let plays = enumerate_plays(&game, &sol.duplicator_strategy, root, 5).unwrap();
        assert_eq!(plays, vec![Play { configs: vec![root], rounds: 0, outcome: PlayOutcome::DuplicatorWon }]);
    }

    #[test]
    fn duplicator_strategy_survives_on_bisimilar_pairs() {
        let lts = fixtures::fig1();
        let game = build_strong_game(&lts, &all_pairs(&lts)).unwrap();
        let sol = solve(&game);
        for c in game.ids() {
            if game.config(c).as_pair().is_some() && !sol.spoiler_wins(c) {
                let plays = enumerate_plays(&game, &sol.duplicator_strategy, c, game.len() + 1).unwrap();
                assert!(plays.iter().all(|p| p.outcome.winner() == Player::Duplicator));
            }
        }
    }

    #[test]
    fn round_bound_must_be_positive() {
        let lts = fixtures::fig1();
        let game = build_strong_game(&lts, &[(StateId(0), StateId(5))]).unwrap();
        let sol = solve(&game);
        assert_eq!(enumerate_plays(&game, &sol.spoiler_strategy, game.roots()[0], 0), Err(GameError::RoundBound));
    }

    #[test]
    fn silent_loop_is_cut_off() {
        let mut b = LtsBuilder::new();
        b.silent("tau");
        b.transition("a", "tau", "b").transition("b", "tau", "a");
        let lts = b.build().unwrap();
        let game = build_strong_game(&lts, &[(StateId(0), StateId(1))]).unwrap();
        let sol = solve(&game);
        assert!(!sol.spoiler_wins(game.roots()[0]));
        let bound = game.len() + 1;
        let plays = enumerate_plays(&game, &sol.duplicator_strategy, game.roots()[0], bound).unwrap();
        assert!(plays.iter().all(|p| p.outcome == PlayOutcome::CutOff && p.rounds == bound));
    }
}
