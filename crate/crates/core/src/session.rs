//! Interactive play: a human takes one role, the solver plays the other.
//!
//! The engine follows its winning strategy whenever it stands in its own
//! winning region. Otherwise, as Duplicator it stalls by picking the reply
//! with the largest remaining Spoiler rank, and as Spoiler it plays the
//! lowest-numbered move. Since infinite plays go to Duplicator, a session is
//! declared won by Duplicator when the engine, playing Spoiler outside its
//! region, revisits a pair, or when the number of rounds exceeds the number
//! of configurations.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::error::LtsError;
use crate::game::{build_game, ConfigId, GameConfig, GameGraph, GameKind, MoveKind, Player};
use crate::lts::{Lts, StateId};
use crate::proof::{strategy_to_proof, ApartnessProof};
use crate::solver::{solve, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    InProgress,
    SpoilerWon,
    DuplicatorWon,
}

/// Why a finished session ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    /// The player to move had no move.
    Stuck,
    /// The engine, playing Spoiler outside its winning region, revisited a pair.
    Repetition,
    /// More rounds than there are configurations.
    RoundLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryEntry {
    pub from: ConfigId,
    pub to: ConfigId,
    pub mover: Player,
    pub by_human: bool,
    pub kind: MoveKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveOption {
    pub index: usize,
    pub kind: MoveKind,
    pub target: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error("it is not the human player's turn")]
    NotHumansTurn,
    #[error("the game is over")]
    Finished,
    #[error("move index {index} out of range ({available} moves available)")]
    InvalidMove { index: usize, available: usize },
}

#[derive(Clone, Debug)]
pub struct Session {
    lts: Arc<Lts>,
    kind: GameKind,
    human: Player,
    game: GameGraph,
    solution: Solution,
    start: ConfigId,
    current: ConfigId,
    history: Vec<HistoryEntry>,
    status: SessionStatus,
    end_reason: Option<EndReason>,
    rounds: usize,
    visited: HashSet<ConfigId>,
}

impl Session {
    /// Builds and solves the game from `[x, y]`, then lets the engine move if
    /// it is Spoiler.
    pub fn new(lts: Arc<Lts>, kind: GameKind, human: Player, x: StateId, y: StateId) -> Result<Self, SessionError> {
        let game = build_game(&lts, kind, &[(x, y)]).map_err(|e| match e {
            crate::error::GameError::Lts(e) => SessionError::Lts(e),
            other => SessionError::Lts(LtsError::UnknownState(other.to_string())),
        })?;
        let solution = solve(&game);
        let start = game.roots()[0];
        let mut session = Session {
            lts,
            kind,
            human,
            game,
            solution,
            start,
            current: start,
            history: Vec::new(),
            status: SessionStatus::InProgress,
            end_reason: None,
            rounds: 0,
            visited: HashSet::from([start]),
        };
        session.update_status();
        session.run_engine();
        Ok(session)
    }

    pub fn lts(&self) -> &Lts {
        &self.lts
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn human(&self) -> Player {
        self.human
    }

    pub fn game(&self) -> &GameGraph {
        &self.game
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn start(&self) -> ConfigId {
        self.start
    }

    pub fn current(&self) -> ConfigId {
        self.current
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn status(&self) -> SessionStatus {
        self.status
    }

    pub fn end_reason(&self) -> Option<EndReason> {
        self.end_reason
    }

    /// Completed challenges so far.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn to_move(&self) -> Player {
        self.game.owner(self.current)
    }

    pub fn start_in_spoiler_region(&self) -> bool {
        self.solution.spoiler_wins(self.start)
    }

    pub fn current_rank(&self) -> Option<usize> {
        self.solution.rank(self.current)
    }

    /// The human's options at the current configuration; empty once the game is over.
    pub fn legal_moves(&self) -> Result<Vec<MoveOption>, SessionError> {
        if self.status != SessionStatus::InProgress {
            return Ok(Vec::new());
        }
        if self.to_move() != self.human {
            return Err(SessionError::NotHumansTurn);
        }
        Ok(self
            .game
            .moves(self.current)
            .iter()
            .enumerate()
            .map(|(index, m)| MoveOption {
                index,
                kind: m.kind,
                target: self.game.config(m.target).describe(&self.lts),
                description: self.describe_move(self.current, m.target),
            })
            .collect())
    }

    /// Applies the human's move, then the engine's replies.
    pub fn play(&mut self, index: usize) -> Result<(), SessionError> {
        if self.status != SessionStatus::InProgress {
            return Err(SessionError::Finished);
        }
        if self.to_move() != self.human {
            return Err(SessionError::NotHumansTurn);
        }
        let moves = self.game.moves(self.current);
        let target = moves.get(index).ok_or(SessionError::InvalidMove { index, available: moves.len() })?.target;
        self.apply(target, true);
        self.run_engine();
        Ok(())
    }

    /// Describes the move from `from` to `to` in terms of transitions.
    pub fn describe_move(&self, from: ConfigId, to: ConfigId) -> String {
        let lts = &self.lts;
        let n = |s: StateId| lts.state_name(s);
        match (*self.game.config(from), *self.game.config(to)) {
            (GameConfig::Pair { .. }, GameConfig::Challenge { challenger, label, target, .. }) => {
                format!("challenge {} -{}-> {}", n(challenger), lts.label_name(label), n(target))
            }
            (GameConfig::Challenge { label, responder, .. }, GameConfig::Pair { right, .. }) => {
                format!("answer {} -{}-> {}", n(responder), lts.label_name(label), n(right))
            }
            (GameConfig::Challenge { label, responder, .. }, GameConfig::Split { pivot, reply, .. }) => {
                format!("answer {} ==> {} -({})-> {}", n(responder), n(pivot), lts.label_name(label), n(reply))
            }
            (GameConfig::Split { .. }, GameConfig::Pair { left, right }) => {
                format!("continue with [{}, {}]", n(left), n(right))
            }
            (a, b) => format!("{} to {}", a.describe(lts), b.describe(lts)),
        }
    }

    fn engine_choice(&self) -> ConfigId {
        let c = self.current;
        let sol = &self.solution;
        let moves = self.game.moves(c);
        match self.game.owner(c) {
            Player::Spoiler if sol.spoiler_wins(c) => sol.spoiler_strategy.get(c).expect("strategy covers region"),
            Player::Spoiler => moves.iter().map(|m| m.target).min().expect("engine has a move"),
            Player::Duplicator if !sol.spoiler_wins(c) => {
                sol.duplicator_strategy.get(c).expect("strategy covers region")
            }
            Player::Duplicator => moves
                .iter()
                .map(|m| m.target)
                .max_by_key(|t| (sol.rank(*t), std::cmp::Reverse(*t)))
                .expect("engine has a move"),
        }
    }

    fn run_engine(&mut self) {
        while self.status == SessionStatus::InProgress && self.to_move() != self.human {
            let target = self.engine_choice();
            self.apply(target, false);
        }
    }

    fn apply(&mut self, target: ConfigId, by_human: bool) {
        let from = self.current;
        let kind = self.game.moves(from).iter().find(|m| m.target == target).expect("legal move").kind;
        if self.game.config(from).as_pair().is_some() {
            self.rounds += 1;
        }
        self.history.push(HistoryEntry { from, to: target, mover: self.game.owner(from), by_human, kind });
        self.current = target;

        let repeated = !self.visited.insert(target);
        self.update_status();
        if self.status != SessionStatus::InProgress {
            return;
        }
        let engine_spoiler = self.human == Player::Duplicator;
        if repeated
            && engine_spoiler
            && self.game.config(target).as_pair().is_some()
            && !self.solution.spoiler_wins(target)
        {
            self.finish(SessionStatus::DuplicatorWon, EndReason::Repetition);
        } else if self.rounds > self.game.len() {
            self.finish(SessionStatus::DuplicatorWon, EndReason::RoundLimit);
        }
    }

    fn update_status(&mut self) {
        if self.game.moves(self.current).is_empty() {
            let winner = match self.to_move() {
                Player::Duplicator => SessionStatus::SpoilerWon,
                Player::Spoiler => SessionStatus::DuplicatorWon,
            };
            self.finish(winner, EndReason::Stuck);
        }
    }

    fn finish(&mut self, status: SessionStatus, reason: EndReason) {
        self.status = status;
        self.end_reason = Some(reason);
    }

    /// True iff the history is a legal sequence of moves from the start to `current`.
    pub fn replays(&self) -> bool {
        let mut at = self.start;
        for entry in &self.history {
            if entry.from != at || !self.game.moves(at).iter().any(|m| m.target == entry.to) {
                return false;
            }
            at = entry.to;
        }
        at == self.current
    }

    /// Once Spoiler has won: an apartness proof for the first pair of the play
    /// from which Spoiler had a winning strategy.
    pub fn proof(&self) -> Option<ApartnessProof> {
        if self.status != SessionStatus::SpoilerWon {
            return None;
        }
        let path = std::iter::once(self.start).chain(self.history.iter().map(|h| h.to));
        let pair =
            path.filter(|&c| self.game.config(c).as_pair().is_some()).find(|&c| self.solution.spoiler_wins(c))?;
        strategy_to_proof(&self.game, &self.solution, pair).ok()
    }

    /// Configurations visited so far, in order of first visit.
    pub fn explored(&self) -> Vec<ConfigId> {
        let mut seen = HashSet::new();
        std::iter::once(self.start).chain(self.history.iter().map(|h| h.to)).filter(|c| seen.insert(*c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lts::LtsBuilder;

    fn session(lts: Lts, kind: GameKind, human: Player, x: &str, y: &str) -> Session {
        let x = lts.state_by_name(x).unwrap();
        let y = lts.state_by_name(y).unwrap();
        Session::new(Arc::new(lts), kind, human, x, y).unwrap()
    }

    /// Plays every human move sequence to the end; returns the finished sessions.
    fn all_endings(s: Session) -> Vec<Session> {
        if s.status() != SessionStatus::InProgress {
            return vec![s];
        }
        let moves = s.legal_moves().unwrap();
        assert!(!moves.is_empty());
        moves
            .iter()
            .flat_map(|m| {
                let mut next = s.clone();
                next.play(m.index).unwrap();
                assert!(next.replays());
                all_endings(next)
            })
            .collect()
    }

    #[test]
    fn fig2_engine_opens_with_silent_challenge() {
        let s = session(fixtures::fig2(), GameKind::Branching, Player::Duplicator, "x0", "y0");
        assert!(s.start_in_spoiler_region());
        assert_eq!(s.history().len(), 1);
        assert_eq!(s.game().config(s.current()).describe(s.lts()), "<x0, tau, x2, y0>");
        let moves = s.legal_moves().unwrap();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].target, "[x0, x2, y0, y0, y0]");
    }

    #[test]
    fn fig2_engine_wins_in_two_rounds() {
        let mut s = session(fixtures::fig2(), GameKind::Branching, Player::Duplicator, "x0", "y0");
        s.play(0).unwrap();
        let described: Vec<String> = s.history().iter().map(|h| s.describe_move(h.from, h.to)).collect();
        assert_eq!(
            described,
            vec![
                "challenge x0 -tau-> x2",
                "answer y0 ==> y0 -(tau)-> y0",
                "continue with [x2, y0]",
                "challenge y0 -a-> y1",
            ]
        );
        assert_eq!(s.status(), SessionStatus::SpoilerWon);
        assert_eq!(s.rounds(), 2);
        assert!(s.legal_moves().unwrap().is_empty());
        assert_eq!(s.proof().unwrap().depth(), 2);
        assert_eq!(s.play(0), Err(SessionError::Finished));
    }

    #[test]
    fn deadlock_start_flagged_for_human_spoiler() {
        let s = session(fixtures::fig1(), GameKind::Strong, Player::Spoiler, "x3", "y2");
        assert!(!s.start_in_spoiler_region());
        assert_eq!(s.status(), SessionStatus::DuplicatorWon);
    }

    #[test]
    fn fig1_engine_spoiler_always_wins_within_rank() {
        let s = session(fixtures::fig1(), GameKind::Strong, Player::Duplicator, "x0", "y0");
        assert!(s.start_in_spoiler_region());
        let rank = s.solution().rank(s.start()).unwrap();
        assert_eq!(rank, 2);
        for end in all_endings(s) {
            assert_eq!(end.status(), SessionStatus::SpoilerWon);
            assert!(end.rounds() <= rank);
        }
    }

    #[test]
    fn human_spoiler_at_fig1_root_has_three_moves() {
        let s = session(fixtures::fig1(), GameKind::Strong, Player::Spoiler, "x0", "y0");
        assert_eq!(s.legal_moves().unwrap().len(), 3);
    }

    #[test]
    fn vacuous_challenge_wins_immediately() {
        let mut s = session(fixtures::fig1(), GameKind::Strong, Player::Spoiler, "y1", "x1");
        let moves = s.legal_moves().unwrap();
        let c = moves.iter().find(|m| m.description == "challenge y1 -c-> y3").unwrap();
        s.play(c.index).unwrap();
        assert_eq!(s.status(), SessionStatus::SpoilerWon);
        assert_eq!(s.end_reason(), Some(EndReason::Stuck));
    }

    #[test]
    fn human_duplicator_in_safe_region_never_loses_by_engine_play() {
        // x3 and y2 are both deadlocked; use a pair with moves that is bisimilar
        let mut b = LtsBuilder::new();
        b.transition("p", "a", "p").transition("q", "a", "r").transition("r", "a", "q");
        let lts = b.build().unwrap();
        let s = session(lts, GameKind::Strong, Player::Duplicator, "p", "q");
        assert!(!s.start_in_spoiler_region());
        for end in all_endings(s) {
            assert_eq!(end.status(), SessionStatus::DuplicatorWon);
            assert!(end.rounds() <= end.game().len() + 1);
        }
    }

    #[test]
    fn silent_loop_repetition_declares_duplicator_win() {
        let mut b = LtsBuilder::new();
        b.silent("tau");
        b.transition("a", "tau", "b").transition("b", "tau", "a");
        let lts = b.build().unwrap();
        let mut s = session(lts, GameKind::Strong, Player::Duplicator, "a", "b");
        while s.status() == SessionStatus::InProgress {
            s.play(0).unwrap();
        }
        assert_eq!(s.status(), SessionStatus::DuplicatorWon);
        assert_eq!(s.end_reason(), Some(EndReason::Repetition));
    }

    #[test]
    fn human_spoiler_round_limit() {
        let mut b = LtsBuilder::new();
        b.transition("p", "a", "p").transition("q", "a", "q");
        let lts = b.build().unwrap();
        let mut s = session(lts, GameKind::Strong, Player::Spoiler, "p", "q");
        while s.status() == SessionStatus::InProgress {
            s.play(0).unwrap();
        }
        assert_eq!(s.end_reason(), Some(EndReason::RoundLimit));
        assert_eq!(s.status(), SessionStatus::DuplicatorWon);
    }

    #[test]
    fn errors() {
        let mut s = session(fixtures::fig1(), GameKind::Strong, Player::Spoiler, "x0", "y0");
        assert_eq!(s.play(9), Err(SessionError::InvalidMove { index: 9, available: 3 }));
        let lts = Arc::new(fixtures::fig1());
        assert!(matches!(
            Session::new(lts, GameKind::Strong, Player::Spoiler, StateId(0), StateId(77)),
            Err(SessionError::Lts(_))
        ));
    }
}
