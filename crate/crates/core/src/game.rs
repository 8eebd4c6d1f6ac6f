//! Strong and branching bisimulation games as explicit configuration graphs.
//!
//! Spoiler owns state pairs and (branching only) five-state split
//! configurations; Duplicator owns challenges. Graphs are built as the
//! reachable closure of a set of root pairs.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::lts::{LabelId, Lts, StateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Strong,
    Branching,
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::Strong => "strong",
            GameKind::Branching => "branching",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Spoiler => Player::Duplicator,
            Player::Duplicator => Player::Spoiler,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Spoiler => "Spoiler",
            Player::Duplicator => "Duplicator",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigId(pub usize);

impl ConfigId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A node of the game graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameConfig {
    /// `[left, right]`, Spoiler to move.
    Pair { left: StateId, right: StateId },
    /// `<challenger, label, target, responder>`: Spoiler played
    /// `challenger --label--> target`, Duplicator must answer from `responder`.
    Challenge { challenger: StateId, label: LabelId, target: StateId, responder: StateId },
    /// `[challenger, target, responder, pivot, reply]` (branching only):
    /// Duplicator answered `responder ==> pivot --(label)--> reply`; Spoiler
    /// continues from `[challenger, pivot]` or `[target, reply]`.
    Split { challenger: StateId, target: StateId, responder: StateId, pivot: StateId, reply: StateId },
}

impl GameConfig {
    pub fn owner(&self) -> Player {
        match self {
            GameConfig::Pair { .. } | GameConfig::Split { .. } => Player::Spoiler,
            GameConfig::Challenge { .. } => Player::Duplicator,
        }
    }

    pub fn pair(left: StateId, right: StateId) -> Self {
        GameConfig::Pair { left, right }
    }

    pub fn as_pair(&self) -> Option<(StateId, StateId)> {
        match *self {
            GameConfig::Pair { left, right } => Some((left, right)),
            _ => None,
        }
    }

    /// Human-readable form using state and label names from `lts`.
    pub fn describe(&self, lts: &Lts) -> String {
        let s = |id| lts.state_name(id);
        match *self {
            GameConfig::Pair { left, right } => format!("[{}, {}]", s(left), s(right)),
            GameConfig::Challenge { challenger, label, target, responder } => {
                format!("<{}, {}, {}, {}>", s(challenger), lts.label_name(label), s(target), s(responder))
            }
            GameConfig::Split { challenger, target, responder, pivot, reply } => {
                format!("[{}, {}, {}, {}, {}]", s(challenger), s(target), s(responder), s(pivot), s(reply))
            }
        }
    }
}

/// Edge kinds. The strong game alternates `Challenge` and `Reply`; the
/// branching game cycles `BranchingChallenge`, `Reply`, `Split`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// Spoiler picks a transition (strong game).
    Challenge,
    /// Spoiler picks a transition (branching game).
    BranchingChallenge,
    /// Spoiler picks one side of a split configuration.
    Split,
    /// Duplicator answers a challenge.
    Reply,
}

impl MoveKind {
    /// Short notation used in renderings.
    pub fn tag(self) -> &'static str {
        match self {
            MoveKind::Challenge => "S",
            MoveKind::BranchingChallenge => "S1",
            MoveKind::Split => "S2",
            MoveKind::Reply => "D",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub kind: MoveKind,
    pub target: ConfigId,
}

#[derive(Clone, Debug)]
pub struct GameGraph {
    kind: GameKind,
    configs: Vec<GameConfig>,
    index: HashMap<GameConfig, ConfigId>,
    moves: Vec<Vec<Move>>,
    roots: Vec<ConfigId>,
}

impl GameGraph {
    /// A game with no configurations at all.
    pub fn empty(kind: GameKind) -> Self {
        GameGraph { kind, configs: Vec::new(), index: HashMap::new(), moves: Vec::new(), roots: Vec::new() }
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ConfigId> {
        (0..self.configs.len()).map(ConfigId)
    }

    pub fn config(&self, id: ConfigId) -> &GameConfig {
        &self.configs[id.0]
    }

    pub fn configs(&self) -> &[GameConfig] {
        &self.configs
    }

    pub fn owner(&self, id: ConfigId) -> Player {
        self.configs[id.0].owner()
    }

    pub fn lookup(&self, config: &GameConfig) -> Option<ConfigId> {
        self.index.get(config).copied()
    }

    pub fn pair(&self, left: StateId, right: StateId) -> Option<ConfigId> {
        self.lookup(&GameConfig::pair(left, right))
    }

    pub fn moves(&self, id: ConfigId) -> &[Move] {
        &self.moves[id.0]
    }

    pub fn roots(&self) -> &[ConfigId] {
        &self.roots
    }

    pub fn num_moves(&self) -> usize {
        self.moves.iter().map(Vec::len).sum()
    }

    /// Reverse adjacency: `predecessors()[c]` lists every config with a move into `c`.
    pub fn predecessors(&self) -> Vec<Vec<ConfigId>> {
        let mut preds = vec![Vec::new(); self.configs.len()];
        for (from, moves) in self.moves.iter().enumerate() {
            for m in moves {
                preds[m.target.0].push(ConfigId(from));
            }
        }
        preds
    }

    /// Configs reachable from `start` (inclusive).
    pub fn reachable_from(&self, start: ConfigId) -> BTreeSet<ConfigId> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for m in &self.moves[c.0] {
                if seen.insert(m.target) {
                    stack.push(m.target);
                }
            }
        }
        seen
    }

    /// Checks the structural typing of moves for this game kind.
    pub fn check_typing(&self) -> Result<(), String> {
        for id in self.ids() {
            let config = self.config(id);
            let moves = self.moves(id);
            if let GameConfig::Split { challenger, target, pivot, reply, .. } = *config {
                if self.kind != GameKind::Branching {
                    return Err(format!("split configuration {id:?} in a strong game"));
                }
                let expected: BTreeSet<GameConfig> =
                    [GameConfig::pair(challenger, pivot), GameConfig::pair(target, reply)].into();
                let actual: BTreeSet<GameConfig> = moves.iter().map(|m| *self.config(m.target)).collect();
                if actual != expected || moves.len() != expected.len() {
                    return Err(format!("split configuration {id:?} has moves {actual:?}, expected {expected:?}"));
                }
            }
            for m in moves {
                let target = self.config(m.target);
                use GameConfig::{Challenge, Pair, Split};
                use GameKind::{Branching, Strong};
                let ok = matches!(
                    (self.kind, m.kind, config, target),
                    (Strong, MoveKind::Challenge, Pair { .. }, Challenge { .. })
                        | (Strong, MoveKind::Reply, Challenge { .. }, Pair { .. })
                        | (Branching, MoveKind::BranchingChallenge, Pair { .. }, Challenge { .. })
                        | (Branching, MoveKind::Reply, Challenge { .. }, Split { .. })
                        | (Branching, MoveKind::Split, Split { .. }, Pair { .. })
                );
                if !ok {
                    return Err(format!("ill-typed {:?} move from {:?} to {:?}", m.kind, config, target));
                }
            }
        }
        Ok(())
    }
}

/// Every ordered pair of states.
pub fn all_pairs(lts: &Lts) -> Vec<(StateId, StateId)> {
    lts.states().flat_map(|x| lts.states().map(move |y| (x, y))).collect()
}

pub fn build_strong_game(lts: &Lts, roots: &[(StateId, StateId)]) -> Result<GameGraph, GameError> {
    build_game(lts, GameKind::Strong, roots)
}

pub fn build_branching_game(lts: &Lts, roots: &[(StateId, StateId)]) -> Result<GameGraph, GameError> {
    build_game(lts, GameKind::Branching, roots)
}

/// Builds the reachable part of the game of the given kind from `roots`.
///
/// Configurations are numbered in breadth-first order; moves out of a pair
/// list the left state's transitions before the right state's, each sorted
/// by label then target.
pub fn build_game(lts: &Lts, kind: GameKind, roots: &[(StateId, StateId)]) -> Result<GameGraph, GameError> {
    for &(x, y) in roots {
        for s in [x, y] {
            if s.0 >= lts.num_states() {
                return Err(crate::error::LtsError::UnknownState(format!("#{}", s.0)).into());
            }
        }
    }

    let mut game = GameGraph::empty(kind);
    let mut queue = VecDeque::new();
    let intern = |game: &mut GameGraph, queue: &mut VecDeque<ConfigId>, config: GameConfig| -> ConfigId {
        if let Some(&id) = game.index.get(&config) {
            return id;
        }
        let id = ConfigId(game.configs.len());
        game.configs.push(config);
        game.moves.push(Vec::new());
        game.index.insert(config, id);
        queue.push_back(id);
        id
    };

    for &(left, right) in roots {
        let id = intern(&mut game, &mut queue, GameConfig::pair(left, right));
        if !game.roots.contains(&id) {
            game.roots.push(id);
        }
    }

    let challenge_kind = match kind {
        GameKind::Strong => MoveKind::Challenge,
        GameKind::Branching => MoveKind::BranchingChallenge,
    };

    while let Some(id) = queue.pop_front() {
        let mut out: Vec<Move> = Vec::new();
        match game.configs[id.0] {
            GameConfig::Pair { left, right } => {
                for (challenger, responder) in [(left, right), (right, left)] {
                    for &(label, target) in lts.outgoing(challenger) {
                        let c = GameConfig::Challenge { challenger, label, target, responder };
                        let t = intern(&mut game, &mut queue, c);
                        out.push(Move { kind: challenge_kind, target: t });
                    }
                }
            }
            GameConfig::Challenge { challenger, label, target, responder } => match kind {
                GameKind::Strong => {
                    for reply in lts.successors_unchecked(responder, label) {
                        let t = intern(&mut game, &mut queue, GameConfig::pair(target, reply));
                        out.push(Move { kind: MoveKind::Reply, target: t });
                    }
                }
                GameKind::Branching => {
                    for (pivot, reply) in lts.branching_answers_unchecked(responder, label) {
                        let c = GameConfig::Split { challenger, target, responder, pivot, reply };
                        let t = intern(&mut game, &mut queue, c);
                        out.push(Move { kind: MoveKind::Reply, target: t });
                    }
                }
            },
            GameConfig::Split { challenger, target, pivot, reply, .. } => {
                let first = intern(&mut game, &mut queue, GameConfig::pair(challenger, pivot));
                out.push(Move { kind: MoveKind::Split, target: first });
                let second = intern(&mut game, &mut queue, GameConfig::pair(target, reply));
                if second != first {
                    out.push(Move { kind: MoveKind::Split, target: second });
                }
            }
        }
        // a pair [x, x] lists the same challenge twice, once per side
        let mut seen = BTreeSet::new();
        out.retain(|m| seen.insert(m.target));
        game.moves[id.0] = out;
    }

    Ok(game)
}
