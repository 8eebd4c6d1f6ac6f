//! Apartness and bisimilarity computed directly on the state space.
//!
//! Apartness is the least symmetric relation closed under the challenge rule
//! and is computed bottom-up in synchronous rounds, so each apart pair gets
//! the round in which it first appears. Bisimilarity is the greatest
//! symmetric relation satisfying the transfer condition, computed top-down.

use std::collections::BTreeSet;

use crate::game::GameKind;
use crate::lts::{LabelId, Lts, StateId};

/// A symmetric set of state pairs over `n` states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: GameKind,
    n: usize,
    related: Vec<bool>,
}

impl Relation {
    fn new(kind: GameKind, n: usize, all: bool) -> Self {
        Relation { kind, n, related: vec![all; n * n] }
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: StateId, y: StateId) -> bool {
        self.related[x.0 * self.n + y.0]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.related
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (StateId(i / self.n), StateId(i % self.n)))
    }

    pub fn len(&self) -> usize {
        self.related.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    /// Restricts the relation to an explicit set of pairs (plus their mirrors).
    pub fn from_pairs(kind: GameKind, n: usize, pairs: impl IntoIterator<Item = (StateId, StateId)>) -> Self {
        let mut r = Relation::new(kind, n, false);
        for (x, y) in pairs {
            r.related[x.0 * n + y.0] = true;
            r.related[y.0 * n + x.0] = true;
        }
        r
    }

    /// Equivalence classes, assuming the relation is an equivalence.
    pub fn classes(&self) -> Vec<Vec<StateId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for x in 0..self.n {
            if seen[x] {
                continue;
            }
            let class: Vec<StateId> =
                (0..self.n).filter(|&y| y == x || self.related[x * self.n + y]).map(StateId).collect();
            for s in &class {
                seen[s.0] = true;
            }
            out.push(class);
        }
        out
    }

    /// Checks that the relation is symmetric and satisfies the transfer
    /// condition of its kind, i.e. that it is a bisimulation.
    pub fn is_bisimulation(&self, lts: &Lts) -> bool {
        self.is_symmetric() && self.pairs().all(|(x, y)| transfers(lts, self.kind, x, y, |a, b| self.contains(a, b)))
    }
}

/// Apartness with the round in which each pair was derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWithLevels {
    pub kind: GameKind,
    n: usize,
    level: Vec<Option<usize>>,
}

impl RelationWithLevels {
    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: StateId, y: StateId) -> bool {
        self.level[x.0 * self.n + y.0].is_some()
    }

    /// The least round (from 1) in which `(x, y)` becomes apart.
    pub fn level(&self, x: StateId, y: StateId) -> Option<usize> {
        self.level[x.0 * self.n + y.0]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.level
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_some())
            .map(move |(i, _)| (StateId(i / self.n), StateId(i % self.n)))
    }

    pub fn len(&self) -> usize {
        self.level.iter().filter(|l| l.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_level(&self) -> usize {
        self.level.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Pairs with level at most `n`.
    pub fn up_to(&self, n: usize) -> BTreeSet<(StateId, StateId)> {
        self.pairs().filter(|&(x, y)| self.level(x, y).unwrap() <= n).collect()
    }

    /// The relation without levels.
    pub fn relation(&self) -> Relation {
        Relation { kind: self.kind, n: self.n, related: self.level.iter().map(Option::is_some).collect() }
    }
}

pub fn strong_apartness(lts: &Lts) -> RelationWithLevels {
    apartness(lts, GameKind::Strong)
}

pub fn branching_apartness(lts: &Lts) -> RelationWithLevels {
    apartness(lts, GameKind::Branching)
}

pub fn strong_bisimilarity(lts: &Lts) -> Relation {
    bisimilarity(lts, GameKind::Strong)
}

pub fn branching_bisimilarity(lts: &Lts) -> Relation {
    bisimilarity(lts, GameKind::Branching)
}

/// Does the challenge `x --label--> target` against `y` succeed, given the
/// apartness known so far? That is, is every answer of `y` refuted?
pub(crate) fn challenge_refutes(
    lts: &Lts,
    kind: GameKind,
    x: StateId,
    label: LabelId,
    target: StateId,
    y: StateId,
    apart: impl Fn(StateId, StateId) -> bool,
) -> bool {
    match kind {
        GameKind::Strong => lts.successors_unchecked(y, label).all(|reply| apart(target, reply)),
        GameKind::Branching => lts
            .branching_answers_unchecked(y, label)
            .into_iter()
            .all(|(pivot, reply)| apart(x, pivot) || apart(target, reply)),
    }
}

pub fn apartness(lts: &Lts, kind: GameKind) -> RelationWithLevels {
    let n = lts.num_states();
    let mut level: Vec<Option<usize>> = vec![None; n * n];
    let mut round = 0;
    loop {
        round += 1;
        let known = |a: StateId, b: StateId| level[a.0 * n + b.0].is_some();
        let mut fresh = Vec::new();
        for x in lts.states() {
            for y in lts.states() {
                if known(x, y) {
                    continue;
                }
                let fires = |from: StateId, against: StateId| {
                    lts.outgoing(from)
                        .iter()
                        .any(|&(label, target)| challenge_refutes(lts, kind, from, label, target, against, known))
                };
                if fires(x, y) || fires(y, x) {
                    fresh.push((x, y));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for (x, y) in fresh {
            level[x.0 * n + y.0] = Some(round);
        }
    }
    RelationWithLevels { kind, n, level }
}

/// One-directional transfer condition for `(x, y)` under `related`.
fn transfers(lts: &Lts, kind: GameKind, x: StateId, y: StateId, related: impl Fn(StateId, StateId) -> bool) -> bool {
    lts.outgoing(x).iter().all(|&(label, target)| match kind {
        GameKind::Strong => lts.successors_unchecked(y, label).any(|reply| related(target, reply)),
        GameKind::Branching => lts
            .branching_answers_unchecked(y, label)
            .into_iter()
            .any(|(pivot, reply)| related(x, pivot) && related(target, reply)),
    })
}

pub fn bisimilarity(lts: &Lts, kind: GameKind) -> Relation {
    let n = lts.num_states();
    let mut rel = Relation::new(kind, n, true);
    loop {
        let mut removed = Vec::new();
        for x in lts.states() {
            for y in lts.states() {
                if !rel.contains(x, y) {
                    continue;
                }
                let holds = |a, b| rel.contains(a, b);
                if !transfers(lts, kind, x, y, holds) || !transfers(lts, kind, y, x, holds) {
                    removed.push((x, y));
                }
            }
        }
        if removed.is_empty() {
            return rel;
        }
        for (x, y) in removed {
            rel.related[x.0 * n + y.0] = false;
        }
    }
}
