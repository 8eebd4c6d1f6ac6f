//! Apartness proofs: derivation trees over the challenge rule.
//!
//! A [`ApartnessProof::Rule`] node concludes `left # right` from a transition
//! `left --label--> target` and one subproof for every answer `right` can
//! give. A [`ApartnessProof::Sym`] node flips a conclusion. Proofs can be
//! built from apartness levels or read off a Spoiler strategy, and turned
//! back into a strategy.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::ProofError;
use crate::game::{ConfigId, GameConfig, GameGraph, GameKind, Player};
use crate::lts::{LabelId, Lts, StateId};
use crate::relation::{apartness, Relation, RelationWithLevels};
use crate::solver::{Solution, Strategy};

/// Which half of a branching answer a subproof refutes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Disjunct {
    /// The challenger's source is apart from the answer's pivot.
    Pivot,
    /// The challenger's target is apart from the answer's final state.
    Target,
}

/// One answer of the responding state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reply {
    /// `responder --label--> target`.
    Strong { target: StateId },
    /// `responder ==> pivot --(label)--> target`.
    Branching { pivot: StateId, target: StateId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgoal {
    pub reply: Reply,
    /// Set exactly for branching answers.
    pub disjunct: Option<Disjunct>,
    pub proof: ApartnessProof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ApartnessProof {
    Rule { left: StateId, right: StateId, label: LabelId, target: StateId, subgoals: Vec<Subgoal> },
    Sym { left: StateId, right: StateId, child: Box<ApartnessProof> },
}

impl ApartnessProof {
    /// The pair this node proves apart.
    pub fn conclusion(&self) -> (StateId, StateId) {
        match *self {
            ApartnessProof::Rule { left, right, .. } | ApartnessProof::Sym { left, right, .. } => (left, right),
        }
    }

    /// Number of rule applications on the longest branch.
    pub fn depth(&self) -> usize {
        match self {
            ApartnessProof::Rule { subgoals, .. } => 1 + subgoals.iter().map(|g| g.proof.depth()).max().unwrap_or(0),
            ApartnessProof::Sym { child, .. } => child.depth(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            ApartnessProof::Rule { subgoals, .. } => 1 + subgoals.iter().map(|g| g.proof.node_count()).sum::<usize>(),
            ApartnessProof::Sym { child, .. } => 1 + child.node_count(),
        }
    }

    pub fn sym_count(&self) -> usize {
        match self {
            ApartnessProof::Rule { subgoals, .. } => subgoals.iter().map(|g| g.proof.sym_count()).sum(),
            ApartnessProof::Sym { child, .. } => 1 + child.sym_count(),
        }
    }
}

/// Builds a proof of minimal depth that `x` and `y` are apart.
pub fn build_proof(lts: &Lts, kind: GameKind, x: StateId, y: StateId) -> Result<ApartnessProof, ProofError> {
    build_proof_with(lts, &apartness(lts, kind), x, y)
}

/// As [`build_proof`], reusing already computed levels.
///
/// Every subproof concludes a pair of strictly smaller level, so the depth
/// of the result equals the level of `(x, y)`.
pub fn build_proof_with(
    lts: &Lts,
    levels: &RelationWithLevels,
    x: StateId,
    y: StateId,
) -> Result<ApartnessProof, ProofError> {
    for s in [x, y] {
        if s.0 >= lts.num_states() {
            return Err(crate::error::LtsError::UnknownState(format!("#{}", s.0)).into());
        }
    }
    if !levels.contains(x, y) {
        return Err(ProofError::NotApart(lts.state_name(x).to_string(), lts.state_name(y).to_string()));
    }
    Ok(descend(lts, levels, x, y))
}

fn descend(lts: &Lts, levels: &RelationWithLevels, x: StateId, y: StateId) -> ApartnessProof {
    let n = levels.level(x, y).expect("descending into an apart pair");
    if let Some(rule) = rule_below(lts, levels, x, y, n) {
        return rule;
    }
    let rule = rule_below(lts, levels, y, x, n).expect("an apart pair has a level-decreasing challenge");
    ApartnessProof::Sym { left: x, right: y, child: Box::new(rule) }
}

/// A rule application at `(x, y)` whose subgoals all have level below `n`.
fn rule_below(lts: &Lts, levels: &RelationWithLevels, x: StateId, y: StateId, n: usize) -> Option<ApartnessProof> {
    let below = |a: StateId, b: StateId| levels.level(a, b).filter(|&l| l < n);
    'challenges: for &(label, target) in lts.outgoing(x) {
        let mut plan: Vec<(Reply, Option<Disjunct>, StateId, StateId)> = Vec::new();
        match levels.kind {
            GameKind::Strong => {
                for reply in lts.successors_unchecked(y, label) {
                    if below(target, reply).is_none() {
                        continue 'challenges;
                    }
                    plan.push((Reply::Strong { target: reply }, None, target, reply));
                }
            }
            GameKind::Branching => {
                for (pivot, reply) in lts.branching_answers_unchecked(y, label) {
                    let choice = match (below(x, pivot), below(target, reply)) {
                        (Some(p), Some(t)) if t < p => (Disjunct::Target, target, reply),
                        (Some(_), _) => (Disjunct::Pivot, x, pivot),
                        (None, Some(_)) => (Disjunct::Target, target, reply),
                        (None, None) => continue 'challenges,
                    };
                    plan.push((Reply::Branching { pivot, target: reply }, Some(choice.0), choice.1, choice.2));
                }
            }
        }
        let subgoals = plan
            .into_iter()
            .map(|(reply, disjunct, a, b)| Subgoal { reply, disjunct, proof: descend(lts, levels, a, b) })
            .collect();
        return Some(ApartnessProof::Rule { left: x, right: y, label, target, subgoals });
    }
    None
}

/// Reads a proof off Spoiler's strategy in `sol`, starting at the pair `root`.
///
/// The depth of the proof equals the rank of `root`.
pub fn strategy_to_proof(game: &GameGraph, sol: &Solution, root: ConfigId) -> Result<ApartnessProof, ProofError> {
    if root.0 >= game.len() {
        return Err(ProofError::Mismatch(format!("configuration {root:?} not in game")));
    }
    if game.config(root).as_pair().is_none() || !sol.spoiler_wins(root) {
        return Err(ProofError::NotWinning(format!("{:?}", game.config(root))));
    }
    Ok(proof_from_pair(game, sol, root))
}

fn proof_from_pair(game: &GameGraph, sol: &Solution, pair: ConfigId) -> ApartnessProof {
    let (x, y) = game.config(pair).as_pair().expect("pair configuration");
    let challenge = sol.spoiler_strategy.get(pair).expect("strategy covers Spoiler's region");
    let GameConfig::Challenge { challenger, label, target, responder } = *game.config(challenge) else {
        unreachable!("challenge move leads to a challenge configuration")
    };
    let subgoals = game
        .moves(challenge)
        .iter()
        .map(|m| match *game.config(m.target) {
            GameConfig::Pair { right: reply, .. } => Subgoal {
                reply: Reply::Strong { target: reply },
                disjunct: None,
                proof: proof_from_pair(game, sol, m.target),
            },
            GameConfig::Split { pivot, reply, .. } => {
                let side = sol.spoiler_strategy.get(m.target).expect("strategy covers split configurations");
                let disjunct = if *game.config(side) == GameConfig::pair(challenger, pivot) {
                    Disjunct::Pivot
                } else {
                    Disjunct::Target
                };
                Subgoal {
                    reply: Reply::Branching { pivot, target: reply },
                    disjunct: Some(disjunct),
                    proof: proof_from_pair(game, sol, side),
                }
            }
            GameConfig::Challenge { .. } => unreachable!("reply leads to a Spoiler configuration"),
        })
        .collect();
    let rule = ApartnessProof::Rule { left: challenger, right: responder, label, target, subgoals };
    if challenger == x && responder == y {
        rule
    } else {
        ApartnessProof::Sym { left: x, right: y, child: Box::new(rule) }
    }
}

/// Turns a proof into a positional Spoiler strategy in `game`.
///
/// When the same configuration is reached from several branches, the move
/// from the shallowest subproof is kept, so remaining depth still decreases
/// along every play.
pub fn proof_to_strategy(proof: &ApartnessProof, game: &GameGraph) -> Result<Strategy, ProofError> {
    let mut chosen: BTreeMap<ConfigId, (ConfigId, usize)> = BTreeMap::new();
    assign_node(proof, game, &mut chosen)?;
    let mut strategy = Strategy::new(Player::Spoiler);
    for (c, (target, _)) in chosen {
        strategy.set(c, target);
    }
    Ok(strategy)
}

fn lookup(game: &GameGraph, config: GameConfig) -> Result<ConfigId, ProofError> {
    game.lookup(&config).ok_or_else(|| ProofError::Mismatch(format!("{config:?} does not occur in the game")))
}

fn assign(
    game: &GameGraph,
    chosen: &mut BTreeMap<ConfigId, (ConfigId, usize)>,
    at: ConfigId,
    target: ConfigId,
    depth: usize,
) -> Result<(), ProofError> {
    if !game.moves(at).iter().any(|m| m.target == target) {
        return Err(ProofError::Mismatch(format!(
            "{:?} is not a move from {:?}",
            game.config(target),
            game.config(at)
        )));
    }
    match chosen.get(&at) {
        Some(&(_, d)) if d <= depth => {}
        _ => {
            chosen.insert(at, (target, depth));
        }
    }
    Ok(())
}

fn assign_node(
    node: &ApartnessProof,
    game: &GameGraph,
    chosen: &mut BTreeMap<ConfigId, (ConfigId, usize)>,
) -> Result<(), ProofError> {
    let (left, right) = node.conclusion();
    let pair = lookup(game, GameConfig::pair(left, right))?;
    let rule = match node {
        ApartnessProof::Sym { child, .. } => {
            if child.conclusion() != (right, left) {
                return Err(ProofError::Mismatch("symmetry step does not flip its pair".into()));
            }
            child.as_ref()
        }
        rule => rule,
    };
    let ApartnessProof::Rule { left: challenger, right: responder, label, target, subgoals } = rule else {
        return Err(ProofError::Mismatch("nested symmetry steps".into()));
    };
    let (challenger, responder, label, target) = (*challenger, *responder, *label, *target);
    let challenge = lookup(game, GameConfig::Challenge { challenger, label, target, responder })?;
    assign(game, chosen, pair, challenge, rule.depth())?;

    for goal in subgoals {
        match (game.kind(), goal.reply, goal.disjunct) {
            (GameKind::Strong, Reply::Strong { target: reply }, None) => {
                if goal.proof.conclusion() != (target, reply) {
                    return Err(ProofError::Mismatch("subproof does not match its answer".into()));
                }
            }
            (GameKind::Branching, Reply::Branching { pivot, target: reply }, Some(disjunct)) => {
                let split = lookup(game, GameConfig::Split { challenger, target, responder, pivot, reply })?;
                let side = match disjunct {
                    Disjunct::Pivot => GameConfig::pair(challenger, pivot),
                    Disjunct::Target => GameConfig::pair(target, reply),
                };
                if goal.proof.conclusion() != side.as_pair().unwrap() {
                    return Err(ProofError::Mismatch("subproof does not match its disjunct".into()));
                }
                let side = lookup(game, side)?;
                assign(game, chosen, split, side, goal.proof.depth())?;
            }
            _ => return Err(ProofError::Mismatch(format!("answer does not fit a {} game", game.kind()))),
        }
        assign_node(&goal.proof, game, chosen)?;
    }
    Ok(())
}

/// Outcome of [`check_proof`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub valid: bool,
    /// `(path, reason)`; paths look like `root/2/sym`.
    pub failures: Vec<(String, String)>,
}

/// Checks every node of `proof` against the rule of the given kind.
pub fn check_proof(lts: &Lts, kind: GameKind, proof: &ApartnessProof) -> CheckResult {
    let mut failures = Vec::new();
    check_node(lts, kind, proof, "root".to_string(), &mut failures);
    CheckResult { valid: failures.is_empty(), failures }
}

fn check_node(lts: &Lts, kind: GameKind, node: &ApartnessProof, path: String, failures: &mut Vec<(String, String)>) {
    let name = |s: StateId| {
        if s.0 < lts.num_states() {
            lts.state_name(s).to_string()
        } else {
            format!("#{}", s.0)
        }
    };
    match node {
        ApartnessProof::Sym { left, right, child } => {
            if matches!(**child, ApartnessProof::Sym { .. }) {
                failures.push((path.clone(), "symmetry step directly below a symmetry step".into()));
            }
            if child.conclusion() != (*right, *left) {
                let (a, b) = child.conclusion();
                failures.push((
                    path.clone(),
                    format!(
                        "symmetry step for ({}, {}) has a subproof of ({}, {})",
                        name(*left),
                        name(*right),
                        name(a),
                        name(b)
                    ),
                ));
            }
            check_node(lts, kind, child, format!("{path}/sym"), failures);
        }
        ApartnessProof::Rule { left, right, label, target, subgoals } => {
            let (left, right, label, target) = (*left, *right, *label, *target);
            let label_ok = label.0 < lts.num_labels();
            let label_name = if label_ok { lts.label_name(label).to_string() } else { format!("#{}", label.0) };
            match lts.successors(left, label) {
                Ok(targets) if targets.contains(&target) => {}
                Ok(_) => failures
                    .push((path.clone(), format!("no transition {} -{}-> {}", name(left), label_name, name(target)))),
                Err(e) => {
                    failures.push((path.clone(), e.to_string()));
                    return;
                }
            }
            let expected: Vec<Reply> = match (kind, lts.successors(right, label)) {
                (_, Err(e)) => {
                    failures.push((path.clone(), e.to_string()));
                    return;
                }
                (GameKind::Strong, Ok(replies)) => replies.into_iter().map(|t| Reply::Strong { target: t }).collect(),
                (GameKind::Branching, Ok(_)) => lts
                    .branching_answers_unchecked(right, label)
                    .into_iter()
                    .map(|(pivot, target)| Reply::Branching { pivot, target })
                    .collect(),
            };
            let describe = |r: &Reply| match *r {
                Reply::Strong { target } => name(target),
                Reply::Branching { pivot, target } => format!("({}, {})", name(pivot), name(target)),
            };

            let mut covered = Vec::new();
            for (i, goal) in subgoals.iter().enumerate() {
                let here = format!("{path}/{i}");
                if !expected.contains(&goal.reply) {
                    failures.push((here.clone(), format!("unexpected Duplicator answer {}", describe(&goal.reply))));
                } else if covered.contains(&goal.reply) {
                    failures.push((here.clone(), format!("Duplicator answer {} covered twice", describe(&goal.reply))));
                }
                covered.push(goal.reply);

                let required = match (goal.reply, goal.disjunct) {
                    (Reply::Strong { target: reply }, None) => Some((target, reply)),
                    (Reply::Branching { pivot, .. }, Some(Disjunct::Pivot)) => Some((left, pivot)),
                    (Reply::Branching { target: reply, .. }, Some(Disjunct::Target)) => Some((target, reply)),
                    (Reply::Strong { .. }, Some(_)) => {
                        failures.push((here.clone(), "disjunct recorded for a strong answer".into()));
                        None
                    }
                    (Reply::Branching { .. }, None) => {
                        failures.push((here.clone(), "no disjunct recorded for a branching answer".into()));
                        None
                    }
                };
                if let Some((a, b)) = required {
                    let (c, d) = goal.proof.conclusion();
                    if (c, d) != (a, b) {
                        failures.push((
                            here.clone(),
                            format!(
                                "subproof concludes ({}, {}) but the answer requires ({}, {})",
                                name(c),
                                name(d),
                                name(a),
                                name(b)
                            ),
                        ));
                    }
                }
                check_node(lts, kind, &goal.proof, here, failures);
            }
            for reply in &expected {
                if !covered.contains(reply) {
                    failures.push((path.clone(), format!("missing Duplicator answer {}", describe(reply))));
                }
            }
        }
    }
}

/// A bisimulation containing the pair `root`, read off Duplicator's strategy:
/// all pairs reachable from `root` when Duplicator plays her strategy,
/// closed under symmetry.
pub fn bisimulation_witness(
    game: &GameGraph,
    sol: &Solution,
    root: ConfigId,
    num_states: usize,
) -> Result<Relation, ProofError> {
    if root.0 >= game.len() || game.config(root).as_pair().is_none() {
        return Err(ProofError::Mismatch(format!("{root:?} is not a pair of this game")));
    }
    if sol.spoiler_wins(root) {
        return Err(ProofError::Mismatch(format!("{:?} is winning for Spoiler", game.config(root))));
    }
    let mut pairs = Vec::new();
    let mut seen = vec![false; game.len()];
    let mut stack = vec![root];
    seen[root.0] = true;
    while let Some(c) = stack.pop() {
        if let Some(p) = game.config(c).as_pair() {
            pairs.push(p);
        }
        let next: Vec<ConfigId> = match game.owner(c) {
            Player::Spoiler => game.moves(c).iter().map(|m| m.target).collect(),
            Player::Duplicator => sol.duplicator_strategy.get(c).into_iter().collect(),
        };
        for t in next {
            if !seen[t.0] {
                seen[t.0] = true;
                stack.push(t);
            }
        }
    }
    Ok(Relation::from_pairs(game.kind(), num_states, pairs))
}

// JSON exchange format, using state and label names.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDocument {
    pub kind: GameKind,
    pub root: ProofNodeDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Rule,
    Sym,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChallengeDoc {
    pub source: String,
    pub label: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<String>,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNodeDoc {
    pub node: NodeKind,
    pub pair: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub challenge: Option<ChallengeDoc>,
    /// The answer this node refutes, when it is the subproof of a rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reply: Option<ReplyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disjunct: Option<Disjunct>,
    #[serde(default)]
    pub children: Vec<ProofNodeDoc>,
}

impl ProofDocument {
    pub fn new(lts: &Lts, kind: GameKind, proof: &ApartnessProof) -> Self {
        ProofDocument { kind, root: node_doc(lts, proof, None, None) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proof documents serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, ProofError> {
        serde_json::from_str(text).map_err(|e| ProofError::Document(e.to_string()))
    }

    /// Resolves names against `lts`.
    pub fn to_proof(&self, lts: &Lts) -> Result<ApartnessProof, ProofError> {
        node_from_doc(lts, &self.root)
    }
}

fn node_doc(lts: &Lts, node: &ApartnessProof, reply: Option<ReplyDoc>, disjunct: Option<Disjunct>) -> ProofNodeDoc {
    let name = |s: StateId| lts.state_name(s).to_string();
    match node {
        ApartnessProof::Sym { left, right, child } => ProofNodeDoc {
            node: NodeKind::Sym,
            pair: [name(*left), name(*right)],
            challenge: None,
            reply,
            disjunct,
            children: vec![node_doc(lts, child, None, None)],
        },
        ApartnessProof::Rule { left, right, label, target, subgoals } => ProofNodeDoc {
            node: NodeKind::Rule,
            pair: [name(*left), name(*right)],
            challenge: Some(ChallengeDoc {
                source: name(*left),
                label: lts.label_name(*label).to_string(),
                target: name(*target),
            }),
            reply,
            disjunct,
            children: subgoals
                .iter()
                .map(|g| {
                    let reply = match g.reply {
                        Reply::Strong { target } => ReplyDoc { pivot: None, target: name(target) },
                        Reply::Branching { pivot, target } => {
                            ReplyDoc { pivot: Some(name(pivot)), target: name(target) }
                        }
                    };
                    node_doc(lts, &g.proof, Some(reply), g.disjunct)
                })
                .collect(),
        },
    }
}

fn node_from_doc(lts: &Lts, doc: &ProofNodeDoc) -> Result<ApartnessProof, ProofError> {
    let state = |n: &str| lts.state_by_name(n).ok_or_else(|| ProofError::Document(format!("unknown state `{n}`")));
    let left = state(&doc.pair[0])?;
    let right = state(&doc.pair[1])?;
    match doc.node {
        NodeKind::Sym => {
            let [child] = doc.children.as_slice() else {
                return Err(ProofError::Document("a symmetry node has exactly one child".into()));
            };
            Ok(ApartnessProof::Sym { left, right, child: Box::new(node_from_doc(lts, child)?) })
        }
        NodeKind::Rule => {
            let challenge =
                doc.challenge.as_ref().ok_or_else(|| ProofError::Document("rule node without challenge".into()))?;
            if state(&challenge.source)? != left {
                return Err(ProofError::Document("challenge source differs from the left state".into()));
            }
            let label = lts
                .label_by_name(&challenge.label)
                .ok_or_else(|| ProofError::Document(format!("unknown label `{}`", challenge.label)))?;
            let target = state(&challenge.target)?;
            let mut subgoals = Vec::with_capacity(doc.children.len());
            for child in &doc.children {
                let r = child.reply.as_ref().ok_or_else(|| ProofError::Document("subproof without reply".into()))?;
                let reply = match &r.pivot {
                    None => Reply::Strong { target: state(&r.target)? },
                    Some(p) => Reply::Branching { pivot: state(p)?, target: state(&r.target)? },
                };
                subgoals.push(Subgoal { reply, disjunct: child.disjunct, proof: node_from_doc(lts, child)? });
            }
            Ok(ApartnessProof::Rule { left, right, label, target, subgoals })
        }
    }
}
