//! Text and DOT renderings of games, proofs and sessions.

use std::fmt::Write;

use apart_core::{ApartnessProof, ConfigId, Disjunct, GameGraph, Lts, Player, Reply, Session, StateId};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn shape(owner: Player) -> &'static str {
    match owner {
        Player::Spoiler => "box",
        Player::Duplicator => "diamond",
    }
}

/// The whole game graph. Spoiler configurations are boxes, Duplicator
/// configurations diamonds; edges carry the move tag.
pub fn game_dot(lts: &Lts, game: &GameGraph) -> String {
    let mut out = String::from("digraph game {\n");
    for c in game.ids() {
        let label = game.config(c).describe(lts);
        writeln!(out, "  c{} [shape={}, label={}];", c.0, shape(game.owner(c)), quote(&label)).unwrap();
    }
    for c in game.ids() {
        for m in game.moves(c) {
            writeln!(out, "  c{} -> c{} [label={}];", c.0, m.target.0, quote(m.kind.tag())).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// The part of a session's game visited so far, with the current
/// configuration drawn bold and Spoiler-won configurations shaded.
pub fn session_dot(session: &Session) -> String {
    let game = session.game();
    let lts = session.lts();
    let sol = session.solution();
    let mut out = String::from("digraph session {\n");
    for c in session.explored() {
        let mut attrs = format!("shape={}, label={}", shape(game.owner(c)), quote(&game.config(c).describe(lts)));
        if sol.spoiler_wins(c) {
            attrs.push_str(", style=filled, fillcolor=\"#f4cccc\"");
        }
        if c == session.current() {
            attrs.push_str(", penwidth=3");
        }
        writeln!(out, "  c{} [{attrs}];", c.0).unwrap();
    }
    let mut edges: Vec<(ConfigId, ConfigId, &str)> =
        session.history().iter().map(|h| (h.from, h.to, h.kind.tag())).collect();
    edges.sort();
    edges.dedup();
    for (from, to, tag) in edges {
        writeln!(out, "  c{} -> c{} [label={}];", from.0, to.0, quote(tag)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// A proof tree, one node per rule or symmetry step.
pub fn proof_dot(lts: &Lts, proof: &ApartnessProof) -> String {
    let mut out = String::from("digraph proof {\n  node [shape=box];\n");
    let mut next = 0;
    proof_node(lts, proof, &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn proof_node(lts: &Lts, node: &ApartnessProof, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    let name = |s: StateId| lts.state_name(s);
    match node {
        ApartnessProof::Sym { left, right, child } => {
            let label = format!("{} # {}\nsym", name(*left), name(*right));
            writeln!(out, "  p{id} [label={}, style=dashed];", quote(&label)).unwrap();
            let c = proof_node(lts, child, next, out);
            writeln!(out, "  p{id} -> p{c};").unwrap();
        }
        ApartnessProof::Rule { left, right, label, target, subgoals } => {
            let l = lts.label_name(*label);
            let text = format!("{} # {}\n{} -{l}-> {}", name(*left), name(*right), name(*left), name(*target));
            writeln!(out, "  p{id} [label={}];", quote(&text)).unwrap();
            for g in subgoals {
                let edge = match g.reply {
                    Reply::Strong { target } => name(target).to_string(),
                    Reply::Branching { pivot, target } => {
                        let side = match g.disjunct {
                            Some(Disjunct::Pivot) => "pivot",
                            _ => "target",
                        };
                        format!("{} / {} ({side})", name(pivot), name(target))
                    }
                };
                let c = proof_node(lts, &g.proof, next, out);
                writeln!(out, "  p{id} -> p{c} [label={}];", quote(&edge)).unwrap();
            }
        }
    }
    id
}

/// Indented plain-text rendering.
pub fn proof_text(lts: &Lts, proof: &ApartnessProof) -> String {
    let mut out = String::new();
    text_node(lts, proof, 0, &mut out);
    out
}

fn text_node(lts: &Lts, node: &ApartnessProof, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let name = |s: StateId| lts.state_name(s);
    match node {
        ApartnessProof::Sym { left, right, child } => {
            writeln!(out, "{pad}{} # {}  by symmetry", name(*left), name(*right)).unwrap();
            text_node(lts, child, indent + 1, out);
        }
        ApartnessProof::Rule { left, right, label, target, subgoals } => {
            let label = lts.label_name(*label);
            write!(out, "{pad}{} # {}  by {} -{label}-> {}", name(*left), name(*right), name(*left), name(*target))
                .unwrap();
            if subgoals.is_empty() {
                write!(out, ", no answer from {}", name(*right)).unwrap();
            }
            out.push('\n');
            for g in subgoals {
                match g.reply {
                    Reply::Strong { target: t } => {
                        writeln!(out, "{pad}  answer {} -{label}-> {}:", name(*right), name(t)).unwrap()
                    }
                    Reply::Branching { pivot, target: t } => {
                        let side = match g.disjunct {
                            Some(Disjunct::Pivot) => "left disjunct",
                            _ => "right disjunct",
                        };
                        writeln!(
                            out,
                            "{pad}  answer {} ==> {} -({label})-> {} ({side}):",
                            name(*right),
                            name(pivot),
                            name(t)
                        )
                        .unwrap()
                    }
                }
                text_node(lts, &g.proof, indent + 2, out);
            }
        }
    }
}
