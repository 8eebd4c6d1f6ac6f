//! Reading and writing the Aldebaran `.aut` format.
//!
//! ```text
//! des (0,2,3)
//! #name 0 x0
//! (0,"a",1)
//! (0,a,2)
//! ```
//!
//! `#name <index> <name>` lines give states display names; any other line
//! starting with `#` is ignored. Labels spelled as one of the configured
//! silent names become the silent action.

use std::fmt::Write as _;

use crate::error::AutError;
use crate::lts::{LabelId, Lts, StateId, Transition};

/// Parser settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutOptions {
    /// Label spellings treated as the silent action.
    pub tau_names: Vec<String>,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions { tau_names: vec!["tau".to_string(), "i".to_string()] }
    }
}

impl AutOptions {
    pub fn with_tau(name: &str) -> Self {
        AutOptions { tau_names: vec![name.to_string()] }
    }
}

pub fn parse_aut(text: &str) -> Result<Lts, AutError> {
    parse_aut_with(text, &AutOptions::default())
}

pub fn parse_aut_with(text: &str, options: &AutOptions) -> Result<Lts, AutError> {
    let mut header: Option<(usize, usize, usize, usize)> = None; // initial, m, n, line
    let mut names: Vec<(usize, usize, String)> = Vec::new(); // line, index, name
    let mut raw: Vec<(usize, usize, String, usize)> = Vec::new();
    let mut last_line = 0;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(rest) = rest.strip_prefix("name") {
                if rest.starts_with(char::is_whitespace) {
                    let mut parts = rest.split_whitespace();
                    let index = parts.next().and_then(|p| p.parse::<usize>().ok());
                    let name = parts.next();
                    match (index, name, parts.next()) {
                        (Some(index), Some(name), None) => names.push((lineno, index, name.to_string())),
                        _ => return Err(AutError::MalformedName { line: lineno }),
                    }
                }
            }
            continue;
        }
        if header.is_none() {
            let (init, m, n) = parse_header(line).ok_or(AutError::MalformedHeader { line: lineno })?;
            header = Some((init, m, n, lineno));
            continue;
        }
        let (src, label, dst) = parse_transition(line, lineno)?;
        raw.push((src, lineno, label, dst));
    }

    let (initial, declared, n, header_line) = header.ok_or(AutError::MissingHeader)?;
    if n == 0 || initial >= n {
        return Err(AutError::StateOutOfRange { line: header_line, index: initial, states: n });
    }
    if raw.len() != declared {
        return Err(AutError::TransitionCount { line: last_line, expected: declared, found: raw.len() });
    }

    let mut state_names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    for (line, index, name) in names {
        if index >= n {
            return Err(AutError::StateOutOfRange { line, index, states: n });
        }
        state_names[index] = name;
    }

    let mut label_names: Vec<String> = Vec::new();
    let mut tau: Option<LabelId> = None;
    let mut transitions = Vec::with_capacity(raw.len());
    for (src, line, label, dst) in raw {
        for index in [src, dst] {
            if index >= n {
                return Err(AutError::StateOutOfRange { line, index, states: n });
            }
        }
        let label = if options.tau_names.contains(&label) {
            *tau.get_or_insert_with(|| {
                label_names.push(label.clone());
                LabelId(label_names.len() - 1)
            })
        } else {
            match label_names.iter().position(|l| *l == label) {
                Some(p) if Some(LabelId(p)) != tau => LabelId(p),
                _ => {
                    label_names.push(label);
                    LabelId(label_names.len() - 1)
                }
            }
        };
        transitions.push(Transition { source: StateId(src), label, target: StateId(dst) });
    }

    Lts::from_parts(state_names, label_names, tau, Some(StateId(initial)), transitions)
        .map_err(|source| AutError::Invalid { line: header_line, source })
}

fn parse_header(line: &str) -> Option<(usize, usize, usize)> {
    let rest = line.strip_prefix("des")?.trim_start();
    let inner = rest.strip_prefix('(')?.trim_end().strip_suffix(')')?;
    let mut parts = inner.split(',').map(|p| p.trim().parse::<usize>());
    let init = parts.next()?.ok()?;
    let m = parts.next()?.ok()?;
    let n = parts.next()?.ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((init, m, n))
}

fn parse_transition(line: &str, lineno: usize) -> Result<(usize, String, usize), AutError> {
    let malformed = || AutError::MalformedTransition { line: lineno, text: line.to_string() };
    let inner = line.strip_prefix('(').ok_or_else(malformed)?;
    let (src, rest) = inner.split_once(',').ok_or_else(malformed)?;
    let src = src.trim().parse::<usize>().map_err(|_| malformed())?;
    let rest = rest.trim_start();

    let (label, rest) = if let Some(quoted) = rest.strip_prefix('"') {
        let end = quoted.find('"').ok_or(AutError::UnterminatedLabel { line: lineno })?;
        let after = quoted[end + 1..].trim_start().strip_prefix(',').ok_or_else(malformed)?;
        (quoted[..end].to_string(), after)
    } else {
        let (label, after) = rest.rsplit_once(',').ok_or_else(malformed)?;
        let label = label.trim();
        if label.is_empty() {
            return Err(malformed());
        }
        (label.to_string(), after)
    };

    let dst = rest.trim_end().strip_suffix(')').ok_or_else(malformed)?;
    let dst = dst.trim().parse::<usize>().map_err(|_| malformed())?;
    Ok((src, label, dst))
}

/// Serialises `lts`; states whose name is not the default `s<index>` get a
/// `#name` line so that parsing the output reproduces `lts` exactly.
pub fn write_aut(lts: &Lts) -> String {
    let mut out = String::new();
    let initial = lts.initial().map_or(0, StateId::index);
    for s in lts.states() {
        let name = lts.state_name(s);
        if name != format!("s{}", s.0) {
            writeln!(out, "#name {} {}", s.0, name).unwrap();
        }
    }
    writeln!(out, "des ({},{},{})", initial, lts.transitions().len(), lts.num_states()).unwrap();
    for t in lts.transitions() {
        writeln!(out, "({},\"{}\",{})", t.source.0, lts.label_name(t.label), t.target.0).unwrap();
    }
    out
}
