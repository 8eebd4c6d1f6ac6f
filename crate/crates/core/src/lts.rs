//! Finite labelled transition systems with an optional silent action.
//!
//! States and labels are dense indices into the [`Lts`]; display names are
//! kept alongside so that proofs and game descriptions stay readable.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::LtsError;

/// Index of a state in an [`Lts`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct StateId(pub usize);

/// Index of an action label in an [`Lts`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct LabelId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl LabelId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// A single transition `source --label--> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub label: LabelId,
    pub target: StateId,
}

/// A finite labelled transition system.
///
/// Values are immutable once built. The silent-step closure is computed on
/// demand per state and cached behind a [`OnceLock`], so an `Lts` can be
/// shared between threads.
#[derive(Clone, Debug)]
pub struct Lts {
    state_names: Vec<String>,
    label_names: Vec<String>,
    tau: Option<LabelId>,
    initial: Option<StateId>,
    transitions: Vec<Transition>,
    // outgoing[s] is sorted by (label, target)
    outgoing: Vec<Vec<(LabelId, StateId)>>,
    duplicates_dropped: usize,
    tau_closure: Vec<OnceLock<Vec<StateId>>>,
}

impl PartialEq for Lts {
    fn eq(&self, other: &Self) -> bool {
        self.state_names == other.state_names
            && self.label_names == other.label_names
            && self.tau == other.tau
            && self.initial == other.initial
            && self.transitions == other.transitions
    }
}

impl Eq for Lts {}

/// Incremental construction of an [`Lts`] by name.
#[derive(Debug, Default, Clone)]
pub struct LtsBuilder {
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    label_names: Vec<String>,
    label_index: HashMap<String, LabelId>,
    tau: Option<LabelId>,
    initial: Option<StateId>,
    transitions: Vec<Transition>,
}

impl LtsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the state with this name, creating it if needed.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.state_index.get(name) {
            return id;
        }
        let id = StateId(self.state_names.len());
        self.state_names.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        id
    }

    /// Returns the label with this name, creating it if needed.
    pub fn label(&mut self, name: &str) -> LabelId {
        if let Some(&id) = self.label_index.get(name) {
            return id;
        }
        let id = LabelId(self.label_names.len());
        self.label_names.push(name.to_string());
        self.label_index.insert(name.to_string(), id);
        id
    }

    /// Declares `name` as the silent action.
    pub fn silent(&mut self, name: &str) -> LabelId {
        let id = self.label(name);
        self.tau = Some(id);
        id
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        self.initial = Some(id);
        self
    }

    pub fn transition(&mut self, source: &str, label: &str, target: &str) -> &mut Self {
        let source = self.state(source);
        let label = self.label(label);
        let target = self.state(target);
        self.transitions.push(Transition { source, label, target });
        self
    }

    pub fn build(self) -> Result<Lts, LtsError> {
        Lts::from_parts(self.state_names, self.label_names, self.tau, self.initial, self.transitions)
    }
}

impl Lts {
    /// Assembles an LTS from raw parts. Duplicate transitions are dropped.
    pub fn from_parts(
        state_names: Vec<String>,
        label_names: Vec<String>,
        tau: Option<LabelId>,
        initial: Option<StateId>,
        mut transitions: Vec<Transition>,
    ) -> Result<Lts, LtsError> {
        if state_names.is_empty() {
            return Err(LtsError::NoStates);
        }
        let mut seen = BTreeSet::new();
        for name in &state_names {
            if !seen.insert(name.as_str()) {
                return Err(LtsError::DuplicateStateName(name.clone()));
            }
        }
        if let Some(t) = tau {
            if t.0 >= label_names.len() {
                return Err(LtsError::UnknownLabel(format!("#{}", t.0)));
            }
        }
        if let Some(i) = initial {
            if i.0 >= state_names.len() {
                return Err(LtsError::UnknownState(format!("#{}", i.0)));
            }
        }
        for t in &transitions {
            if t.source.0 >= state_names.len() {
                return Err(LtsError::UnknownState(format!("#{}", t.source.0)));
            }
            if t.target.0 >= state_names.len() {
                return Err(LtsError::UnknownState(format!("#{}", t.target.0)));
            }
            if t.label.0 >= label_names.len() {
                return Err(LtsError::UnknownLabel(format!("#{}", t.label.0)));
            }
        }
        let before = transitions.len();
        transitions.sort();
        transitions.dedup();
        let duplicates_dropped = before - transitions.len();
        if duplicates_dropped > 0 {
            log::warn!("dropped {duplicates_dropped} duplicate transition(s)");
        }

        let mut outgoing = vec![Vec::new(); state_names.len()];
        for t in &transitions {
            outgoing[t.source.0].push((t.label, t.target));
        }
        let tau_closure = (0..state_names.len()).map(|_| OnceLock::new()).collect();
        Ok(Lts { state_names, label_names, tau, initial, transitions, outgoing, duplicates_dropped, tau_closure })
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_labels(&self) -> usize {
        self.label_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_names.len()).map(StateId)
    }

    pub fn labels(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.label_names.len()).map(LabelId)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn tau(&self) -> Option<LabelId> {
        self.tau
    }

    pub fn is_tau(&self, label: LabelId) -> bool {
        self.tau == Some(label)
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    /// Number of duplicate transitions dropped during construction.
    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0]
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.label_names[l.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(StateId)
    }

    pub fn label_by_name(&self, name: &str) -> Option<LabelId> {
        self.label_names.iter().position(|n| n == name).map(LabelId)
    }

    /// Looks up a state by name, falling back to a bare index or `s<index>`.
    pub fn resolve_state(&self, name: &str) -> Result<StateId, LtsError> {
        if let Some(s) = self.state_by_name(name) {
            return Ok(s);
        }
        let digits = name.strip_prefix('s').unwrap_or(name);
        match digits.parse::<usize>() {
            Ok(i) if i < self.num_states() => Ok(StateId(i)),
            _ => Err(LtsError::UnknownState(name.to_string())),
        }
    }

    fn check_state(&self, s: StateId) -> Result<(), LtsError> {
        if s.0 < self.num_states() {
            Ok(())
        } else {
            Err(LtsError::UnknownState(format!("#{}", s.0)))
        }
    }

    fn check_label(&self, l: LabelId) -> Result<(), LtsError> {
        if l.0 < self.num_labels() {
            Ok(())
        } else {
            Err(LtsError::UnknownLabel(format!("#{}", l.0)))
        }
    }

    /// Outgoing transitions of `s`, sorted by label then target.
    pub fn outgoing(&self, s: StateId) -> &[(LabelId, StateId)] {
        &self.outgoing[s.0]
    }

    /// Targets of `label`-transitions from `s`, in ascending order.
    pub fn successors(&self, s: StateId, label: LabelId) -> Result<Vec<StateId>, LtsError> {
        self.check_state(s)?;
        self.check_label(label)?;
        Ok(self.successors_unchecked(s, label).collect())
    }

    pub(crate) fn successors_unchecked(&self, s: StateId, label: LabelId) -> impl Iterator<Item = StateId> + '_ {
        let out = &self.outgoing[s.0];
        let start = out.partition_point(|&(l, _)| l < label);
        out[start..].iter().take_while(move |&&(l, _)| l == label).map(|&(_, t)| t)
    }

    /// States reachable from `s` by zero or more silent steps, ascending.
    pub fn tau_reach(&self, s: StateId) -> Result<&[StateId], LtsError> {
        self.check_state(s)?;
        Ok(self.tau_reach_unchecked(s))
    }

    pub(crate) fn tau_reach_unchecked(&self, s: StateId) -> &[StateId] {
        self.tau_closure[s.0].get_or_init(|| {
            let mut seen = vec![false; self.num_states()];
            seen[s.0] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if let Some(tau) = self.tau {
                    for v in self.successors_unchecked(u, tau) {
                        if !seen[v.0] {
                            seen[v.0] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            seen.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| StateId(i)).collect()
        })
    }

    /// `successors(s, label)`, plus `s` itself when `label` is silent.
    pub fn optional_step(&self, s: StateId, label: LabelId) -> Result<Vec<StateId>, LtsError> {
        self.check_state(s)?;
        self.check_label(label)?;
        Ok(self.optional_step_unchecked(s, label))
    }

    pub(crate) fn optional_step_unchecked(&self, s: StateId, label: LabelId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self.successors_unchecked(s, label).collect();
        if self.is_tau(label) {
            if let Err(pos) = out.binary_search(&s) {
                out.insert(pos, s);
            }
        }
        out
    }

    /// All `(pivot, target)` with `s ==> pivot --(label)--> target`, sorted.
    ///
    /// These are the possible answers to a `label`-challenge in the branching
    /// game when `s` is the responding state.
    pub fn branching_answers(&self, s: StateId, label: LabelId) -> Result<Vec<(StateId, StateId)>, LtsError> {
        self.check_state(s)?;
        self.check_label(label)?;
        Ok(self.branching_answers_unchecked(s, label))
    }

    pub(crate) fn branching_answers_unchecked(&self, s: StateId, label: LabelId) -> Vec<(StateId, StateId)> {
        let mut out = Vec::new();
        for &pivot in self.tau_reach_unchecked(s) {
            for target in self.optional_step_unchecked(pivot, label) {
                out.push((pivot, target));
            }
        }
        out
    }

    /// Reports sizes and the finiteness assumptions game construction relies on.
    pub fn validate(&self) -> Diagnostics {
        let used: BTreeSet<LabelId> = self.transitions.iter().map(|t| t.label).collect();
        Diagnostics {
            states: self.num_states(),
            transitions: self.transitions.len(),
            labels: self.label_names.clone(),
            tau_used: self.tau.is_some_and(|t| used.contains(&t)),
            finite: true,
            image_finite: true,
            duplicates_dropped: self.duplicates_dropped,
        }
    }
}

/// Summary returned by [`Lts::validate`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Diagnostics {
    pub states: usize,
    pub transitions: usize,
    pub labels: Vec<String>,
    pub tau_used: bool,
    pub finite: bool,
    pub image_finite: bool,
    pub duplicates_dropped: usize,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "states: {}, transitions: {}, labels: {{{}}}, tau_used: {}, finite: {}",
            self.states,
            self.transitions,
            self.labels.join(","),
            self.tau_used,
            self.finite
        )?;
        if self.duplicates_dropped > 0 {
            write!(f, ", duplicates dropped: {}", self.duplicates_dropped)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(lts: &Lts, names: &[&str]) -> Vec<StateId> {
        let mut v: Vec<_> = names.iter().map(|n| lts.state_by_name(n).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn fig1_successors() {
        let lts = fixtures::fig1();
        let s = |n| lts.state_by_name(n).unwrap();
        let a = lts.label_by_name("a").unwrap();
        let c = lts.label_by_name("c").unwrap();
        assert_eq!(lts.successors(s("x0"), a).unwrap(), ids(&lts, &["x1", "x2"]));
        assert!(lts.successors(s("x1"), c).unwrap().is_empty());
    }

    #[test]
    fn successors_rejects_unknown() {
        let lts = fixtures::fig1();
        assert!(matches!(lts.successors(StateId(99), LabelId(0)), Err(LtsError::UnknownState(_))));
        assert!(matches!(lts.successors(StateId(0), LabelId(99)), Err(LtsError::UnknownLabel(_))));
    }

    #[test]
    fn fig2_tau_reach() {
        let lts = fixtures::fig2();
        let s = |n| lts.state_by_name(n).unwrap();
        assert_eq!(lts.tau_reach(s("x0")).unwrap(), ids(&lts, &["x0", "x2"]).as_slice());
        assert_eq!(lts.tau_reach(s("y0")).unwrap(), ids(&lts, &["y0"]).as_slice());
    }

    #[test]
    fn tau_cycle_closure() {
        let mut b = LtsBuilder::new();
        b.silent("tau");
        b.transition("a", "tau", "b").transition("b", "tau", "a");
        let lts = b.build().unwrap();
        assert_eq!(lts.tau_reach(StateId(0)).unwrap(), &[StateId(0), StateId(1)]);
    }

    #[test]
    fn tau_free_closure_is_singleton() {
        let lts = fixtures::fig1();
        for s in lts.states() {
            assert_eq!(lts.tau_reach(s).unwrap(), &[s]);
        }
    }

    #[test]
    fn fig2_optional_step() {
        let lts = fixtures::fig2();
        let s = |n| lts.state_by_name(n).unwrap();
        let tau = lts.tau().unwrap();
        let a = lts.label_by_name("a").unwrap();
        assert_eq!(lts.optional_step(s("y0"), tau).unwrap(), ids(&lts, &["y0"]));
        assert_eq!(lts.optional_step(s("x0"), a).unwrap(), ids(&lts, &["x1"]));
        assert_eq!(lts.optional_step(s("x0"), tau).unwrap(), ids(&lts, &["x0", "x2"]));
    }

    #[test]
    fn fig2_branching_answers() {
        let lts = fixtures::fig2();
        let s = |n| lts.state_by_name(n).unwrap();
        let tau = lts.tau().unwrap();
        let a = lts.label_by_name("a").unwrap();
        let b = lts.label_by_name("b").unwrap();
        assert_eq!(lts.branching_answers(s("y0"), tau).unwrap(), vec![(s("y0"), s("y0"))]);
        assert_eq!(lts.branching_answers(s("x0"), b).unwrap(), vec![(s("x2"), s("x3"))]);
        assert!(lts.branching_answers(s("x2"), a).unwrap().is_empty());
    }

    #[test]
    fn validate_fixtures() {
        let d = fixtures::fig1().validate();
        assert_eq!(d.states, 9);
        assert_eq!(d.labels, vec!["a", "b", "c"]);
        assert!(!d.tau_used);

        let d = fixtures::fig2().validate();
        assert_eq!(d.states, 7);
        let mut labels = d.labels.clone();
        labels.sort();
        assert_eq!(labels, vec!["a", "b", "tau"]);
        assert!(d.tau_used);

        let mut b = LtsBuilder::new();
        b.state("only");
        let d = b.build().unwrap().validate();
        assert_eq!(d.states, 1);
        assert!(!d.tau_used);
        assert!(d.finite && d.image_finite);
    }

    #[test]
    fn duplicates_are_dropped() {
        let mut b = LtsBuilder::new();
        b.transition("p", "a", "q").transition("p", "a", "q");
        let lts = b.build().unwrap();
        assert_eq!(lts.transitions().len(), 1);
        assert_eq!(lts.validate().duplicates_dropped, 1);
    }

    #[test]
    fn empty_lts_rejected() {
        assert!(matches!(LtsBuilder::new().build(), Err(LtsError::NoStates)));
    }
}
