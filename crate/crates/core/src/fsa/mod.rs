//! Labeled finite-state automata.
//!
//! States, events and output symbols are addressed by dense indices. Names are
//! kept only for display and for round-tripping model files.

pub(crate) mod analysis;
pub(crate) mod estimate;
mod text;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::graph::Digraph;

pub use analysis::{
    accessible_part, check_assumption1, live_states, reachable_states, scc_decomposition,
    states_in_observable_cycles, Assumption1Report, SccPartition,
};
pub use estimate::{
    delayed_state_estimate, pre_image, state_estimate, unobservable_closure, StateEstimate,
};
pub use text::{parse_fsa, parse_fsa_json, parse_fsa_with_warnings, ParseWarning};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EventId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub name: String,
    /// `None` for unobservable events.
    pub label: Option<SymbolId>,
    pub controllable: bool,
    pub faulty: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition {
    pub source: StateId,
    pub event: EventId,
    pub target: StateId,
}

impl Transition {
    pub fn new(source: StateId, event: EventId, target: StateId) -> Self {
        Transition {
            source,
            event,
            target,
        }
    }
}

/// A finite run `states[0] -events[0]-> states[1] ...`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Run {
    pub states: Vec<StateId>,
    pub events: Vec<EventId>,
}

impl Run {
    pub fn start(state: StateId) -> Self {
        Run {
            states: vec![state],
            events: Vec::new(),
        }
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("run has at least one state")
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Checks that consecutive triples are transitions of `a`.
    pub fn is_valid_in(&self, a: &Fsa) -> bool {
        self.states.len() == self.events.len() + 1
            && self.events.iter().enumerate().all(|(i, &e)| {
                a.has_transition(Transition::new(self.states[i], e, self.states[i + 1]))
            })
    }

    pub fn label(&self, a: &Fsa) -> Vec<SymbolId> {
        self.events.iter().filter_map(|&e| a.label(e)).collect()
    }
}

/// A stem followed by a nonempty cycle returning to the stem's last state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Run,
    pub cycle: Run,
}

impl Lasso {
    /// Valid runs, the cycle starts and ends at the stem's end and carries an
    /// observable event, so the lasso denotes an infinite observation.
    pub fn is_observable_lasso_in(&self, a: &Fsa) -> bool {
        self.stem.is_valid_in(a)
            && self.cycle.is_valid_in(a)
            && !self.cycle.is_empty()
            && self.cycle.states[0] == self.stem.last()
            && self.cycle.last() == self.stem.last()
            && self.cycle.events.iter().any(|&e| a.is_observable(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsa {
    states: Vec<String>,
    events: Vec<Event>,
    alphabet: Vec<String>,
    initial: Vec<StateId>,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<usize>>,
}

impl Fsa {
    pub fn from_text(text: &str) -> Result<Fsa, ModelError> {
        parse_fsa(text)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn event_ids(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len()).map(EventId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn event(&self, e: EventId) -> &Event {
        &self.events[e.0]
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.events[e.0].name
    }

    pub fn label(&self, e: EventId) -> Option<SymbolId> {
        self.events[e.0].label
    }

    pub fn is_observable(&self, e: EventId) -> bool {
        self.events[e.0].label.is_some()
    }

    pub fn is_controllable(&self, e: EventId) -> bool {
        self.events[e.0].controllable
    }

    pub fn is_faulty(&self, e: EventId) -> bool {
        self.events[e.0].faulty
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbols(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.alphabet.len()).map(SymbolId)
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.alphabet[s.0]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_initial(&self, s: StateId) -> bool {
        self.initial.binary_search(&s).is_ok()
    }

    /// Sorted by `(source, event, target)`.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn has_transition(&self, t: Transition) -> bool {
        self.transitions.binary_search(&t).is_ok()
    }

    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = &Transition> + '_ {
        self.outgoing[s.0].iter().map(move |&i| &self.transitions[i])
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|n| n == name).map(StateId)
    }

    pub fn event_by_name(&self, name: &str) -> Option<EventId> {
        self.events.iter().position(|e| e.name == name).map(EventId)
    }

    pub fn symbol_by_name(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|n| n == name).map(SymbolId)
    }

    /// Resolves a word given by symbol names.
    pub fn word<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Vec<SymbolId>, ModelError> {
        symbols
            .iter()
            .map(|s| {
                self.symbol_by_name(s.as_ref())
                    .ok_or_else(|| ModelError::UnknownSymbol(s.as_ref().to_string()))
            })
            .collect()
    }

    /// Same header, transition relation replaced.
    pub fn with_transitions<I: IntoIterator<Item = Transition>>(&self, transitions: I) -> Fsa {
        let set: BTreeSet<Transition> = transitions.into_iter().collect();
        Fsa::assemble(
            self.states.clone(),
            self.events.clone(),
            self.alphabet.clone(),
            self.initial.clone(),
            set.into_iter().collect(),
        )
    }

    /// Removes the given transitions (the rest of the model is unchanged).
    pub fn without(&self, disabled: &BTreeSet<Transition>) -> Fsa {
        self.with_transitions(
            self.transitions
                .iter()
                .copied()
                .filter(|t| !disabled.contains(t)),
        )
    }

    /// Transitions whose event is declared controllable.
    pub fn controllable_transitions(&self) -> BTreeSet<Transition> {
        self.transitions
            .iter()
            .copied()
            .filter(|t| self.is_controllable(t.event))
            .collect()
    }

    /// Reclassifies every event as normal.
    pub fn without_faults(&self) -> Fsa {
        let mut f = self.clone();
        for e in &mut f.events {
            e.faulty = false;
        }
        f
    }

    /// Edges of the transition graph; edge ids are transition indices.
    pub(crate) fn digraph(&self) -> Digraph {
        let mut g = Digraph::new(self.num_states());
        for t in &self.transitions {
            g.add_edge(t.source.0, t.target.0, self.is_observable(t.event));
        }
        g
    }

    fn assemble(
        states: Vec<String>,
        events: Vec<Event>,
        alphabet: Vec<String>,
        initial: Vec<StateId>,
        transitions: Vec<Transition>,
    ) -> Fsa {
        let mut outgoing = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            outgoing[t.source.0].push(i);
        }
        Fsa {
            states,
            events,
            alphabet,
            initial,
            transitions,
            outgoing,
        }
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "eps"
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c == ':' || c == '#' || c == '"')
}

/// Incremental construction with validation of names and references.
#[derive(Clone, Debug, Default)]
pub struct FsaBuilder {
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    events: Vec<Event>,
    event_index: HashMap<String, EventId>,
    alphabet: Vec<String>,
    symbol_index: HashMap<String, SymbolId>,
    initial: BTreeSet<StateId>,
    transitions: BTreeSet<Transition>,
}

impl FsaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self, name: &str) -> Result<StateId, ModelError> {
        if !valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if self.state_index.contains_key(name) {
            return Err(ModelError::DuplicateState(name.to_string()));
        }
        let id = StateId(self.states.len());
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Declares an output symbol; declaring it again is a no-op.
    pub fn symbol(&mut self, name: &str) -> Result<SymbolId, ModelError> {
        if !valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if let Some(&s) = self.symbol_index.get(name) {
            return Ok(s);
        }
        let id = SymbolId(self.alphabet.len());
        self.alphabet.push(name.to_string());
        self.symbol_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// `label = None` declares an unobservable event.
    pub fn event(&mut self, name: &str, label: Option<&str>) -> Result<EventId, ModelError> {
        if !valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if self.event_index.contains_key(name) {
            return Err(ModelError::DuplicateEvent(name.to_string()));
        }
        let label = label.map(|l| self.symbol(l)).transpose()?;
        let id = EventId(self.events.len());
        self.events.push(Event {
            name: name.to_string(),
            label,
            controllable: false,
            faulty: false,
        });
        self.event_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UndeclaredState(name.to_string()))
    }

    pub fn event_id(&self, name: &str) -> Result<EventId, ModelError> {
        self.event_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UndeclaredEvent(name.to_string()))
    }

    pub fn set_controllable(&mut self, e: EventId) {
        self.events[e.0].controllable = true;
    }

    pub fn set_faulty(&mut self, e: EventId) {
        self.events[e.0].faulty = true;
    }

    pub fn initial(&mut self, s: StateId) {
        self.initial.insert(s);
    }

    pub fn transition(
        &mut self,
        source: StateId,
        event: EventId,
        target: StateId,
    ) -> Result<(), ModelError> {
        if !self.transitions.insert(Transition::new(source, event, target)) {
            return Err(ModelError::DuplicateTransition(
                self.states[source.0].clone(),
                self.events[event.0].name.clone(),
                self.states[target.0].clone(),
            ));
        }
        Ok(())
    }

    /// Name-based variant of [`FsaBuilder::transition`].
    pub fn transition_by_name(
        &mut self,
        source: &str,
        event: &str,
        target: &str,
    ) -> Result<(), ModelError> {
        let s = self.state_id(source)?;
        let e = self.event_id(event)?;
        let t = self.state_id(target)?;
        self.transition(s, e, t)
    }

    pub fn build(self) -> Fsa {
        Fsa::assemble(
            self.states,
            self.events,
            self.alphabet,
            self.initial.into_iter().collect(),
            self.transitions.into_iter().collect(),
        )
    }
}
