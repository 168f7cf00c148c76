use std::collections::BTreeSet;

use serde::Serialize;

use super::estimate::initial_mask;
use super::{Fsa, StateId, Transition};
use crate::graph::EdgeFilter;

fn to_set(m: &[bool]) -> BTreeSet<StateId> {
    (0..m.len()).filter(|&i| m[i]).map(StateId).collect()
}

pub(crate) fn reachable_mask(a: &Fsa) -> Vec<bool> {
    a.digraph().forward(&initial_mask(a), EdgeFilter::All)
}

pub fn reachable_states(a: &Fsa) -> BTreeSet<StateId> {
    to_set(&reachable_mask(a))
}

/// The sub-automaton induced by the states reachable from the initial ones.
/// State ids are renumbered densely in their original order; events and the
/// alphabet are kept.
pub fn accessible_part(a: &Fsa) -> Fsa {
    let keep = reachable_mask(a);
    let mut new_id = vec![None; a.num_states()];
    let mut names = Vec::new();
    for s in a.states() {
        if keep[s.0] {
            new_id[s.0] = Some(StateId(names.len()));
            names.push(a.state_name(s).to_string());
        }
    }
    let initial = a.initial().iter().filter_map(|s| new_id[s.0]).collect();
    let transitions = a
        .transitions()
        .iter()
        .filter_map(|t| {
            Some(Transition::new(
                new_id[t.source.0]?,
                t.event,
                new_id[t.target.0]?,
            ))
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Fsa::assemble(
        names,
        a.events.clone(),
        a.alphabet.clone(),
        initial,
        transitions,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SccPartition {
    /// Components sorted by their smallest member.
    pub components: Vec<Vec<StateId>>,
    pub component_of: Vec<usize>,
    /// Edges of the component DAG.
    pub successors: Vec<BTreeSet<usize>>,
}

pub fn scc_decomposition(a: &Fsa) -> SccPartition {
    let sccs = a.digraph().sccs();
    let mut successors = vec![BTreeSet::new(); sccs.components.len()];
    for t in a.transitions() {
        let (u, v) = (
            sccs.component_of[t.source.0],
            sccs.component_of[t.target.0],
        );
        if u != v {
            successors[u].insert(v);
        }
    }
    SccPartition {
        components: sccs
            .components
            .iter()
            .map(|c| c.iter().map(|&i| StateId(i)).collect())
            .collect(),
        component_of: sccs.component_of,
        successors,
    }
}

/// States whose strongly connected component contains an observable transition.
pub fn states_in_observable_cycles(a: &Fsa) -> BTreeSet<StateId> {
    to_set(&a.digraph().observable_cycle_nodes())
}

/// States from which a state of an observable cycle is reachable, i.e. the
/// states where an infinite observation can still be produced.
pub fn live_states(a: &Fsa) -> BTreeSet<StateId> {
    to_set(&live_mask(a))
}

pub(crate) fn live_mask(a: &Fsa) -> Vec<bool> {
    let g = a.digraph();
    g.backward(&g.observable_cycle_nodes(), EdgeFilter::All)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assumption1Report {
    pub deadlock_free: bool,
    pub prompt: bool,
    pub deadlocks: Vec<StateId>,
    /// Reachable states on a cycle of unobservable transitions.
    pub unobservable_cycles: Vec<StateId>,
}

/// Diagnostic only: no algorithm requires these conditions.
pub fn check_assumption1(a: &Fsa) -> Assumption1Report {
    let reach = reachable_mask(a);
    let deadlocks: Vec<StateId> = a
        .states()
        .filter(|&s| reach[s.0] && a.outgoing(s).next().is_none())
        .collect();
    let mut eps = crate::graph::Digraph::new(a.num_states());
    for t in a.transitions() {
        if !a.is_observable(t.event) {
            eps.add_edge(t.source.0, t.target.0, false);
        }
    }
    let on_cycle = eps.cyclic_nodes_by(|_| true);
    let unobservable_cycles: Vec<StateId> = a
        .states()
        .filter(|&s| reach[s.0] && on_cycle[s.0])
        .collect();
    Assumption1Report {
        deadlock_free: deadlocks.is_empty(),
        prompt: unobservable_cycles.is_empty(),
        deadlocks,
        unobservable_cycles,
    }
}

