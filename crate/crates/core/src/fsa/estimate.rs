//! Current and delayed state estimation.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{Fsa, StateId, SymbolId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateEstimate {
    pub states: BTreeSet<StateId>,
    pub prefix_label: Vec<SymbolId>,
    pub suffix_label: Vec<SymbolId>,
}

/// States reachable from `set` through unobservable transitions, `set` included.
pub fn unobservable_closure(a: &Fsa, set: &[bool]) -> Vec<bool> {
    let mut seen = set.to_vec();
    let mut stack: Vec<StateId> = a.states().filter(|s| set[s.0]).collect();
    while let Some(s) = stack.pop() {
        for t in a.outgoing(s) {
            if !a.is_observable(t.event) && !seen[t.target.0] {
                seen[t.target.0] = true;
                stack.push(t.target);
            }
        }
    }
    seen
}

pub(crate) fn initial_mask(a: &Fsa) -> Vec<bool> {
    let mut m = vec![false; a.num_states()];
    for s in a.initial() {
        m[s.0] = true;
    }
    m
}

/// One observation `sym` followed by unobservable moves.
pub(crate) fn observe(a: &Fsa, set: &[bool], sym: SymbolId) -> Vec<bool> {
    let mut next = vec![false; a.num_states()];
    for t in a.transitions() {
        if set[t.source.0] && a.label(t.event) == Some(sym) {
            next[t.target.0] = true;
        }
    }
    unobservable_closure(a, &next)
}

pub(crate) fn estimate_mask(a: &Fsa, word: &[SymbolId]) -> Vec<bool> {
    let mut cur = unobservable_closure(a, &initial_mask(a));
    for &sym in word {
        cur = observe(a, &cur, sym);
    }
    cur
}

/// States from which some run labelled `word` starts and ends inside `goal`.
pub(crate) fn pre_mask(a: &Fsa, word: &[SymbolId], goal: &[bool]) -> Vec<bool> {
    let mut cur = backward_unobservable(a, goal);
    for &sym in word.iter().rev() {
        let mut prev = vec![false; a.num_states()];
        for t in a.transitions() {
            if cur[t.target.0] && a.label(t.event) == Some(sym) {
                prev[t.source.0] = true;
            }
        }
        cur = backward_unobservable(a, &prev);
    }
    cur
}

/// States that reach `set` by one `sym` transition, closed backward under
/// unobservable moves. `set` must itself be closed backward.
pub(crate) fn prepend(a: &Fsa, sym: SymbolId, set: &[bool]) -> Vec<bool> {
    let mut prev = vec![false; a.num_states()];
    for t in a.transitions() {
        if set[t.target.0] && a.label(t.event) == Some(sym) {
            prev[t.source.0] = true;
        }
    }
    backward_unobservable(a, &prev)
}

pub(crate) fn backward_unobservable(a: &Fsa, set: &[bool]) -> Vec<bool> {
    let mut cur = set.to_vec();
    loop {
        let mut changed = false;
        for t in a.transitions() {
            if !a.is_observable(t.event) && cur[t.target.0] && !cur[t.source.0] {
                cur[t.source.0] = true;
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

fn to_set(mask: &[bool]) -> BTreeSet<StateId> {
    (0..mask.len()).filter(|&i| mask[i]).map(StateId).collect()
}

/// The set of states the system can occupy right after observing `sigma`.
pub fn state_estimate(a: &Fsa, sigma: &[SymbolId]) -> StateEstimate {
    StateEstimate {
        states: to_set(&estimate_mask(a, sigma)),
        prefix_label: sigma.to_vec(),
        suffix_label: Vec::new(),
    }
}

/// States that can generate `word`.
pub fn pre_image(a: &Fsa, word: &[SymbolId]) -> BTreeSet<StateId> {
    to_set(&pre_mask(a, word, &vec![true; a.num_states()]))
}

/// States the system could occupy after `sigma1`, given that `sigma2` was
/// observed afterwards.
pub fn delayed_state_estimate(a: &Fsa, sigma1: &[SymbolId], sigma2: &[SymbolId]) -> StateEstimate {
    let cur = estimate_mask(a, sigma1);
    let pre = pre_mask(a, sigma2, &vec![true; a.num_states()]);
    let both: Vec<bool> = cur.iter().zip(&pre).map(|(x, y)| *x && *y).collect();
    StateEstimate {
        states: to_set(&both),
        prefix_label: sigma1.to_vec(),
        suffix_label: sigma2.to_vec(),
    }
}
