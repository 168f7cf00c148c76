//! Enforcing detectability by disabling controllable transitions.

mod cut;
mod layered;

use std::collections::BTreeSet;

use itertools::Itertools;
use serde_json::{json, Value};

pub use layered::{LayerEdge, LayerNode, LayeredWitnessGraph, Stage, TopAutomaton};

use crate::error::SynthesisError;
use crate::fsa::{Fsa, Transition};
use crate::graph::Digraph;
use crate::verify::{k1_bound_for_delayed, verify, Flavor, Property, Verdict};
use cut::{min_cut, CutArc};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 12;

/// A (k1,k2) enforcement target; K-delayed targets run as (|X|², K).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthesisTarget {
    pub flavor: Flavor,
    pub k1: usize,
    pub k2: usize,
}

impl SynthesisTarget {
    pub fn from_property(a: &Fsa, property: &Property) -> Result<Self, SynthesisError> {
        match *property {
            Property::KDelayed { flavor, k } => {
                let k1 = k1_bound_for_delayed(a, k);
                Ok(SynthesisTarget {
                    flavor,
                    k1,
                    k2: k.min(k1),
                })
            }
            Property::K1K2 { flavor, k1, k2 } => Ok(SynthesisTarget { flavor, k1, k2 }),
            _ => Err(SynthesisError::Unsupported(property.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisPlan {
    pub property: Property,
    pub feasible: bool,
    pub disabled: BTreeSet<Transition>,
    pub residual: Fsa,
    pub verified: Verdict,
}

impl SynthesisPlan {
    fn new(a: &Fsa, property: &Property, feasible: bool, disabled: BTreeSet<Transition>) -> Self {
        let residual = a.without(&disabled);
        let verified = verify(&residual, property);
        SynthesisPlan {
            property: property.clone(),
            feasible,
            disabled,
            residual,
            verified,
        }
    }

    pub fn to_json(&self, a: &Fsa) -> Value {
        json!({
            "property": self.property.name(),
            "parameters": self.property.parameters_json(a),
            "feasible": self.feasible,
            "disabled": self.disabled.iter().map(|t| json!([
                a.state_name(t.source), a.event_name(t.event), a.state_name(t.target)
            ])).collect::<Vec<_>>(),
            "verified": self.verified.holds,
            "residual": self.residual.to_json_value(),
        })
    }
}

fn restrict(a: &Fsa, controllable: &BTreeSet<Transition>) -> BTreeSet<Transition> {
    controllable
        .iter()
        .copied()
        .filter(|t| a.has_transition(*t))
        .collect()
}

/// Whether disabling every controllable transition enforces `property`; by
/// monotonicity no smaller set can succeed otherwise.
pub fn feasibility(a: &Fsa, property: &Property) -> bool {
    feasibility_with(a, property, &a.controllable_transitions())
}

pub fn feasibility_with(a: &Fsa, property: &Property, controllable: &BTreeSet<Transition>) -> bool {
    verify(&a.without(&restrict(a, controllable)), property).holds
}

pub fn build_layered_witness_graph(a: &Fsa, flavor: Flavor, k1: usize, k2: usize) -> LayeredWitnessGraph {
    LayeredWitnessGraph::build(a, flavor, k1, k2)
}

pub fn synthesize(a: &Fsa, property: &Property) -> Result<SynthesisPlan, SynthesisError> {
    synthesize_with(a, property, &a.controllable_transitions())
}

/// Cut-and-reverify loop with `controllable` as the removable transitions,
/// followed by dropping every disabled transition that is not needed.
pub fn synthesize_with(
    a: &Fsa,
    property: &Property,
    controllable: &BTreeSet<Transition>,
) -> Result<SynthesisPlan, SynthesisError> {
    let target = SynthesisTarget::from_property(a, property)?;
    let controllable = restrict(a, controllable);
    if !feasibility_with(a, property, &controllable) {
        return Ok(SynthesisPlan::new(a, property, false, BTreeSet::new()));
    }
    let mut disabled = BTreeSet::new();
    loop {
        let residual = a.without(&disabled);
        if verify(&residual, property).holds {
            break;
        }
        let remaining: BTreeSet<Transition> = controllable.difference(&disabled).copied().collect();
        let g = LayeredWitnessGraph::build(&residual, target.flavor, target.k1, target.k2);
        let mut step = choose_cut(&residual, &g, &remaining);
        if step.is_empty() {
            step = involved(&g, &remaining);
        }
        if step.is_empty() {
            step = remaining;
        }
        disabled.extend(step);
    }
    for t in disabled.clone().into_iter().rev() {
        let mut fewer = disabled.clone();
        fewer.remove(&t);
        if verify(&a.without(&fewer), property).holds {
            disabled = fewer;
        }
    }
    Ok(SynthesisPlan::new(a, property, true, disabled))
}

/// Smallest disabling set by enumeration in increasing size; among sets of
/// one size the lexicographically first in transition order wins.
pub fn exhaustive_minimum_plan(a: &Fsa, property: &Property, cap: usize) -> Result<SynthesisPlan, SynthesisError> {
    exhaustive_minimum_plan_with(a, property, &a.controllable_transitions(), cap)
}

pub fn exhaustive_minimum_plan_with(
    a: &Fsa,
    property: &Property,
    controllable: &BTreeSet<Transition>,
    cap: usize,
) -> Result<SynthesisPlan, SynthesisError> {
    let controllable: Vec<Transition> = restrict(a, controllable).into_iter().collect();
    if controllable.len() > cap {
        return Err(SynthesisError::CapExceeded {
            count: controllable.len(),
            cap,
        });
    }
    for size in 0..=controllable.len() {
        for set in controllable.iter().copied().combinations(size) {
            let set: BTreeSet<Transition> = set.into_iter().collect();
            if verify(&a.without(&set), property).holds {
                return Ok(SynthesisPlan::new(a, property, true, set));
            }
        }
    }
    Ok(SynthesisPlan::new(a, property, false, BTreeSet::new()))
}

fn removable(e: &LayerEdge, allowed: &BTreeSet<Transition>) -> Option<Transition> {
    [e.left, e.right].into_iter().flatten().find(|t| allowed.contains(t))
}

/// Cut of the layered part: no path from a source to a sink survives.
fn layered_cut(g: &LayeredWitnessGraph, allowed: &BTreeSet<Transition>) -> Option<BTreeSet<Transition>> {
    let arcs: Vec<CutArc<Transition>> = g
        .edges()
        .iter()
        .map(|e| (e.source, e.target, removable(e, allowed)))
        .collect();
    min_cut(g.nodes().len(), &arcs, g.sources(), g.sinks())
}

/// Cut of the omega ending: no observable cycle stays reachable from the
/// initial states of the top automaton. Each observable cycle edge u→v is
/// removed, or its cycle broken (v↛u), or u made unreachable, whichever is
/// cheapest.
fn top_cut(a: &Fsa, top: &TopAutomaton, allowed: &BTreeSet<Transition>) -> Option<BTreeSet<Transition>> {
    let a_obs = |t: &Transition| a.is_observable(t.event);
    let a_states = a.num_states();
    let mut g = Digraph::new(a_states);
    for t in &top.transitions {
        g.add_edge(t.source.0, t.target.0, a_obs(t));
    }
    let sccs = g.sccs();
    let arcs: Vec<CutArc<Transition>> = top
        .transitions
        .iter()
        .map(|t| (t.source.0, t.target.0, allowed.contains(t).then_some(*t)))
        .collect();
    let initial: Vec<usize> = top.initial.iter().map(|s| s.0).collect();
    let mut cut = BTreeSet::new();
    for t in &top.transitions {
        let (u, v) = (t.source.0, t.target.0);
        if !a_obs(t) || sccs.component_of[u] != sccs.component_of[v] {
            continue;
        }
        let options = [
            allowed.contains(t).then(|| BTreeSet::from([*t])),
            min_cut(a_states, &arcs, &[v], &[u]),
            min_cut(a_states, &arcs, &initial, &[u]),
        ];
        cut.extend(options.into_iter().flatten().min_by_key(|c| c.len())?);
    }
    Some(cut)
}

/// The cheaper of the two cuts; ties go to the omega ending.
fn choose_cut(a: &Fsa, g: &LayeredWitnessGraph, allowed: &BTreeSet<Transition>) -> BTreeSet<Transition> {
    let layered = layered_cut(g, allowed);
    let top = g.top().and_then(|top| top_cut(a, top, allowed));
    match (top, layered) {
        (Some(t), Some(l)) if l.len() < t.len() => l,
        (Some(t), _) => t,
        (None, Some(l)) => l,
        (None, None) => BTreeSet::new(),
    }
}

/// Removable transitions used anywhere in the graph.
fn involved(g: &LayeredWitnessGraph, allowed: &BTreeSet<Transition>) -> BTreeSet<Transition> {
    let mut out: BTreeSet<Transition> = g
        .edges()
        .iter()
        .flat_map(|e| [e.left, e.right])
        .flatten()
        .filter(|t| allowed.contains(t))
        .collect();
    if let Some(top) = g.top() {
        out.extend(top.transitions.iter().filter(|t| allowed.contains(t)));
    }
    out
}
