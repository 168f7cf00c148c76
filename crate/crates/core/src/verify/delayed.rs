use std::collections::BTreeSet;

use super::layering::{self, Layering, Shape};
use super::witness::Witness;
use super::{Flavor, LayerSets, Property, Verdict};
use crate::composition::{Materialize, Product};
use crate::fsa::{live_states, reachable_states, states_in_observable_cycles, Fsa, StateId};

/// Delays beyond `|X|^2` never change the verdict.
pub fn effective_delay_bound(a: &Fsa, k: usize) -> usize {
    k.min(a.num_states() * a.num_states())
}

pub fn verify_omega_k_delayed(a: &Fsa, k: usize) -> Verdict {
    verify_k_delayed(a, Flavor::Omega, k)
}

pub fn verify_star_k_delayed(a: &Fsa, k: usize) -> Verdict {
    verify_k_delayed(a, Flavor::Star, k)
}

pub fn verify_k_delayed(a: &Fsa, flavor: Flavor, k: usize) -> Verdict {
    let mut v = analyze(a, flavor, effective_delay_bound(a, k)).1;
    v.property = Property::KDelayed { flavor, k };
    v
}

/// Same decision without clamping `k`; only useful to test the clamp.
pub fn verify_k_delayed_unclamped(a: &Fsa, flavor: Flavor, k: usize) -> Verdict {
    analyze(a, flavor, k).1
}

/// The layers `X'_2 .. X'_{3+K}` (with `K` clamped), plus the observable-cycle
/// states `X_{4+K}` for the omega flavor.
pub fn k_delayed_layers(a: &Fsa, flavor: Flavor, k: usize) -> LayerSets {
    analyze(a, flavor, effective_delay_bound(a, k)).0
}

pub(crate) fn pair_product(a: &Fsa) -> Product {
    Product::build(a, &[false, false], Materialize::Reachable)
}

/// Tuples with some component from which an infinite observation is possible.
pub(crate) fn top_mask(a: &Fsa, p: &Product, flavor: Flavor) -> Vec<bool> {
    match flavor {
        Flavor::Star => vec![true; p.len()],
        Flavor::Omega => {
            let live = live_states(a);
            p.node_mask(|t| t.iter().any(|s| live.contains(s)))
        }
    }
}

pub(crate) fn to_sets(p: &Product, l: &Layering, arity: usize, top_index: usize, top_states: Option<BTreeSet<StateId>>) -> LayerSets {
    let set = |m: &Vec<bool>| {
        (0..p.len())
            .filter(|&n| m[n])
            .map(|n| p.nodes[n].clone())
            .collect()
    };
    LayerSets {
        arity,
        top_states_index: top_index,
        top_states,
        layers: l.layers.iter().map(|(i, m)| (*i, set(m))).collect(),
        initial_layer: l.initial_layer.as_ref().map(set),
    }
}

pub(crate) fn observable_cycle_states(a: &Fsa) -> BTreeSet<StateId> {
    let reach = reachable_states(a);
    states_in_observable_cycles(a)
        .intersection(&reach)
        .copied()
        .collect()
}

/// Builds the lasso witness for the omega flavor from the final tuple.
pub(crate) fn finish(
    a: &Fsa,
    flavor: Flavor,
    property: Property,
    found: Option<(Vec<super::Segment>, usize)>,
    p: &Product,
) -> Verdict {
    let witness = found.map(|(segments, end)| {
        let lasso = match flavor {
            Flavor::Star => None,
            Flavor::Omega => p.nodes[end].iter().enumerate().find_map(|(c, &s)| {
                layering::observable_lasso(a, s).map(|l| (c, l))
            }),
        };
        Witness { segments, lasso }
    });
    Verdict {
        property,
        holds: witness.is_none(),
        witness,
    }
}

fn analyze(a: &Fsa, flavor: Flavor, k: usize) -> (LayerSets, Verdict) {
    let p = pair_product(a);
    let filter = p.node_mask(|t| t[0] != t[1]);
    let top = top_mask(a, &p, flavor);
    let shape = Shape::Delayed { k };
    let l = layering::compute(&p, &filter, &top, shape);
    let found = layering::extract(&p, &l, shape);
    let top_states = (flavor == Flavor::Omega).then(|| observable_cycle_states(a));
    let sets = to_sets(&p, &l, 2, 4 + k, top_states);
    let verdict = finish(a, flavor, Property::KDelayed { flavor, k }, found, &p);
    (sets, verdict)
}
