use super::delayed::{finish, observable_cycle_states, pair_product, to_sets, top_mask};
use super::layering::{self, Shape};
use super::{Flavor, LayerSets, Property, Specification, Verdict};
use crate::composition::{Materialize, Product};
use crate::fsa::Fsa;

pub fn verify_omega_k1k2(a: &Fsa, k1: usize, k2: usize) -> Verdict {
    verify_k1k2(a, Flavor::Omega, k1, k2, None)
}

pub fn verify_star_k1k2(a: &Fsa, k1: usize, k2: usize) -> Verdict {
    verify_k1k2(a, Flavor::Star, k1, k2, None)
}

pub fn verify_omega_k1k2_d(a: &Fsa, k1: usize, k2: usize, spec: &Specification) -> Verdict {
    verify_k1k2(a, Flavor::Omega, k1, k2, Some(spec))
}

pub fn verify_star_k1k2_d(a: &Fsa, k1: usize, k2: usize, spec: &Specification) -> Verdict {
    verify_k1k2(a, Flavor::Star, k1, k2, Some(spec))
}

/// A prefix length after which delayed detectability and (k1,k2)-detectability
/// coincide.
pub fn k1_bound_for_delayed(a: &Fsa, _k: usize) -> usize {
    a.num_states() * a.num_states()
}

pub fn verify_k1k2(
    a: &Fsa,
    flavor: Flavor,
    k1: usize,
    k2: usize,
    spec: Option<&Specification>,
) -> Verdict {
    analyze(a, flavor, k1, k2, spec).1
}

/// The layers `X'_{k1+k2} .. X'_{min(1,k1)}` and, for `k1 >= 1`, the initial
/// tuples `X̄'_0`.
pub fn k1k2_layers(
    a: &Fsa,
    flavor: Flavor,
    k1: usize,
    k2: usize,
    spec: Option<&Specification>,
) -> LayerSets {
    analyze(a, flavor, k1, k2, spec).0
}

fn analyze(
    a: &Fsa,
    flavor: Flavor,
    k1: usize,
    k2: usize,
    spec: Option<&Specification>,
) -> (LayerSets, Verdict) {
    // With a specification under the omega flavor, the run that extends to an
    // infinite observation need not be one of the two confused runs, so a
    // third component carries it.
    let p = match (spec, flavor) {
        (Some(_), Flavor::Omega) => Product::build(a, &[false; 3], Materialize::Reachable),
        _ => pair_product(a),
    };
    let filter = match spec {
        None => p.node_mask(|t| t[0] != t[1]),
        Some(spec) => p.node_mask(|t| spec.matches(t[0], t[1])),
    };
    let top = top_mask(a, &p, flavor);
    let shape = Shape::K1K2 { k1, k2 };
    let l = layering::compute(&p, &filter, &top, shape);
    let found = layering::extract(&p, &l, shape);
    let property = match spec {
        None => Property::K1K2 { flavor, k1, k2 },
        Some(s) => Property::K1K2D {
            flavor,
            k1,
            k2,
            spec: s.clone(),
        },
    };
    let top_states = (flavor == Flavor::Omega).then(|| observable_cycle_states(a));
    let sets = to_sets(&p, &l, p.arity, 1 + k1 + k2, top_states);
    (sets, finish(a, flavor, property, found, &p))
}
