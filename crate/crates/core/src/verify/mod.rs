//! Structural decision procedures over synchronized products.

pub(crate) mod delayed;
mod k1k2;
pub(crate) mod layering;
mod spec;
pub mod witness;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::composition::PairState;
use crate::fsa::{Fsa, StateId};

pub use delayed::{
    effective_delay_bound, k_delayed_layers, verify_k_delayed, verify_k_delayed_unclamped,
    verify_omega_k_delayed, verify_star_k_delayed,
};
pub use k1k2::{
    k1_bound_for_delayed, k1k2_layers, verify_k1k2, verify_omega_k1k2, verify_omega_k1k2_d,
    verify_star_k1k2, verify_star_k1k2_d,
};
pub use spec::Specification;
pub use witness::{check_witness, ProductRun, Segment, SegmentKind, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flavor {
    /// Only observations that extend to infinite ones count.
    Omega,
    /// Every finite observation counts.
    Star,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Omega => "omega",
            Flavor::Star => "star",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    KDelayed {
        flavor: Flavor,
        k: usize,
    },
    K1K2 {
        flavor: Flavor,
        k1: usize,
        k2: usize,
    },
    K1K2D {
        flavor: Flavor,
        k1: usize,
        k2: usize,
        spec: Specification,
    },
    Diagnosable,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::KDelayed { flavor: Flavor::Omega, .. } => "omega-k-delayed",
            Property::KDelayed { flavor: Flavor::Star, .. } => "star-k-delayed",
            Property::K1K2 { flavor: Flavor::Omega, .. } => "omega-k1k2",
            Property::K1K2 { flavor: Flavor::Star, .. } => "star-k1k2",
            Property::K1K2D { flavor: Flavor::Omega, .. } => "omega-k1k2-d",
            Property::K1K2D { flavor: Flavor::Star, .. } => "star-k1k2-d",
            Property::Diagnosable => "diagnosable",
        }
    }

    pub fn parameters_json(&self, a: &Fsa) -> Value {
        match self {
            Property::KDelayed { k, .. } => json!({ "k": k }),
            Property::K1K2 { k1, k2, .. } => json!({ "k1": k1, "k2": k2 }),
            Property::K1K2D { k1, k2, spec, .. } => json!({
                "k1": k1,
                "k2": k2,
                "spec": spec
                    .pairs()
                    .iter()
                    .map(|(x, y)| [a.state_name(*x), a.state_name(*y)])
                    .collect::<Vec<_>>(),
            }),
            Property::Diagnosable => json!({}),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::KDelayed { k, .. } => write!(f, "{}(K={k})", self.name()),
            Property::K1K2 { k1, k2, .. } | Property::K1K2D { k1, k2, .. } => {
                write!(f, "{}({k1},{k2})", self.name())
            }
            Property::Diagnosable => f.write_str(self.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub holds: bool,
    /// Present exactly when the property fails.
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn to_json(&self, a: &Fsa) -> Value {
        json!({
            "property": self.property.name(),
            "parameters": self.property.parameters_json(a),
            "holds": self.holds,
            "witness": self.witness.as_ref().map(|w| w.to_json(a)),
        })
    }
}

/// Dispatches to the matching decision procedure.
pub fn verify(a: &Fsa, property: &Property) -> Verdict {
    match property {
        Property::KDelayed { flavor, k } => verify_k_delayed(a, *flavor, *k),
        Property::K1K2 { flavor, k1, k2 } => verify_k1k2(a, *flavor, *k1, *k2, None),
        Property::K1K2D {
            flavor,
            k1,
            k2,
            spec,
        } => verify_k1k2(a, *flavor, *k1, *k2, Some(spec)),
        Property::Diagnosable => crate::diagnosability::verify_diagnosable(a),
    }
}

/// The layer family computed by a verifier, indexed as in the backward
/// construction. Entries are tuples of states (pairs, or triples for the
/// omega D-variant).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerSets {
    pub arity: usize,
    /// Index of the single-state top set, and its states (omega only).
    pub top_states_index: usize,
    pub top_states: Option<BTreeSet<StateId>>,
    pub layers: BTreeMap<usize, BTreeSet<Vec<StateId>>>,
    /// Initial tuples from which the first layer is reachable (when k1 >= 1).
    pub initial_layer: Option<BTreeSet<Vec<StateId>>>,
}

impl LayerSets {
    /// Layer `i` as pairs; panics for triples.
    pub fn pairs(&self, i: usize) -> BTreeSet<PairState> {
        assert_eq!(self.arity, 2, "layer entries are not pairs");
        self.layers
            .get(&i)
            .map(|l| l.iter().map(|v| PairState::new(v[0], v[1])).collect())
            .unwrap_or_default()
    }

    pub fn to_json(&self, a: &Fsa) -> Value {
        let tuples = |set: &BTreeSet<Vec<StateId>>| {
            set.iter()
                .map(|v| v.iter().map(|s| a.state_name(*s)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        let layers: serde_json::Map<String, Value> = self
            .layers
            .iter()
            .map(|(i, l)| (i.to_string(), json!(tuples(l))))
            .collect();
        json!({
            "arity": self.arity,
            "top_states_index": self.top_states_index,
            "top_states": self.top_states.as_ref().map(|s| {
                s.iter().map(|x| a.state_name(*x)).collect::<Vec<_>>()
            }),
            "layers": layers,
            "initial_layer": self.initial_layer.as_ref().map(tuples),
        })
    }
}
