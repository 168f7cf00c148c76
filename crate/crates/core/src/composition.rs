//! Synchronized self-products of an automaton and its two-letter abstraction.
//!
//! Components move together on transitions with equal observable labels and
//! one at a time on unobservable transitions. Pairs give the concurrent
//! composition; triples are used internally where a third run must be tracked.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use itertools::Itertools;
use serde::Serialize;

use crate::fsa::{EventId, Fsa, FsaBuilder, StateId, Transition};
use crate::graph::Digraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    Standard,
    /// The right component may only use normal events.
    DiagTn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Materialize {
    /// Only tuples reachable from initial tuples.
    Reachable,
    /// Every tuple of states.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairState {
    pub left: StateId,
    pub right: StateId,
}

impl PairState {
    pub fn new(left: StateId, right: StateId) -> Self {
        PairState { left, right }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PairEventKind {
    SyncObservable,
    LeftEps,
    RightEps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairEvent {
    pub left: Option<EventId>,
    pub right: Option<EventId>,
}

impl PairEvent {
    pub fn kind(&self) -> PairEventKind {
        match (self.left, self.right) {
            (Some(_), Some(_)) => PairEventKind::SyncObservable,
            (Some(_), None) => PairEventKind::LeftEps,
            (None, Some(_)) => PairEventKind::RightEps,
            (None, None) => unreachable!("pair event moves at least one component"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairTransition {
    pub source: PairState,
    pub event: PairEvent,
    pub target: PairState,
}

#[derive(Clone, Debug)]
pub(crate) struct ProductEdge {
    pub source: usize,
    pub events: Vec<Option<EventId>>,
    pub target: usize,
    pub observable: bool,
}

/// Synchronized product of `arity` copies of one automaton. Edge ids in
/// `graph` index into `edges`.
#[derive(Clone, Debug)]
pub(crate) struct Product {
    pub arity: usize,
    pub nodes: Vec<Vec<StateId>>,
    pub index: HashMap<Vec<StateId>, usize>,
    pub initial: Vec<usize>,
    pub edges: Vec<ProductEdge>,
    pub graph: Digraph,
}

impl Product {
    pub fn build(a: &Fsa, normal_only: &[bool], materialize: Materialize) -> Product {
        let arity = normal_only.len();
        let moves_all = moves_by_label(a, false);
        let moves_normal = moves_by_label(a, true);
        let moves = |c: usize| {
            if normal_only[c] {
                &moves_normal
            } else {
                &moves_all
            }
        };

        let mut nodes: Vec<Vec<StateId>> = Vec::new();
        let mut index: HashMap<Vec<StateId>, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |t: Vec<StateId>, nodes: &mut Vec<Vec<StateId>>, queue: &mut VecDeque<usize>| {
            if let Some(&i) = index.get(&t) {
                return i;
            }
            let i = nodes.len();
            index.insert(t.clone(), i);
            nodes.push(t);
            queue.push_back(i);
            i
        };

        if materialize == Materialize::Full {
            for t in (0..arity).map(|_| (0..a.num_states()).map(StateId)).multi_cartesian_product() {
                intern(t, &mut nodes, &mut queue);
            }
        }
        let mut initial = Vec::new();
        for t in (0..arity)
            .map(|_| a.initial().iter().copied())
            .multi_cartesian_product()
        {
            initial.push(intern(t, &mut nodes, &mut queue));
        }
        if arity == 0 {
            initial.clear();
        }
        initial.sort_unstable();
        initial.dedup();

        let mut edges = Vec::new();
        while let Some(u) = queue.pop_front() {
            let tuple = nodes[u].clone();
            let first = &moves(0)[tuple[0].0];
            for (label, _) in first.iter().filter(|(l, _)| l.is_some()) {
                let choices: Vec<&Vec<(EventId, StateId)>> = match (0..arity)
                    .map(|c| moves(c)[tuple[c].0].get(label))
                    .collect::<Option<Vec<_>>>()
                {
                    Some(c) => c,
                    None => continue,
                };
                for combo in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
                    let target: Vec<StateId> = combo.iter().map(|(_, t)| *t).collect();
                    let events = combo.iter().map(|(e, _)| Some(*e)).collect();
                    let v = intern(target, &mut nodes, &mut queue);
                    edges.push(ProductEdge {
                        source: u,
                        events,
                        target: v,
                        observable: true,
                    });
                }
            }
            for c in 0..arity {
                if let Some(eps) = moves(c)[tuple[c].0].get(&None) {
                    for &(e, t) in eps {
                        let mut target = tuple.clone();
                        target[c] = t;
                        let mut events = vec![None; arity];
                        events[c] = Some(e);
                        let v = intern(target, &mut nodes, &mut queue);
                        edges.push(ProductEdge {
                            source: u,
                            events,
                            target: v,
                            observable: false,
                        });
                    }
                }
            }
        }

        let mut graph = Digraph::new(nodes.len());
        for e in &edges {
            graph.add_edge(e.source, e.target, e.observable);
        }
        Product {
            arity,
            nodes,
            index,
            initial,
            edges,
            graph,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_mask(&self, pred: impl Fn(&[StateId]) -> bool) -> Vec<bool> {
        self.nodes.iter().map(|n| pred(n)).collect()
    }

    pub fn initial_mask(&self) -> Vec<bool> {
        crate::graph::mask(self.len(), self.initial.iter().copied())
    }
}

type Moves = Vec<BTreeMap<Option<usize>, Vec<(EventId, StateId)>>>;

fn moves_by_label(a: &Fsa, normal_only: bool) -> Moves {
    let mut out: Moves = vec![BTreeMap::new(); a.num_states()];
    for t in a.transitions() {
        if normal_only && a.is_faulty(t.event) {
            continue;
        }
        out[t.source.0]
            .entry(a.label(t.event).map(|l| l.0))
            .or_default()
            .push((t.event, t.target));
    }
    out
}

/// Pairs of runs producing the same observation.
#[derive(Clone, Debug)]
pub struct ConcurrentComposition {
    variant: Variant,
    pub(crate) product: Product,
}

pub fn concurrent_composition(a: &Fsa) -> ConcurrentComposition {
    concurrent_composition_with(a, Variant::Standard, Materialize::Reachable)
}

/// Left component ranges over all runs, right component over normal runs.
pub fn diag_composition(a: &Fsa) -> ConcurrentComposition {
    concurrent_composition_with(a, Variant::DiagTn, Materialize::Reachable)
}

pub fn concurrent_composition_with(
    a: &Fsa,
    variant: Variant,
    materialize: Materialize,
) -> ConcurrentComposition {
    let normal = match variant {
        Variant::Standard => [false, false],
        Variant::DiagTn => [false, true],
    };
    ConcurrentComposition {
        variant,
        product: Product::build(a, &normal, materialize),
    }
}

impl ConcurrentComposition {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn num_states(&self) -> usize {
        self.product.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.product.edges.len()
    }

    pub(crate) fn pair(&self, n: usize) -> PairState {
        let t = &self.product.nodes[n];
        PairState::new(t[0], t[1])
    }

    /// Sorted by `(left, right)`.
    pub fn states(&self) -> Vec<PairState> {
        let mut v: Vec<PairState> = (0..self.num_states()).map(|n| self.pair(n)).collect();
        v.sort_unstable();
        v
    }

    pub fn initial_states(&self) -> Vec<PairState> {
        let mut v: Vec<PairState> = self.product.initial.iter().map(|&n| self.pair(n)).collect();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, p: PairState) -> bool {
        self.product.index.contains_key(&vec![p.left, p.right])
    }

    pub fn transitions(&self) -> Vec<PairTransition> {
        let mut v: Vec<PairTransition> = self
            .product
            .edges
            .iter()
            .map(|e| PairTransition {
                source: self.pair(e.source),
                event: PairEvent {
                    left: e.events[0],
                    right: e.events[1],
                },
                target: self.pair(e.target),
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub fn events(&self) -> BTreeSet<PairEvent> {
        self.transitions().into_iter().map(|t| t.event).collect()
    }

    /// States reachable from the initial pairs.
    pub fn accessible_states(&self) -> Vec<PairState> {
        let reach = self
            .product
            .graph
            .forward(&self.product.initial_mask(), crate::graph::EdgeFilter::All);
        let mut v: Vec<PairState> = (0..self.num_states())
            .filter(|&n| reach[n])
            .map(|n| self.pair(n))
            .collect();
        v.sort_unstable();
        v
    }

    /// Plain automaton over named pairs: states `(x,y)`, events `(t,t')`,
    /// `(t,eps)` or `(eps,t')`.
    pub fn to_fsa(&self, a: &Fsa) -> Fsa {
        let mut b = FsaBuilder::new();
        for p in self.states() {
            b.state(&pair_name(a, p)).expect("pair names are unique");
        }
        for p in self.initial_states() {
            let id = b.state_id(&pair_name(a, p)).expect("declared");
            b.initial(id);
        }
        for s in a.alphabet() {
            b.symbol(s).expect("valid symbol");
        }
        let events = self.events();
        for ev in &events {
            let name = pair_event_name(a, *ev);
            let label = match ev.kind() {
                PairEventKind::SyncObservable => {
                    a.label(ev.left.unwrap()).map(|l| a.symbol_name(l))
                }
                _ => None,
            };
            let id = b.event(&name, label).expect("pair event names are unique");
            let parts = [ev.left, ev.right];
            if parts.iter().flatten().any(|&e| a.is_controllable(e)) {
                b.set_controllable(id);
            }
            if ev.left.is_some_and(|e| a.is_faulty(e)) {
                b.set_faulty(id);
            }
        }
        for t in self.transitions() {
            b.transition_by_name(
                &pair_name(a, t.source),
                &pair_event_name(a, t.event),
                &pair_name(a, t.target),
            )
            .expect("product transitions are unique");
        }
        b.build()
    }
}

pub fn pair_name(a: &Fsa, p: PairState) -> String {
    format!("({},{})", a.state_name(p.left), a.state_name(p.right))
}

pub fn pair_event_name(a: &Fsa, e: PairEvent) -> String {
    let part = |x: Option<EventId>| x.map_or("eps".to_string(), |e| a.event_name(e).to_string());
    format!("({},{})", part(e.left), part(e.right))
}

/// Upper bound on the number of transitions of the fully materialized
/// composition: `|X|^2 (2 |T_eps| |X| + sum over symbols of |l^-1(s)|^2 |X|^2)`.
pub fn transition_count_bound(a: &Fsa) -> usize {
    let n = a.num_states();
    let unobservable = a.events().iter().filter(|e| e.label.is_none()).count();
    let mut per_symbol = vec![0usize; a.alphabet().len()];
    for e in a.events() {
        if let Some(l) = e.label {
            per_symbol[l.0] += 1;
        }
    }
    let sync: usize = per_symbol.iter().map(|c| c * c * n * n).sum();
    n * n * (2 * unobservable * n + sync)
}

/// Two-letter abstraction: `ehat` edges for transitions with an observable
/// event, `e` edges where every connecting event is unobservable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationAutomaton {
    fsa: Fsa,
}

pub const OBSERVABLE_LETTER: &str = "ehat";
pub const UNOBSERVABLE_LETTER: &str = "e";

pub fn observation_automaton(a: &Fsa) -> ObservationAutomaton {
    let mut kinds: BTreeMap<(StateId, StateId), (bool, bool)> = BTreeMap::new();
    for t in a.transitions() {
        let k = kinds.entry((t.source, t.target)).or_default();
        if a.is_observable(t.event) {
            k.0 = true;
        } else {
            k.1 = true;
        }
    }
    let mut b = FsaBuilder::new();
    for s in a.states() {
        b.state(a.state_name(s)).expect("names already validated");
    }
    for &s in a.initial() {
        b.initial(s);
    }
    let hat = b
        .event(OBSERVABLE_LETTER, Some(OBSERVABLE_LETTER))
        .expect("fresh event");
    let eps = b.event(UNOBSERVABLE_LETTER, None).expect("fresh event");
    let transitions = kinds.into_iter().map(|((x, y), (obs, _))| {
        Transition::new(x, if obs { hat } else { eps }, y)
    });
    ObservationAutomaton {
        fsa: b.build().with_transitions(transitions),
    }
}

impl ObservationAutomaton {
    pub fn fsa(&self) -> &Fsa {
        &self.fsa
    }

    pub fn hat_edges(&self) -> BTreeSet<(StateId, StateId)> {
        self.edges(true)
    }

    pub fn eps_edges(&self) -> BTreeSet<(StateId, StateId)> {
        self.edges(false)
    }

    fn edges(&self, observable: bool) -> BTreeSet<(StateId, StateId)> {
        self.fsa
            .transitions()
            .iter()
            .filter(|t| self.fsa.is_observable(t.event) == observable)
            .map(|t| (t.source, t.target))
            .collect()
    }
}
