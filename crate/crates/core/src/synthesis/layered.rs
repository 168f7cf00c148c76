//! Layered copies of the pair product that collect exactly the violation runs
//! of a (k1,k2) target, plus the single-copy automaton of omega endings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use serde_json::{json, Value};

use crate::composition::{pair_name, PairState, Product};
use crate::fsa::analysis::live_states;
use crate::fsa::{Fsa, StateId, Transition};
use crate::graph::{Digraph, EdgeFilter};
use crate::verify::delayed::{observable_cycle_states, pair_product};
use crate::verify::Flavor;

/// Position of a node inside its layer. Only layer 1 has `Unobserved` nodes
/// (reached before any observation); only the ambiguity layer has `Tail`
/// nodes (silent moves after the ambiguity point).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Unobserved,
    Body,
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayerNode {
    pub layer: usize,
    pub stage: Stage,
    pub pair: PairState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerEdge {
    pub source: usize,
    pub target: usize,
    /// Component transitions realizing the step; both `None` for the link
    /// from a marked node to its tail copy.
    pub left: Option<Transition>,
    pub right: Option<Transition>,
}

/// The omega ending: from `initial`, every run of the automaton; `marked`
/// states lie on observable cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopAutomaton {
    pub initial: BTreeSet<StateId>,
    pub states: BTreeSet<StateId>,
    pub marked: BTreeSet<StateId>,
    pub transitions: Vec<Transition>,
}

#[derive(Clone, Debug)]
pub struct LayeredWitnessGraph {
    pub flavor: Flavor,
    pub k1: usize,
    pub k2: usize,
    nodes: Vec<LayerNode>,
    edges: Vec<LayerEdge>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    marked: Vec<bool>,
    top: Option<TopAutomaton>,
}

struct Builder<'p> {
    p: &'p Product,
    k1: usize,
    k2: usize,
    nodes: Vec<LayerNode>,
    index: HashMap<LayerNode, usize>,
    queue: VecDeque<usize>,
}

impl Builder<'_> {
    fn filter_layer(&self) -> usize {
        self.k1
    }

    fn last_layer(&self) -> usize {
        self.k1 + self.k2
    }

    fn intern(&mut self, n: LayerNode) -> usize {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(n);
        self.index.insert(n, i);
        self.queue.push_back(i);
        i
    }

    fn is_mark(&self, n: &LayerNode) -> bool {
        n.stage == Stage::Body && (n.layer != self.filter_layer() || n.pair.left != n.pair.right)
    }

    fn node(&self, layer: usize, stage: Stage, v: usize) -> LayerNode {
        let t = &self.p.nodes[v];
        LayerNode {
            layer,
            stage,
            pair: PairState::new(t[0], t[1]),
        }
    }

    /// Successors of `n` as (node, product edge id); `None` is the tail link.
    fn successors(&self, n: &LayerNode, v: usize) -> Vec<(LayerNode, Option<usize>)> {
        let (f, last, l) = (self.filter_layer(), self.last_layer(), n.layer);
        let mut out = Vec::new();
        if n.stage == Stage::Body && l == f && self.k2 > 0 && self.is_mark(n) {
            out.push((LayerNode { stage: Stage::Tail, ..*n }, None));
        }
        for arc in self.p.graph.succ(v) {
            let obs = arc.observable;
            let next = match n.stage {
                Stage::Unobserved if obs => Some((l, Stage::Body)),
                Stage::Unobserved => Some((l, Stage::Unobserved)),
                Stage::Tail if obs => Some((l + 1, Stage::Body)),
                Stage::Tail => Some((l, Stage::Tail)),
                Stage::Body if l < f => Some(if obs { (l + 1, Stage::Body) } else { (l, Stage::Body) }),
                Stage::Body if l == f => Some((l, Stage::Body)),
                Stage::Body if l == last => None,
                Stage::Body if obs => Some((l + 1, Stage::Body)),
                Stage::Body => Some((l, Stage::Body)),
            };
            out.extend(next.map(|(layer, stage)| (self.node(layer, stage, arc.node), Some(arc.id))));
            // Inside a prefix layer the path may also continue with the
            // observable step in the same layer.
            if n.stage == Stage::Body && l < f && obs {
                out.push((self.node(l, Stage::Body, arc.node), Some(arc.id)));
            }
        }
        out
    }
}

fn component_transition(t: &[StateId], e: Option<crate::fsa::EventId>, u: &[StateId], c: usize) -> Option<Transition> {
    e.map(|e| Transition::new(t[c], e, u[c]))
}

impl LayeredWitnessGraph {
    pub fn build(a: &Fsa, flavor: Flavor, k1: usize, k2: usize) -> Self {
        let p = pair_product(a);
        let mut b = Builder {
            p: &p,
            k1,
            k2,
            nodes: Vec::new(),
            index: HashMap::new(),
            queue: VecDeque::new(),
        };
        let start = if k1 == 0 { (0, Stage::Body) } else { (1, Stage::Unobserved) };
        let sources: Vec<usize> = p
            .initial
            .iter()
            .map(|&v| {
                let n = b.node(start.0, start.1, v);
                b.intern(n)
            })
            .collect();
        let mut raw_edges = Vec::new();
        while let Some(i) = b.queue.pop_front() {
            let n = b.nodes[i];
            let v = p.index[&vec![n.pair.left, n.pair.right]];
            for (m, id) in b.successors(&n, v) {
                let j = b.intern(m);
                raw_edges.push((i, j, id));
            }
        }

        let live = live_states(a);
        let last = k1 + k2;
        let marked: Vec<bool> = b.nodes.iter().map(|n| b.is_mark(n)).collect();
        let is_sink = |i: usize| {
            let n = &b.nodes[i];
            n.layer == last
                && marked[i]
                && (flavor == Flavor::Star || live.contains(&n.pair.left) || live.contains(&n.pair.right))
        };

        // Keep only nodes from which a sink is reachable.
        let mut g = Digraph::new(b.nodes.len());
        for &(i, j, _) in &raw_edges {
            g.add_edge(i, j, true);
        }
        let sink_mask: Vec<bool> = (0..b.nodes.len()).map(is_sink).collect();
        let keep = g.backward(&sink_mask, EdgeFilter::All);
        let mut renumber = vec![usize::MAX; b.nodes.len()];
        let mut nodes = Vec::new();
        let mut kept_marks = Vec::new();
        let mut sinks = Vec::new();
        for i in 0..b.nodes.len() {
            if keep[i] {
                renumber[i] = nodes.len();
                if sink_mask[i] {
                    sinks.push(nodes.len());
                }
                nodes.push(b.nodes[i]);
                kept_marks.push(marked[i]);
            }
        }
        let edges = raw_edges
            .iter()
            .filter(|(i, j, _)| keep[*i] && keep[*j])
            .map(|&(i, j, id)| {
                let (left, right) = match id {
                    None => (None, None),
                    Some(id) => {
                        let e = &p.edges[id];
                        let (t, u) = (&p.nodes[e.source], &p.nodes[e.target]);
                        (
                            component_transition(t, e.events[0], u, 0),
                            component_transition(t, e.events[1], u, 1),
                        )
                    }
                };
                LayerEdge {
                    source: renumber[i],
                    target: renumber[j],
                    left,
                    right,
                }
            })
            .collect();
        let sources = sources
            .into_iter()
            .filter(|&i| keep[i])
            .map(|i| renumber[i])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let top = (flavor == Flavor::Omega).then(|| {
            let initial: BTreeSet<StateId> = sinks
                .iter()
                .flat_map(|&i| {
                    let n: &LayerNode = &nodes[i];
                    [n.pair.left, n.pair.right]
                })
                .filter(|s| live.contains(s))
                .collect();
            top_automaton(a, initial)
        });

        LayeredWitnessGraph {
            flavor,
            k1,
            k2,
            nodes,
            edges,
            sources,
            sinks,
            marked: kept_marks,
            top,
        }
    }

    /// No violation run survives: the target property holds.
    pub fn is_empty(&self) -> bool {
        self.sinks.is_empty()
    }

    pub fn nodes(&self) -> &[LayerNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[LayerEdge] {
        &self.edges
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn top(&self) -> Option<&TopAutomaton> {
        self.top.as_ref()
    }

    pub fn first_layer(&self) -> usize {
        self.k1.min(1)
    }

    pub fn last_layer(&self) -> usize {
        self.k1 + self.k2
    }

    /// Pair states present in each layer.
    pub fn layers(&self) -> BTreeMap<usize, BTreeSet<PairState>> {
        let mut out: BTreeMap<usize, BTreeSet<PairState>> = (self.first_layer()..=self.last_layer())
            .map(|i| (i, BTreeSet::new()))
            .collect();
        for n in &self.nodes {
            out.entry(n.layer).or_default().insert(n.pair);
        }
        out
    }

    /// Marked pair states of each layer; in the last layer these are the
    /// pairs from which a violation completes.
    pub fn marks(&self) -> BTreeMap<usize, BTreeSet<PairState>> {
        let mut out: BTreeMap<usize, BTreeSet<PairState>> = (self.first_layer()..=self.last_layer())
            .map(|i| (i, BTreeSet::new()))
            .collect();
        let sinks: BTreeSet<usize> = self.sinks.iter().copied().collect();
        for (i, n) in self.nodes.iter().enumerate() {
            let mark = if n.layer == self.last_layer() {
                sinks.contains(&i)
            } else {
                self.marked[i]
            };
            if mark {
                out.entry(n.layer).or_default().insert(n.pair);
            }
        }
        out
    }

    pub fn to_json(&self, a: &Fsa) -> Value {
        let names = |s: &BTreeSet<PairState>| s.iter().map(|p| pair_name(a, *p)).collect::<Vec<_>>();
        let marks = self.marks();
        let layers: Vec<Value> = self
            .layers()
            .iter()
            .map(|(i, states)| {
                json!({
                    "index": i,
                    "states": names(states),
                    "marked": names(&marks[i]),
                })
            })
            .collect();
        let state_names = |s: &BTreeSet<StateId>| s.iter().map(|x| a.state_name(*x)).collect::<Vec<_>>();
        json!({
            "flavor": self.flavor.as_str(),
            "k1": self.k1,
            "k2": self.k2,
            "layers": layers,
            "top": self.top.as_ref().map(|t| json!({
                "initial": state_names(&t.initial),
                "states": state_names(&t.states),
                "marked": state_names(&t.marked),
            })),
        })
    }
}

fn top_automaton(a: &Fsa, initial: BTreeSet<StateId>) -> TopAutomaton {
    let mut seen: BTreeSet<StateId> = initial.clone();
    let mut stack: Vec<StateId> = initial.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for t in a.outgoing(s) {
            if seen.insert(t.target) {
                stack.push(t.target);
            }
        }
    }
    let cyclic = observable_cycle_states(a);
    TopAutomaton {
        marked: seen.intersection(&cyclic).copied().collect(),
        transitions: a
            .transitions()
            .iter()
            .copied()
            .filter(|t| seen.contains(&t.source))
            .collect(),
        states: seen,
        initial,
    }
}
