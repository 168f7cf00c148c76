//! Directed multigraph with observable/unobservable edges, used for all
//! reachability and layering computations.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EdgeFilter {
    All,
    Observable,
    Unobservable,
}

impl EdgeFilter {
    fn admits(self, observable: bool) -> bool {
        match self {
            EdgeFilter::All => true,
            EdgeFilter::Observable => observable,
            EdgeFilter::Unobservable => !observable,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Arc {
    pub node: usize,
    pub observable: bool,
    pub id: usize,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Digraph {
    succ: Vec<Vec<Arc>>,
    pred: Vec<Vec<Arc>>,
    edges: usize,
}

pub(crate) struct Sccs {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            succ: vec![Vec::new(); n],
            pred: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    /// Returns the new edge id (edges are numbered in insertion order).
    pub fn add_edge(&mut self, from: usize, to: usize, observable: bool) -> usize {
        let id = self.edges;
        self.edges += 1;
        self.succ[from].push(Arc {
            node: to,
            observable,
            id,
        });
        self.pred[to].push(Arc {
            node: from,
            observable,
            id,
        });
        id
    }

    pub fn succ(&self, n: usize) -> &[Arc] {
        &self.succ[n]
    }

    /// Reflexive-transitive closure of `seeds` along admitted edges.
    pub fn forward(&self, seeds: &[bool], filter: EdgeFilter) -> Vec<bool> {
        closure(&self.succ, seeds, filter)
    }

    pub fn backward(&self, seeds: &[bool], filter: EdgeFilter) -> Vec<bool> {
        closure(&self.pred, seeds, filter)
    }

    /// Nodes with an admitted edge into `set` (exactly one step).
    pub fn step_backward(&self, set: &[bool], filter: EdgeFilter) -> Vec<bool> {
        step(&self.pred, set, filter)
    }

    pub fn sccs(&self) -> Sccs {
        let mut g = DiGraph::<(), ()>::with_capacity(self.len(), self.edges);
        let ids: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (u, arcs) in self.succ.iter().enumerate() {
            for a in arcs {
                g.add_edge(ids[u], ids[a.node], ());
            }
        }
        let mut components: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        components.sort_unstable();
        let mut component_of = vec![0; self.len()];
        for (i, c) in components.iter().enumerate() {
            for &n in c {
                component_of[n] = i;
            }
        }
        Sccs {
            component_of,
            components,
        }
    }

    /// Nodes whose SCC contains an internal edge accepted by `pred`.
    pub fn cyclic_nodes_by(&self, pred: impl Fn(&Arc) -> bool) -> Vec<bool> {
        let sccs = self.sccs();
        let mut good = vec![false; sccs.components.len()];
        for (u, arcs) in self.succ.iter().enumerate() {
            for a in arcs {
                let c = sccs.component_of[u];
                if c == sccs.component_of[a.node] && pred(a) {
                    good[c] = true;
                }
            }
        }
        (0..self.len())
            .map(|n| good[sccs.component_of[n]])
            .collect()
    }

    /// Nodes on a cycle carrying at least one observable edge.
    pub fn observable_cycle_nodes(&self) -> Vec<bool> {
        self.cyclic_nodes_by(|a| a.observable)
    }

    /// Breadth-first search over `(node, phase)` pairs. `step` decides whether an
    /// arc may be taken in a phase and returns the next phase. Returns the start
    /// node and the arcs of a shortest path to an accepted pair; ties are broken
    /// by start order and arc insertion order.
    pub fn phased_path(
        &self,
        starts: &[usize],
        phases: usize,
        step: impl Fn(usize, usize, &Arc) -> Option<usize>,
        accept: impl Fn(usize, usize) -> bool,
    ) -> Option<(usize, Vec<Arc>)> {
        let n = self.len();
        let mut parent: Vec<Option<(usize, Arc)>> = vec![None; n * phases];
        let mut seen = vec![false; n * phases];
        let mut queue = VecDeque::new();
        for &s in starts {
            if !seen[s * phases] {
                seen[s * phases] = true;
                queue.push_back((s, 0));
            }
        }
        while let Some((u, ph)) = queue.pop_front() {
            if accept(u, ph) {
                let mut arcs = Vec::new();
                let mut cur = u * phases + ph;
                while let Some((prev, arc)) = parent[cur] {
                    arcs.push(arc);
                    cur = prev;
                }
                arcs.reverse();
                return Some((cur / phases, arcs));
            }
            for a in &self.succ[u] {
                if let Some(next) = step(u, ph, a) {
                    let key = a.node * phases + next;
                    if !seen[key] {
                        seen[key] = true;
                        parent[key] = Some((u * phases + ph, *a));
                        queue.push_back((a.node, next));
                    }
                }
            }
        }
        None
    }
}

fn closure(adj: &[Vec<Arc>], seeds: &[bool], filter: EdgeFilter) -> Vec<bool> {
    let mut seen = seeds.to_vec();
    let mut stack: Vec<usize> = (0..seeds.len()).filter(|&i| seeds[i]).collect();
    while let Some(u) = stack.pop() {
        for a in &adj[u] {
            if filter.admits(a.observable) && !seen[a.node] {
                seen[a.node] = true;
                stack.push(a.node);
            }
        }
    }
    seen
}

fn step(adj: &[Vec<Arc>], set: &[bool], filter: EdgeFilter) -> Vec<bool> {
    let mut out = vec![false; set.len()];
    for (u, arcs) in adj.iter().enumerate() {
        if set[u] {
            for a in arcs {
                if filter.admits(a.observable) {
                    out[a.node] = true;
                }
            }
        }
    }
    out
}

pub(crate) fn mask(n: usize, members: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut m = vec![false; n];
    for i in members {
        m[i] = true;
    }
    m
}

pub(crate) fn and(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

pub(crate) fn any(a: &[bool]) -> bool {
    a.iter().any(|&x| x)
}
