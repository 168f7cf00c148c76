//! Brute-force semantic deciders, used to certify the structural verifiers
//! on small automata.
//!
//! Observations are explored through their state estimates: two words with
//! the same estimate have the same delayed estimates for every continuation,
//! so it suffices to know which estimates are reachable at which lengths.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::fsa::analysis::live_mask;
use crate::fsa::estimate::{initial_mask, observe, prepend, unobservable_closure};
use crate::fsa::{Fsa, StateId, SymbolId};
use crate::verify::{Flavor, Property, Specification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub holds: bool,
    /// `false` when `depth` was too small to rule out longer violations; a
    /// `holds = false` answer is always certain.
    pub exact: bool,
}

/// Reachable nonempty estimates and their successors per symbol.
struct Observer {
    estimates: Vec<Vec<bool>>,
    succ: Vec<Vec<usize>>,
}

impl Observer {
    fn new(a: &Fsa) -> Observer {
        let mut estimates = Vec::new();
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
        let start = unobservable_closure(a, &initial_mask(a));
        if start.iter().any(|&x| x) {
            index.insert(start.clone(), 0);
            estimates.push(start);
            succ.push(Vec::new());
        }
        let mut queue: VecDeque<usize> = (0..estimates.len()).collect();
        while let Some(i) = queue.pop_front() {
            for sym in a.symbols() {
                let next = observe(a, &estimates[i], sym);
                if !next.iter().any(|&x| x) {
                    continue;
                }
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    estimates.push(next);
                    succ.push(Vec::new());
                    queue.push_back(estimates.len() - 1);
                    estimates.len() - 1
                });
                succ[i].push(j);
            }
        }
        Observer { estimates, succ }
    }

    fn len(&self) -> usize {
        self.estimates.len()
    }

    /// Calls `visit(length, estimate)` for every estimate reachable by a word
    /// of each length in `lo..=hi`.
    fn levels(&self, lo: usize, hi: usize, mut visit: impl FnMut(usize) -> bool) -> bool {
        if self.len() == 0 {
            return false;
        }
        let mut level = vec![false; self.len()];
        level[0] = true;
        for len in 0..=hi {
            if len >= lo {
                for (i, &on) in level.iter().enumerate() {
                    if on && visit(i) {
                        return true;
                    }
                }
            }
            let mut next = vec![false; self.len()];
            for (i, &on) in level.iter().enumerate() {
                if on {
                    for &j in &self.succ[i] {
                        next[j] = true;
                    }
                }
            }
            level = next;
        }
        false
    }
}

/// For every word of length `k`: the states able to generate it, and the
/// states able to generate it and then continue forever.
fn suffix_preimages(a: &Fsa, k: usize) -> Vec<(Vec<bool>, Vec<bool>)> {
    let mut cur: HashSet<(Vec<bool>, Vec<bool>)> = HashSet::new();
    cur.insert((vec![true; a.num_states()], live_mask(a)));
    for _ in 0..k {
        let mut next = HashSet::new();
        for (pre, live) in &cur {
            for sym in a.symbols() {
                let p = prepend(a, sym, pre);
                if p.iter().any(|&x| x) {
                    next.insert((p, prepend(a, sym, live)));
                }
            }
        }
        cur = next;
    }
    let mut v: Vec<_> = cur.into_iter().collect();
    v.sort();
    v
}

/// Whether an estimate is ambiguous after some suffix of length `k`.
struct Badness<'s> {
    suffixes: Vec<(Vec<bool>, Vec<bool>)>,
    flavor: Flavor,
    spec: Option<&'s Specification>,
}

impl Badness<'_> {
    fn is_bad(&self, y: &[bool]) -> bool {
        self.suffixes.iter().any(|(pre, live)| {
            let z: Vec<StateId> = (0..y.len())
                .filter(|&i| y[i] && pre[i])
                .map(StateId)
                .collect();
            let confused = match self.spec {
                None => z.len() >= 2,
                Some(spec) => z
                    .iter()
                    .any(|&x| z.iter().any(|&w| x != w && spec.matches(x, w))),
            };
            let extends = match self.flavor {
                Flavor::Star => true,
                Flavor::Omega => (0..y.len()).any(|i| y[i] && live[i]),
            };
            confused && extends
        })
    }
}

/// Not K-delayed detectable iff ambiguous estimates recur after arbitrarily
/// long prefixes, i.e. one is reachable at some length in `N..=2N-1` for `N`
/// reachable estimates.
pub fn oracle_k_delayed(a: &Fsa, flavor: Flavor, k: usize, depth: usize) -> OracleVerdict {
    let obs = Observer::new(a);
    let n = obs.len();
    let bad = Badness {
        suffixes: suffix_preimages(a, k),
        flavor,
        spec: None,
    };
    let need = (2 * n).saturating_sub(1);
    let found = obs.levels(n, depth.min(need), |i| bad.is_bad(&obs.estimates[i]));
    OracleVerdict {
        holds: !found,
        exact: found || depth >= need,
    }
}

pub fn oracle_star_k_delayed(a: &Fsa, k: usize, depth: usize) -> OracleVerdict {
    oracle_k_delayed(a, Flavor::Star, k, depth)
}

pub fn oracle_omega_k_delayed(a: &Fsa, k: usize, depth: usize) -> OracleVerdict {
    oracle_k_delayed(a, Flavor::Omega, k, depth)
}

/// Not (k1,k2)-detectable iff some prefix of length at least `k1` has an
/// ambiguous delayed estimate; lengths beyond `k1 + N - 1` add nothing new.
pub fn oracle_k1k2(
    a: &Fsa,
    k1: usize,
    k2: usize,
    flavor: Flavor,
    spec: Option<&Specification>,
    depth: usize,
) -> OracleVerdict {
    let obs = Observer::new(a);
    let need = (k1 + obs.len()).saturating_sub(1);
    let bad = Badness {
        suffixes: suffix_preimages(a, k2),
        flavor,
        spec,
    };
    let found = obs.levels(k1, depth.min(need), |i| bad.is_bad(&obs.estimates[i]));
    OracleVerdict {
        holds: !found,
        exact: found || depth >= need,
    }
}

/// A left run together with the estimate of normal runs producing the same
/// observation, and whether the left run has performed a fault.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Config {
    x: StateId,
    normal: Vec<bool>,
    faulted: bool,
}

struct ConfigGraph {
    configs: Vec<Config>,
    succ: Vec<Vec<usize>>,
    /// Configurations entered by a faulty move.
    fault_entries: Vec<usize>,
}

fn normal_closure(a: &Fsa, set: &[bool]) -> Vec<bool> {
    let mut seen = set.to_vec();
    let mut stack: Vec<usize> = (0..set.len()).filter(|&i| set[i]).collect();
    while let Some(s) = stack.pop() {
        for t in a.outgoing(StateId(s)) {
            if !a.is_observable(t.event) && !a.is_faulty(t.event) && !seen[t.target.0] {
                seen[t.target.0] = true;
                stack.push(t.target.0);
            }
        }
    }
    seen
}

fn normal_observe(a: &Fsa, set: &[bool], sym: SymbolId) -> Vec<bool> {
    let mut next = vec![false; a.num_states()];
    for t in a.transitions() {
        if set[t.source.0] && !a.is_faulty(t.event) && a.label(t.event) == Some(sym) {
            next[t.target.0] = true;
        }
    }
    normal_closure(a, &next)
}

impl ConfigGraph {
    fn new(a: &Fsa) -> ConfigGraph {
        let normal0 = normal_closure(a, &initial_mask(a));
        let mut configs = Vec::new();
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Config, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut fault_entries = HashSet::new();
        let mut intern = |c: Config, configs: &mut Vec<Config>, succ: &mut Vec<Vec<usize>>, queue: &mut VecDeque<usize>| {
            *index.entry(c.clone()).or_insert_with(|| {
                configs.push(c);
                succ.push(Vec::new());
                queue.push_back(configs.len() - 1);
                configs.len() - 1
            })
        };
        for &x in a.initial() {
            let c = Config {
                x,
                normal: normal0.clone(),
                faulted: false,
            };
            intern(c, &mut configs, &mut succ, &mut queue);
        }
        while let Some(i) = queue.pop_front() {
            let c = configs[i].clone();
            for t in a.outgoing(c.x) {
                let normal = match a.label(t.event) {
                    None => c.normal.clone(),
                    Some(sym) => normal_observe(a, &c.normal, sym),
                };
                if !normal.iter().any(|&x| x) {
                    continue;
                }
                let faulty = a.is_faulty(t.event);
                let next = Config {
                    x: t.target,
                    normal,
                    faulted: c.faulted || faulty,
                };
                let j = intern(next, &mut configs, &mut succ, &mut queue);
                succ[i].push(j);
                if faulty {
                    fault_entries.insert(j);
                }
            }
        }
        let mut fault_entries: Vec<usize> = fault_entries.into_iter().collect();
        fault_entries.sort_unstable();
        ConfigGraph {
            configs,
            succ,
            fault_entries,
        }
    }
}

/// Uniform bound: not diagnosable iff, for every bound, some fault is followed
/// by a longer continuation still matched by a normal run. Continuations are
/// counted level by level after the fault.
pub fn oracle_diagnosable(a: &Fsa, depth: usize) -> OracleVerdict {
    let g = ConfigGraph::new(a);
    let need = g.configs.len();
    let mut level = vec![false; g.configs.len()];
    for &i in &g.fault_entries {
        level[i] = true;
    }
    for _ in 0..depth.min(need) {
        let mut next = vec![false; level.len()];
        for (i, &on) in level.iter().enumerate() {
            if on {
                for &j in &g.succ[i] {
                    next[j] = true;
                }
            }
        }
        level = next;
    }
    let survives = level.iter().any(|&x| x);
    OracleVerdict {
        holds: !survives,
        exact: depth >= need,
    }
}

/// Per-trace bound: not diagnosable iff some faulty trace has ambiguous
/// continuations of unbounded length, i.e. reaches a cycle of configurations.
pub fn oracle_diagnosable_per_trace(a: &Fsa) -> bool {
    let g = ConfigGraph::new(a);
    // Faulted configurations are closed under successors, so look for a
    // cycle among them.
    let n = g.configs.len();
    let faulted: Vec<bool> = g.configs.iter().map(|c| c.faulted).collect();
    // Kahn-style peeling: repeatedly drop faulted configs without faulted
    // successors; anything left lies on or leads to a cycle.
    let mut out_deg: Vec<usize> = (0..n)
        .map(|i| g.succ[i].iter().filter(|&&j| faulted[j]).count())
        .collect();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for &j in &g.succ[i] {
            pred[j].push(i);
        }
    }
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| faulted[i] && out_deg[i] == 0).collect();
    while let Some(i) = stack.pop() {
        if removed[i] {
            continue;
        }
        removed[i] = true;
        for &p in &pred[i] {
            if faulted[p] && !removed[p] {
                out_deg[p] -= 1;
                if out_deg[p] == 0 {
                    stack.push(p);
                }
            }
        }
    }
    !(0..n).any(|i| faulted[i] && !removed[i])
}

/// Depth at which every oracle answer for `property` is exact.
pub fn exact_depth(a: &Fsa, property: &Property) -> usize {
    let n = a.num_states();
    match property {
        Property::KDelayed { k, .. } => {
            (n * n * (k + 3)).max((2 * Observer::new(a).len()).saturating_sub(1))
        }
        Property::K1K2 { k1, k2, .. } | Property::K1K2D { k1, k2, .. } => {
            (n * n * (k1 + k2 + 1)).max(k1 + Observer::new(a).len())
        }
        Property::Diagnosable => ConfigGraph::new(a).configs.len().max(n * n),
    }
}

/// Dispatches to the matching oracle.
pub fn oracle(a: &Fsa, property: &Property, depth: usize) -> OracleVerdict {
    match property {
        Property::KDelayed { flavor, k } => oracle_k_delayed(a, *flavor, *k, depth),
        Property::K1K2 { flavor, k1, k2 } => oracle_k1k2(a, *k1, *k2, *flavor, None, depth),
        Property::K1K2D {
            flavor,
            k1,
            k2,
            spec,
        } => oracle_k1k2(a, *k1, *k2, *flavor, Some(spec), depth),
        Property::Diagnosable => oracle_diagnosable(a, depth),
    }
}
