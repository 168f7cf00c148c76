//! Minimum edge cuts where only labelled edges may be removed.

use std::collections::{BTreeSet, VecDeque};

use petgraph::algo::ford_fulkerson;
use petgraph::graph::{DiGraph, NodeIndex};

/// An arc of a cut problem; `Some(label)` arcs are removable at unit cost,
/// `None` arcs are fixed.
pub(crate) type CutArc<T> = (usize, usize, Option<T>);

const FIXED: u64 = u64::MAX / 4;

fn reaches_through_fixed<T>(n: usize, arcs: &[CutArc<T>], sources: &[usize], sinks: &[usize]) -> bool {
    let mut succ = vec![Vec::new(); n];
    for (u, v, label) in arcs {
        if label.is_none() {
            succ[*u].push(*v);
        }
    }
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = sources.iter().copied().collect();
    for &s in sources {
        seen[s] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &succ[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    sinks.iter().any(|&t| seen[t])
}

/// Labels of a minimum set of removable arcs whose removal disconnects every
/// source from every sink. `None` when fixed arcs alone connect them.
pub(crate) fn min_cut<T: Copy + Ord>(
    n: usize,
    arcs: &[CutArc<T>],
    sources: &[usize],
    sinks: &[usize],
) -> Option<BTreeSet<T>> {
    if reaches_through_fixed(n, arcs, sources, sinks) {
        return None;
    }
    let (s, t) = (n, n + 1);
    let mut all: Vec<(usize, usize, u64)> = arcs
        .iter()
        .map(|(u, v, l)| (*u, *v, if l.is_some() { 1 } else { FIXED }))
        .collect();
    all.extend(sources.iter().map(|&x| (s, x, FIXED)));
    all.extend(sinks.iter().map(|&x| (x, t, FIXED)));

    let mut g = DiGraph::<(), u64>::with_capacity(n + 2, all.len());
    for _ in 0..n + 2 {
        g.add_node(());
    }
    for &(u, v, c) in &all {
        g.add_edge(NodeIndex::new(u), NodeIndex::new(v), c);
    }
    let (_, flows) = ford_fulkerson(&g, NodeIndex::new(s), NodeIndex::new(t));

    // Source side of the residual network.
    let mut out = vec![Vec::new(); n + 2];
    for (i, &(u, v, c)) in all.iter().enumerate() {
        if flows[i] < c {
            out[u].push(v);
        }
        if flows[i] > 0 {
            out[v].push(u);
        }
    }
    let mut side = vec![false; n + 2];
    side[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in &out[u] {
            if !side[v] {
                side[v] = true;
                queue.push_back(v);
            }
        }
    }
    Some(
        arcs.iter()
            .filter(|(u, v, _)| side[*u] && !side[*v])
            .filter_map(|(_, _, l)| *l)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_the_bottleneck() {
        // 0 -> 1 -> 3 and 0 -> 2 -> 3, joined by one removable arc 3 -> 4.
        let arcs = [
            (0, 1, Some('a')),
            (0, 2, Some('b')),
            (1, 3, None),
            (2, 3, None),
            (3, 4, Some('c')),
        ];
        assert_eq!(min_cut(5, &arcs, &[0], &[4]), Some(BTreeSet::from(['c'])));
    }

    #[test]
    fn fixed_path_has_no_cut() {
        let arcs = [(0, 1, None::<u8>), (1, 2, None)];
        assert_eq!(min_cut(3, &arcs, &[0], &[2]), None);
        assert_eq!(min_cut(3, &arcs, &[2], &[0]), Some(BTreeSet::new()));
    }

    #[test]
    fn shared_labels_count_once() {
        let arcs = [(0, 1, Some(7)), (0, 2, Some(7)), (1, 3, None), (2, 3, None)];
        assert_eq!(min_cut(4, &arcs, &[0], &[3]), Some(BTreeSet::from([7])));
    }
}
