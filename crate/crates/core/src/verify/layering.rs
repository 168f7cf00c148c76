//! Backward layer computation shared by the delayed and (k1,k2) verifiers,
//! and forward extraction of a shortest layered witness.

use std::collections::BTreeMap;

use super::witness::{ProductRun, Segment, SegmentKind};
use crate::composition::Product;
use crate::fsa::{Fsa, Lasso, Run, StateId, Transition};
use crate::graph::{and, any, Arc, EdgeFilter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    /// Pumpable prefix, filter point, `k` one-symbol delay segments.
    Delayed { k: usize },
    /// At least `k1` symbols before the filter point, `k2` delay segments.
    K1K2 { k1: usize, k2: usize },
}

pub(crate) struct Layering {
    pub layers: BTreeMap<usize, Vec<bool>>,
    pub initial_layer: Option<Vec<bool>>,
    pub holds: bool,
}

fn pre_eps(p: &Product, s: &[bool]) -> Vec<bool> {
    p.graph.backward(s, EdgeFilter::Unobservable)
}

fn pre_obs(p: &Product, s: &[bool]) -> Vec<bool> {
    p.graph.step_backward(s, EdgeFilter::Observable)
}

fn pre_all(p: &Product, s: &[bool]) -> Vec<bool> {
    p.graph.backward(s, EdgeFilter::All)
}

/// `filter` marks tuples that witness ambiguity, `top` tuples admissible at
/// the end of the delay segments.
pub(crate) fn compute(p: &Product, filter: &[bool], top: &[bool], shape: Shape) -> Layering {
    let acc = p.graph.forward(&p.initial_mask(), EdgeFilter::All);
    let top = and(top, &acc);
    // Indices of the filter layer and the top layer.
    let (point, last) = match shape {
        Shape::Delayed { k } => (3, 3 + k),
        Shape::K1K2 { k1, k2 } => (k1, k1 + k2),
    };
    let mut layers = BTreeMap::new();
    if point == last {
        layers.insert(point, and(&top, filter));
    } else {
        layers.insert(last, top);
        for i in (point + 1..last).rev() {
            let next = pre_obs(p, &pre_eps(p, &layers[&(i + 1)]));
            layers.insert(i, and(&next, &acc));
        }
        let first_delay = pre_eps(p, &pre_obs(p, &pre_eps(p, &layers[&(point + 1)])));
        layers.insert(point, and(&and(&first_delay, filter), &acc));
    }

    match shape {
        Shape::Delayed { .. } => {
            let cyc = p.graph.observable_cycle_nodes();
            let l2 = and(&and(&cyc, &pre_all(p, &layers[&3])), &acc);
            let holds = !any(&l2);
            layers.insert(2, l2);
            Layering {
                layers,
                initial_layer: None,
                holds,
            }
        }
        Shape::K1K2 { k1, .. } => {
            for i in (1..k1).rev() {
                let next = pre_obs(p, &pre_all(p, &layers[&(i + 1)]));
                layers.insert(i, and(&next, &acc));
            }
            if k1 == 0 {
                let holds = !any(&layers[&0]);
                Layering {
                    layers,
                    initial_layer: None,
                    holds,
                }
            } else {
                let bar0 = and(
                    &p.initial_mask(),
                    &pre_all(p, &pre_obs(p, &pre_all(p, &layers[&1]))),
                );
                let holds = !any(&bar0);
                Layering {
                    layers,
                    initial_layer: Some(bar0),
                    holds,
                }
            }
        }
    }
}

fn any_edge(_: usize, ph: usize, _: &Arc) -> Option<usize> {
    Some(ph)
}

/// Phase 0 until an observable edge is taken.
fn at_least_one_obs(_: usize, ph: usize, a: &Arc) -> Option<usize> {
    Some(if a.observable { 1 } else { ph })
}

/// Starts with an observable edge, then anything.
fn obs_then_any(_: usize, ph: usize, a: &Arc) -> Option<usize> {
    match (ph, a.observable) {
        (0, true) => Some(1),
        (0, false) => None,
        _ => Some(1),
    }
}

/// Exactly one observable edge, optionally preceded by unobservable ones.
fn one_obs(leading: bool) -> impl Fn(usize, usize, &Arc) -> Option<usize> {
    move |_, ph, a| match (ph, a.observable) {
        (0, true) => Some(1),
        (0, false) if leading => Some(0),
        (1, false) => Some(1),
        _ => None,
    }
}

struct Walker<'p> {
    p: &'p Product,
    segments: Vec<Segment>,
    cur: usize,
}

impl Walker<'_> {
    fn push(
        &mut self,
        kind: SegmentKind,
        starts: &[usize],
        step: impl Fn(usize, usize, &Arc) -> Option<usize>,
        accept: impl Fn(usize, usize) -> bool,
    ) {
        let phases = 2;
        let (start, arcs) = self
            .p
            .graph
            .phased_path(starts, phases, step, accept)
            .expect("layer membership guarantees a continuation");
        self.segments.push(product_run(self.p, kind, start, &arcs));
        self.cur = arcs.last().map_or(start, |a| a.node);
    }
}

pub(crate) fn product_run(p: &Product, kind: SegmentKind, start: usize, arcs: &[Arc]) -> Segment {
    let mut run = ProductRun {
        states: vec![p.nodes[start].clone()],
        events: Vec::new(),
    };
    for a in arcs {
        run.events.push(p.edges[a.id].events.clone());
        run.states.push(p.nodes[a.node].clone());
    }
    Segment { kind, run }
}

/// Shortest layered witness; `None` when the property holds.
pub(crate) fn extract(p: &Product, l: &Layering, shape: Shape) -> Option<(Vec<Segment>, usize)> {
    if l.holds {
        return None;
    }
    let initial = p.initial.clone();
    let mut w = Walker {
        p,
        segments: Vec::new(),
        cur: 0,
    };
    let (point, last) = match shape {
        Shape::Delayed { k } => {
            let l2 = &l.layers[&2];
            let l3 = &l.layers[&3];
            w.push(SegmentKind::Reach, &initial, any_edge, |n, _| l2[n]);
            let x2 = w.cur;
            w.push(SegmentKind::Pump, &[x2], at_least_one_obs, |n, ph| {
                n == x2 && ph == 1
            });
            w.push(SegmentKind::Bridge, &[x2], any_edge, |n, _| l3[n]);
            (3, 3 + k)
        }
        Shape::K1K2 { k1, k2 } => {
            if k1 == 0 {
                let l0 = &l.layers[&0];
                w.push(SegmentKind::Reach, &initial, any_edge, |n, _| l0[n]);
            } else {
                let l1 = &l.layers[&1];
                w.push(SegmentKind::Observed, &initial, at_least_one_obs, |n, ph| {
                    ph == 1 && l1[n]
                });
                for i in 2..=k1 {
                    let li = &l.layers[&i];
                    let from = w.cur;
                    w.push(SegmentKind::Observed, &[from], obs_then_any, |n, ph| {
                        ph == 1 && li[n]
                    });
                }
            }
            (k1, k1 + k2)
        }
    };
    for i in point + 1..=last {
        let li = &l.layers[&i];
        let from = w.cur;
        w.push(SegmentKind::Delay, &[from], one_obs(i == point + 1), |n, ph| {
            ph == 1 && li[n]
        });
    }
    let end = w.cur;
    Some((w.segments, end))
}

/// A lasso from `x` whose cycle carries an observable event.
pub(crate) fn observable_lasso(a: &Fsa, x: StateId) -> Option<Lasso> {
    let g = a.digraph();
    let cyc = g.observable_cycle_nodes();
    let (_, stem_arcs) = g.phased_path(&[x.0], 1, |_, ph, _| Some(ph), |n, _| cyc[n])?;
    let stem = run_from_arcs(a, x, &stem_arcs);
    let y = stem.last();
    let (_, cycle_arcs) = g.phased_path(
        &[y.0],
        2,
        |_, ph, arc| Some(if arc.observable { 1 } else { ph }),
        |n, ph| n == y.0 && ph == 1,
    )?;
    Some(Lasso {
        stem,
        cycle: run_from_arcs(a, y, &cycle_arcs),
    })
}

pub(crate) fn run_from_arcs(a: &Fsa, start: StateId, arcs: &[Arc]) -> Run {
    let mut run = Run::start(start);
    for arc in arcs {
        let t: Transition = a.transitions()[arc.id];
        run.events.push(t.event);
        run.states.push(t.target);
    }
    run
}
