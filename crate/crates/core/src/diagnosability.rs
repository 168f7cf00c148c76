//! Diagnosability of faulty events.

use crate::composition::{Materialize, Product};
use crate::fsa::Fsa;
use crate::graph::{and, any, EdgeFilter};
use crate::verify::layering::product_run;
use crate::verify::{Property, SegmentKind, Verdict, Witness};

/// Fails iff some run can perform a fault and then continue forever while a
/// normal run produces the same observation: in the product pairing any run
/// with a normal run, a tuple reached after a left faulty move lies on a cycle
/// that advances the left component.
pub fn verify_diagnosable(a: &Fsa) -> Verdict {
    let p = Product::build(a, &[false, true], Materialize::Reachable);
    let faulty_left = |id: usize| p.edges[id].events[0].is_some_and(|e| a.is_faulty(e));
    let mut after_fault = vec![false; p.len()];
    for e in &p.edges {
        if e.events[0].is_some_and(|e| a.is_faulty(e)) {
            after_fault[e.target] = true;
        }
    }
    let after_fault = p.graph.forward(&after_fault, EdgeFilter::All);
    let left_moves = |id: usize| p.edges[id].events[0].is_some();
    let cyclic = p.graph.cyclic_nodes_by(|arc| left_moves(arc.id));
    let bad = and(&after_fault, &cyclic);
    let witness = any(&bad).then(|| {
        let (start, arcs) = p
            .graph
            .phased_path(
                &p.initial,
                2,
                |_, ph, arc| Some(if faulty_left(arc.id) { 1 } else { ph }),
                |n, ph| ph == 1 && bad[n],
            )
            .expect("a bad tuple is reachable after a fault");
        let split = arcs
            .iter()
            .position(|arc| faulty_left(arc.id))
            .expect("path contains a fault")
            + 1;
        let fault = product_run(&p, SegmentKind::Fault, start, &arcs[..split]);
        let mid = arcs[split - 1].node;
        let reach = product_run(&p, SegmentKind::Reach, mid, &arcs[split..]);
        let x2 = arcs.last().expect("nonempty").node;
        let (_, cyc) = p
            .graph
            .phased_path(
                &[x2],
                2,
                |_, ph, arc| Some(if left_moves(arc.id) { 1 } else { ph }),
                |n, ph| n == x2 && ph == 1,
            )
            .expect("tuple lies on a qualifying cycle");
        let cycle = product_run(&p, SegmentKind::Cycle, x2, &cyc);
        Witness {
            segments: vec![fault, reach, cycle],
            lasso: None,
        }
    });
    Verdict {
        property: Property::Diagnosable,
        holds: witness.is_none(),
        witness,
    }
}
