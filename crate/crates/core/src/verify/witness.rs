//! Violation certificates and an independent replay checker.
//!
//! The checker only uses the automaton's transition relation; it never
//! rebuilds a product, so it can certify verdicts of the structural code.

use serde::Serialize;
use serde_json::{json, Value};

use super::{effective_delay_bound, Flavor, Property};
use crate::fsa::{EventId, Fsa, Lasso, Run, StateId, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    /// Any path.
    Reach,
    /// A cycle with at least one observable step.
    Pump,
    /// Any path from the pumped tuple to the ambiguity point.
    Bridge,
    /// A path with at least one observable step.
    Observed,
    /// A path with exactly one observable step.
    Delay,
    /// A path whose last step moves the left run by a faulty event.
    Fault,
    /// A cycle in which the left run moves.
    Cycle,
}

/// A run of a synchronized product: each step lists, per component, the event
/// taken or `None` when that component stays put.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRun {
    pub states: Vec<Vec<StateId>>,
    pub events: Vec<Vec<Option<EventId>>>,
}

impl ProductRun {
    pub fn first(&self) -> &[StateId] {
        &self.states[0]
    }

    pub fn last(&self) -> &[StateId] {
        self.states.last().expect("nonempty")
    }

    /// Number of synchronized observable steps.
    pub fn observed_steps(&self, a: &Fsa) -> usize {
        self.events
            .iter()
            .filter(|step| step.iter().flatten().any(|&e| a.is_observable(e)))
            .count()
    }

    /// Projection on one component.
    pub fn component(&self, c: usize) -> Run {
        let mut run = Run::start(self.states[0][c]);
        for (i, step) in self.events.iter().enumerate() {
            if let Some(e) = step[c] {
                run.events.push(e);
                run.states.push(self.states[i + 1][c]);
            }
        }
        run
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub run: ProductRun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub segments: Vec<Segment>,
    /// For omega properties: the component whose run extends to an infinite
    /// observation, and the lasso doing so from its final state.
    pub lasso: Option<(usize, Lasso)>,
}

impl Witness {
    pub fn end(&self) -> &[StateId] {
        self.segments.last().expect("nonempty witness").run.last()
    }

    pub fn to_json(&self, a: &Fsa) -> Value {
        let name = |s: &StateId| a.state_name(*s).to_string();
        let ev = |e: &Option<EventId>| e.map(|e| a.event_name(e).to_string());
        let run_json = |r: &Run| {
            json!({
                "states": r.states.iter().map(name).collect::<Vec<_>>(),
                "events": r.events.iter().map(|e| a.event_name(*e)).collect::<Vec<_>>(),
            })
        };
        json!({
            "segments": self.segments.iter().map(|s| json!({
                "kind": s.kind,
                "states": s.run.states.iter()
                    .map(|t| t.iter().map(name).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "events": s.run.events.iter()
                    .map(|t| t.iter().map(ev).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "lasso": self.lasso.as_ref().map(|(c, l)| json!({
                "component": c,
                "stem": run_json(&l.stem),
                "cycle": run_json(&l.cycle),
            })),
        })
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

/// Every step moves components by transitions of `a`; observable steps move
/// all components with one common label, unobservable steps exactly one.
fn check_run(a: &Fsa, run: &ProductRun, right_normal: bool) -> Result<(), String> {
    if run.states.len() != run.events.len() + 1 || run.states.is_empty() {
        return fail("malformed run");
    }
    let arity = run.states[0].len();
    for (i, step) in run.events.iter().enumerate() {
        let (from, to) = (&run.states[i], &run.states[i + 1]);
        if step.len() != arity || from.len() != arity || to.len() != arity {
            return fail("inconsistent arity");
        }
        let moved: Vec<usize> = (0..arity).filter(|&c| step[c].is_some()).collect();
        if moved.is_empty() {
            return fail(format!("step {i} moves no component"));
        }
        let labels: Vec<_> = moved.iter().map(|&c| a.label(step[c].unwrap())).collect();
        let sync = moved.len() == arity && labels[0].is_some() && labels.iter().all(|l| *l == labels[0]);
        let eps = moved.len() == 1 && labels[0].is_none();
        if !sync && !eps {
            return fail(format!("step {i} is neither synchronized nor a single silent move"));
        }
        for c in 0..arity {
            match step[c] {
                Some(e) => {
                    if !a.has_transition(Transition::new(from[c], e, to[c])) {
                        return fail(format!("step {i}: component {c} uses a missing transition"));
                    }
                    if right_normal && c == 1 && a.is_faulty(e) {
                        return fail(format!("step {i}: right component uses a faulty event"));
                    }
                }
                None if from[c] != to[c] => return fail(format!("step {i}: idle component moved")),
                None => {}
            }
        }
    }
    Ok(())
}

fn check_chain(a: &Fsa, w: &Witness, right_normal: bool) -> Result<(), String> {
    let Some(first) = w.segments.first() else {
        return fail("empty witness");
    };
    if !first.run.first().iter().all(|&s| a.is_initial(s)) {
        return fail("witness does not start at initial states");
    }
    for (i, seg) in w.segments.iter().enumerate() {
        check_run(a, &seg.run, right_normal)?;
        if i > 0 && w.segments[i - 1].run.last() != seg.run.first() {
            return fail(format!("segment {i} does not continue the previous one"));
        }
    }
    Ok(())
}

fn kinds(w: &Witness) -> Vec<SegmentKind> {
    w.segments.iter().map(|s| s.kind).collect()
}

fn check_lasso(a: &Fsa, w: &Witness, flavor: Flavor) -> Result<(), String> {
    if flavor == Flavor::Star {
        return Ok(());
    }
    let Some((c, lasso)) = &w.lasso else {
        return fail("omega witness without lasso");
    };
    if *c >= w.end().len() || lasso.stem.states[0] != w.end()[*c] {
        return fail("lasso does not start at the final state of its component");
    }
    if !lasso.is_observable_lasso_in(a) {
        return fail("lasso is not an observable cycle");
    }
    Ok(())
}

fn check_delays(a: &Fsa, segs: &[Segment]) -> Result<(), String> {
    for s in segs {
        if s.kind != SegmentKind::Delay || s.run.observed_steps(a) != 1 {
            return fail("delay segment must carry exactly one observation");
        }
    }
    Ok(())
}

/// Replays a failure certificate against `a` and checks every clause of the
/// violated condition.
pub fn check_witness(a: &Fsa, property: &Property, w: &Witness) -> Result<(), String> {
    match property {
        Property::KDelayed { flavor, k } => {
            check_chain(a, w, false)?;
            let ks = kinds(w);
            let delays = ks.len().saturating_sub(3);
            if ks.len() < 3
                || ks[..3] != [SegmentKind::Reach, SegmentKind::Pump, SegmentKind::Bridge]
                || (delays != *k && delays != effective_delay_bound(a, *k))
            {
                return fail("unexpected segment structure");
            }
            let pump = &w.segments[1].run;
            if pump.first() != pump.last() || pump.observed_steps(a) == 0 {
                return fail("pump is not an observable cycle");
            }
            let point = w.segments[2].run.last();
            if point[0] == point[1] {
                return fail("ambiguity point has equal components");
            }
            check_delays(a, &w.segments[3..])?;
            check_lasso(a, w, *flavor)
        }
        Property::K1K2 { flavor, k1, k2 } => check_k1k2(a, w, *flavor, *k1, *k2, None),
        Property::K1K2D {
            flavor,
            k1,
            k2,
            spec,
        } => check_k1k2(a, w, *flavor, *k1, *k2, Some(spec)),
        Property::Diagnosable => {
            check_chain(a, w, true)?;
            if kinds(w) != [SegmentKind::Fault, SegmentKind::Reach, SegmentKind::Cycle] {
                return fail("unexpected segment structure");
            }
            let fault = &w.segments[0].run;
            match fault.events.last() {
                Some(step) if step[0].is_some_and(|e| a.is_faulty(e)) => {}
                _ => return fail("fault segment does not end with a faulty left event"),
            }
            let cycle = &w.segments[2].run;
            if cycle.first() != cycle.last() || !cycle.events.iter().any(|s| s[0].is_some()) {
                return fail("cycle does not advance the left run");
            }
            Ok(())
        }
    }
}

fn check_k1k2(
    a: &Fsa,
    w: &Witness,
    flavor: Flavor,
    k1: usize,
    k2: usize,
    spec: Option<&super::Specification>,
) -> Result<(), String> {
    check_chain(a, w, false)?;
    let ks = kinds(w);
    let prefix = k1.max(1);
    if ks.len() != prefix + k2 {
        return fail("unexpected number of segments");
    }
    if k1 == 0 {
        if ks[0] != SegmentKind::Reach {
            return fail("expected a reach segment");
        }
    } else {
        for s in &w.segments[..k1] {
            if s.kind != SegmentKind::Observed || s.run.observed_steps(a) == 0 {
                return fail("prefix segment without observation");
            }
        }
    }
    let point = w.segments[prefix - 1].run.last();
    let ok = match spec {
        None => point[0] != point[1],
        Some(spec) => spec.matches(point[0], point[1]),
    };
    if !ok {
        return fail("ambiguity point fails the filter");
    }
    check_delays(a, &w.segments[prefix..])?;
    check_lasso(a, w, flavor)
}
