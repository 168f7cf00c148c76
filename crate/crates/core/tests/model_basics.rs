use std::collections::BTreeSet;
use std::path::PathBuf;

use detkit::composition::{
    concurrent_composition, diag_composition, observation_automaton, PairEvent, PairState,
};
use detkit::diagnosability::verify_diagnosable;
use detkit::fsa::*;
use detkit::oracle::{exact_depth, oracle};
use detkit::verify::{check_witness, Property};
use detkit::{Fsa, ModelError, StateId};

fn model(name: &str) -> Fsa {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name);
    Fsa::from_text(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn set(a: &Fsa, names: &[&str]) -> BTreeSet<StateId> {
    names.iter().map(|n| a.state_by_name(n).unwrap()).collect()
}

fn word(a: &Fsa, w: &str) -> Vec<SymbolId> {
    let syms: Vec<String> = w.chars().map(String::from).collect();
    a.word(&syms).unwrap()
}

#[test]
fn fig1_parses() {
    let a = model("fig1.fsa");
    assert_eq!(a.num_states(), 3);
    assert_eq!(a.num_events(), 3);
    let labels: Vec<&str> = a
        .event_ids()
        .map(|e| a.symbol_name(a.label(e).unwrap()))
        .collect();
    assert_eq!(labels, ["a", "b", "b"]);
}

#[test]
fn zero_transitions_and_bad_references() {
    let a = Fsa::from_text("states: s0 s1\ninitial: s0 s1\nevents: t:a\n").unwrap();
    assert!(a.transitions().is_empty());
    let r = check_assumption1(&a);
    assert_eq!(r.deadlocks, vec![StateId(0), StateId(1)]);
    assert!(!r.deadlock_free);

    let err = Fsa::from_text("states: s0\ninitial: s0\nevents: t:a\ntrans: s0 t s9\n").unwrap_err();
    match &err {
        ModelError::AtLine { line, source } => {
            assert_eq!(*line, 4);
            assert!(matches!(**source, ModelError::UndeclaredState(ref s) if s == "s9"));
        }
        other => panic!("{other:?}"),
    }
    assert!(err.to_string().contains("undeclared state"));
}

#[test]
fn fig1_estimates() {
    let a = model("fig1.fsa");
    for n in 0..4 {
        let w = format!("{}a", "ab".repeat(n));
        assert_eq!(state_estimate(&a, &word(&a, &w)).states, set(&a, &["s1"]));
        let w = "ab".repeat(n + 1);
        assert_eq!(state_estimate(&a, &word(&a, &w)).states, set(&a, &["s0", "s2"]));
        let d = delayed_state_estimate(&a, &word(&a, &w), &word(&a, "a"));
        assert_eq!(d.states, set(&a, &["s0"]));
        let plain = delayed_state_estimate(&a, &word(&a, &w), &[]);
        assert_eq!(plain.states, state_estimate(&a, &word(&a, &w)).states);
    }
    assert!(state_estimate(&a, &word(&a, "b")).states.is_empty());
}

#[test]
fn fig4_initial_estimate() {
    let a = model("fig4.fsa");
    assert_eq!(state_estimate(&a, &[]).states, set(&a, &["s0", "s0'"]));
}

#[test]
fn fig1_structure() {
    let a = model("fig1.fsa");
    let p = scc_decomposition(&a);
    let comps: BTreeSet<BTreeSet<StateId>> = p
        .components
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    assert_eq!(
        comps,
        [set(&a, &["s0", "s1"]), set(&a, &["s2"])].into_iter().collect()
    );
    let r = check_assumption1(&a);
    assert!(!r.deadlock_free);
    assert_eq!(r.deadlocks, vec![a.state_by_name("s2").unwrap()]);
    assert!(r.prompt);

    let chain = Fsa::from_text(
        "states: x y z\ninitial: x\nevents: t:a\ntrans: x t y\ntrans: y t z\n",
    )
    .unwrap();
    assert_eq!(scc_decomposition(&chain).components.len(), 3);
}

#[test]
fn observable_cycles_and_promptness() {
    let a = model("fig2.fsa");
    assert_eq!(states_in_observable_cycles(&a), set(&a, &["s0", "s1"]));

    let eps = Fsa::from_text("states: s\ninitial: s\nevents: u:eps\ntrans: s u s\n").unwrap();
    assert!(states_in_observable_cycles(&eps).is_empty());
    assert!(!check_assumption1(&eps).prompt);

    let obs = Fsa::from_text("states: s\ninitial: s\nevents: t:a\ntrans: s t s\n").unwrap();
    let r = check_assumption1(&obs);
    assert!(r.deadlock_free && r.prompt);
}

#[test]
fn fig2_composition() {
    let a = model("fig2.fsa");
    let id = |n: &str| a.state_by_name(n).unwrap();
    let ev = |n: &str| Some(a.event_by_name(n).unwrap());
    let cc = concurrent_composition(&a);
    let reach: BTreeSet<PairState> = cc.accessible_states().into_iter().collect();
    let expected: BTreeSet<PairState> = [("s0", "s0"), ("s1", "s2"), ("s2", "s1"), ("s1", "s1"), ("s2", "s2")]
        .iter()
        .map(|(x, y)| PairState::new(id(x), id(y)))
        .collect();
    assert_eq!(reach, expected);
    let origin = PairState::new(id("s0"), id("s0"));
    let loops: BTreeSet<PairEvent> = cc
        .transitions()
        .into_iter()
        .filter(|t| t.source == origin && t.target == origin)
        .map(|t| t.event)
        .collect();
    for (l, r) in [(ev("t1"), ev("t1")), (ev("t2"), None), (None, ev("t2"))] {
        assert!(loops.contains(&PairEvent { left: l, right: r }), "{l:?} {r:?}");
    }

    let obs = observation_automaton(&a);
    let hat: BTreeSet<(StateId, StateId)> = [("s0", "s0"), ("s0", "s1"), ("s0", "s2"), ("s1", "s1")]
        .iter()
        .map(|(x, y)| (id(x), id(y)))
        .collect();
    assert_eq!(obs.hat_edges(), hat);
}

#[test]
fn single_loop_composition() {
    let a = Fsa::from_text("states: s\ninitial: s\nevents: t:a\ntrans: s t s\n").unwrap();
    let cc = concurrent_composition(&a);
    assert_eq!(cc.accessible_states().len(), 1);
    assert_eq!(cc.events().len(), 1);
}

#[test]
fn silent_only_observation_automaton() {
    let a = Fsa::from_text(
        "states: x y\ninitial: x\nevents: u:eps\ntrans: x u y\ntrans: y u x\n",
    )
    .unwrap();
    let obs = observation_automaton(&a);
    assert!(obs.hat_edges().is_empty());
    let mirrored: BTreeSet<(StateId, StateId)> =
        a.transitions().iter().map(|t| (t.source, t.target)).collect();
    assert_eq!(obs.eps_edges(), mirrored);
}

#[test]
fn diag_composition_keeps_right_runs_normal() {
    let a = Fsa::from_text(
        "states: x y z\ninitial: x\nevents: f:b n:b\nfaulty: f\ntrans: x f y\ntrans: x n z\n",
    )
    .unwrap();
    let (f, n) = (a.event_by_name("f"), a.event_by_name("n"));
    let events = diag_composition(&a).events();
    assert!(events.contains(&PairEvent { left: f, right: n }));
    assert!(events.contains(&PairEvent { left: n, right: n }));
    assert!(events.iter().all(|e| e.right != f));

    let plain = model("fig2.fsa");
    assert_eq!(
        diag_composition(&plain).transitions(),
        concurrent_composition(&plain).transitions()
    );
}

#[test]
fn diagnosability_cases() {
    let fault_free = model("fig7.fsa");
    assert!(verify_diagnosable(&fault_free).holds);

    let ambiguous = Fsa::from_text(
        "states: x0 x1 x2 x3\ninitial: x0\nevents: f:eps n:eps a:a\nfaulty: f\n\
         trans: x0 f x1\ntrans: x0 n x2\ntrans: x1 a x3\ntrans: x2 a x2\ntrans: x3 a x3\n",
    )
    .unwrap();
    let v = verify_diagnosable(&ambiguous);
    assert!(!v.holds);
    check_witness(&ambiguous, &Property::Diagnosable, v.witness.as_ref().unwrap()).unwrap();

    let unique = Fsa::from_text(
        "states: x0 x1 x2\ninitial: x0\nevents: f:c n:a a:a\nfaulty: f\n\
         trans: x0 f x1\ntrans: x0 n x2\ntrans: x1 a x1\ntrans: x2 a x2\n",
    )
    .unwrap();
    assert!(verify_diagnosable(&unique).holds);

    for a in [&ambiguous, &unique] {
        let depth = exact_depth(a, &Property::Diagnosable);
        let o = oracle(a, &Property::Diagnosable, depth);
        assert_eq!(o.holds, verify_diagnosable(a).holds);
    }
}
