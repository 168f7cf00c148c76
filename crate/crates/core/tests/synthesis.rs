use std::collections::BTreeSet;
use std::path::PathBuf;

use detkit::composition::PairState;
use detkit::random::{random_fsa, rng_for, RandomParams};
use detkit::synthesis::*;
use detkit::verify::{verify, Flavor, Property};
use detkit::{Fsa, SynthesisError, Transition};
use rand::Rng;

fn model(name: &str) -> Fsa {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name);
    Fsa::from_text(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn tr(a: &Fsa, s: &str, e: &str, t: &str) -> Transition {
    Transition::new(
        a.state_by_name(s).unwrap(),
        a.event_by_name(e).unwrap(),
        a.state_by_name(t).unwrap(),
    )
}

fn pairs(a: &Fsa, list: &[(&str, &str)]) -> BTreeSet<PairState> {
    list.iter()
        .map(|(x, y)| PairState::new(a.state_by_name(x).unwrap(), a.state_by_name(y).unwrap()))
        .collect()
}

fn k1k2(flavor: Flavor, k1: usize, k2: usize) -> Property {
    Property::K1K2 { flavor, k1, k2 }
}

#[test]
fn omega_graph_layout() {
    let a = model("fig7.fsa");
    let g = build_layered_witness_graph(&a, Flavor::Omega, 2, 2);
    let marks = g.marks();
    assert_eq!(marks[&2], pairs(&a, &[("s1", "s2"), ("s2", "s1")]));
    assert_eq!(marks[&3], pairs(&a, &[("s1", "s1")]));
    assert_eq!(marks[&4], pairs(&a, &[("s1", "s1")]));
    assert_eq!(g.layers()[&3], pairs(&a, &[("s1", "s1")]));
    assert!(!g.layers()[&1].iter().any(|p| p.left != p.right));
    let top = g.top().unwrap();
    let s1 = a.state_by_name("s1").unwrap();
    assert_eq!(top.initial, BTreeSet::from([s1]));
    assert_eq!(top.marked, BTreeSet::from([s1]));
    assert_eq!(top.transitions, vec![tr(&a, "s1", "t4", "s1")]);
}

#[test]
fn star_graph_layout() {
    let a = model("fig7.fsa");
    let g = build_layered_witness_graph(&a, Flavor::Star, 1, 2);
    let marks = g.marks();
    assert_eq!(marks[&1], pairs(&a, &[("s1", "s2"), ("s2", "s1")]));
    assert_eq!(marks[&2], pairs(&a, &[("s1", "s1")]));
    assert_eq!(marks[&3], pairs(&a, &[("s1", "s1")]));
    assert!(g.top().is_none());
}

#[test]
fn residual_goldens() {
    let a = model("fig7.fsa");
    let targets = [
        k1k2(Flavor::Omega, 2, 2),
        k1k2(Flavor::Star, 2, 2),
        k1k2(Flavor::Star, 1, 2),
    ];
    for t in [tr(&a, "s1", "t4", "s1"), tr(&a, "s0", "t3", "s1")] {
        let residual = a.without(&BTreeSet::from([t]));
        for p in &targets {
            assert!(verify(&residual, p).holds, "{p}");
        }
    }
    let residual = a.without(&BTreeSet::from([tr(&a, "s0", "t1", "s0")]));
    assert!(!verify(&residual, &k1k2(Flavor::Star, 1, 2)).holds);
}

#[test]
fn plan_goldens() {
    let a = model("fig7.fsa");
    let loop4 = tr(&a, "s1", "t4", "s1");
    let t3 = tr(&a, "s0", "t3", "s1");

    let plan = synthesize_with(&a, &k1k2(Flavor::Omega, 2, 2), &BTreeSet::from([loop4])).unwrap();
    assert!(plan.feasible && plan.verified.holds);
    assert_eq!(plan.disabled, BTreeSet::from([loop4]));

    let plan = synthesize_with(&a, &k1k2(Flavor::Star, 1, 2), &BTreeSet::from([tr(&a, "s0", "t1", "s0")])).unwrap();
    assert!(!plan.feasible);
    assert!(plan.disabled.is_empty());

    let plan = synthesize_with(&a, &k1k2(Flavor::Star, 1, 2), &BTreeSet::from([t3])).unwrap();
    assert!(plan.feasible && plan.verified.holds);
    assert_eq!(plan.disabled, BTreeSet::from([t3]));

    let both = BTreeSet::from([t3, loop4]);
    assert!(feasibility_with(&a, &k1k2(Flavor::Omega, 2, 2), &both));
    let plan = exhaustive_minimum_plan_with(&a, &k1k2(Flavor::Omega, 2, 2), &both, 12).unwrap();
    assert_eq!(plan.disabled, BTreeSet::from([t3]));
    for p in [k1k2(Flavor::Omega, 2, 2), k1k2(Flavor::Star, 2, 2), k1k2(Flavor::Star, 1, 2)] {
        let plan = synthesize_with(&a, &p, &both).unwrap();
        assert!(plan.feasible && plan.verified.holds, "{p}");
        assert_eq!(plan.disabled.len(), 1, "{p}");
    }
}

#[test]
fn declared_controllability_and_edge_cases() {
    let a = model("fig7.fsa");
    let p = k1k2(Flavor::Omega, 2, 2);
    assert!(feasibility(&a, &p));
    let plan = synthesize(&a, &p).unwrap();
    assert!(plan.verified.holds);
    assert!(plan.disabled.iter().all(|t| a.is_controllable(t.event)));

    let none = BTreeSet::new();
    assert!(!feasibility_with(&a, &p, &none));
    assert!(!exhaustive_minimum_plan_with(&a, &p, &none, 12).unwrap().feasible);
    assert!(matches!(
        exhaustive_minimum_plan_with(&a, &p, &a.transitions().iter().copied().collect(), 3),
        Err(SynthesisError::CapExceeded { .. })
    ));
    assert!(matches!(
        synthesize(&a, &Property::Diagnosable),
        Err(SynthesisError::Unsupported(_))
    ));

    let fixed = a.without(&BTreeSet::from([tr(&a, "s0", "t3", "s1")]));
    let plan = synthesize(&fixed, &p).unwrap();
    assert!(plan.feasible && plan.disabled.is_empty());
    assert!(build_layered_witness_graph(&fixed, Flavor::Omega, 2, 2).is_empty());
}

fn targets() -> Vec<Property> {
    let mut out = Vec::new();
    for flavor in [Flavor::Omega, Flavor::Star] {
        for k1 in 0..=2 {
            for k2 in 0..=2 {
                out.push(k1k2(flavor, k1, k2));
            }
        }
        for k in 0..=1 {
            out.push(Property::KDelayed { flavor, k });
        }
    }
    out
}

#[test]
fn graph_is_empty_exactly_when_the_property_holds() {
    for i in 0..150 {
        let a = random_fsa(&mut rng_for(11, i), &RandomParams::default());
        for flavor in [Flavor::Omega, Flavor::Star] {
            for k1 in 0..=3 {
                for k2 in 0..=3 {
                    let g = build_layered_witness_graph(&a, flavor, k1, k2);
                    let holds = verify(&a, &k1k2(flavor, k1, k2)).holds;
                    assert_eq!(g.is_empty(), holds, "instance {i} {flavor:?} ({k1},{k2})\n{}", a.to_text());
                }
            }
        }
    }
}

#[test]
fn plans_are_sound_and_never_beat_the_baseline() {
    let params = RandomParams {
        max_states: 4,
        max_events: 5,
        ..Default::default()
    };
    let mut checked = 0;
    for i in 0..120 {
        let a = random_fsa(&mut rng_for(12, i), &params);
        if a.controllable_transitions().len() > 8 {
            continue;
        }
        checked += 1;
        for p in targets() {
            let plan = synthesize(&a, &p).unwrap();
            let exact = exhaustive_minimum_plan(&a, &p, 12).unwrap();
            assert_eq!(plan.feasible, feasibility(&a, &p), "{p}");
            assert_eq!(plan.feasible, exact.feasible, "{p}");
            if plan.feasible {
                assert!(plan.verified.holds, "instance {i} {p}");
                assert!(verify(&plan.residual, &p).holds);
                assert!(plan.disabled.is_subset(&a.controllable_transitions()));
                assert!(exact.disabled.len() <= plan.disabled.len());
            } else {
                assert!(plan.disabled.is_empty());
            }
        }
    }
    assert!(checked >= 60, "{checked}");
}

#[test]
fn enforcement_is_monotone() {
    let mut violations = 0;
    for i in 0..100 {
        let mut rng = rng_for(13, i);
        let a = random_fsa(&mut rng, &RandomParams::default());
        let all: Vec<Transition> = a.transitions().to_vec();
        let big: BTreeSet<Transition> = all.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        let small: BTreeSet<Transition> = big.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        for p in targets() {
            if verify(&a.without(&small), &p).holds && !verify(&a.without(&big), &p).holds {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn k_delayed_target_shape() {
    let a = model("fig2.fsa");
    let t = SynthesisTarget::from_property(&a, &Property::KDelayed { flavor: Flavor::Omega, k: 1 }).unwrap();
    assert_eq!((t.k1, t.k2), (9, 1));
    let t = SynthesisTarget::from_property(&a, &Property::KDelayed { flavor: Flavor::Star, k: 40 }).unwrap();
    assert_eq!((t.k1, t.k2), (9, 9));
}

#[test]
fn k_delayed_matches_its_k1k2_reduction() {
    for i in 0..150 {
        let a = random_fsa(&mut rng_for(14, i), &RandomParams::default());
        for flavor in [Flavor::Omega, Flavor::Star] {
            for k in 0..=2 {
                let kd = Property::KDelayed { flavor, k };
                let t = SynthesisTarget::from_property(&a, &kd).unwrap();
                let reduced = k1k2(t.flavor, t.k1, t.k2);
                assert_eq!(verify(&a, &kd).holds, verify(&a, &reduced).holds, "instance {i} {kd}");
            }
        }
    }
}
