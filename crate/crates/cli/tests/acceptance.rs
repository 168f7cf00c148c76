//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use detkit::campaign::{run_campaign, CampaignConfig};
use detkit::composition::{concurrent_composition, observation_automaton, pair_event_name, pair_name, transition_count_bound};
use detkit::random::{random_fsa, rng_for, RandomParams};
use detkit::synthesis::synthesize_with;
use detkit::verify::*;
use detkit::{Fsa, Transition};
use rand::Rng;
use serde_json::Value;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn model_path(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn model(name: &str) -> Fsa {
    Fsa::from_text(&std::fs::read_to_string(model_path(name)).unwrap()).unwrap()
}

fn tr(a: &Fsa, s: &str, e: &str, t: &str) -> Transition {
    Transition::new(
        a.state_by_name(s).unwrap(),
        a.event_by_name(e).unwrap(),
        a.state_by_name(t).unwrap(),
    )
}

/// Layer JSON from the command-line tool.
fn cli_layers(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_detkit"))
        .args(args)
        .arg("--layers")
        .output()
        .expect("binary runs");
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON output");
    v["layers"].clone()
}

fn pair_set(v: &Value) -> BTreeSet<(String, String)> {
    v.as_array()
        .map(|a| {
            a.iter()
                .map(|p| (p[0].as_str().unwrap().to_string(), p[1].as_str().unwrap().to_string()))
                .collect()
        })
        .unwrap_or_default()
}

fn pairs(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect()
}

fn names(v: &Value) -> BTreeSet<String> {
    v.as_array()
        .map(|a| a.iter().map(|s| s.as_str().unwrap().to_string()).collect())
        .unwrap_or_default()
}

fn strs(list: &[&str]) -> BTreeSet<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn motivating_example() -> Check {
    let a = model("fig1.fsa");
    let start = Instant::now();
    let v0 = verify_omega_k_delayed(&a, 0);
    let v1 = verify_omega_k_delayed(&a, 1);
    let elapsed = start.elapsed();
    ensure(!v0.holds, "K=0 should fail")?;
    ensure(v1.holds, "K=1 should hold")?;
    check_witness(&a, &v0.property, v0.witness.as_ref().unwrap())?;
    ensure(elapsed < Duration::from_millis(10), format!("took {elapsed:?}"))
}

fn omega_layer_sets() -> Check {
    let fig2 = model_path("fig2.fsa");
    let l = cli_layers(&["verify", "--property", "omega-k-delayed", "--k", "0", &fig2]);
    ensure(l["top_states_index"] == 4, "X_4 index")?;
    ensure(names(&l["top_states"]) == strs(&["s0", "s1"]), "X_4")?;
    ensure(pair_set(&l["layers"]["3"]) == pairs(&[("s1", "s2"), ("s2", "s1")]), "X'_3 at K=0")?;
    ensure(pair_set(&l["layers"]["2"]) == pairs(&[("s0", "s0")]), "X'_2 at K=0")?;
    let l = cli_layers(&["verify", "--property", "omega-k-delayed", "--k", "1", &fig2]);
    ensure(l["top_states_index"] == 5, "X_5 index")?;
    ensure(names(&l["top_states"]) == strs(&["s0", "s1"]), "X_5")?;
    ensure(
        pair_set(&l["layers"]["4"]) == pairs(&[("s0", "s0"), ("s1", "s1"), ("s1", "s2"), ("s2", "s1")]),
        "X'_4 at K=1",
    )?;
    ensure(pair_set(&l["layers"]["3"]).is_empty(), "X'_3 at K=1")?;
    ensure(pair_set(&l["layers"]["2"]).is_empty(), "X'_2 at K=1")
}

fn star_layer_sets() -> Check {
    let fig2 = model_path("fig2.fsa");
    let l = cli_layers(&["verify", "--property", "star-k-delayed", "--k", "0", &fig2]);
    ensure(pair_set(&l["layers"]["3"]) == pairs(&[("s1", "s2"), ("s2", "s1")]), "X'_3 at K=0")?;
    ensure(pair_set(&l["layers"]["2"]) == pairs(&[("s0", "s0")]), "X'_2 at K=0")?;
    let l = cli_layers(&["verify", "--property", "star-k-delayed", "--k", "1", &fig2]);
    ensure(
        pair_set(&l["layers"]["4"])
            == pairs(&[("s0", "s0"), ("s1", "s1"), ("s1", "s2"), ("s2", "s1"), ("s2", "s2")]),
        "X'_4 at K=1",
    )?;
    ensure(pair_set(&l["layers"]["3"]).is_empty(), "X'_3 at K=1")
}

fn fig4_separation() -> Check {
    let a = model("fig4.fsa");
    ensure(!verify_omega_k1k2(&a, 0, 0).holds, "omega-(0,0) should fail")?;
    ensure(verify_omega_k_delayed(&a, 0).holds, "omega-0-delayed should hold")
}

fn composition_goldens() -> Check {
    let a = model("fig2.fsa");
    let cc = concurrent_composition(&a);
    let states: BTreeSet<String> = cc.accessible_states().iter().map(|p| pair_name(&a, *p)).collect();
    ensure(
        states == strs(&["(s0,s0)", "(s1,s2)", "(s2,s1)", "(s1,s1)", "(s2,s2)"]),
        format!("states {states:?}"),
    )?;
    let trans: BTreeSet<String> = cc
        .transitions()
        .iter()
        .map(|t| format!("{} {} {}", pair_name(&a, t.source), pair_event_name(&a, t.event), pair_name(&a, t.target)))
        .collect();
    let expected = strs(&[
        "(s0,s0) (t1,t1) (s0,s0)",
        "(s0,s0) (t2,eps) (s0,s0)",
        "(s0,s0) (eps,t2) (s0,s0)",
        "(s0,s0) (t3,t4) (s1,s2)",
        "(s0,s0) (t3,t3) (s1,s1)",
        "(s0,s0) (t4,t3) (s2,s1)",
        "(s0,s0) (t4,t4) (s2,s2)",
        "(s1,s1) (t5,t5) (s1,s1)",
    ]);
    ensure(trans == expected, format!("transitions {trans:?}"))?;
    let obs = observation_automaton(&a);
    let name = |(x, y): &(detkit::StateId, detkit::StateId)| format!("{} {}", a.state_name(*x), a.state_name(*y));
    let hat: BTreeSet<String> = obs.hat_edges().iter().map(name).collect();
    ensure(hat == strs(&["s0 s0", "s0 s1", "s0 s2", "s1 s1"]), format!("ehat edges {hat:?}"))?;
    ensure(obs.eps_edges().is_empty(), "no eps edges")?;
    ensure(obs.fsa().initial() == a.initial(), "initial states")
}

fn synthesis_goldens() -> Check {
    let a = model("fig7.fsa");
    let loop4 = tr(&a, "s1", "t4", "s1");
    let t3 = tr(&a, "s0", "t3", "s1");
    let loop1 = tr(&a, "s0", "t1", "s0");
    let targets = [
        Property::K1K2 { flavor: Flavor::Omega, k1: 2, k2: 2 },
        Property::K1K2 { flavor: Flavor::Star, k1: 2, k2: 2 },
        Property::K1K2 { flavor: Flavor::Star, k1: 1, k2: 2 },
    ];
    for t in [loop4, t3] {
        let only = BTreeSet::from([t]);
        for p in &targets {
            ensure(verify(&a.without(&only), p).holds, format!("residual fails {p}"))?;
            let plan = synthesize_with(&a, p, &only).map_err(|e| e.to_string())?;
            ensure(plan.feasible && plan.verified.holds, format!("plan for {p}"))?;
            ensure(plan.disabled == only, format!("plan for {p} disables {:?}", plan.disabled))?;
        }
    }
    let star12 = &targets[2];
    let only = BTreeSet::from([loop1]);
    ensure(!verify(&a.without(&only), star12).holds, "t1 loop alone enforces")?;
    let plan = synthesize_with(&a, star12, &only).map_err(|e| e.to_string())?;
    ensure(!plan.feasible, "t1 loop plan should be infeasible")?;
    for k1 in 0..=2 {
        for k2 in 0..=2 {
            ensure(!verify_omega_k1k2(&a, k1, k2).holds, format!("omega-({k1},{k2}) holds"))?;
        }
    }
    Ok(())
}

fn oracle_campaign() -> Check {
    let cfg = CampaignConfig {
        instances: 500,
        seed: 2024,
        ..Default::default()
    };
    let start = Instant::now();
    let report = run_campaign(&cfg);
    ensure(
        report.passed(),
        format!("{} disagreements\n{}", report.disagreements.len(), report.table()),
    )?;
    ensure(start.elapsed() < Duration::from_secs(300), "campaign slower than 5 min")
}

fn delay_clamp() -> Check {
    for i in 0..100 {
        let a = random_fsa(&mut rng_for(31, i), &RandomParams::default());
        let n2 = a.num_states() * a.num_states();
        for flavor in [Flavor::Omega, Flavor::Star] {
            let at = verify_k_delayed_unclamped(&a, flavor, n2).holds;
            let beyond = verify_k_delayed_unclamped(&a, flavor, n2 + 7).holds;
            ensure(at == beyond, format!("instance {i} {flavor:?}"))?;
        }
    }
    Ok(())
}

fn monotone_enforcement() -> Check {
    let mut violations = 0;
    let mut informative = 0;
    for i in 0..100 {
        let mut rng = rng_for(32, i);
        let a = random_fsa(&mut rng, &RandomParams::default());
        let k1 = rng.random_range(0..3);
        let k2 = rng.random_range(0..3);
        let flavor = if rng.random_bool(0.5) { Flavor::Omega } else { Flavor::Star };
        let p = Property::K1K2 { flavor, k1, k2 };
        let ctrl: Vec<Transition> = a.controllable_transitions().into_iter().collect();
        let small: BTreeSet<Transition> = ctrl.iter().copied().filter(|_| rng.random_bool(0.4)).collect();
        let mut big = small.clone();
        big.extend(ctrl.iter().copied().filter(|_| rng.random_bool(0.5)));
        if verify(&a.without(&small), &p).holds {
            informative += 1;
            if !verify(&a.without(&big), &p).holds {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    ensure(informative > 0, "no sample enforced the property")
}

fn size_bounds() -> Check {
    for i in 0..100 {
        let a = random_fsa(&mut rng_for(33, i), &RandomParams::default());
        let cc = concurrent_composition(&a);
        let n = a.num_states();
        ensure(cc.num_states() <= n * n, format!("instance {i}: states"))?;
        ensure(cc.num_transitions() <= transition_count_bound(&a), format!("instance {i}: transitions"))?;
    }
    Ok(())
}

fn large_instance_smoke() -> Check {
    let params = RandomParams {
        min_states: 200,
        max_states: 200,
        density: 0.5,
        ..Default::default()
    };
    let a = random_fsa(&mut rng_for(34, 0), &params);
    ensure(a.num_states() == 200, "instance size")?;
    ensure(detkit::fsa::reachable_states(&a).len() >= 150, "instance mostly unreachable")?;
    let start = Instant::now();
    for flavor in [Flavor::Omega, Flavor::Star] {
        verify_k_delayed(&a, flavor, 1);
        verify_k1k2(&a, flavor, 1, 1, None);
    }
    verify(&a, &Property::Diagnosable);
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("1 motivating example needs one delay", motivating_example),
        ("2 omega layer sets", omega_layer_sets),
        ("3 star layer sets", star_layer_sets),
        ("4 fig4 separates (0,0) from 0-delayed", fig4_separation),
        ("5 composition and observation goldens", composition_goldens),
        ("6 synthesis goldens", synthesis_goldens),
        ("7 oracle campaign, 500 instances", oracle_campaign),
        ("8 delay bound clamp", delay_clamp),
        ("9 monotone enforcement", monotone_enforcement),
        ("10 composition size bounds", size_bounds),
        ("smoke 200-state verification under 30 s", large_instance_smoke),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("PASS  {name} ({ms} ms)"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name} ({ms} ms): {e}");
            }
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
