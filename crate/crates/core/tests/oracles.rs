use std::path::PathBuf;

use detkit::campaign::{run_campaign, CampaignConfig};
use detkit::oracle::*;
use detkit::verify::{Flavor, Property};
use detkit::Fsa;

fn model(name: &str) -> Fsa {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name);
    Fsa::from_text(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn check(a: &Fsa, p: Property, expected: bool) {
    let v = oracle(a, &p, exact_depth(a, &p));
    assert!(v.exact, "{p}");
    assert_eq!(v.holds, expected, "{p}");
}

#[test]
fn figure_models() {
    let a = model("fig1.fsa");
    check(&a, Property::KDelayed { flavor: Flavor::Omega, k: 0 }, false);
    check(&a, Property::KDelayed { flavor: Flavor::Omega, k: 1 }, true);
    let a = model("fig2.fsa");
    check(&a, Property::KDelayed { flavor: Flavor::Star, k: 0 }, false);
    check(&a, Property::KDelayed { flavor: Flavor::Star, k: 1 }, true);
    check(&a, Property::KDelayed { flavor: Flavor::Omega, k: 1 }, true);
    let a = model("fig4.fsa");
    check(&a, Property::KDelayed { flavor: Flavor::Omega, k: 0 }, true);
    check(&a, Property::K1K2 { flavor: Flavor::Omega, k1: 0, k2: 0 }, false);
    let a = model("fig7.fsa");
    check(&a, Property::K1K2 { flavor: Flavor::Omega, k1: 2, k2: 2 }, false);
}

#[test]
fn a_found_violation_is_exact_at_any_depth() {
    let a = model("fig2.fsa");
    let v = oracle(&a, &Property::KDelayed { flavor: Flavor::Star, k: 0 }, 0);
    assert!(!v.holds || !v.exact);
}

#[test]
fn structural_verdicts_agree_with_oracles() {
    let cfg = CampaignConfig {
        instances: 300,
        seed: 7,
        ..Default::default()
    };
    let report = run_campaign(&cfg);
    if !report.passed() {
        for d in report.disagreements.iter().take(5) {
            eprintln!("{d:#?}\n{}", d.model);
        }
    }
    eprintln!("{}", report.table());
    assert!(report.passed());
}

#[test]
fn campaign_is_deterministic() {
    let cfg = CampaignConfig {
        instances: 20,
        seed: 3,
        ..Default::default()
    };
    assert_eq!(run_campaign(&cfg), run_campaign(&cfg));
}
