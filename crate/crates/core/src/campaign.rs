//! Cross-validation of structural verdicts against the semantic oracles.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::fsa::Fsa;
use crate::oracle::{exact_depth, oracle, oracle_diagnosable_per_trace};
use crate::random::{random_fsa, random_spec, rng_for, RandomParams};
use crate::verify::{check_witness, verify, Flavor, Property};

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub instances: usize,
    pub seed: u64,
    pub params: RandomParams,
    pub specs_per_instance: usize,
    pub delays: Vec<usize>,
    pub prefixes: Vec<usize>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            instances: 500,
            seed: 1,
            params: RandomParams::default(),
            specs_per_instance: 3,
            delays: vec![0, 1, 2],
            prefixes: vec![0, 1, 2],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FamilyStats {
    pub checked: usize,
    pub agreed: usize,
    pub holds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub instance: usize,
    pub property: String,
    pub structural: bool,
    pub oracle: bool,
    pub oracle_exact: bool,
    pub witness_error: Option<String>,
    pub model: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub instances: usize,
    pub families: BTreeMap<String, FamilyStats>,
    pub disagreements: Vec<Disagreement>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<24} {:>8} {:>8} {:>8}  status", "property", "checked", "agreed", "holds");
        for (name, s) in &self.families {
            let status = if s.checked == s.agreed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{name:<24} {:>8} {:>8} {:>8}  {status}", s.checked, s.agreed, s.holds);
        }
        let _ = writeln!(
            out,
            "{} instances, {} disagreements",
            self.instances,
            self.disagreements.len()
        );
        out
    }
}

/// The property instances checked on one automaton.
pub fn campaign_properties(a: &Fsa, cfg: &CampaignConfig, index: usize) -> Vec<Property> {
    let mut props = Vec::new();
    for flavor in [Flavor::Omega, Flavor::Star] {
        for &k in &cfg.delays {
            props.push(Property::KDelayed { flavor, k });
        }
        for &k1 in &cfg.prefixes {
            for &k2 in &cfg.delays {
                props.push(Property::K1K2 { flavor, k1, k2 });
            }
        }
    }
    let mut rng = rng_for(cfg.seed ^ 0x5eed_5eed, index as u64);
    for _ in 0..cfg.specs_per_instance {
        let spec = random_spec(&mut rng, a, 0.3);
        for flavor in [Flavor::Omega, Flavor::Star] {
            for &k1 in &cfg.prefixes {
                for &k2 in &cfg.delays {
                    props.push(Property::K1K2D {
                        flavor,
                        k1,
                        k2,
                        spec: spec.clone(),
                    });
                }
            }
        }
    }
    props.push(Property::Diagnosable);
    props
}

struct Outcome {
    family: String,
    holds: bool,
    disagreement: Option<Disagreement>,
}

fn check_instance(cfg: &CampaignConfig, index: usize) -> Vec<Outcome> {
    let a = random_fsa(&mut rng_for(cfg.seed, index as u64), &cfg.params);
    let mut outcomes = Vec::new();
    for property in campaign_properties(&a, cfg, index) {
        let structural = verify(&a, &property);
        let depth = exact_depth(&a, &property);
        let semantic = oracle(&a, &property, depth);
        let mut oracle_holds = semantic.holds;
        let mut family = property.to_string();
        if property == Property::Diagnosable {
            // Both readings of the bound must agree with the verifier.
            let per_trace = oracle_diagnosable_per_trace(&a);
            if per_trace != oracle_holds {
                oracle_holds = !structural.holds;
                family.push_str("(bounds differ)");
            }
        }
        let witness_error = structural
            .witness
            .as_ref()
            .and_then(|w| check_witness(&a, &property, w).err());
        let agree = structural.holds == oracle_holds && semantic.exact && witness_error.is_none();
        outcomes.push(Outcome {
            family,
            holds: structural.holds,
            disagreement: (!agree).then(|| Disagreement {
                instance: index,
                property: property.to_string(),
                structural: structural.holds,
                oracle: oracle_holds,
                oracle_exact: semantic.exact,
                witness_error,
                model: a.to_text(),
            }),
        });
    }
    outcomes
}

/// Runs every instance in parallel; results are merged by instance index so
/// the report is independent of scheduling.
pub fn run_campaign(cfg: &CampaignConfig) -> CampaignReport {
    let per_instance: Vec<Vec<Outcome>> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| check_instance(cfg, i))
        .collect();
    let mut report = CampaignReport {
        instances: cfg.instances,
        ..Default::default()
    };
    for outcomes in per_instance {
        for o in outcomes {
            let s = report.families.entry(o.family).or_default();
            s.checked += 1;
            s.holds += usize::from(o.holds);
            match o.disagreement {
                None => s.agreed += 1,
                Some(d) => report.disagreements.push(d),
            }
        }
    }
    report
}
