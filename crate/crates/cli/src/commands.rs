use std::fs;
use std::path::Path;

use detkit::campaign::{run_campaign, CampaignConfig};
use detkit::composition::{concurrent_composition_with, observation_automaton, Materialize, Variant};
use detkit::dot::to_dot;
use detkit::fsa::{check_assumption1, delayed_state_estimate, parse_fsa_json, parse_fsa_with_warnings, state_estimate};
use detkit::oracle::{exact_depth, oracle};
use detkit::random::RandomParams;
use detkit::synthesis::{exhaustive_minimum_plan, synthesize};
use detkit::verify::{k1k2_layers, k_delayed_layers, verify, Flavor, Property, Specification};
use detkit::Fsa;
use serde_json::{json, Value};

use crate::args::*;
use crate::CliError;

type Outcome = Result<bool, CliError>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Synthesize(args) => run_synthesize(args),
        Command::Compose(args) => run_compose(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Campaign(args) => run_campaign_cmd(args),
        Command::Estimate(args) => run_estimate(args),
        Command::Check(args) => run_check(&args.model),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn load_model(path: &Path) -> Result<Fsa, CliError> {
    let text = read(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json {
        parse_fsa_json(&text)
    } else {
        parse_fsa_with_warnings(&text)
    };
    let (a, warnings) = parsed.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(a)
}

fn flag_name(p: PropertyName) -> String {
    use clap::ValueEnum;
    p.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn require(value: Option<usize>, flag: &str, property: PropertyName) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required for {}", flag_name(property))))
}

fn forbid(present: bool, flag: &str, property: PropertyName) -> Result<(), CliError> {
    if present {
        return Err(CliError::usage(format!("--{flag} does not apply to {}", flag_name(property))));
    }
    Ok(())
}

/// Checks the parameter combination and builds the property.
fn property(a: &Fsa, args: &PropertyArgs) -> Result<Property, CliError> {
    use PropertyName::*;
    let p = args.property;
    let flavor = match p {
        OmegaKDelayed | OmegaK1k2 | OmegaK1k2D => Flavor::Omega,
        _ => Flavor::Star,
    };
    let delayed = matches!(p, OmegaKDelayed | StarKDelayed);
    let pairwise = matches!(p, OmegaK1k2 | StarK1k2 | OmegaK1k2D | StarK1k2D);
    let with_spec = matches!(p, OmegaK1k2D | StarK1k2D);
    forbid(!delayed && args.k.is_some(), "k", p)?;
    forbid(!pairwise && (args.k1.is_some() || args.k2.is_some()), "k1/--k2", p)?;
    forbid(!with_spec && args.spec.is_some(), "spec", p)?;
    Ok(match p {
        OmegaKDelayed | StarKDelayed => Property::KDelayed {
            flavor,
            k: require(args.k, "k", p)?,
        },
        OmegaK1k2 | StarK1k2 => Property::K1K2 {
            flavor,
            k1: require(args.k1, "k1", p)?,
            k2: require(args.k2, "k2", p)?,
        },
        OmegaK1k2D | StarK1k2D => {
            let path = args
                .spec
                .as_ref()
                .ok_or_else(|| CliError::usage(format!("--spec is required for {}", flag_name(p))))?;
            let spec = Specification::parse(a, &read(path)?)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            Property::K1K2D {
                flavor,
                k1: require(args.k1, "k1", p)?,
                k2: require(args.k2, "k2", p)?,
                spec,
            }
        }
        Diagnosable => Property::Diagnosable,
    })
}

fn run_verify(args: &VerifyArgs) -> Outcome {
    let a = load_model(&args.model)?;
    let p = property(&a, &args.property)?;
    let verdict = verify(&a, &p);
    let mut out = json!({
        "property": p.name(),
        "parameters": p.parameters_json(&a),
        "holds": verdict.holds,
    });
    if args.layers {
        let layers = match &p {
            Property::KDelayed { flavor, k } => k_delayed_layers(&a, *flavor, *k),
            Property::K1K2 { flavor, k1, k2 } => k1k2_layers(&a, *flavor, *k1, *k2, None),
            Property::K1K2D { flavor, k1, k2, spec } => k1k2_layers(&a, *flavor, *k1, *k2, Some(spec)),
            Property::Diagnosable => return Err(CliError::usage("--layers does not apply to diagnosability")),
        };
        out["layers"] = layers.to_json(&a);
    }
    if let Some(path) = &args.witness {
        let w = verdict.witness.as_ref().map(|w| w.to_json(&a));
        write(path, &pretty(&json!({ "witness": w })))?;
    }
    print!("{}", pretty(&out));
    Ok(verdict.holds)
}

fn run_synthesize(args: &SynthesizeArgs) -> Outcome {
    let a = load_model(&args.model)?;
    let p = property(&a, &args.property)?;
    let plan = if args.exact {
        exhaustive_minimum_plan(&a, &p, args.cap)
    } else {
        synthesize(&a, &p)
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    let full = plan.to_json(&a);
    match &args.out {
        Some(path) => {
            write(path, &pretty(&full))?;
            let mut summary = full.clone();
            if let Some(m) = summary.as_object_mut() {
                m.remove("residual");
            }
            print!("{}", pretty(&summary));
        }
        None => print!("{}", pretty(&full)),
    }
    Ok(plan.feasible)
}

fn run_compose(args: &ComposeArgs) -> Outcome {
    let a = load_model(&args.model)?;
    let materialize = if args.full {
        Materialize::Full
    } else {
        Materialize::Reachable
    };
    let (result, name) = match args.kind {
        ComposeKind::Obs => {
            if args.full {
                return Err(CliError::usage("--full applies to pair compositions only"));
            }
            (observation_automaton(&a).fsa().clone(), "Obs")
        }
        ComposeKind::Cc => (concurrent_composition_with(&a, Variant::Standard, materialize).to_fsa(&a), "CC"),
        ComposeKind::CcTn => (concurrent_composition_with(&a, Variant::DiagTn, materialize).to_fsa(&a), "CCtn"),
    };
    let text = if args.json {
        pretty(&result.to_json_value())
    } else {
        result.to_text()
    };
    match &args.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.dot {
        write(path, &to_dot(&result, name))?;
    }
    Ok(true)
}

fn run_oracle(args: &OracleArgs) -> Outcome {
    let a = load_model(&args.model)?;
    let p = property(&a, &args.property)?;
    let depth = args.depth.unwrap_or_else(|| exact_depth(&a, &p));
    let v = oracle(&a, &p, depth);
    print!(
        "{}",
        pretty(&json!({
            "property": p.name(),
            "parameters": p.parameters_json(&a),
            "depth": depth,
            "holds": v.holds,
            "exact": v.exact,
        }))
    );
    Ok(v.holds)
}

fn run_campaign_cmd(args: &CampaignArgs) -> Outcome {
    if args.states == 0 || args.events == 0 {
        return Err(CliError::usage("--states and --events must be positive"));
    }
    let cfg = CampaignConfig {
        instances: args.instances,
        seed: args.seed,
        params: RandomParams {
            max_states: args.states,
            max_events: args.events,
            max_unobservable: args.unobservable,
            ..Default::default()
        },
        ..Default::default()
    };
    let report = run_campaign(&cfg);
    if args.json {
        print!("{}", pretty(&serde_json::to_value(&report).expect("serializable")));
    } else {
        print!("{}", report.table());
    }
    Ok(report.passed())
}

fn symbols(a: &Fsa, text: &str, cap: usize) -> Result<Vec<detkit::SymbolId>, CliError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() > cap {
        return Err(CliError::usage(format!(
            "word has {} symbols, above --max-word-len {cap}",
            parts.len()
        )));
    }
    a.word(&parts).map_err(CliError::input)
}

fn run_estimate(args: &EstimateArgs) -> Outcome {
    let a = load_model(&args.model)?;
    let sigma1 = symbols(&a, &args.word, args.max_word_len)?;
    let est = match &args.after {
        None => state_estimate(&a, &sigma1),
        Some(after) => delayed_state_estimate(&a, &sigma1, &symbols(&a, after, args.max_word_len)?),
    };
    let names = |w: &[detkit::SymbolId]| w.iter().map(|s| a.symbol_name(*s)).collect::<Vec<_>>();
    print!(
        "{}",
        pretty(&json!({
            "states": est.states.iter().map(|s| a.state_name(*s)).collect::<Vec<_>>(),
            "word": names(&est.prefix_label),
            "after": names(&est.suffix_label),
        }))
    );
    Ok(!est.states.is_empty())
}

fn run_check(path: &Path) -> Outcome {
    let a = load_model(path)?;
    let r = check_assumption1(&a);
    let names = |v: &[detkit::StateId]| v.iter().map(|s| a.state_name(*s)).collect::<Vec<_>>();
    print!(
        "{}",
        pretty(&json!({
            "deadlock_free": r.deadlock_free,
            "prompt": r.prompt,
            "deadlocks": names(&r.deadlocks),
            "unobservable_cycles": names(&r.unobservable_cycles),
        }))
    );
    Ok(r.deadlock_free && r.prompt)
}
