//! Line-oriented model files and their JSON equivalent.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Fsa, FsaBuilder};
use crate::error::ModelError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseWarning {
    EmptyInitial,
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseWarning::EmptyInitial => f.write_str("initial state set is empty"),
        }
    }
}

pub fn parse_fsa(text: &str) -> Result<Fsa, ModelError> {
    parse_fsa_with_warnings(text).map(|(f, _)| f)
}

pub fn parse_fsa_with_warnings(text: &str) -> Result<(Fsa, Vec<ParseWarning>), ModelError> {
    let mut b = FsaBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, rest)) = content.split_once(':') else {
            return Err(ModelError::Syntax {
                line,
                message: format!("expected `key: values`, found `{content}`"),
            });
        };
        let items: Vec<&str> = rest.split_whitespace().collect();
        apply_line(&mut b, key.trim(), &items, line).map_err(|e| e.at(line))?;
    }
    finish(b)
}

fn apply_line(
    b: &mut FsaBuilder,
    key: &str,
    items: &[&str],
    line: usize,
) -> Result<(), ModelError> {
    match key {
        "states" => {
            for s in items {
                b.state(s)?;
            }
        }
        "initial" => {
            for s in items {
                let id = b.state_id(s)?;
                b.initial(id);
            }
        }
        "alphabet" => {
            for s in items {
                b.symbol(s)?;
            }
        }
        "events" => {
            for item in items {
                let Some((name, label)) = item.split_once(':') else {
                    return Err(ModelError::Syntax {
                        line,
                        message: format!("event `{item}` needs the form name:label"),
                    });
                };
                b.event(name, (label != "eps").then_some(label))?;
            }
        }
        "controllable" => {
            for e in items {
                let id = b.event_id(e)?;
                b.set_controllable(id);
            }
        }
        "faulty" => {
            for e in items {
                let id = b.event_id(e)?;
                b.set_faulty(id);
            }
        }
        "trans" => {
            let [s, e, t] = items else {
                return Err(ModelError::Syntax {
                    line,
                    message: "a transition line needs `source event target`".to_string(),
                });
            };
            b.transition_by_name(s, e, t)?;
        }
        other => {
            return Err(ModelError::Syntax {
                line,
                message: format!("unknown key `{other}`"),
            })
        }
    }
    Ok(())
}

fn finish(b: FsaBuilder) -> Result<(Fsa, Vec<ParseWarning>), ModelError> {
    let fsa = b.build();
    let mut warnings = Vec::new();
    if fsa.initial().is_empty() {
        warnings.push(ParseWarning::EmptyInitial);
    }
    Ok((fsa, warnings))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    states: Vec<String>,
    #[serde(default)]
    initial: Vec<String>,
    #[serde(default)]
    alphabet: Vec<String>,
    #[serde(default)]
    events: Vec<String>,
    #[serde(default)]
    controllable: Vec<String>,
    #[serde(default)]
    faulty: Vec<String>,
    #[serde(default)]
    trans: Vec<[String; 3]>,
}

pub fn parse_fsa_json(text: &str) -> Result<(Fsa, Vec<ParseWarning>), ModelError> {
    let m: ModelJson =
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
    let mut b = FsaBuilder::new();
    for (key, values) in [
        ("states", &m.states),
        ("initial", &m.initial),
        ("alphabet", &m.alphabet),
        ("events", &m.events),
        ("controllable", &m.controllable),
        ("faulty", &m.faulty),
    ] {
        let items: Vec<&str> = values.iter().map(String::as_str).collect();
        apply_line(&mut b, key, &items, 0)?;
    }
    for [s, e, t] in &m.trans {
        b.transition_by_name(s, e, t)?;
    }
    finish(b)
}

impl Fsa {
    fn model_json(&self) -> ModelJson {
        ModelJson {
            states: self.states.clone(),
            initial: self
                .initial
                .iter()
                .map(|&s| self.state_name(s).to_string())
                .collect(),
            alphabet: self.alphabet.clone(),
            events: self
                .events
                .iter()
                .map(|e| match e.label {
                    Some(l) => format!("{}:{}", e.name, self.alphabet[l.0]),
                    None => format!("{}:eps", e.name),
                })
                .collect(),
            controllable: self
                .events
                .iter()
                .filter(|e| e.controllable)
                .map(|e| e.name.clone())
                .collect(),
            faulty: self
                .events
                .iter()
                .filter(|e| e.faulty)
                .map(|e| e.name.clone())
                .collect(),
            trans: self
                .transitions
                .iter()
                .map(|t| {
                    [
                        self.state_name(t.source).to_string(),
                        self.event_name(t.event).to_string(),
                        self.state_name(t.target).to_string(),
                    ]
                })
                .collect(),
        }
    }

    /// Model-file text; parsing it back yields an identical automaton.
    pub fn to_text(&self) -> String {
        let m = self.model_json();
        let mut out = String::new();
        let mut line = |key: &str, items: &[String]| {
            let _ = if items.is_empty() {
                writeln!(out, "{key}:")
            } else {
                writeln!(out, "{key}: {}", items.join(" "))
            };
        };
        line("states", &m.states);
        line("initial", &m.initial);
        line("alphabet", &m.alphabet);
        line("events", &m.events);
        line("controllable", &m.controllable);
        line("faulty", &m.faulty);
        for t in &m.trans {
            line("trans", t);
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.model_json()).expect("model is serializable")
    }
}
