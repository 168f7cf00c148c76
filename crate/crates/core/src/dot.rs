//! Graphviz export.

use std::fmt::Write as _;

use crate::fsa::Fsa;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// States become nodes, transitions edges labelled `event(label)`; each
/// initial state gets an incoming edge from an invisible point node.
pub fn to_dot(a: &Fsa, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle];");
    for s in a.states() {
        let _ = writeln!(out, "  {};", quote(a.state_name(s)));
    }
    for (i, &s) in a.initial().iter().enumerate() {
        let _ = writeln!(out, "  \"__init{i}\" [shape=point, style=invis];");
        let _ = writeln!(out, "  \"__init{i}\" -> {};", quote(a.state_name(s)));
    }
    for t in a.transitions() {
        let label = a
            .label(t.event)
            .map_or("ε".to_string(), |l| a.symbol_name(l).to_string());
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(a.state_name(t.source)),
            quote(a.state_name(t.target)),
            quote(&format!("{}({})", a.event_name(t.event), label))
        );
    }
    out.push_str("}\n");
    out
}
