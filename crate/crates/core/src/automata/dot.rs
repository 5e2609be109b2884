use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::Automaton;

/// Graphviz rendering. Parallel edges are merged into one labelled edge;
/// uncontrollable events are prefixed with `!`.
pub fn to_dot(a: &Automaton, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph \"{}\" {{", name.replace('"', "'")).unwrap();
    s.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    if let Some(q0) = a.initial() {
        writeln!(s, "  __init [shape=point];\n  __init -> {q0};").unwrap();
    }
    for q in a.marked_states() {
        writeln!(s, "  {q} [shape=doublecircle];").unwrap();
    }
    let mut edges: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
    for (q, e, t) in a.transitions() {
        let ev = a.event(e);
        let label = if ev.is_controllable() {
            ev.name().to_string()
        } else {
            format!("!{}", ev.name())
        };
        edges.entry((q, t)).or_default().push(label);
    }
    for ((q, t), labels) in edges {
        writeln!(s, "  {q} -> {t} [label=\"{}\"];", labels.join(",")).unwrap();
    }
    s.push_str("}\n");
    s
}
