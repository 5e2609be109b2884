use std::fmt::Write as _;

use super::graph::AndOrGraph;
use super::tree::{NodeSet, PlanTree};

fn label(n: &NodeSet) -> String {
    let m: Vec<String> = n.iter().map(|k| (k + 1).to_string()).collect();
    format!("{{{}}}", m.join(","))
}

/// Subnet nodes as boxes; each hyper-edge goes through a small junction.
pub fn andor_to_dot(g: &AndOrGraph) -> String {
    let mut s = String::from("digraph andor {\n  node [shape=box];\n");
    for (i, n) in g.nodes().iter().enumerate() {
        writeln!(s, "  n{i} [label=\"{}\"];", label(n)).unwrap();
    }
    for (j, e) in g.edges().iter().enumerate() {
        writeln!(s, "  h{j} [shape=point];").unwrap();
        writeln!(s, "  n{} -> h{j} [arrowhead=none];", e.parent).unwrap();
        for c in e.children {
            writeln!(s, "  h{j} -> n{c};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

pub fn plan_to_dot(t: &PlanTree) -> String {
    fn walk(t: &PlanTree, s: &mut String, next: &mut usize) -> usize {
        let id = *next;
        *next += 1;
        writeln!(s, "  p{id} [label=\"{}\"];", label(t.node())).unwrap();
        if let PlanTree::Branch { left, right, .. } = t {
            for c in [left, right] {
                let cid = walk(c, s, next);
                writeln!(s, "  p{id} -> p{cid};").unwrap();
            }
        }
        id
    }
    let mut s = String::from("digraph plan {\n  node [shape=box];\n");
    walk(t, &mut s, &mut 0);
    s.push_str("}\n");
    s
}
