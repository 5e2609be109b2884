use std::fmt::Write as _;

use super::{Crn, Dcsn};

/// Agents as boxes, constraints as ovals, one arc per membership.
pub fn dcsn_to_dot(d: &Dcsn) -> String {
    let mut s = String::from("graph dcsn {\n");
    for i in 0..d.num_agents() {
        writeln!(
            s,
            "  a{} [shape=box, label=\"{}\"];",
            i + 1,
            d.agent_name(i)
        )
        .unwrap();
    }
    for (k, c) in d.constraints().iter().enumerate() {
        writeln!(s, "  c{} [shape=oval, label=\"{}\"];", k + 1, c.name).unwrap();
        for &i in &c.agents {
            writeln!(s, "  c{} -- a{};", k + 1, i + 1).unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// Constraints as nodes, edges labelled with shared agents (1-based).
pub fn crn_to_dot(crn: &Crn, d: &Dcsn) -> String {
    let mut s = String::from("graph crn {\n");
    for k in crn.vertices() {
        writeln!(s, "  c{} [label=\"{}\"];", k + 1, d.constraint(k).name).unwrap();
    }
    for (&(a, b), shared) in crn.edges() {
        let l: Vec<String> = shared.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(
            s,
            "  c{} -- c{} [label=\"{{{}}}\"];",
            a + 1,
            b + 1,
            l.join(",")
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}
