//! `.dcsn` files:
//!
//! ```text
//! agent a1.aut
//! agent a2.aut
//! constraint 1 agents 1,2 e1.aut
//! ```
//! Agents are numbered by their order; constraint numbers must cover `1..=m`.

use std::collections::BTreeMap;
use std::path::Path;

use super::{Constraint, Dcsn};
use crate::automata::Automaton;
use crate::error::{Error, Result};

/// Parse network text, resolving automaton paths through `load`.
pub fn parse_dcsn(
    text: &str,
    source_name: &str,
    mut load: impl FnMut(&str) -> Result<Automaton>,
) -> Result<Dcsn> {
    let err = |line: usize, message: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut agents = Vec::new();
    let mut constraints: BTreeMap<usize, Constraint> = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        match words[0] {
            "agent" => {
                if words.len() != 2 {
                    return Err(err(line, "usage: agent <file>".into()));
                }
                agents.push((stem(words[1]), load(words[1])?));
            }
            "constraint" => {
                if words.len() != 5 || words[2] != "agents" {
                    return Err(err(
                        line,
                        "usage: constraint <k> agents <i,j,...> <file>".into(),
                    ));
                }
                let k: usize =
                    words[1].parse().ok().filter(|&k| k > 0).ok_or_else(|| {
                        err(line, format!("bad constraint number `{}`", words[1]))
                    })?;
                let set = words[3]
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .ok()
                            .filter(|&i| i > 0)
                            .map(|i| i - 1)
                            .ok_or_else(|| err(line, format!("bad agent number `{s}`")))
                    })
                    .collect::<Result<_>>()?;
                let c = Constraint {
                    name: stem(words[4]),
                    agents: set,
                    automaton: load(words[4])?,
                };
                if constraints.insert(k - 1, c).is_some() {
                    return Err(err(line, format!("constraint {k} defined twice")));
                }
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    if let Some((pos, _)) = constraints.keys().enumerate().find(|(i, k)| i != *k) {
        return Err(err(0, format!("constraint {} is missing", pos + 1)));
    }
    Ok(Dcsn::new(agents, constraints.into_values().collect()))
}

fn stem(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().to_uppercase())
        .unwrap_or_else(|| path.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Automaton, Event};

    fn one(name: &str) -> Result<Automaton> {
        Automaton::new([Event::controllable(name)], 1, Some(0), [0], [])
    }

    #[test]
    fn parses_and_names() {
        let d = parse_dcsn(
            "agent a1.aut\nagent a2.aut\nconstraint 1 agents 1,2 e1.aut\n",
            "t",
            |p| one(p.trim_end_matches(".aut")),
        )
        .unwrap();
        assert_eq!(d.num_agents(), 2);
        assert_eq!(d.constraint(0).name, "E1");
        assert_eq!(d.constraint(0).agents, [0, 1].into());
    }

    #[test]
    fn gaps_and_garbage_are_errors() {
        let gap = parse_dcsn("agent a.aut\nconstraint 2 agents 1 c.aut\n", "t", one);
        assert!(matches!(gap, Err(Error::Parse { .. })));
        let bad = parse_dcsn("agent a.aut\nconstraint 1 agents 0 c.aut\n", "t", one);
        assert!(matches!(bad, Err(Error::Parse { line: 2, .. })));
    }
}
