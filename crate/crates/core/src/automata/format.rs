//! Plain-text automaton format.
//!
//! ```text
//! # comment
//! states 3
//! initial 0
//! marked 0 2
//! event take c 1     # name, c|u, optional 1-based owner
//! trans 0 take 1
//! ```
//! An automaton with `states 0` and no `initial` line is empty.

use std::fmt::Write as _;

use super::{Automaton, Event, StateId};
use crate::error::{Error, Result};

pub fn parse_aut(text: &str, source_name: &str) -> Result<Automaton> {
    let err = |line: usize, message: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut states: Option<usize> = None;
    let mut initial: Option<StateId> = None;
    let mut marked = Vec::new();
    let mut events = Vec::new();
    let mut trans: Vec<(StateId, String, StateId, usize)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let kw = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        let num = |s: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|_| err(line, format!("expected a state number, found `{s}`")))
        };
        match kw {
            "states" => {
                if rest.len() != 1 {
                    return Err(err(line, "usage: states <n>".into()));
                }
                if states.is_some() {
                    return Err(err(line, "duplicate `states` line".into()));
                }
                states = Some(num(rest[0])? as usize);
            }
            "initial" => {
                if rest.len() != 1 {
                    return Err(err(line, "usage: initial <state>".into()));
                }
                initial = Some(num(rest[0])?);
            }
            "marked" => {
                for s in rest {
                    marked.push(num(s)?);
                }
            }
            "event" => {
                if rest.len() < 2 || rest.len() > 3 {
                    return Err(err(line, "usage: event <name> c|u [owner]".into()));
                }
                let controllable = match rest[1] {
                    "c" => true,
                    "u" => false,
                    other => return Err(err(line, format!("expected c or u, found `{other}`"))),
                };
                let mut e = Event::new(rest[0], controllable);
                if let Some(o) = rest.get(2) {
                    let o: usize = o.parse().ok().filter(|&o| o > 0).ok_or_else(|| {
                        err(
                            line,
                            format!("bad owner `{o}` (agents are numbered from 1)"),
                        )
                    })?;
                    e = e.with_owner(o - 1);
                }
                events.push(e);
            }
            "trans" => {
                if rest.len() != 3 {
                    return Err(err(line, "usage: trans <from> <event> <to>".into()));
                }
                trans.push((num(rest[0])?, rest[1].to_string(), num(rest[2])?, line));
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }

    let n = states.ok_or_else(|| err(0, "missing `states` line".into()))?;
    let check = |q: StateId, line: usize| {
        if (q as usize) < n {
            Ok(())
        } else {
            Err(err(line, format!("state {q} out of range")))
        }
    };
    if let Some(q) = initial {
        check(q, 0)?;
    }
    for &q in &marked {
        check(q, 0)?;
    }
    let mut seen = std::collections::HashSet::new();
    for (from, name, to, line) in &trans {
        check(*from, *line)?;
        check(*to, *line)?;
        if !events.iter().any(|e: &Event| e.name() == name) {
            return Err(err(*line, format!("undeclared event `{name}`")));
        }
        if !seen.insert((*from, name.as_str())) {
            return Err(err(
                *line,
                format!("second transition from {from} on `{name}`"),
            ));
        }
    }
    Automaton::new(
        events,
        n,
        initial,
        marked,
        trans.iter().map(|(f, e, t, _)| (*f, e.as_str(), *t)),
    )
    .map_err(|e| match e {
        Error::InvalidInput(m) => err(0, m),
        other => other,
    })
}

pub fn write_aut(a: &Automaton) -> String {
    let mut s = String::new();
    writeln!(s, "states {}", a.num_states()).unwrap();
    if let Some(q) = a.initial() {
        writeln!(s, "initial {q}").unwrap();
    }
    let marked: Vec<String> = a.marked_states().map(|q| q.to_string()).collect();
    if !marked.is_empty() {
        writeln!(s, "marked {}", marked.join(" ")).unwrap();
    }
    for e in a.events() {
        let c = if e.is_controllable() { "c" } else { "u" };
        match e.owner() {
            Some(o) => writeln!(s, "event {} {c} {}", e.name(), o + 1),
            None => writeln!(s, "event {} {c}", e.name()),
        }
        .unwrap();
    }
    for (q, e, t) in a.transitions() {
        writeln!(s, "trans {q} {} {t}", a.event(e).name()).unwrap();
    }
    s
}
