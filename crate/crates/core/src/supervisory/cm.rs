use std::collections::VecDeque;

use super::{require_subset, Check};
use crate::automata::{index_map, Automaton, EventSet, StateId};
use crate::error::{Error, Result};

/// A coordination module blocks an event it is not allowed to block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnablingViolation {
    pub prefix: Vec<String>,
    pub event: String,
}

/// Coordination module of an agent: the projection of `sup` onto `sigma`
/// (the agent's alphabet plus the events it receives), minimized.
pub fn cm_from(sup: &Automaton, sigma: &EventSet) -> Result<Automaton> {
    require_subset(sigma, sup, "cm_from")?;
    let a = sup.natural_projection(sigma)?;
    Ok(a.with_event_attributes(&sup.alphabet()))
}

/// Does `s` qualify as a coordination module for `agent` inside `system`?
///
/// `s` must contain the agent's alphabet and may only ever block the
/// agent's own controllable events. `system` is the behaviour `s` is
/// placed into: the agents together with whatever other modules already
/// act on them.
pub fn is_valid_cm(
    s: &Automaton,
    agent: &Automaton,
    system: &Automaton,
) -> Result<Check<EnablingViolation>> {
    if let Some(e) = agent.events().iter().find(|e| !s.has_event(e.name())) {
        return Ok(Check::Fails(EnablingViolation {
            prefix: Vec::new(),
            event: e.name().to_string(),
        }));
    }
    require_subset(&s.alphabet(), system, "is_valid_cm")
        .map_err(|_| Error::invalid("is_valid_cm: module events must be system events"))?;
    let (Some(x0), Some(s0)) = (system.initial(), s.initial()) else {
        return Ok(Check::Holds);
    };
    let to_s = index_map(system, s);
    let may_block: Vec<bool> = system
        .events()
        .iter()
        .map(|e| e.is_controllable() && agent.has_event(e.name()))
        .collect();
    let mut seen = std::collections::HashMap::new();
    seen.insert((x0, s0), None::<((StateId, StateId), usize)>);
    let mut queue = VecDeque::from([(x0, s0)]);
    while let Some((x, q)) = queue.pop_front() {
        for (e, xn) in system.transitions_from(x) {
            let qn = match to_s[e] {
                None => q,
                Some(se) => match s.successor(q, se) {
                    Some(qn) => qn,
                    None if may_block[e] => continue,
                    None => {
                        let mut path = Vec::new();
                        let mut cur = (x, q);
                        while let Some(Some((prev, pe))) = seen.get(&cur) {
                            path.push(system.event(*pe).name().to_string());
                            cur = *prev;
                        }
                        path.reverse();
                        return Ok(Check::Fails(EnablingViolation {
                            prefix: path,
                            event: system.event(e).name().to_string(),
                        }));
                    }
                },
            };
            if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry((xn, qn)) {
                slot.insert(Some(((x, q), e)));
                queue.push_back((xn, qn));
            }
        }
    }
    Ok(Check::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{language_equivalent, sync_product, Event};

    fn agent(tag: &str, owner: usize) -> Automaton {
        let go = format!("{tag}go");
        let done = format!("{tag}done");
        Automaton::new(
            [
                Event::controllable(&go).with_owner(owner),
                Event::uncontrollable(&done).with_owner(owner),
            ],
            2,
            Some(0),
            [0],
            [(0, go.as_str(), 1), (1, done.as_str(), 0)],
        )
        .unwrap()
    }

    #[test]
    fn universal_module_is_valid() {
        let a = agent("1", 0);
        let sys = sync_product(&a, &agent("2", 1)).unwrap();
        let u = Automaton::universal(&a.alphabet()).unwrap();
        assert!(is_valid_cm(&u, &a, &sys).unwrap().holds());
    }

    #[test]
    fn blocking_foreign_event_is_invalid() {
        let a = agent("1", 0);
        let b = agent("2", 1);
        let sys = sync_product(&a, &b).unwrap();
        let mut ev = a.alphabet();
        ev.insert(Event::controllable("2go").with_owner(1));
        let s = Automaton::new(ev, 1, Some(0), [0], [(0, "1go", 0), (0, "1done", 0)]).unwrap();
        let w = is_valid_cm(&s, &a, &sys).unwrap();
        assert_eq!(w.witness().unwrap().event, "2go");
    }

    #[test]
    fn projection_onto_everything_is_identity() {
        let sys = sync_product(&agent("1", 0), &agent("2", 1)).unwrap();
        let cm = cm_from(&sys, &sys.alphabet()).unwrap();
        assert!(language_equivalent(&cm, &sys));
    }
}
