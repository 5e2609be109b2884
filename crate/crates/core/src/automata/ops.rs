use std::collections::{BTreeSet, HashMap};

use super::{collect_events, Automaton, Event, EventSet, StateId};
use crate::error::{Error, Result};

/// Synchronous product of two automata.
pub fn sync_product(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    sync_product_all(&[a, b])
}

/// N-ary synchronous product, accessible part only.
pub fn sync_product_all(parts: &[&Automaton]) -> Result<Automaton> {
    Ok(sync_product_tracked(parts)?.0)
}

/// Product plus, for every product state, the component state tuple.
pub(crate) fn sync_product_tracked(parts: &[&Automaton]) -> Result<(Automaton, Vec<Vec<StateId>>)> {
    if parts.is_empty() {
        return Err(Error::invalid("product of zero automata"));
    }
    let events = collect_events(parts.iter().flat_map(|a| a.events().iter().cloned()))?;
    let empty = || Automaton::from_parts(events.clone(), Vec::new(), None, Vec::new());
    let Some(init) = parts
        .iter()
        .map(|a| a.initial())
        .collect::<Option<Vec<StateId>>>()
    else {
        return Ok((empty(), Vec::new()));
    };

    // For each product event: the participating (component, local index) pairs.
    let part_of: Vec<Vec<(usize, usize)>> = events
        .iter()
        .map(|e| {
            parts
                .iter()
                .enumerate()
                .filter_map(|(i, a)| a.event_index(e.name()).map(|l| (i, l)))
                .collect()
        })
        .collect();

    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut tuples = vec![init.clone()];
    index.insert(init, 0);
    let mut trans: Vec<Vec<(u32, StateId)>> = Vec::new();
    let mut i = 0;
    while i < tuples.len() {
        let cur = tuples[i].clone();
        let mut row = Vec::new();
        'ev: for (e, who) in part_of.iter().enumerate() {
            let mut next = cur.clone();
            for &(p, l) in who {
                match parts[p].successor(cur[p], l) {
                    Some(t) => next[p] = t,
                    None => continue 'ev,
                }
            }
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = tuples.len() as StateId;
                    index.insert(next.clone(), id);
                    tuples.push(next);
                    id
                }
            };
            row.push((e as u32, id));
        }
        trans.push(row);
        i += 1;
    }
    let marked = tuples
        .iter()
        .map(|t| t.iter().zip(parts).all(|(&q, a)| a.is_marked(q)))
        .collect();
    Ok((
        Automaton::from_parts(events, trans, Some(0), marked),
        tuples,
    ))
}

pub(super) fn project(a: &Automaton, sigma: &EventSet) -> Result<Automaton> {
    for e in sigma {
        if !a.has_event(e.name()) {
            return Err(Error::invalid(format!(
                "projection event `{e}` is not in the alphabet"
            )));
        }
    }
    let events: Vec<Event> = a
        .events()
        .iter()
        .filter(|e| sigma.contains(e.name()))
        .cloned()
        .collect();
    let observed: Vec<Option<u32>> = a
        .events()
        .iter()
        .map(|e| events.binary_search(e).ok().map(|i| i as u32))
        .collect();
    let Some(q0) = a.initial() else {
        return Ok(Automaton::from_parts(events, Vec::new(), None, Vec::new()));
    };

    let closure = |seed: &mut Vec<StateId>| {
        let mut seen: BTreeSet<StateId> = seed.iter().copied().collect();
        let mut stack = seed.clone();
        while let Some(q) = stack.pop() {
            for (e, t) in a.transitions_from(q) {
                if observed[e].is_none() && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        *seed = seen.into_iter().collect();
    };

    let mut start = vec![q0];
    closure(&mut start);
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut subsets = vec![start];
    let mut trans = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut succ: Vec<Vec<StateId>> = vec![Vec::new(); events.len()];
        for &q in &subsets[i] {
            for (e, t) in a.transitions_from(q) {
                if let Some(o) = observed[e] {
                    succ[o as usize].push(t);
                }
            }
        }
        let mut row = Vec::new();
        for (o, mut s) in succ.into_iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            closure(&mut s);
            let id = match index.get(&s) {
                Some(&id) => id,
                None => {
                    let id = subsets.len() as StateId;
                    index.insert(s.clone(), id);
                    subsets.push(s);
                    id
                }
            };
            row.push((o as u32, id));
        }
        trans.push(row);
        i += 1;
    }
    let marked = subsets
        .iter()
        .map(|s| s.iter().any(|&q| a.is_marked(q)))
        .collect();
    Ok(Automaton::from_parts(events, trans, Some(0), marked))
}

/// Moore partition refinement. Missing transitions act as an implicit,
/// unmarked sink that is distinct from every real state; marked and
/// unmarked states start in separate blocks.
pub(super) fn minimize(a: &Automaton) -> Automaton {
    let acc = a.accessible();
    if acc.is_empty() {
        return acc;
    }
    let n = acc.num_states();
    let mut block: Vec<u32> = (0..n).map(|q| acc.is_marked(q as StateId) as u32).collect();
    let mut count = block.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut sigs: HashMap<(u32, Vec<(u32, u32)>), u32> = HashMap::new();
        let mut next = vec![0u32; n];
        for q in 0..n {
            let sig = (
                block[q],
                acc.transitions_from(q as StateId)
                    .map(|(e, t)| (e as u32, block[t as usize]))
                    .collect(),
            );
            let fresh = sigs.len() as u32;
            next[q] = *sigs.entry(sig).or_insert(fresh);
        }
        let new_count = sigs.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut trans = vec![Vec::new(); count];
    let mut marked = vec![false; count];
    let mut done = vec![false; count];
    for q in 0..n {
        let b = block[q] as usize;
        if done[b] {
            continue;
        }
        done[b] = true;
        marked[b] = acc.is_marked(q as StateId);
        trans[b] = acc
            .transitions_from(q as StateId)
            .map(|(e, t)| (e as u32, block[t as usize]))
            .collect();
    }
    let init = block[acc.initial().unwrap() as usize];
    Automaton::from_parts(acc.events().to_vec(), trans, Some(init), marked).canonical()
}

/// Equality of both the closed and the marked language. Alphabets are
/// ignored beyond the events that actually occur.
pub fn language_equivalent(a: &Automaton, b: &Automaton) -> bool {
    let x = a.minimize();
    let y = b.minimize();
    if x.is_empty() || y.is_empty() {
        return x.is_empty() && y.is_empty();
    }
    if x.num_states() != y.num_states() {
        return false;
    }
    (0..x.num_states() as StateId).all(|q| {
        x.is_marked(q) == y.is_marked(q)
            && x.transitions_from(q)
                .map(|(e, t)| (x.event(e).name(), t))
                .eq(y.transitions_from(q).map(|(e, t)| (y.event(e).name(), t)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Membership;

    fn ev(names: &[(&str, bool)]) -> Vec<Event> {
        names.iter().map(|&(n, c)| Event::new(n, c)).collect()
    }

    #[test]
    fn product_synchronizes_shared_events() {
        let a = Automaton::new(
            ev(&[("a", true), ("s", true)]),
            2,
            Some(0),
            [1],
            [(0, "a", 1), (1, "s", 0)],
        )
        .unwrap();
        let b = Automaton::new(
            ev(&[("b", true), ("s", true)]),
            2,
            Some(0),
            [1],
            [(0, "b", 1), (1, "s", 0)],
        )
        .unwrap();
        let p = sync_product(&a, &b).unwrap();
        assert_eq!(p.num_states(), 4);
        assert_eq!(p.accepts(&["a", "b", "s"]).unwrap(), Membership::Prefix);
        assert_eq!(p.accepts(&["b", "a"]).unwrap(), Membership::Marked);
        assert_eq!(p.accepts(&["a", "s"]).unwrap(), Membership::Rejected);
    }

    #[test]
    fn product_rejects_attribute_clash() {
        let a = Automaton::new(ev(&[("s", true)]), 1, Some(0), [0], []).unwrap();
        let b = Automaton::new(ev(&[("s", false)]), 1, Some(0), [0], []).unwrap();
        assert!(matches!(
            sync_product(&a, &b),
            Err(Error::ControllabilityConflict { .. })
        ));
    }

    #[test]
    fn projection_collapses_hidden_moves() {
        let a = Automaton::new(
            ev(&[("a", true), ("h", false)]),
            3,
            Some(0),
            [2],
            [(0, "h", 1), (1, "a", 2), (0, "a", 2)],
        )
        .unwrap();
        let sigma: EventSet = [Event::controllable("a")].into_iter().collect();
        let p = a.natural_projection(&sigma).unwrap();
        assert_eq!(p.num_states(), 2);
        assert_eq!(p.accepts(&["a"]).unwrap(), Membership::Marked);
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        let a = Automaton::new(
            ev(&[("a", true)]),
            3,
            Some(0),
            [0, 1, 2],
            [(0, "a", 1), (1, "a", 2), (2, "a", 1)],
        )
        .unwrap();
        let m = a.minimize();
        assert_eq!(m.num_states(), 1);
        assert!(language_equivalent(&a, &m));
    }

    #[test]
    fn marking_distinguishes() {
        let a = Automaton::new(ev(&[("a", true)]), 2, Some(0), [0, 1], [(0, "a", 1)]).unwrap();
        let b = Automaton::new(ev(&[("a", true)]), 2, Some(0), [0], [(0, "a", 1)]).unwrap();
        assert!(!language_equivalent(&a, &b));
        let c = Automaton::new(
            ev(&[("a", true)]),
            2,
            Some(0),
            [0],
            [(0, "a", 1), (1, "a", 1)],
        )
        .unwrap();
        assert!(!language_equivalent(&b, &c));
    }
}
