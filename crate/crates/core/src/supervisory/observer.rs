use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{require_subset, Check};
use crate::automata::{word, Automaton, Event, EventSet, StateId};
use crate::error::{Error, Result};

/// `P(s)·extension` is a projected marked string, yet no continuation of
/// `s` realizes it. `realization` is some marked string that does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObserverViolation {
    pub s: Vec<String>,
    pub extension: Vec<String>,
    pub realization: Vec<String>,
}

/// A string whose final segment `s[segment_start..]` is unobservable
/// except for its last, uncontrollable event, yet contains a controllable
/// event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccViolation {
    pub s: Vec<String>,
    pub segment_start: usize,
}

/// Property demanded of a projection by [`enlarge_event_set`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Observer,
    Occ,
}

fn observed_mask(a: &Automaton, sigma: &EventSet) -> Vec<bool> {
    a.events()
        .iter()
        .map(|e| sigma.contains(e.name()))
        .collect()
}

fn closure(
    a: &Automaton,
    observed: &[bool],
    seed: impl IntoIterator<Item = StateId>,
) -> Vec<StateId> {
    let mut seen: BTreeSet<StateId> = BTreeSet::new();
    let mut stack: Vec<StateId> = Vec::new();
    for q in seed {
        if seen.insert(q) {
            stack.push(q);
        }
    }
    while let Some(q) = stack.pop() {
        for (e, t) in a.transitions_from(q) {
            if !observed[e] && seen.insert(t) {
                stack.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

fn step(a: &Automaton, observed: &[bool], set: &[StateId], e: usize) -> Vec<StateId> {
    closure(a, observed, set.iter().filter_map(|&q| a.successor(q, e)))
}

/// Is the projection onto `sigma` an `L_m(g)`-observer?
///
/// Every reachable pair (concrete state `x`, projected state `d`) must
/// satisfy: each observed continuation from `d` that reaches marking can be
/// followed from `x` alone to marking. Checked by a subset walk seeded
/// at every such pair.
pub fn is_observer(g: &Automaton, sigma: &EventSet) -> Result<Check<ObserverViolation>> {
    require_subset(sigma, g, "is_observer")?;
    let Some(x0) = g.initial() else {
        return Ok(Check::Holds);
    };
    let observed = observed_mask(g, sigma);
    let obs_events: Vec<usize> = (0..g.num_events()).filter(|&e| observed[e]).collect();
    let marked = |set: &[StateId]| set.iter().any(|&q| g.is_marked(q));

    // Projected states reachable alongside each concrete state.
    let mut dset: HashMap<Vec<StateId>, usize> = HashMap::new();
    let mut dlist: Vec<Vec<StateId>> = Vec::new();
    let mut intern = |s: Vec<StateId>, dlist: &mut Vec<Vec<StateId>>| -> usize {
        *dset.entry(s.clone()).or_insert_with(|| {
            dlist.push(s);
            dlist.len() - 1
        })
    };
    let d0 = intern(closure(g, &observed, [x0]), &mut dlist);
    let mut pair_index: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut pairs: Vec<(StateId, usize)> = vec![(x0, d0)];
    let mut pair_parent: Vec<Option<(usize, usize)>> = vec![None];
    pair_index.insert((x0, d0), 0);
    let mut i = 0;
    while i < pairs.len() {
        let (x, d) = pairs[i];
        for (e, t) in g.transitions_from(x) {
            let dn = if observed[e] {
                let s = step(g, &observed, &dlist[d].clone(), e);
                intern(s, &mut dlist)
            } else {
                d
            };
            if let std::collections::hash_map::Entry::Vacant(slot) = pair_index.entry((t, dn)) {
                slot.insert(pairs.len());
                pairs.push((t, dn));
                pair_parent.push(Some((i, e)));
            }
        }
        i += 1;
    }

    // Verifier over (projected subset, concrete subset), multi-source.
    type Node = (usize, Vec<StateId>);
    let mut vindex: HashMap<Node, usize> = HashMap::new();
    let mut vnodes: Vec<Node> = Vec::new();
    let mut vparent: Vec<std::result::Result<(usize, usize), usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for (pi, &(x, d)) in pairs.iter().enumerate() {
        let node = (d, closure(g, &observed, [x]));
        if !vindex.contains_key(&node) {
            vindex.insert(node.clone(), vnodes.len());
            queue.push_back(vnodes.len());
            vnodes.push(node);
            vparent.push(Err(pi));
        }
    }
    while let Some(v) = queue.pop_front() {
        let (d, xs) = vnodes[v].clone();
        if marked(&dlist[d]) && !marked(&xs) {
            // Reconstruct s, the extension, and a realization.
            let mut ext = Vec::new();
            let mut cur = v;
            let pi = loop {
                match vparent[cur] {
                    Ok((prev, e)) => {
                        ext.push(e);
                        cur = prev;
                    }
                    Err(pi) => break pi,
                }
            };
            ext.reverse();
            let mut s = Vec::new();
            let mut cur = pi;
            while let Some((prev, e)) = pair_parent[cur] {
                s.push(e);
                cur = prev;
            }
            s.reverse();
            let target: Vec<usize> = s
                .iter()
                .copied()
                .filter(|&e| observed[e])
                .chain(ext.iter().copied())
                .collect();
            let realization = realize(g, &observed, &target).unwrap_or_default();
            return Ok(Check::Fails(ObserverViolation {
                s: word(g, &s),
                extension: word(g, &ext),
                realization: word(g, &realization),
            }));
        }
        for &e in &obs_events {
            let dn = step(g, &observed, &dlist[d].clone(), e);
            if dn.is_empty() {
                continue;
            }
            let dn = intern(dn, &mut dlist);
            let node = (dn, step(g, &observed, &xs, e));
            if !vindex.contains_key(&node) {
                vindex.insert(node.clone(), vnodes.len());
                queue.push_back(vnodes.len());
                vnodes.push(node);
                vparent.push(Ok((v, e)));
            }
        }
    }
    Ok(Check::Holds)
}

/// Shortest marked string whose projection is `target`.
fn realize(g: &Automaton, observed: &[bool], target: &[usize]) -> Option<Vec<usize>> {
    let x0 = g.initial()?;
    type Pos = (StateId, usize);
    let mut parent: HashMap<Pos, Option<(Pos, usize)>> = HashMap::new();
    parent.insert((x0, 0), None);
    let mut queue = VecDeque::from([(x0, 0usize)]);
    while let Some((x, pos)) = queue.pop_front() {
        if pos == target.len() && g.is_marked(x) {
            let mut path = Vec::new();
            let mut cur = (x, pos);
            while let Some(Some((prev, e))) = parent.get(&cur) {
                path.push(*e);
                cur = *prev;
            }
            path.reverse();
            return Some(path);
        }
        for (e, t) in g.transitions_from(x) {
            let next = if observed[e] {
                if pos < target.len() && target[pos] == e {
                    (t, pos + 1)
                } else {
                    continue;
                }
            } else {
                (t, pos)
            };
            if let std::collections::hash_map::Entry::Vacant(v) = parent.entry(next) {
                v.insert(Some(((x, pos), e)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Is the projection onto `sigma` output control consistent for `L(a)`?
///
/// Forward walk over (state, controllable-seen-since-last-observed-event);
/// the first observed uncontrollable move from a tainted node is a
/// violation.
pub fn is_occ(a: &Automaton, sigma: &EventSet) -> Result<Check<OccViolation>> {
    require_subset(sigma, a, "is_occ")?;
    let Some(x0) = a.initial() else {
        return Ok(Check::Holds);
    };
    let observed = observed_mask(a, sigma);
    let n = a.num_states();
    let id = |x: StateId, dirty: bool| x as usize * 2 + dirty as usize;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    seen[id(x0, false)] = true;
    let mut queue = VecDeque::from([(x0, false)]);
    while let Some((x, dirty)) = queue.pop_front() {
        for (e, t) in a.transitions_from(x) {
            let ev = a.event(e);
            let next = if observed[e] {
                if dirty && !ev.is_controllable() {
                    let mut path = vec![e];
                    let mut cur = id(x, dirty);
                    while let Some((prev, pe)) = parent[cur] {
                        path.push(pe);
                        cur = prev;
                    }
                    path.reverse();
                    let segment_start = path[..path.len() - 1]
                        .iter()
                        .rposition(|&e| observed[e])
                        .map_or(0, |p| p + 1);
                    return Ok(Check::Fails(OccViolation {
                        s: word(a, &path),
                        segment_start,
                    }));
                }
                (t, false)
            } else {
                (t, dirty || ev.is_controllable())
            };
            let nid = id(next.0, next.1);
            if !seen[nid] {
                seen[nid] = true;
                parent[nid] = Some((id(x, dirty), e));
                queue.push_back(next);
            }
        }
    }
    Ok(Check::Holds)
}

fn check(a: &Automaton, prop: Property, sigma: &EventSet) -> Result<Option<Vec<String>>> {
    let local: EventSet = sigma
        .iter()
        .filter(|e| a.has_event(e.name()))
        .cloned()
        .collect();
    Ok(match prop {
        Property::Observer => is_observer(a, &local)?.witness().map(|w| {
            w.s.iter()
                .chain(&w.realization)
                .filter(|e| !local.contains(e.as_str()))
                .cloned()
                .collect()
        }),
        Property::Occ => is_occ(a, &local)?.witness().map(|w| {
            w.s[w.segment_start..w.s.len() - 1]
                .iter()
                .filter(|e| {
                    let i = a.event_index(e).unwrap();
                    a.event(i).is_controllable()
                })
                .cloned()
                .collect()
        }),
    })
}

fn all_hold(reqs: &[(&Automaton, Property)], sigma: &EventSet) -> Result<bool> {
    for &(a, p) in reqs {
        if check(a, p, sigma)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Grow `base` until every requirement holds for the projection onto the
/// result (restricted to each automaton's alphabet).
///
/// Each failed check contributes the erased events of its counterexample.
/// A final pass drops added events one at a time (last name first) when
/// the requirements survive without them. The result is a fixpoint, not a
/// minimum.
pub fn enlarge_event_set(base: &EventSet, reqs: &[(&Automaton, Property)]) -> Result<EventSet> {
    if let Some(e) = base
        .iter()
        .find(|e| !reqs.is_empty() && !reqs.iter().any(|(a, _)| a.has_event(e.name())))
    {
        return Err(Error::invalid(format!(
            "enlarge_event_set: base event `{e}` belongs to no requirement automaton"
        )));
    }
    let mut sigma = base.clone();
    'outer: loop {
        for &(a, prop) in reqs {
            let Some(culprits) = check(a, prop, &sigma)? else {
                continue;
            };
            let mut fresh: Vec<Event> = culprits
                .iter()
                .filter(|n| !sigma.contains(n.as_str()))
                .map(|n| a.event(a.event_index(n).unwrap()).clone())
                .collect();
            if fresh.is_empty() {
                // cannot happen for correct witnesses; guarantees progress regardless
                fresh = a
                    .events()
                    .iter()
                    .filter(|e| !sigma.contains(e.name()))
                    .take(1)
                    .cloned()
                    .collect();
            }
            log::trace!("enlarge_event_set: {prop:?} adds {fresh:?}");
            sigma.extend(fresh);
            continue 'outer;
        }
        break;
    }
    let added: Vec<Event> = sigma.difference(base).cloned().collect();
    for e in added.into_iter().rev() {
        let mut trial = sigma.clone();
        trial.remove(&e);
        if all_hold(reqs, &trial)? {
            sigma = trial;
        }
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str], a: &Automaton) -> EventSet {
        names
            .iter()
            .map(|n| a.event(a.event_index(n).unwrap()).clone())
            .collect()
    }

    /// 0 -a-> 1 -b-> 2 (marked), 0 -a-> ... via hidden h: 0 -h-> 3 -a-> 4 (dead)
    fn branching() -> Automaton {
        Automaton::new(
            [
                Event::controllable("a"),
                Event::controllable("b"),
                Event::controllable("h"),
            ],
            5,
            Some(0),
            [2],
            [(0, "a", 1), (1, "b", 2), (0, "h", 3), (3, "a", 4)],
        )
        .unwrap()
    }

    #[test]
    fn identity_projection_is_observer() {
        let g = branching();
        assert!(is_observer(&g, &g.alphabet()).unwrap().holds());
    }

    #[test]
    fn dead_branch_breaks_observer() {
        let g = branching();
        let w = is_observer(&g, &set(&["a"], &g)).unwrap();
        let w = w.witness().unwrap().clone();
        assert_eq!(w.realization, vec!["a", "b"]);
        let sigma = enlarge_event_set(&set(&["a"], &g), &[(&g, Property::Observer)]).unwrap();
        assert!(is_observer(&g, &sigma).unwrap().holds());
        assert!(sigma.contains("h") || sigma.contains("b"));
    }

    #[test]
    fn controllable_hidden_before_uncontrollable_observed() {
        let g = Automaton::new(
            [Event::controllable("c"), Event::uncontrollable("u")],
            3,
            Some(0),
            [2],
            [(0, "c", 1), (1, "u", 2)],
        )
        .unwrap();
        let w = is_occ(&g, &set(&["u"], &g)).unwrap();
        assert_eq!(
            w.witness().unwrap(),
            &OccViolation {
                s: vec!["c".into(), "u".into()],
                segment_start: 0
            }
        );
        assert!(is_occ(&g, &g.alphabet()).unwrap().holds());
        let sigma = enlarge_event_set(&set(&["u"], &g), &[(&g, Property::Occ)]).unwrap();
        assert_eq!(sigma, g.alphabet());
    }

    #[test]
    fn fixpoint_and_empty_requirements() {
        let g = branching();
        let all = g.alphabet();
        assert_eq!(
            enlarge_event_set(&all, &[(&g, Property::Observer)]).unwrap(),
            all
        );
        let base = set(&["a"], &g);
        assert_eq!(enlarge_event_set(&base, &[]).unwrap(), base);
    }
}
