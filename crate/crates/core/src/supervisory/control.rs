use std::collections::VecDeque;

use super::{require_same_alphabet, Check};
use crate::automata::{index_map, sync_product_tracked, word, Automaton, StateId};
use crate::error::{Error, Result};

/// `prefix · event` leaves the constraint although the plant allows it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControllabilityViolation {
    pub prefix: Vec<String>,
    pub event: String,
}

/// Is `closure(L_m(k))` controllable with respect to `a`?
///
/// Breadth-first over pairs (k-state, a-state), so the witness is of
/// minimal length.
pub fn is_controllable(k: &Automaton, a: &Automaton) -> Result<Check<ControllabilityViolation>> {
    require_same_alphabet(k, a, "is_controllable")?;
    let k = k.trim();
    let (Some(k0), Some(a0)) = (k.initial(), a.initial()) else {
        return Ok(Check::Holds);
    };
    let to_a = index_map(&k, a);
    let nk = k.num_states();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nk * a.num_states()];
    let mut seen = vec![false; nk * a.num_states()];
    let id = |p: StateId, q: StateId| q as usize * nk + p as usize;
    let mut queue = VecDeque::from([(k0, a0)]);
    seen[id(k0, a0)] = true;
    while let Some((p, q)) = queue.pop_front() {
        for (e, ev) in k.events().iter().enumerate() {
            let ae = to_a[e].unwrap();
            let Some(qn) = a.successor(q, ae) else {
                continue;
            };
            match k.successor(p, e) {
                Some(pn) => {
                    let n = id(pn, qn);
                    if !seen[n] {
                        seen[n] = true;
                        parent[n] = Some((id(p, q), e));
                        queue.push_back((pn, qn));
                    }
                }
                None if !ev.is_controllable() => {
                    let mut path = Vec::new();
                    let mut cur = id(p, q);
                    while let Some((prev, e)) = parent[cur] {
                        path.push(e);
                        cur = prev;
                    }
                    path.reverse();
                    return Ok(Check::Fails(ControllabilityViolation {
                        prefix: word(&k, &path),
                        event: ev.name().to_string(),
                    }));
                }
                None => {}
            }
        }
    }
    Ok(Check::Holds)
}

/// Supremal controllable sublanguage of `L_m(plant) ∩ L_m(spec)`, as a
/// trim automaton. Plant events missing from `spec` are self-looped first.
pub fn supcon(spec: &Automaton, plant: &Automaton) -> Result<Automaton> {
    if let Some(e) = spec.events().iter().find(|e| !plant.has_event(e.name())) {
        return Err(Error::invalid(format!(
            "supcon: constraint event `{e}` is not a plant event"
        )));
    }
    let extra = plant
        .alphabet()
        .into_iter()
        .filter(|e| !spec.has_event(e.name()))
        .collect();
    let lifted = spec.selfloop(&extra)?;
    let (prod, tuples) = sync_product_tracked(&[plant, &lifted])?;
    if prod.is_empty() {
        return Ok(prod);
    }
    let to_prod: Vec<usize> = plant
        .events()
        .iter()
        .map(|e| prod.event_index(e.name()).unwrap())
        .collect();
    let n = prod.num_states();
    let mut good = vec![true; n];
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (q, _, t) in prod.transitions() {
        rev[t as usize].push(q);
    }
    loop {
        let mut changed = false;
        // Uncontrollable plant moves must stay inside the good set.
        for x in 0..n {
            if !good[x] {
                continue;
            }
            let q = tuples[x][0];
            let bad = plant.transitions_from(q).any(|(e, _)| {
                !plant.event(e).is_controllable()
                    && match prod.successor(x as StateId, to_prod[e]) {
                        Some(t) => !good[t as usize],
                        None => true,
                    }
            });
            if bad {
                good[x] = false;
                changed = true;
            }
        }
        // Coreachability within the good set.
        let mut co = vec![false; n];
        let mut stack: Vec<StateId> = (0..n as StateId)
            .filter(|&x| good[x as usize] && prod.is_marked(x))
            .collect();
        for &x in &stack {
            co[x as usize] = true;
        }
        while let Some(x) = stack.pop() {
            for &p in &rev[x as usize] {
                if good[p as usize] && !co[p as usize] {
                    co[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        for x in 0..n {
            if good[x] && !co[x] {
                good[x] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let restricted = prod.restrict(&good);
    Ok(restricted.accessible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{language_equivalent, Event};

    fn plant() -> Automaton {
        // 0 -a(c)-> 1 -u(u)-> 2 (marked), 0 -b(c)-> 2
        Automaton::new(
            [
                Event::controllable("a"),
                Event::controllable("b"),
                Event::uncontrollable("u"),
            ],
            3,
            Some(0),
            [2],
            [(0, "a", 1), (1, "u", 2), (0, "b", 2)],
        )
        .unwrap()
    }

    #[test]
    fn plant_is_controllable_wrt_itself() {
        assert!(is_controllable(&plant(), &plant()).unwrap().holds());
    }

    #[test]
    fn witness_is_shortest() {
        let k = Automaton::new(
            plant().events().to_vec(),
            3,
            Some(0),
            [2],
            [(0, "a", 1), (0, "b", 2)],
        )
        .unwrap();
        // a leads to state 1 which is not coreachable in k, so closure(L_m(k)) = {ε, b}
        assert!(is_controllable(&k, &plant()).unwrap().holds());
        let k2 = Automaton::new(
            plant().events().to_vec(),
            4,
            Some(0),
            [2, 3],
            [(0, "a", 1), (0, "b", 2), (1, "b", 3)],
        )
        .unwrap();
        let w = is_controllable(&k2, &plant()).unwrap();
        assert_eq!(
            w.witness().unwrap(),
            &ControllabilityViolation {
                prefix: vec!["a".into()],
                event: "u".into()
            }
        );
    }

    #[test]
    fn supcon_unconstrained_is_plant() {
        let u = Automaton::universal(&plant().alphabet()).unwrap();
        let s = supcon(&u, &plant()).unwrap();
        assert!(language_equivalent(&s, &plant()));
    }

    #[test]
    fn supcon_disables_controllable_predecessor() {
        // forbid u: the only way to stop it is to disable a
        let spec = Automaton::new([Event::uncontrollable("u")], 1, Some(0), [0], []).unwrap();
        let s = supcon(&spec, &plant()).unwrap();
        assert_eq!(s.num_states(), 2);
        assert!(s.accepts(&["a"]).unwrap() == crate::automata::Membership::Rejected);
        assert!(is_controllable(&s, &plant()).unwrap().holds());
    }

    #[test]
    fn supcon_can_be_empty() {
        let p =
            Automaton::new([Event::uncontrollable("u")], 2, Some(0), [1], [(0, "u", 1)]).unwrap();
        let spec = Automaton::new([Event::uncontrollable("u")], 1, Some(0), [0], []).unwrap();
        assert!(supcon(&spec, &p).unwrap().is_empty());
    }
}
