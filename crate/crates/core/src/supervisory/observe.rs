use std::collections::{HashMap, HashSet, VecDeque};

use super::{is_controllable, require_same_alphabet, require_subset, Check};
use crate::automata::{index_map, sync_product_all, Automaton, EventSet, StateId};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};

/// Two strings with the same projection that the constraint treats differently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservabilityViolation {
    pub s: Vec<String>,
    pub s_prime: Vec<String>,
    /// `Some(σ)`: `sσ` is legal, `s′σ` is physically possible but illegal.
    /// `None`: `s` is marked in the constraint, `s′` is marked in the plant
    /// but not in the constraint.
    pub event: Option<String>,
}

#[derive(Clone, Copy)]
enum Step {
    Both(usize),
    Left(usize),
    Right(usize),
}

/// Is `L_m(k)` observable with respect to `a` and the projection onto `sigma_o`?
///
/// Explores pairs of strings `(s, s′)` with equal projections, tracking the
/// constraint state of both and the plant state of `s′`.
pub fn is_observable(
    k: &Automaton,
    a: &Automaton,
    sigma_o: &EventSet,
) -> Result<Check<ObservabilityViolation>> {
    require_same_alphabet(k, a, "is_observable")?;
    require_subset(sigma_o, a, "is_observable")?;
    let k = k.trim();
    let (Some(k0), Some(a0)) = (k.initial(), a.initial()) else {
        return Ok(Check::Holds);
    };
    let to_a: Vec<usize> = index_map(&k, a).into_iter().map(Option::unwrap).collect();
    let observed: Vec<bool> = k
        .events()
        .iter()
        .map(|e| sigma_o.contains(e.name()))
        .collect();

    type V = (StateId, StateId, StateId);
    let mut index: HashMap<V, usize> = HashMap::new();
    let mut nodes: Vec<V> = vec![(k0, k0, a0)];
    let mut parent: Vec<Option<(usize, Step)>> = vec![None];
    index.insert((k0, k0, a0), 0);
    let mut queue = VecDeque::from([0usize]);

    let witness = |parent: &Vec<Option<(usize, Step)>>, mut at: usize, event| {
        let (mut s, mut t) = (Vec::new(), Vec::new());
        while let Some((prev, step)) = parent[at] {
            match step {
                Step::Both(e) => {
                    s.push(e);
                    t.push(e);
                }
                Step::Left(e) => s.push(e),
                Step::Right(e) => t.push(e),
            }
            at = prev;
        }
        let name = |e: &usize| k.event(*e).name().to_string();
        ObservabilityViolation {
            s: s.iter().rev().map(name).collect(),
            s_prime: t.iter().rev().map(name).collect(),
            event,
        }
    };

    while let Some(i) = queue.pop_front() {
        let (p, p2, q2) = nodes[i];
        for (e, &ae) in to_a.iter().enumerate() {
            if k.successor(p, e).is_some()
                && k.successor(p2, e).is_none()
                && a.successor(q2, ae).is_some()
            {
                let name = k.event(e).name().to_string();
                return Ok(Check::Fails(witness(&parent, i, Some(name))));
            }
        }
        if k.is_marked(p) && a.is_marked(q2) && !k.is_marked(p2) {
            return Ok(Check::Fails(witness(&parent, i, None)));
        }
        let mut push =
            |v: V, step: Step, nodes: &mut Vec<V>, parent: &mut Vec<Option<(usize, Step)>>| {
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(v) {
                    slot.insert(nodes.len());
                    queue.push_back(nodes.len());
                    nodes.push(v);
                    parent.push(Some((i, step)));
                }
            };
        for e in 0..k.num_events() {
            let l = k.successor(p, e);
            let r = k.successor(p2, e).zip(a.successor(q2, to_a[e]));
            if observed[e] {
                if let (Some(l), Some((x, y))) = (l, r) {
                    push((l, x, y), Step::Both(e), &mut nodes, &mut parent);
                }
            } else {
                if let Some(l) = l {
                    push((l, p2, q2), Step::Left(e), &mut nodes, &mut parent);
                }
                if let Some((x, y)) = r {
                    push((p, x, y), Step::Right(e), &mut nodes, &mut parent);
                }
            }
        }
    }
    Ok(Check::Holds)
}

/// Controllable with respect to the agents' product and observable through
/// every agent's own alphabet extended by `sigma_com`.
pub fn is_coordinable(k: &Automaton, agents: &[&Automaton], sigma_com: &EventSet) -> Result<bool> {
    let plant = sync_product_all(agents)?;
    if !is_controllable(k, &plant)?.holds() {
        return Ok(false);
    }
    for agent in agents {
        let view: EventSet = agent.alphabet().union(sigma_com).cloned().collect();
        if !is_observable(k, &plant, &view)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lexicographically ordered `r`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..r).rev().find(|&i| c[i] != i + n - r) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..r {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Smallest communication set making `k` coordinable; ties go to the
/// lexicographically first sorted name list.
///
/// Observability checks are memoized per agent on the part of the
/// candidate set foreign to that agent, and each cardinality level's
/// outstanding checks are evaluated as one batch under `mode`.
pub fn min_sys_com_set(k: &Automaton, agents: &[&Automaton], mode: ExecMode) -> Result<EventSet> {
    let plant = sync_product_all(agents)?;
    require_same_alphabet(k, &plant, "min_sys_com_set")?;
    if !is_controllable(k, &plant)?.holds() {
        return Err(Error::invalid(
            "min_sys_com_set: constraint is not controllable, no communication set helps",
        ));
    }
    let pool = plant.events().to_vec();
    let own: Vec<EventSet> = agents.iter().map(|a| a.alphabet()).collect();
    let foreign: Vec<Vec<bool>> = own
        .iter()
        .map(|o| pool.iter().map(|e| !o.contains(e.name())).collect())
        .collect();
    let mut memo: Vec<HashMap<Vec<usize>, bool>> = vec![HashMap::new(); agents.len()];

    for r in 0..=pool.len() {
        let combos = combinations(pool.len(), r);
        let key = |i: usize, c: &[usize]| -> Vec<usize> {
            c.iter().copied().filter(|&e| foreign[i][e]).collect()
        };
        let mut jobs: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut queued = HashSet::new();
        for c in &combos {
            for (i, m) in memo.iter().enumerate() {
                let kk = key(i, c);
                if !m.contains_key(&kk) && queued.insert((i, kk.clone())) {
                    jobs.push((i, kk));
                }
            }
        }
        log::debug!(
            "min_sys_com_set: level {r}, {} observability checks",
            jobs.len()
        );
        let results = exec::map(mode, &jobs, |(i, kk)| {
            let mut view = own[*i].clone();
            view.extend(kk.iter().map(|&e| pool[e].clone()));
            is_observable(k, &plant, &view).map(|c| c.holds())
        });
        for ((i, kk), res) in jobs.into_iter().zip(results) {
            memo[i].insert(kk, res?);
        }
        if let Some(c) = combos
            .iter()
            .find(|c| (0..agents.len()).all(|i| memo[i][&key(i, c)]))
        {
            return Ok(c.iter().map(|&e| pool[e].clone()).collect());
        }
    }
    unreachable!("the full alphabet always makes a controllable language coordinable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Event;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    /// Plant: h (unobservable, controllable) then c, or c directly.
    /// Constraint: c allowed only after h.
    fn hidden_guard() -> (Automaton, Automaton) {
        let ev = [Event::controllable("c"), Event::controllable("h")];
        let a = Automaton::new(
            ev.clone(),
            3,
            Some(0),
            [0, 1, 2],
            [(0, "h", 1), (1, "c", 2), (0, "c", 2)],
        )
        .unwrap();
        let k = Automaton::new(ev, 3, Some(0), [0, 1, 2], [(0, "h", 1), (1, "c", 2)]).unwrap();
        (k, a)
    }

    #[test]
    fn full_observation_is_observable() {
        let (k, a) = hidden_guard();
        assert!(is_observable(&k, &a, &a.alphabet()).unwrap().holds());
    }

    #[test]
    fn erased_guard_breaks_observability() {
        let (k, a) = hidden_guard();
        let sigma: EventSet = [Event::controllable("c")].into_iter().collect();
        let w = is_observable(&k, &a, &sigma).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.s, vec!["h"]);
        assert!(w.s_prime.is_empty());
        assert_eq!(w.event.as_deref(), Some("c"));
    }

    #[test]
    fn rejects_foreign_observation_set() {
        let (k, a) = hidden_guard();
        let sigma: EventSet = [Event::controllable("zz")].into_iter().collect();
        assert!(is_observable(&k, &a, &sigma).is_err());
    }
}
