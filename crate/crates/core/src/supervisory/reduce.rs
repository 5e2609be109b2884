use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::automata::{index_map, sync_product_tracked, Automaton, StateId};
use crate::error::Result;

/// Behaviour a coordination module is reduced against.
///
/// `target` is the closed-loop behaviour the module helps enforce and
/// `plant` the behaviour it acts on (for a local module: the synthesized
/// supervisor and the product of the subnet's agents).
#[derive(Clone, Copy, Debug)]
pub struct ReductionContext<'a> {
    pub target: &'a Automaton,
    pub plant: &'a Automaton,
}

#[derive(Clone, Debug, Default)]
struct Class {
    enabled: BTreeSet<usize>,
    disabled: BTreeSet<usize>,
    marked: bool,
    unmarked: bool,
    succ: BTreeMap<usize, usize>,
}

impl Class {
    fn compatible(&self, other: &Class) -> bool {
        self.enabled.is_disjoint(&other.disabled)
            && other.enabled.is_disjoint(&self.disabled)
            && !(self.marked && other.unmarked)
            && !(self.unmarked && other.marked)
    }
}

#[derive(Clone)]
struct Partition {
    parent: Vec<usize>,
    class: Vec<Class>,
}

impl Partition {
    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merge the classes of `a` and `b` together with every merge that
    /// determinism then forces. `None` if any of them is incompatible.
    fn merged(&self, a: usize, b: usize) -> Option<Partition> {
        let mut p = self.clone();
        let mut pending = vec![(a, b)];
        while let Some((u, v)) = pending.pop() {
            let (ru, rv) = (p.find(u), p.find(v));
            if ru == rv {
                continue;
            }
            if !p.class[ru].compatible(&p.class[rv]) {
                return None;
            }
            let (keep, gone) = (ru.min(rv), ru.max(rv));
            let g = std::mem::take(&mut p.class[gone]);
            p.parent[gone] = keep;
            let k = &mut p.class[keep];
            k.enabled.extend(g.enabled);
            k.disabled.extend(g.disabled);
            k.marked |= g.marked;
            k.unmarked |= g.unmarked;
            for (e, t) in g.succ {
                match k.succ.get(&e) {
                    Some(&t2) => pending.push((t, t2)),
                    None => {
                        k.succ.insert(e, t);
                    }
                }
            }
        }
        Some(p)
    }
}

/// Reduce a coordination module by merging states whose decisions never
/// conflict in context.
///
/// Two module states are compatible when neither enables an event the
/// other disables for the agent, and they agree on marking wherever the
/// plant is marked. States and transitions of `s` never exercised in
/// `target` are dropped first. Pairs are tried in id order; a pair merges
/// only if all merges it forces are compatible too. The result is checked
/// to make the same decisions as `s` on every reachable configuration;
/// if that check fails, `s` is returned unchanged.
pub fn cm_reduce(
    s: &Automaton,
    agent: &Automaton,
    ctx: &ReductionContext<'_>,
) -> Result<Automaton> {
    let (prod, tuples) = sync_product_tracked(&[ctx.target, ctx.plant, s])?;
    if prod.is_empty() {
        return Ok(s.clone());
    }
    let n = s.num_states();
    let prod_to_s = index_map(&prod, s);
    let s_to_plant = index_map(s, ctx.plant);
    let own: Vec<bool> = s
        .events()
        .iter()
        .map(|e| agent.has_event(e.name()))
        .collect();

    let mut used = vec![false; n];
    let mut class = vec![Class::default(); n];
    for (x, tup) in tuples.iter().enumerate() {
        let (q, sx) = (tup[1], tup[2] as usize);
        used[sx] = true;
        let c = &mut class[sx];
        for (e, _) in prod.transitions_from(x as StateId) {
            if let Some(se) = prod_to_s[e] {
                c.enabled.insert(se);
                c.succ
                    .insert(se, s.successor(sx as StateId, se).unwrap() as usize);
            }
        }
        for (se, pe) in s_to_plant.iter().enumerate() {
            if let Some(pe) = *pe {
                if own[se]
                    && ctx.plant.successor(q, pe).is_some()
                    && s.successor(sx as StateId, se).is_none()
                {
                    c.disabled.insert(se);
                }
            }
        }
        if ctx.plant.is_marked(q) {
            if s.is_marked(sx as StateId) {
                c.marked = true;
            } else {
                c.unmarked = true;
            }
        }
    }

    let mut part = Partition {
        parent: (0..n).collect(),
        class,
    };
    let states: Vec<usize> = (0..n).filter(|&x| used[x]).collect();
    for (i, &a) in states.iter().enumerate() {
        for &b in &states[i + 1..] {
            if part.find(a) == part.find(b) {
                continue;
            }
            if !part.class[part.find(a)].compatible(&part.class[part.find(b)]) {
                continue;
            }
            if let Some(p) = part.merged(a, b) {
                part = p;
            }
        }
    }

    // Quotient, classes numbered by their smallest member.
    let mut id = vec![u32::MAX; n];
    let mut roots = Vec::new();
    for &x in &states {
        let r = part.find(x);
        if id[r] == u32::MAX {
            id[r] = roots.len() as u32;
            roots.push(r);
        }
        id[x] = id[r];
    }
    let trans = roots
        .iter()
        .map(|&r| {
            part.class[r]
                .succ
                .iter()
                .map(|(&e, &t)| (e as u32, id[part.find(t)]))
                .collect()
        })
        .collect();
    let marked = roots
        .iter()
        .map(|&r| {
            let c = &part.class[r];
            if c.marked || c.unmarked {
                c.marked
            } else {
                states
                    .iter()
                    .any(|&x| part.find(x) == r && s.is_marked(x as StateId))
            }
        })
        .collect();
    let init = id[s.initial().unwrap() as usize];
    let r = Automaton::from_parts(s.events().to_vec(), trans, Some(init), marked);

    if same_decisions(s, &r, &own, ctx, &prod, &tuples) {
        log::debug!(
            "cm_reduce: {} -> {} states, {} -> {} transitions",
            s.num_states(),
            r.num_states(),
            s.num_transitions(),
            r.num_transitions()
        );
        Ok(r)
    } else {
        log::warn!("cm_reduce: reduction failed verification, keeping the unreduced module");
        Ok(s.clone())
    }
}

/// Walk the context with both modules side by side and compare every
/// decision the original makes for its agent.
fn same_decisions(
    s: &Automaton,
    r: &Automaton,
    own: &[bool],
    ctx: &ReductionContext<'_>,
    prod: &Automaton,
    tuples: &[Vec<StateId>],
) -> bool {
    let prod_to_s = index_map(prod, s);
    let s_to_plant = index_map(s, ctx.plant);
    let start = (0 as StateId, r.initial().unwrap());
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((x, y)) = queue.pop_front() {
        let (q, sx) = (tuples[x as usize][1], tuples[x as usize][2]);
        for (se, pe) in s_to_plant.iter().enumerate() {
            if let Some(pe) = *pe {
                if own[se]
                    && ctx.plant.successor(q, pe).is_some()
                    && s.successor(sx, se).is_some() != r.successor(y, se).is_some()
                {
                    return false;
                }
            }
        }
        if ctx.plant.is_marked(q) && s.is_marked(sx) != r.is_marked(y) {
            return false;
        }
        for (e, xn) in prod.transitions_from(x) {
            let yn = match prod_to_s[e] {
                Some(se) => match r.successor(y, se) {
                    Some(yn) => yn,
                    None => return false,
                },
                None => y,
            };
            if seen.insert((xn, yn)) {
                queue.push_back((xn, yn));
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{sync_product, Event};

    #[test]
    fn merges_behaviourally_identical_states() {
        // agent toggles a/b forever; the module is an unrolled copy of that cycle
        let agent = Automaton::new(
            [
                Event::controllable("a").with_owner(0),
                Event::uncontrollable("b").with_owner(0),
            ],
            2,
            Some(0),
            [0],
            [(0, "a", 1), (1, "b", 0)],
        )
        .unwrap();
        let s = Automaton::new(
            agent.events().to_vec(),
            4,
            Some(0),
            [0, 2],
            [(0, "a", 1), (1, "b", 2), (2, "a", 3), (3, "b", 0)],
        )
        .unwrap();
        let target = sync_product(&agent, &s).unwrap();
        let r = cm_reduce(
            &s,
            &agent,
            &ReductionContext {
                target: &target,
                plant: &agent,
            },
        )
        .unwrap();
        assert_eq!(r.num_states(), 1);
        assert!(crate::automata::language_equivalent(
            &sync_product(&agent, &r).unwrap(),
            &target
        ));
    }

    #[test]
    fn keeps_conflicting_decisions_apart() {
        // the module allows `a` once only
        let agent = Automaton::new(
            [Event::controllable("a").with_owner(0)],
            1,
            Some(0),
            [0],
            [(0, "a", 0)],
        )
        .unwrap();
        let s = Automaton::new(agent.events().to_vec(), 2, Some(0), [0, 1], [(0, "a", 1)]).unwrap();
        let target = sync_product(&agent, &s).unwrap();
        let r = cm_reduce(
            &s,
            &agent,
            &ReductionContext {
                target: &target,
                plant: &agent,
            },
        )
        .unwrap();
        assert_eq!(r.num_states(), 2);
    }
}
