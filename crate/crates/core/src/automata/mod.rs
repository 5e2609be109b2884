//! Deterministic finite automata over named events.

mod dot;
mod event;
mod format;
mod ops;

use std::collections::VecDeque;

pub use dot::to_dot;
pub use event::{format_set, names, Event, EventSet};
pub use format::{parse_aut, write_aut};
pub(crate) use ops::sync_product_tracked;
pub use ops::{language_equivalent, sync_product, sync_product_all};

use crate::error::{Error, Result};

pub type StateId = u32;

/// A DFA with a partial transition function.
///
/// States are `0..num_states()`. Events are kept sorted by name; transitions
/// out of each state are sorted by event index and carry at most one target
/// per event. An automaton without an initial state is the empty automaton
/// (both of its languages are empty).
#[derive(Clone, Debug)]
pub struct Automaton {
    events: Vec<Event>,
    trans: Vec<Vec<(u32, StateId)>>,
    initial: Option<StateId>,
    marked: Vec<bool>,
}

/// Outcome of running a string through an automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The string leaves the closed language.
    Rejected,
    /// In the closed language but not marked.
    Prefix,
    /// In the marked language.
    Marked,
}

impl Automaton {
    /// Build an automaton from explicit parts. Transitions name their events.
    pub fn new<'a>(
        events: impl IntoIterator<Item = Event>,
        num_states: usize,
        initial: Option<StateId>,
        marked: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, &'a str, StateId)>,
    ) -> Result<Self> {
        let events = collect_events(events)?;
        let mut a = Automaton {
            events,
            trans: vec![Vec::new(); num_states],
            initial: None,
            marked: vec![false; num_states],
        };
        if let Some(q) = initial {
            a.check_state(q)?;
            a.initial = Some(q);
        } else if num_states > 0 {
            return Err(Error::invalid(
                "automaton with states needs an initial state",
            ));
        }
        for q in marked {
            a.check_state(q)?;
            a.marked[q as usize] = true;
        }
        for (from, name, to) in transitions {
            a.check_state(from)?;
            a.check_state(to)?;
            let e = a
                .event_index(name)
                .ok_or_else(|| Error::UnknownEvent(name.to_string()))?;
            let row = &mut a.trans[from as usize];
            match row.binary_search_by_key(&(e as u32), |t| t.0) {
                Ok(_) => {
                    return Err(Error::invalid(format!(
                        "state {from} has two transitions on `{name}`"
                    )))
                }
                Err(pos) => row.insert(pos, (e as u32, to)),
            }
        }
        Ok(a)
    }

    /// The empty automaton over `events`.
    pub fn empty(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        Ok(Automaton {
            events: collect_events(events)?,
            trans: Vec::new(),
            initial: None,
            marked: Vec::new(),
        })
    }

    /// One marked state with a self-loop on every event: `L = L_m = Σ*`.
    pub fn universal(events: &EventSet) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::invalid(
                "universal automaton needs a nonempty alphabet",
            ));
        }
        let events: Vec<Event> = events.iter().cloned().collect();
        let row = (0..events.len() as u32).map(|e| (e, 0)).collect();
        Ok(Automaton {
            events,
            trans: vec![row],
            initial: Some(0),
            marked: vec![true],
        })
    }

    /// Internal constructor; rows must already be sorted and deterministic.
    pub(crate) fn from_parts(
        events: Vec<Event>,
        trans: Vec<Vec<(u32, StateId)>>,
        initial: Option<StateId>,
        marked: Vec<bool>,
    ) -> Self {
        debug_assert_eq!(trans.len(), marked.len());
        debug_assert!(events.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(trans.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        Automaton {
            events,
            trans,
            initial,
            marked,
        }
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if (q as usize) < self.trans.len() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "state {q} out of range (automaton has {} states)",
                self.trans.len()
            )))
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn alphabet(&self) -> EventSet {
        self.events.iter().cloned().collect()
    }

    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.binary_search_by(|e| e.name().cmp(name)).ok()
    }

    pub fn has_event(&self, name: &str) -> bool {
        self.event_index(name).is_some()
    }

    pub fn event(&self, index: usize) -> &Event {
        &self.events[index]
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    /// True when both languages are empty.
    pub fn is_empty(&self) -> bool {
        self.initial.is_none()
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked[q as usize]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(q, _)| q as StateId)
    }

    /// Target of the transition from `q` on event index `e`.
    pub fn successor(&self, q: StateId, e: usize) -> Option<StateId> {
        let row = &self.trans[q as usize];
        row.binary_search_by_key(&(e as u32), |t| t.0)
            .ok()
            .map(|i| row[i].1)
    }

    /// Outgoing `(event index, target)` pairs of `q`, sorted by event.
    pub fn transitions_from(&self, q: StateId) -> impl Iterator<Item = (usize, StateId)> + '_ {
        self.trans[q as usize].iter().map(|&(e, t)| (e as usize, t))
    }

    /// All transitions as `(from, event index, to)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, usize, StateId)> + '_ {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().map(move |&(e, t)| (q as StateId, e as usize, t)))
    }

    /// Run `word` from the initial state.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> Result<Membership> {
        let idx: Vec<usize> = word
            .iter()
            .map(|s| {
                self.event_index(s.as_ref())
                    .ok_or_else(|| Error::UnknownEvent(s.as_ref().to_string()))
            })
            .collect::<Result<_>>()?;
        let Some(mut q) = self.initial else {
            return Ok(Membership::Rejected);
        };
        for e in idx {
            match self.successor(q, e) {
                Some(t) => q = t,
                None => return Ok(Membership::Rejected),
            }
        }
        Ok(if self.is_marked(q) {
            Membership::Marked
        } else {
            Membership::Prefix
        })
    }

    /// State reached by `word`, if any. Unknown events reject.
    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Option<StateId> {
        let mut q = self.initial?;
        for s in word {
            q = self.successor(q, self.event_index(s.as_ref())?)?;
        }
        Some(q)
    }

    pub fn accessible_states(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        if let Some(q0) = self.initial {
            let mut stack = vec![q0];
            seen[q0 as usize] = true;
            while let Some(q) = stack.pop() {
                for &(_, t) in &self.trans[q as usize] {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen
    }

    pub fn coaccessible_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (q, _, t) in self.transitions() {
            rev[t as usize].push(q);
        }
        let mut seen = self.marked.clone();
        let mut stack: Vec<StateId> = self.marked_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keep only the flagged states, renumbered densely in their original order.
    /// Dropping the initial state yields the empty automaton.
    pub fn restrict(&self, keep: &[bool]) -> Automaton {
        let mut map = vec![u32::MAX; self.num_states()];
        let mut next = 0u32;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                map[q] = next;
                next += 1;
            }
        }
        let initial = self
            .initial
            .filter(|&q| keep[q as usize])
            .map(|q| map[q as usize]);
        if initial.is_none() {
            return Automaton::from_parts(self.events.clone(), Vec::new(), None, Vec::new());
        }
        let mut trans = Vec::with_capacity(next as usize);
        let mut marked = Vec::with_capacity(next as usize);
        for (q, row) in self.trans.iter().enumerate() {
            if !keep[q] {
                continue;
            }
            trans.push(
                row.iter()
                    .filter(|&&(_, t)| keep[t as usize])
                    .map(|&(e, t)| (e, map[t as usize]))
                    .collect(),
            );
            marked.push(self.marked[q]);
        }
        Automaton::from_parts(self.events.clone(), trans, initial, marked)
    }

    pub fn accessible(&self) -> Automaton {
        self.restrict(&self.accessible_states())
    }

    /// Accessible and coaccessible part.
    pub fn trim(&self) -> Automaton {
        let acc = self.accessible();
        acc.restrict(&acc.coaccessible_states())
    }

    /// Every accessible state can reach a marked state.
    pub fn is_nonblocking(&self) -> bool {
        let acc = self.accessible_states();
        let co = self.coaccessible_states();
        acc.iter().zip(&co).all(|(&a, &c)| !a || c)
    }

    /// Shortest string to an accessible state that cannot reach a marked state.
    pub fn blocking_witness(&self) -> Option<Vec<String>> {
        let co = self.coaccessible_states();
        self.shortest_path_to(|q| !co[q as usize])
    }

    /// Shortest string (by BFS, events in name order) reaching a state satisfying `goal`.
    pub fn shortest_path_to(&self, goal: impl Fn(StateId) -> bool) -> Option<Vec<String>> {
        let q0 = self.initial?;
        let mut parent: Vec<Option<(StateId, usize)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([q0]);
        seen[q0 as usize] = true;
        while let Some(q) = queue.pop_front() {
            if goal(q) {
                let mut path = Vec::new();
                let mut cur = q;
                while let Some((p, e)) = parent[cur as usize] {
                    path.push(self.events[e].name().to_string());
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(e, t) in &self.trans[q as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, e as usize));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Add self-loops on `extra` at every state. Events already in the
    /// alphabet are rejected.
    pub fn selfloop(&self, extra: &EventSet) -> Result<Automaton> {
        if extra.is_empty() {
            return Ok(self.clone());
        }
        for e in extra {
            if self.has_event(e.name()) {
                return Err(Error::invalid(format!(
                    "cannot self-loop `{e}`: already in the alphabet"
                )));
            }
        }
        let events: Vec<Event> = self.events.iter().chain(extra.iter()).cloned().collect();
        let events = collect_events(events)?;
        let remap: Vec<u32> = self
            .events
            .iter()
            .map(|e| events.binary_search(e).unwrap() as u32)
            .collect();
        let loops: Vec<u32> = extra
            .iter()
            .map(|e| events.binary_search(e).unwrap() as u32)
            .collect();
        let trans = self
            .trans
            .iter()
            .enumerate()
            .map(|(q, row)| {
                let mut r: Vec<(u32, StateId)> = row
                    .iter()
                    .map(|&(e, t)| (remap[e as usize], t))
                    .chain(loops.iter().map(|&e| (e, q as StateId)))
                    .collect();
                r.sort_unstable();
                r
            })
            .collect();
        Ok(Automaton::from_parts(
            events,
            trans,
            self.initial,
            self.marked.clone(),
        ))
    }

    /// Same automaton with event attributes replaced from `attrs` where names match.
    pub fn with_event_attributes(&self, attrs: &EventSet) -> Automaton {
        let mut a = self.clone();
        for e in &mut a.events {
            if let Some(x) = attrs.get(e.name()) {
                *e = x.clone();
            }
        }
        a
    }

    /// Projection onto `sigma` (ε-closure plus subset construction),
    /// minimized. `sigma` must be a subset of the alphabet.
    pub fn natural_projection(&self, sigma: &EventSet) -> Result<Automaton> {
        Ok(self.project(sigma)?.minimize())
    }

    /// Projection onto `sigma` by subset construction only.
    pub fn project(&self, sigma: &EventSet) -> Result<Automaton> {
        ops::project(self, sigma)
    }

    /// Minimal DFA for the accessible part, canonically numbered.
    pub fn minimize(&self) -> Automaton {
        ops::minimize(self)
    }

    /// Renumber states in BFS order from the initial state, visiting
    /// events by name. Unreachable states are dropped.
    pub fn canonical(&self) -> Automaton {
        let Some(q0) = self.initial else {
            return Automaton::from_parts(self.events.clone(), Vec::new(), None, Vec::new());
        };
        let mut map = vec![u32::MAX; self.num_states()];
        let mut order = vec![q0];
        map[q0 as usize] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for &(_, t) in &self.trans[q as usize] {
                if map[t as usize] == u32::MAX {
                    map[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
            i += 1;
        }
        let trans = order
            .iter()
            .map(|&q| {
                self.trans[q as usize]
                    .iter()
                    .map(|&(e, t)| (e, map[t as usize]))
                    .collect()
            })
            .collect();
        let marked = order.iter().map(|&q| self.marked[q as usize]).collect();
        Automaton::from_parts(self.events.clone(), trans, Some(0), marked)
    }
}

/// For each event of `from`, its index in `to` (if present).
pub(crate) fn index_map(from: &Automaton, to: &Automaton) -> Vec<Option<usize>> {
    from.events
        .iter()
        .map(|e| to.event_index(e.name()))
        .collect()
}

/// Names of the events along a path of event indices.
pub(crate) fn word(a: &Automaton, path: &[usize]) -> Vec<String> {
    path.iter()
        .map(|&e| a.events[e].name().to_string())
        .collect()
}

/// Sort, dedupe and check attribute agreement.
pub(crate) fn collect_events(events: impl IntoIterator<Item = Event>) -> Result<Vec<Event>> {
    let mut v: Vec<Event> = events.into_iter().collect();
    v.sort();
    let mut out: Vec<Event> = Vec::with_capacity(v.len());
    for e in v {
        if let Some(last) = out.last() {
            if *last == e {
                if last.is_controllable() != e.is_controllable() {
                    return Err(Error::ControllabilityConflict {
                        event: e.name().to_string(),
                    });
                }
                continue;
            }
        }
        out.push(e);
    }
    Ok(out)
}

/// Union of alphabets with attribute agreement checked.
pub fn union_alphabet<'a>(parts: impl IntoIterator<Item = &'a Automaton>) -> Result<EventSet> {
    let all = parts.into_iter().flat_map(|a| a.events.iter().cloned());
    Ok(collect_events(all)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Automaton {
        Automaton::new(
            [Event::controllable("a"), Event::uncontrollable("b")],
            3,
            Some(0),
            [2],
            [(0, "a", 1), (1, "b", 2), (2, "a", 0)],
        )
        .unwrap()
    }

    #[test]
    fn membership() {
        let a = ab();
        assert_eq!(a.accepts(&["a", "b"]).unwrap(), Membership::Marked);
        assert_eq!(a.accepts(&["a"]).unwrap(), Membership::Prefix);
        assert_eq!(a.accepts(&["b"]).unwrap(), Membership::Rejected);
        assert!(a.accepts(&["z"]).is_err());
    }

    #[test]
    fn rejects_nondeterminism() {
        let r = Automaton::new(
            [Event::controllable("a")],
            2,
            Some(0),
            [],
            [(0, "a", 1), (0, "a", 0)],
        );
        assert!(r.is_err());
    }

    #[test]
    fn conflicting_attributes() {
        let r = Automaton::empty([Event::controllable("a"), Event::uncontrollable("a")]);
        assert!(matches!(r, Err(Error::ControllabilityConflict { .. })));
    }

    #[test]
    fn trim_drops_blocking_branch() {
        let a = Automaton::new(
            [Event::controllable("a"), Event::controllable("b")],
            3,
            Some(0),
            [1],
            [(0, "a", 1), (0, "b", 2)],
        )
        .unwrap();
        assert!(!a.is_nonblocking());
        assert_eq!(a.blocking_witness().unwrap(), vec!["b"]);
        let t = a.trim();
        assert_eq!(t.num_states(), 2);
        assert!(t.is_nonblocking());
    }

    #[test]
    fn trim_of_unmarked_is_empty() {
        let a = Automaton::new([Event::controllable("a")], 1, Some(0), [], [(0, "a", 0)]).unwrap();
        assert!(a.trim().is_empty());
    }

    #[test]
    fn selfloop_extends_alphabet() {
        let extra: EventSet = [Event::controllable("c")].into_iter().collect();
        let a = ab().selfloop(&extra).unwrap();
        assert_eq!(a.num_transitions(), 6);
        assert_eq!(
            a.accepts(&["c", "a", "c", "b"]).unwrap(),
            Membership::Marked
        );
        assert!(ab().selfloop(&ab().alphabet()).is_err());
    }

    #[test]
    fn universal_needs_events() {
        assert!(Automaton::universal(&EventSet::new()).is_err());
        let u = Automaton::universal(&ab().alphabet()).unwrap();
        assert_eq!(u.accepts(&["b", "b"]).unwrap(), Membership::Marked);
    }
}
