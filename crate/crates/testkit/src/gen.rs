use std::collections::BTreeSet;

use decs_core::automata::{Automaton, Event};
use decs_core::dcsn::{Constraint, Dcsn};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::ChaCha8Rng;

/// `n` events named `{prefix}{j}`, each controllable with probability 1/2.
pub fn events(rng: &mut ChaCha8Rng, prefix: &str, n: usize) -> Vec<Event> {
    (0..n)
        .map(|j| Event::new(format!("{prefix}{j}"), rng.gen_bool(0.5)))
        .collect()
}

/// Random deterministic automaton with initial state 0. Each (state, event)
/// pair gets a transition with probability `density`.
pub fn automaton(rng: &mut ChaCha8Rng, states: usize, events: &[Event], density: f64) -> Automaton {
    let mut trans = Vec::new();
    for q in 0..states {
        for e in events {
            if rng.gen_bool(density) {
                trans.push((
                    q as u32,
                    e.name().to_string(),
                    rng.gen_range(0..states) as u32,
                ));
            }
        }
    }
    let marked: Vec<u32> = (0..states as u32).filter(|_| rng.gen_bool(0.4)).collect();
    Automaton::new(
        events.to_vec(),
        states,
        Some(0),
        marked,
        trans.iter().map(|(a, e, b)| (*a, e.as_str(), *b)),
    )
    .unwrap()
}

/// Like [`automaton`], with state 0 always marked and others marked
/// with probability 1/2.
pub fn marked_initial(
    rng: &mut ChaCha8Rng,
    states: usize,
    events: &[Event],
    density: f64,
) -> Automaton {
    let a = automaton(rng, states, events, density);
    let marked: Vec<u32> = (0..states as u32)
        .filter(|&q| q == 0 || rng.gen_bool(0.5))
        .collect();
    let trans: Vec<(u32, String, u32)> = a
        .transitions()
        .map(|(q, e, t)| (q, a.event(e).name().to_string(), t))
        .collect();
    Automaton::new(
        events.to_vec(),
        states,
        Some(0),
        marked,
        trans.iter().map(|(q, e, t)| (*q, e.as_str(), *t)),
    )
    .unwrap()
}

/// Random nonblocking automaton whose every event occurs at least once.
pub fn live_automaton(rng: &mut ChaCha8Rng, states: usize, events: &[Event]) -> Automaton {
    loop {
        let a = automaton(rng, states, events, 0.5).trim();
        let used: BTreeSet<usize> = a.transitions().map(|(_, e, _)| e).collect();
        if !a.is_empty() && used.len() == events.len() && a.num_states() >= 2.min(states) {
            return a;
        }
    }
}

/// Random network. Each constraint picks one or two agents, then a random
/// automaton over a subset of their events containing at least one event
/// of each. Every agent is covered. With `connected`, the constraint
/// relational network is connected.
pub fn dcsn(
    rng: &mut ChaCha8Rng,
    agents: usize,
    constraints: usize,
    max_states: usize,
    connected: bool,
) -> Dcsn {
    'retry: loop {
        let evs: Vec<Vec<Event>> = (0..agents)
            .map(|i| {
                let n = rng.gen_range(2..=3);
                events(rng, &format!("a{}e", i + 1), n)
            })
            .collect();
        let autos: Vec<(String, Automaton)> = evs
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let n = rng.gen_range(2..=max_states.max(2));
                (format!("A{}", i + 1), live_automaton(rng, n, e))
            })
            .collect();
        let mut groups: Vec<BTreeSet<usize>> = Vec::new();
        for k in 0..constraints {
            let mut g = BTreeSet::new();
            if connected && k > 0 {
                // overlap with an earlier constraint
                let prev: Vec<usize> = groups[rng.gen_range(0..k)].iter().copied().collect();
                g.insert(*prev.choose(rng).unwrap());
            } else {
                g.insert(rng.gen_range(0..agents));
            }
            if agents > 1 && (g.len() < 2) && rng.gen_bool(0.8) {
                let other = rng.gen_range(0..agents);
                g.insert(other);
            }
            groups.push(g);
        }
        let covered: BTreeSet<usize> = groups.iter().flatten().copied().collect();
        if covered.len() != agents {
            continue 'retry;
        }
        let cons = groups
            .into_iter()
            .enumerate()
            .map(|(k, g)| {
                let mut chosen: Vec<Event> = Vec::new();
                for &i in &g {
                    let mut own = evs[i].clone();
                    own.shuffle(rng);
                    let take = rng.gen_range(1..=own.len());
                    chosen.extend(own.into_iter().take(take));
                }
                let n = rng.gen_range(1..=max_states.max(1));
                Constraint {
                    name: format!("C{}", k + 1),
                    agents: g,
                    automaton: marked_initial(rng, n, &chosen, 0.7),
                }
            })
            .collect();
        return Dcsn::new(autos, cons);
    }
}

/// Random subset of `events`, possibly empty.
pub fn subset(rng: &mut ChaCha8Rng, events: &[Event]) -> decs_core::automata::EventSet {
    events
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect()
}

/// `(spec, plant)` with the plant a product of one or two live components
/// and at most `max_product` states in `plant ∥ spec`.
pub fn supcon_instance(rng: &mut ChaCha8Rng, max_product: usize) -> (Automaton, Automaton) {
    loop {
        let parts = rng.gen_range(1..=2);
        let mut comps = Vec::new();
        let mut all = Vec::new();
        for p in 0..parts {
            let ne = rng.gen_range(1..=3);
            let evs = events(rng, &format!("p{p}e"), ne);
            let n = rng.gen_range(1..=3);
            comps.push(live_automaton(rng, n, &evs));
            all.extend(evs);
        }
        let refs: Vec<&Automaton> = comps.iter().collect();
        let plant = decs_core::automata::sync_product_all(&refs).unwrap();
        let mut spec_events: Vec<Event> =
            all.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        if spec_events.is_empty() {
            spec_events.push(all.choose(rng).unwrap().clone());
        }
        let n = rng.gen_range(1..=3);
        let spec = marked_initial(rng, n, &spec_events, 0.7);
        let lifted = spec
            .selfloop(
                &all.iter()
                    .filter(|e| !spec.has_event(e.name()))
                    .cloned()
                    .collect(),
            )
            .unwrap();
        let size = decs_core::automata::sync_product(&plant, &lifted)
            .unwrap()
            .num_states();
        if size <= max_product {
            return (spec, plant);
        }
    }
}

/// `(k, a)` over one alphabet with `L_m(k) ⊆ L_m(a)`.
pub fn sublanguage_pair(
    rng: &mut ChaCha8Rng,
    states: usize,
    nevents: usize,
) -> (Automaton, Automaton) {
    let evs = events(rng, "e", nevents);
    let n = rng.gen_range(1..=states);
    let a = automaton(rng, n, &evs, 0.6);
    let m = rng.gen_range(1..=states);
    let spec = automaton(rng, m, &evs, 0.7);
    let k = decs_core::automata::sync_product(&a, &spec).unwrap().trim();
    (k, a)
}

/// Network whose constraint relational network is exactly `edges` on
/// constraints `0..m`: one private agent per constraint plus one agent
/// shared by the two ends of each edge. All automata are single-state
/// self-loops, so only the topology matters.
pub fn topology_dcsn(m: usize, edges: &BTreeSet<(usize, usize)>) -> Dcsn {
    let loop1 = |evs: Vec<Event>| {
        let names: Vec<String> = evs.iter().map(|e| e.name().to_string()).collect();
        Automaton::new(
            evs,
            1,
            Some(0),
            [0],
            names.iter().map(|n| (0, n.as_str(), 0)).collect::<Vec<_>>(),
        )
        .unwrap()
    };
    let mut agents = Vec::new();
    let mut groups: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    for (k, g) in groups.iter_mut().enumerate() {
        g.insert(agents.len());
        agents.push(format!("p{k}"));
    }
    for &(a, b) in edges {
        groups[a].insert(agents.len());
        groups[b].insert(agents.len());
        agents.push(format!("s{a}_{b}"));
    }
    let ev = |i: usize| Event::controllable(format!("{}go", agents[i]));
    let constraints = groups
        .iter()
        .enumerate()
        .map(|(k, g)| Constraint {
            name: format!("C{}", k + 1),
            agents: g.clone(),
            automaton: loop1(g.iter().map(|&i| ev(i)).collect()),
        })
        .collect();
    Dcsn::new(
        (0..agents.len())
            .map(|i| (agents[i].clone(), loop1(vec![ev(i)])))
            .collect(),
        constraints,
    )
}
