//! Definition-level reference checks. Everything here is exponential and
//! meant for tiny instances.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use decs_core::automata::{Automaton, EventSet, StateId};

pub type Word = Vec<String>;

/// State reached by `w`, walking transitions one event at a time.
pub fn run(a: &Automaton, w: &[String]) -> Option<StateId> {
    let mut q = a.initial()?;
    for s in w {
        let e = a.event_index(s)?;
        q = a.successor(q, e)?;
    }
    Some(q)
}

/// `(w ∈ L(a), w ∈ L_m(a))`.
pub fn member(a: &Automaton, w: &[String]) -> (bool, bool) {
    match run(a, w) {
        Some(q) => (true, a.is_marked(q)),
        None => (false, false),
    }
}

fn names(a: &Automaton) -> Vec<String> {
    a.events().iter().map(|e| e.name().to_string()).collect()
}

/// Every word of `L(a)` with length at most `n`.
pub fn closed_words(a: &Automaton, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let Some(q0) = a.initial() else { return out };
    let mut stack = vec![(q0, Vec::<String>::new())];
    while let Some((q, w)) = stack.pop() {
        if w.len() < n {
            for (e, t) in a.transitions_from(q) {
                let mut w2 = w.clone();
                w2.push(a.event(e).name().to_string());
                stack.push((t, w2));
            }
        }
        out.push(w);
    }
    out.sort();
    out
}

pub fn marked_words(a: &Automaton, n: usize) -> Vec<Word> {
    closed_words(a, n)
        .into_iter()
        .filter(|w| member(a, w).1)
        .collect()
}

/// All words over `alphabet` of length at most `n`.
pub fn all_words(alphabet: &[String], n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<String>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for e in alphabet {
                let mut w2 = w.clone();
                w2.push(e.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Reachable states by naive fixpoint iteration.
pub fn reachable(a: &Automaton) -> Vec<bool> {
    let mut r = vec![false; a.num_states()];
    if let Some(q) = a.initial() {
        r[q as usize] = true;
    }
    loop {
        let mut changed = false;
        for (q, _, t) in a.transitions() {
            if r[q as usize] && !r[t as usize] {
                r[t as usize] = true;
                changed = true;
            }
        }
        if !changed {
            return r;
        }
    }
}

pub fn coreachable(a: &Automaton) -> Vec<bool> {
    let mut r: Vec<bool> = (0..a.num_states())
        .map(|q| a.is_marked(q as StateId))
        .collect();
    loop {
        let mut changed = false;
        for (q, _, t) in a.transitions() {
            if r[t as usize] && !r[q as usize] {
                r[q as usize] = true;
                changed = true;
            }
        }
        if !changed {
            return r;
        }
    }
}

/// `w ∈ closure(L_m(a))`.
pub fn in_marked_closure(a: &Automaton, w: &[String], co: &[bool]) -> bool {
    run(a, w).is_some_and(|q| co[q as usize])
}

/// Membership in a synchronous product, decided per component on the
/// word's projection onto that component's alphabet.
pub fn interleaving_member(parts: &[&Automaton], w: &[String]) -> (bool, bool) {
    let mut closed = true;
    let mut marked = true;
    for a in parts {
        let p: Word = w.iter().filter(|e| a.has_event(e)).cloned().collect();
        let (c, m) = member(a, &p);
        closed &= c;
        marked &= m;
    }
    (closed, marked)
}

pub fn erase(w: &[String], sigma: &BTreeSet<String>) -> Word {
    w.iter().filter(|e| sigma.contains(*e)).cloned().collect()
}

pub fn name_set(sigma: &EventSet) -> BTreeSet<String> {
    sigma.iter().map(|e| e.name().to_string()).collect()
}

/// Same words (closed and marked) up to length `n` over the union alphabet.
pub fn bounded_equivalent(a: &Automaton, b: &Automaton, n: usize) -> bool {
    let mut alpha: BTreeSet<String> = names(a).into_iter().collect();
    alpha.extend(names(b));
    let alpha: Vec<String> = alpha.into_iter().collect();
    all_words(&alpha, n)
        .iter()
        .all(|w| member(a, w) == member(b, w))
}

/// Controllability over words of `closure(L_m(k))` up to length `n`.
pub fn controllable(k: &Automaton, a: &Automaton, n: usize) -> bool {
    let co = coreachable(k);
    for s in closed_words(k, n) {
        if !in_marked_closure(k, &s, &co) {
            continue;
        }
        for e in a.events().iter().filter(|e| !e.is_controllable()) {
            let mut se = s.clone();
            se.push(e.name().to_string());
            if member(a, &se).0 && !in_marked_closure(k, &se, &co) {
                return false;
            }
        }
    }
    true
}

/// Both observability conditions over all pairs of words of
/// `closure(L_m(k))` up to length `n` with equal projections.
pub fn observable(k: &Automaton, a: &Automaton, sigma: &EventSet, n: usize) -> bool {
    let co = coreachable(k);
    let obs = name_set(sigma);
    let mut by_proj: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    for s in closed_words(k, n) {
        if in_marked_closure(k, &s, &co) {
            by_proj.entry(erase(&s, &obs)).or_default().push(s);
        }
    }
    for group in by_proj.values() {
        for s in group {
            for s2 in group {
                if observability_clash(k, a, &co, s, s2).is_some() {
                    return false;
                }
            }
        }
    }
    true
}

/// For `s, s2 ∈ closure(L_m(k))`: the violated condition, if any.
/// `Some(Some(σ))` for condition (1), `Some(None)` for condition (2).
pub fn observability_clash(
    k: &Automaton,
    a: &Automaton,
    co: &[bool],
    s: &[String],
    s2: &[String],
) -> Option<Option<String>> {
    for e in a.events() {
        let mut se = s.to_vec();
        se.push(e.name().to_string());
        let mut s2e = s2.to_vec();
        s2e.push(e.name().to_string());
        if in_marked_closure(k, &se, co) && member(a, &s2e).0 && !in_marked_closure(k, &s2e, co) {
            return Some(Some(e.name().to_string()));
        }
    }
    let in_k = |w: &[String]| member(k, w).1 && in_marked_closure(k, w, co);
    if in_k(s) && member(a, s2).1 && !in_k(s2) {
        return Some(None);
    }
    None
}

/// Exists `u` with `P(u) = target` and `x·u` marked, from state `x`.
pub fn realizable_from(
    g: &Automaton,
    x: StateId,
    target: &[String],
    obs: &BTreeSet<String>,
) -> bool {
    let mut seen = BTreeSet::from([(x, 0usize)]);
    let mut queue = VecDeque::from([(x, 0usize)]);
    while let Some((q, pos)) = queue.pop_front() {
        if pos == target.len() && g.is_marked(q) {
            return true;
        }
        for (e, t) in g.transitions_from(q) {
            let name = g.event(e).name();
            let next = if obs.contains(name) {
                if pos < target.len() && target[pos] == name {
                    (t, pos + 1)
                } else {
                    continue;
                }
            } else {
                (t, pos)
            };
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Observer property over `s ∈ L(g)` and projected targets `t`, both of
/// length at most `n`.
pub fn observer(g: &Automaton, sigma: &EventSet, n: usize) -> bool {
    let Some(x0) = g.initial() else { return true };
    let obs = name_set(sigma);
    let obs_list: Vec<String> = obs.iter().cloned().collect();
    let mut targets: HashMap<Word, bool> = HashMap::new();
    for s in closed_words(g, n) {
        let ps = erase(&s, &obs);
        let x = run(g, &s).unwrap();
        for v in all_words(&obs_list, n.saturating_sub(ps.len())) {
            let mut t = ps.clone();
            t.extend(v.iter().cloned());
            let in_pm = *targets
                .entry(t.clone())
                .or_insert_with(|| realizable_from(g, x0, &t, &obs));
            if in_pm && !realizable_from(g, x, &v, &obs) {
                return false;
            }
        }
    }
    true
}

/// Is `(s, ext)` a genuine observer violation?
pub fn observer_violation_holds(
    g: &Automaton,
    sigma: &EventSet,
    s: &[String],
    ext: &[String],
) -> bool {
    let obs = name_set(sigma);
    let Some(x) = run(g, s) else { return false };
    let mut t = erase(s, &obs);
    t.extend(ext.iter().cloned());
    realizable_from(g, g.initial().unwrap(), &t, &obs) && !realizable_from(g, x, ext, &obs)
}

/// OCC over words of `L(a)` up to length `n`.
pub fn occ(a: &Automaton, sigma: &EventSet, n: usize) -> bool {
    let obs = name_set(sigma);
    closed_words(a, n)
        .iter()
        .all(|s| occ_violation_at(a, &obs, s).is_none())
}

/// For `s` ending in an observed uncontrollable event: start of the
/// offending segment if its unobserved interior has a controllable event.
pub fn occ_violation_at(a: &Automaton, obs: &BTreeSet<String>, s: &[String]) -> Option<usize> {
    let last = s.last()?;
    let ctrl = |e: &str| a.event(a.event_index(e).unwrap()).is_controllable();
    if !obs.contains(last) || ctrl(last) {
        return None;
    }
    let start = s[..s.len() - 1]
        .iter()
        .rposition(|e| obs.contains(e))
        .map_or(0, |p| p + 1);
    s[start..s.len() - 1]
        .iter()
        .any(|e| ctrl(e))
        .then_some(start)
}

/// Product of plant and lifted spec, built from scratch. States are
/// (plant, spec) pairs; returns transitions and markings.
struct Product {
    states: Vec<(StateId, StateId)>,
    trans: Vec<Vec<(String, usize)>>,
    marked: Vec<bool>,
}

fn product(spec: &Automaton, plant: &Automaton) -> Option<Product> {
    let init = (plant.initial()?, spec.initial()?);
    let mut index = HashMap::from([(init, 0usize)]);
    let mut p = Product {
        states: vec![init],
        trans: Vec::new(),
        marked: Vec::new(),
    };
    let mut i = 0;
    while i < p.states.len() {
        let (q, r) = p.states[i];
        let mut row = Vec::new();
        for (e, qn) in plant.transitions_from(q) {
            let name = plant.event(e).name().to_string();
            let rn = match spec.event_index(&name) {
                None => r,
                Some(se) => match spec.successor(r, se) {
                    Some(rn) => rn,
                    None => continue,
                },
            };
            let id = *index.entry((qn, rn)).or_insert_with(|| {
                p.states.push((qn, rn));
                p.states.len() - 1
            });
            row.push((name, id));
        }
        p.trans.push(row);
        p.marked.push(plant.is_marked(q) && spec.is_marked(r));
        i += 1;
    }
    Some(p)
}

/// Number of product states, or `None` if either side is empty.
pub fn product_size(spec: &Automaton, plant: &Automaton) -> Option<usize> {
    product(spec, plant).map(|p| p.states.len())
}

/// Supremal controllable nonblocking sub-automaton of the product, as
/// the union of every valid state subset. Exhaustive over `2^|states|`.
pub fn supcon_lattice(spec: &Automaton, plant: &Automaton) -> Automaton {
    let events: Vec<_> = plant.events().to_vec();
    let Some(p) = product(spec, plant) else {
        return Automaton::empty(events).unwrap();
    };
    let n = p.states.len();
    assert!(n <= 16, "product too large for the lattice oracle");
    let unc: BTreeSet<String> = plant
        .events()
        .iter()
        .filter(|e| !e.is_controllable())
        .map(|e| e.name().to_string())
        .collect();
    let valid = |mask: u32| -> bool {
        if mask & 1 == 0 {
            return false;
        }
        let kept = |x: usize| mask & (1 << x) != 0;
        for x in (0..n).filter(|&x| kept(x)) {
            let (q, _) = p.states[x];
            for (e, _) in plant.transitions_from(q) {
                let name = plant.event(e).name();
                if !unc.contains(name) {
                    continue;
                }
                match p.trans[x].iter().find(|(m, _)| m == name) {
                    Some(&(_, t)) if kept(t) => {}
                    _ => return false,
                }
            }
        }
        let mut reach = 1u32;
        loop {
            let mut next = reach;
            for x in (0..n).filter(|&x| reach & (1 << x) != 0) {
                for &(_, t) in &p.trans[x] {
                    if kept(t) {
                        next |= 1 << t;
                    }
                }
            }
            if next == reach {
                break;
            }
            reach = next;
        }
        if reach != mask {
            return false;
        }
        let mut co: u32 = (0..n)
            .filter(|&x| kept(x) && p.marked[x])
            .fold(0, |m, x| m | 1 << x);
        loop {
            let mut next = co;
            for x in (0..n).filter(|&x| kept(x)) {
                if p.trans[x].iter().any(|&(_, t)| co & (1 << t) != 0) {
                    next |= 1 << x;
                }
            }
            if next == co {
                break;
            }
            co = next;
        }
        co == mask
    };
    let union = (0..(1u32 << n))
        .filter(|&m| valid(m))
        .fold(0u32, |a, m| a | m);
    if union == 0 {
        return Automaton::empty(events).unwrap();
    }
    let kept: Vec<usize> = (0..n).filter(|&x| union & (1 << x) != 0).collect();
    let pos = |x: usize| kept.iter().position(|&k| k == x).unwrap() as u32;
    let mut trans = Vec::new();
    for &x in &kept {
        for (e, t) in &p.trans[x] {
            if union & (1 << t) != 0 {
                trans.push((pos(x), e.clone(), pos(*t)));
            }
        }
    }
    Automaton::new(
        events,
        kept.len(),
        Some(0),
        kept.iter().filter(|&&x| p.marked[x]).map(|&x| pos(x)),
        trans.iter().map(|(a, e, b)| (*a, e.as_str(), *b)),
    )
    .unwrap()
}

fn connected(vs: &BTreeSet<usize>, edges: &BTreeSet<(usize, usize)>) -> bool {
    let Some(&s) = vs.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([s]);
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && vs.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen.len() == vs.len()
}

/// Every bipartition with both halves connected, smaller side first.
pub fn cutsets_exhaustive(
    vs: &BTreeSet<usize>,
    edges: &BTreeSet<(usize, usize)>,
) -> BTreeSet<(BTreeSet<usize>, BTreeSet<usize>)> {
    let list: Vec<usize> = vs.iter().copied().collect();
    let mut out = BTreeSet::new();
    for mask in 1..(1u32 << list.len()) - 1 {
        let a: BTreeSet<usize> = (0..list.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| list[i])
            .collect();
        let b: BTreeSet<usize> = vs.difference(&a).copied().collect();
        if connected(&a, edges) && connected(&b, edges) {
            out.insert(if a < b { (a, b) } else { (b, a) });
        }
    }
    out
}

/// Minimum plan depth for `vs`, over every decomposition into connected halves.
pub fn min_plan_depth(vs: &BTreeSet<usize>, edges: &BTreeSet<(usize, usize)>) -> Option<usize> {
    fn go(
        vs: &BTreeSet<usize>,
        edges: &BTreeSet<(usize, usize)>,
        memo: &mut HashMap<BTreeSet<usize>, Option<usize>>,
    ) -> Option<usize> {
        if vs.len() == 1 {
            return Some(0);
        }
        if let Some(&v) = memo.get(vs) {
            return v;
        }
        let best = cutsets_exhaustive(vs, edges)
            .iter()
            .filter_map(|(a, b)| Some(1 + go(a, edges, memo)?.max(go(b, edges, memo)?)))
            .min();
        memo.insert(vs.clone(), best);
        best
    }
    go(vs, edges, &mut HashMap::new())
}

/// Number of complete decomposition trees for `vs`.
pub fn count_plan_trees(vs: &BTreeSet<usize>, edges: &BTreeSet<(usize, usize)>) -> usize {
    if vs.len() == 1 {
        return 1;
    }
    cutsets_exhaustive(vs, edges)
        .iter()
        .map(|(a, b)| count_plan_trees(a, edges) * count_plan_trees(b, edges))
        .sum()
}

/// `(w ∈ P(L(g)), w ∈ P(L_m(g)))` by search over (state, position).
pub fn projected_member(g: &Automaton, w: &[String], obs: &BTreeSet<String>) -> (bool, bool) {
    let Some(x0) = g.initial() else {
        return (false, false);
    };
    let mut seen = BTreeSet::from([(x0, 0usize)]);
    let mut queue = VecDeque::from([(x0, 0usize)]);
    let mut closed = false;
    while let Some((q, pos)) = queue.pop_front() {
        if pos == w.len() {
            closed = true;
            if g.is_marked(q) {
                return (true, true);
            }
        }
        for (e, t) in g.transitions_from(q) {
            let name = g.event(e).name();
            let next = if !obs.contains(name) {
                (t, pos)
            } else if pos < w.len() && w[pos] == name {
                (t, pos + 1)
            } else {
                continue;
            };
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    (closed, false)
}

/// Every connected simple graph on vertices `0..m`, as edge sets.
pub fn connected_graphs(m: usize) -> Vec<BTreeSet<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    let vs: BTreeSet<usize> = (0..m).collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            (0..pairs.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| pairs[i])
                .collect::<BTreeSet<_>>()
        })
        .filter(|e| m == 1 || connected(&vs, e))
        .collect()
}
