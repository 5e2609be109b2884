use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use super::graph::{generate_andor_graph_filtered, AndOrGraph};
use super::tree::PlanTree;
use crate::dcsn::Dcsn;
use crate::error::{Error, Result};

/// Optimization metric `F` on complete trees with an admissible estimate
/// `H` on partial ones.
pub trait PlanMetric {
    fn cost(&self, complete: &PlanTree) -> f64;
    fn estimate(&self, partial: &PlanTree) -> f64;
}

/// Sequential composition steps: depth, estimated by `h_p`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParallelDepth;

impl PlanMetric for ParallelDepth {
    fn cost(&self, complete: &PlanTree) -> f64 {
        complete.depth() as f64
    }

    fn estimate(&self, partial: &PlanTree) -> f64 {
        partial.h_p()
    }
}

/// Expanded node -> chosen hyper-edge.
type Partial = BTreeMap<usize, usize>;

fn to_tree(g: &AndOrGraph, p: &Partial, n: usize) -> PlanTree {
    match p.get(&n) {
        None => PlanTree::Leaf(g.node(n).clone()),
        Some(&e) => {
            let [a, b] = g.edges()[e].children;
            PlanTree::Branch {
                node: g.node(n).clone(),
                left: Box::new(to_tree(g, p, a)),
                right: Box::new(to_tree(g, p, b)),
            }
        }
    }
}

fn terminals(g: &AndOrGraph, p: &Partial, n: usize, out: &mut Vec<usize>) {
    match p.get(&n) {
        None => out.push(n),
        Some(&e) => {
            for c in g.edges()[e].children {
                terminals(g, p, c, out);
            }
        }
    }
}

struct Entry {
    h: i64,
    seq: u64,
    tree: Partial,
}

impl PartialEq for Entry {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    // max-heap: lowest h first, then earliest insertion
    fn cmp(&self, o: &Self) -> Ordering {
        o.h.cmp(&self.h).then(o.seq.cmp(&self.seq))
    }
}

/// Best-first search over partial trees of `g`.
///
/// The queue is ordered by the estimate (compared at 1e-9 resolution),
/// ties first-in first-out. A popped complete tree is returned. Otherwise
/// the unexpanded terminal with the most constraints is expanded along
/// every hyper-edge; partial trees already queued are skipped.
pub fn heuristic_plan_selection(g: &AndOrGraph, metric: &dyn PlanMetric) -> Result<PlanTree> {
    let root = g.root();
    let quant = |t: &Partial| (metric.estimate(&to_tree(g, t, root)) * 1e9).round() as i64;
    let mut seen: HashSet<Vec<(usize, usize)>> = HashSet::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let start = Partial::new();
    seen.insert(Vec::new());
    heap.push(Entry {
        h: quant(&start),
        seq,
        tree: start,
    });
    let mut popped = 0usize;
    while let Some(Entry { tree, .. }) = heap.pop() {
        popped += 1;
        let mut terms = Vec::new();
        terminals(g, &tree, root, &mut terms);
        let Some(&n) = terms
            .iter()
            .filter(|&&n| g.node(n).len() > 1)
            .max_by(|&&a, &&b| {
                g.node(a)
                    .len()
                    .cmp(&g.node(b).len())
                    .then(g.node(b).cmp(g.node(a)))
            })
        else {
            log::debug!("plan selection: {popped} partial trees examined");
            return Ok(to_tree(g, &tree, root));
        };
        for &edge_id in g.out_edge_ids(n) {
            let mut next = tree.clone();
            next.insert(n, edge_id);
            let key: Vec<(usize, usize)> = next.iter().map(|(&a, &b)| (a, b)).collect();
            if !seen.insert(key) {
                continue;
            }
            seq += 1;
            heap.push(Entry {
                h: quant(&next),
                seq,
                tree: next,
            });
        }
    }
    Err(Error::Planning(
        "no complete plan exists in the graph".into(),
    ))
}

/// Every complete tree of `g`. Exponential; for small graphs only.
pub fn enumerate_complete_trees(g: &AndOrGraph) -> Vec<PlanTree> {
    fn all(g: &AndOrGraph, n: usize, memo: &mut BTreeMap<usize, Vec<PlanTree>>) -> Vec<PlanTree> {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let out = if g.node(n).len() == 1 {
            vec![PlanTree::Leaf(g.node(n).clone())]
        } else {
            let mut out = Vec::new();
            for e in g.out_edges(n).cloned().collect::<Vec<_>>() {
                let [a, b] = e.children;
                let la = all(g, a, memo);
                let lb = all(g, b, memo);
                for x in &la {
                    for y in &lb {
                        out.push(PlanTree::Branch {
                            node: g.node(n).clone(),
                            left: Box::new(x.clone()),
                            right: Box::new(y.clone()),
                        });
                    }
                }
            }
            out
        };
        memo.insert(n, out.clone());
        out
    }
    all(g, g.root(), &mut BTreeMap::new())
}

/// One plan per constraint-connected component, selected by `h_p`.
pub fn plan_dcsn(d: &Dcsn) -> Result<Vec<PlanTree>> {
    d.components()
        .iter()
        .map(|c| {
            let g = generate_andor_graph_filtered(d, c, &|_| true)?;
            heuristic_plan_selection(&g, &ParallelDepth)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Automaton, Event};
    use crate::dcsn::Constraint;

    /// Constraints over agent pairs given by `groups`.
    fn network(agents: usize, groups: &[&[usize]]) -> Dcsn {
        let agent = |i: usize| {
            let e = format!("e{i}");
            Automaton::new(
                [Event::controllable(&e)],
                1,
                Some(0),
                [0],
                [(0, e.as_str(), 0)],
            )
            .unwrap()
        };
        let constraints = groups
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let evs: Vec<Event> = g
                    .iter()
                    .map(|i| Event::controllable(format!("e{i}")))
                    .collect();
                let names: Vec<String> = g.iter().map(|i| format!("e{i}")).collect();
                Constraint {
                    name: format!("C{}", k + 1),
                    agents: g.iter().copied().collect(),
                    automaton: Automaton::new(
                        evs,
                        1,
                        Some(0),
                        [0],
                        names.iter().map(|n| (0, n.as_str(), 0)),
                    )
                    .unwrap(),
                }
            })
            .collect();
        Dcsn::new(
            (0..agents).map(|i| (format!("A{i}"), agent(i))).collect(),
            constraints,
        )
    }

    #[test]
    fn single_constraint_trivial_plan() {
        let d = network(2, &[&[0, 1]]);
        let plans = plan_dcsn(&d).unwrap();
        assert_eq!(plans, vec![PlanTree::Leaf([0].into())]);
        assert_eq!(plans[0].depth(), 0);
    }

    #[test]
    fn two_constraints_one_edge() {
        let d = network(3, &[&[0, 1], &[1, 2]]);
        let g = generate_andor_graph_filtered(&d, &d.full(), &|_| true).unwrap();
        assert_eq!(g.nodes().len(), 3);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(
            heuristic_plan_selection(&g, &ParallelDepth)
                .unwrap()
                .depth(),
            1
        );
    }

    #[test]
    fn chain_of_four_prefers_balanced() {
        let d = network(5, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4]]);
        let g = generate_andor_graph_filtered(&d, &d.full(), &|_| true).unwrap();
        let t = heuristic_plan_selection(&g, &ParallelDepth).unwrap();
        assert_eq!(t.depth(), 2);
        let min = enumerate_complete_trees(&g)
            .iter()
            .map(PlanTree::depth)
            .min()
            .unwrap();
        assert_eq!(min, 2);
    }

    #[test]
    fn reject_all_is_reported() {
        let d = network(3, &[&[0, 1], &[1, 2]]);
        assert!(generate_andor_graph_filtered(&d, &d.full(), &|_| false).is_err());
    }
}
