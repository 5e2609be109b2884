use std::collections::{BTreeMap, BTreeSet};

/// Constraint relational network: constraints as vertices, joined when
/// their agent sets overlap. Edges are labelled with the overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crn {
    vertices: BTreeMap<usize, BTreeSet<usize>>,
    edges: BTreeMap<(usize, usize), BTreeSet<usize>>,
}

impl Crn {
    /// From `(constraint, agent set)` pairs.
    pub fn new(vertices: BTreeMap<usize, BTreeSet<usize>>) -> Self {
        let mut edges = BTreeMap::new();
        let vs: Vec<(&usize, &BTreeSet<usize>)> = vertices.iter().collect();
        for (i, (k, jk)) in vs.iter().enumerate() {
            for (h, jh) in &vs[i + 1..] {
                let overlap: BTreeSet<usize> = jk.intersection(jh).copied().collect();
                if !overlap.is_empty() {
                    edges.insert((**k, **h), overlap);
                }
            }
        }
        Crn { vertices, edges }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// `(k, h)` with `k < h`, mapped to the shared agents.
    pub fn edges(&self) -> &BTreeMap<(usize, usize), BTreeSet<usize>> {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.keys().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Connected components over the vertices, ignoring the given edges.
    pub fn components_without(&self, removed: &BTreeSet<(usize, usize)>) -> Vec<BTreeSet<usize>> {
        let mut comp: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        for start in self.vertices() {
            if comp.contains_key(&start) {
                continue;
            }
            let id = out.len();
            let mut set = BTreeSet::from([start]);
            comp.insert(start, id);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(a, b) in self.edges.keys() {
                    if removed.contains(&(a, b)) {
                        continue;
                    }
                    let w = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if let std::collections::btree_map::Entry::Vacant(slot) = comp.entry(w) {
                        slot.insert(id);
                        set.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(set);
        }
        out
    }

    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        self.components_without(&BTreeSet::new())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}
