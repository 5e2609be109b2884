use std::collections::{BTreeSet, VecDeque};

use crate::dcsn::Crn;
use crate::error::{Error, Result};

type Edge = (usize, usize);

/// A minimal set of edges whose removal splits the graph into exactly two
/// connected parts. `part_x` is the lexicographically smaller side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CutSet {
    pub part_x: BTreeSet<usize>,
    pub part_y: BTreeSet<usize>,
    pub crossing: BTreeSet<Edge>,
}

impl CutSet {
    fn new(a: BTreeSet<usize>, b: BTreeSet<usize>, crossing: BTreeSet<Edge>) -> Self {
        let (part_x, part_y) = if a <= b { (a, b) } else { (b, a) };
        CutSet {
            part_x,
            part_y,
            crossing,
        }
    }
}

/// Edges of `crn` with exactly one end in `side`.
fn boundary(crn: &Crn, side: &BTreeSet<usize>) -> BTreeSet<Edge> {
    crn.edges()
        .keys()
        .filter(|(a, b)| side.contains(a) != side.contains(b))
        .copied()
        .collect()
}

/// Every cut-set of a connected graph.
///
/// A BFS spanning tree yields one fundamental cut-set per branch; every
/// cut-set is a ring sum of some of them. Each nonempty combination is
/// formed and kept only if removing it leaves exactly two components.
pub fn all_cutsets(crn: &Crn) -> Result<Vec<CutSet>> {
    let verts: Vec<usize> = crn.vertices().collect();
    if verts.len() < 2 {
        return Err(Error::invalid("cut-sets need at least two vertices"));
    }
    if !crn.is_connected() {
        return Err(Error::invalid("cut-sets need a connected graph"));
    }
    // Spanning tree.
    let mut tree: Vec<Edge> = Vec::new();
    let mut seen = BTreeSet::from([verts[0]]);
    let mut queue = VecDeque::from([verts[0]]);
    while let Some(v) = queue.pop_front() {
        let ns: Vec<usize> = crn.neighbours(v).collect();
        for w in ns {
            if seen.insert(w) {
                tree.push((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    // Fundamental cut-sets: drop one branch, take the side it cuts off.
    let fundamentals: Vec<BTreeSet<Edge>> = tree
        .iter()
        .map(|&cut| {
            let mut side = BTreeSet::from([cut.1]);
            let mut stack = vec![cut.1];
            while let Some(v) = stack.pop() {
                for &(a, b) in &tree {
                    if (a, b) == cut {
                        continue;
                    }
                    let w = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if side.insert(w) {
                        stack.push(w);
                    }
                }
            }
            boundary(crn, &side)
        })
        .collect();
    let f = fundamentals.len();
    if f >= 31 {
        return Err(Error::invalid("graph too large for cut-set enumeration"));
    }
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << f) {
        let mut ring: BTreeSet<Edge> = BTreeSet::new();
        for (i, fc) in fundamentals.iter().enumerate() {
            if mask & (1 << i) != 0 {
                ring = ring.symmetric_difference(fc).copied().collect();
            }
        }
        if ring.is_empty() {
            continue;
        }
        let comps = crn.components_without(&ring);
        if comps.len() != 2 {
            continue;
        }
        let (a, b) = (comps[0].clone(), comps[1].clone());
        if boundary(crn, &a) != ring {
            continue;
        }
        out.insert(CutSet::new(a, b, ring));
    }
    Ok(out.into_iter().collect())
}
