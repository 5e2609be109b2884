use std::collections::BTreeMap;

use super::cutsets::{all_cutsets, CutSet};
use super::tree::NodeSet;
use crate::dcsn::{Dcsn, Subnet};
use crate::error::{Error, Result};

/// Decomposition of `parent` into two disjoint, connected children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperEdge {
    pub parent: usize,
    pub children: [usize; 2],
}

/// AND/OR graph of conflict-resolution plans. Node 0 is the root.
#[derive(Clone, Debug)]
pub struct AndOrGraph {
    nodes: Vec<NodeSet>,
    index: BTreeMap<NodeSet, usize>,
    edges: Vec<HyperEdge>,
    out: Vec<Vec<usize>>,
}

impl AndOrGraph {
    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[NodeSet] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &NodeSet {
        &self.nodes[id]
    }

    pub fn node_id(&self, n: &NodeSet) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    /// Hyper-edges leaving a node, in cut-set order.
    pub fn out_edges(&self, id: usize) -> impl Iterator<Item = &HyperEdge> + '_ {
        self.out[id].iter().map(|&e| &self.edges[e])
    }

    pub fn out_edge_ids(&self, id: usize) -> &[usize] {
        &self.out[id]
    }

    pub fn out_degree(&self, id: usize) -> usize {
        self.out[id].len()
    }

    /// No hyper-edges: the network is a single basic subnet (or everything
    /// was filtered away).
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn intern(&mut self, n: NodeSet) -> (usize, bool) {
        if let Some(&id) = self.index.get(&n) {
            return (id, false);
        }
        let id = self.nodes.len();
        self.index.insert(n.clone(), id);
        self.nodes.push(n);
        self.out.push(Vec::new());
        (id, true)
    }
}

/// AND/OR graph of the whole network, which must be constraint-connected.
pub fn generate_andor_graph(d: &Dcsn) -> Result<AndOrGraph> {
    generate_andor_graph_filtered(d, &d.full(), &|_: &CutSet| true)
}

/// AND/OR graph rooted at `root`, keeping only cut-sets accepted by
/// `accept`. Each subnet is expanded once.
pub fn generate_andor_graph_filtered(
    d: &Dcsn,
    root: &Subnet,
    accept: &dyn Fn(&CutSet) -> bool,
) -> Result<AndOrGraph> {
    if !d.is_constraint_connected(root)? {
        return Err(Error::Planning(format!(
            "subnet {root} is not constraint-connected; plan its components separately"
        )));
    }
    let mut g = AndOrGraph {
        nodes: Vec::new(),
        index: BTreeMap::new(),
        edges: Vec::new(),
        out: Vec::new(),
    };
    g.intern(root.members().clone());
    let mut work = vec![0usize];
    while let Some(id) = work.pop() {
        let members = g.nodes[id].clone();
        if members.len() < 2 {
            continue;
        }
        let crn = d.build_crn(&d.subnet(members.iter().copied())?)?;
        for cut in all_cutsets(&crn)? {
            if !accept(&cut) {
                continue;
            }
            let (a, new_a) = g.intern(cut.part_x);
            let (b, new_b) = g.intern(cut.part_y);
            for (c, new) in [(a, new_a), (b, new_b)] {
                if new {
                    work.push(c);
                }
            }
            g.out[id].push(g.edges.len());
            g.edges.push(HyperEdge {
                parent: id,
                children: [a, b],
            });
        }
        if id == 0 && g.out[0].is_empty() {
            return Err(Error::Planning(
                "every cut-set of the root was rejected; the graph is empty".into(),
            ));
        }
    }
    Ok(g)
}

/// Cut-set filter keeping `group` inside one child whenever it is part of
/// a strictly larger subnet being split.
pub fn keep_together(group: NodeSet) -> impl Fn(&CutSet) -> bool {
    move |c: &CutSet| {
        let parent: NodeSet = c.part_x.union(&c.part_y).copied().collect();
        if !group.is_subset(&parent) || group == parent {
            return true;
        }
        group.is_subset(&c.part_x) || group.is_subset(&c.part_y)
    }
}
