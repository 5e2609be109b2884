use std::collections::BTreeSet;
use std::fmt;

use crate::dcsn::Dcsn;
use crate::error::{Error, Result};

/// A subnet as a set of 0-based constraint indices.
pub type NodeSet = BTreeSet<usize>;

/// A (possibly partial) conflict-resolution plan.
///
/// A `Leaf` over more than one constraint is an unexpanded terminal of a
/// partial tree; a complete tree has only singleton leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlanTree {
    Leaf(NodeSet),
    Branch {
        node: NodeSet,
        left: Box<PlanTree>,
        right: Box<PlanTree>,
    },
}

impl PlanTree {
    pub fn node(&self) -> &NodeSet {
        match self {
            PlanTree::Leaf(n) | PlanTree::Branch { node: n, .. } => n,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            PlanTree::Leaf(_) => 0,
            PlanTree::Branch { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// `log2(|node|)` at terminals, `1 + max` at branches. Equals `depth`
    /// on complete trees and never exceeds the depth of any completion.
    pub fn h_p(&self) -> f64 {
        match self {
            PlanTree::Leaf(n) => (n.len() as f64).log2(),
            PlanTree::Branch { left, right, .. } => 1.0 + left.h_p().max(right.h_p()),
        }
    }

    pub fn is_complete(&self) -> bool {
        match self {
            PlanTree::Leaf(n) => n.len() == 1,
            PlanTree::Branch { left, right, .. } => left.is_complete() && right.is_complete(),
        }
    }

    pub fn leaves(&self) -> Vec<&NodeSet> {
        match self {
            PlanTree::Leaf(n) => vec![n],
            PlanTree::Branch { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }

    /// `(parent, left, right)` for every branch, pre-order.
    pub fn edges(&self) -> Vec<(&NodeSet, &NodeSet, &NodeSet)> {
        match self {
            PlanTree::Leaf(_) => Vec::new(),
            PlanTree::Branch { node, left, right } => {
                let mut v = vec![(node, left.node(), right.node())];
                v.extend(left.edges());
                v.extend(right.edges());
                v
            }
        }
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, n: &NodeSet) -> fmt::Result {
    let m: Vec<String> = n.iter().map(|k| (k + 1).to_string()).collect();
    write!(f, "[{}]", m.join(","))
}

/// `([1,2], [[1]|[2]], ([1]), ([2]))` with 1-based constraint numbers.
impl fmt::Display for PlanTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanTree::Leaf(n) => {
                f.write_str("(")?;
                write_node(f, n)?;
                f.write_str(")")
            }
            PlanTree::Branch { node, left, right } => {
                f.write_str("(")?;
                write_node(f, node)?;
                f.write_str(", [")?;
                write_node(f, left.node())?;
                f.write_str("|")?;
                write_node(f, right.node())?;
                write!(f, "], {left}, {right})")
            }
        }
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        let line = 1 + self.text[..self.pos]
            .iter()
            .filter(|&&c| c == b'\n')
            .count();
        Error::Parse {
            source_name: "plan".into(),
            line,
            message: msg.into(),
        }
    }

    fn skip(&mut self) {
        while self.pos < self.text.len() {
            match self.text[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.text.len() && self.text[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip();
        if self.text.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.text.get(self.pos).copied()
    }

    fn node(&mut self) -> Result<NodeSet> {
        self.eat(b'[')?;
        let mut out = NodeSet::new();
        loop {
            self.skip();
            let start = self.pos;
            while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let n: usize = std::str::from_utf8(&self.text[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("expected a constraint number"))?;
            if n == 0 || !out.insert(n - 1) {
                return Err(self.err("bad or repeated constraint number"));
            }
            match self.peek() {
                Some(b',') => self.pos += 1,
                _ => break,
            }
        }
        self.eat(b']')?;
        Ok(out)
    }

    fn tree(&mut self) -> Result<PlanTree> {
        self.eat(b'(')?;
        let node = self.node()?;
        if self.peek() == Some(b')') {
            self.pos += 1;
            return Ok(PlanTree::Leaf(node));
        }
        self.eat(b',')?;
        self.eat(b'[')?;
        let a = self.node()?;
        self.eat(b'|')?;
        let b = self.node()?;
        self.eat(b']')?;
        self.eat(b',')?;
        let left = self.tree()?;
        self.eat(b',')?;
        let right = self.tree()?;
        self.eat(b')')?;
        if left.node() != &a || right.node() != &b {
            return Err(self.err("subtrees do not match the hyper-edge"));
        }
        Ok(PlanTree::Branch {
            node,
            left: Box::new(left),
            right: Box::new(right),
        })
    }
}

/// Parse one or more plan trees (one per connected component).
pub fn parse_plans(text: &str) -> Result<Vec<PlanTree>> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.tree()?);
    }
    if out.is_empty() {
        return Err(p.err("no plan found"));
    }
    Ok(out)
}

/// Structural check of a complete plan against a network: every branch
/// splits its node into two disjoint, constraint-connected halves.
pub fn check_plan(d: &Dcsn, t: &PlanTree) -> Result<()> {
    if !t.is_complete() {
        return Err(Error::Planning(format!("plan {t} is not complete")));
    }
    let connected =
        |n: &NodeSet| -> Result<bool> { d.is_constraint_connected(&d.subnet(n.iter().copied())?) };
    if !connected(t.node())? {
        return Err(Error::Planning(
            "plan root is not constraint-connected".into(),
        ));
    }
    for (p, l, r) in t.edges() {
        let union: NodeSet = l.union(r).copied().collect();
        if !l.is_disjoint(r) || &union != p || !connected(l)? || !connected(r)? {
            return Err(Error::Planning(format!("invalid decomposition of {p:?}")));
        }
    }
    Ok(())
}

/// Deconfliction of two solved subnets into their union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionOp {
    pub parent: NodeSet,
    pub left: NodeSet,
    pub right: NodeSet,
}

/// Branches grouped by height: level `k` (index `k - 1`) holds the
/// compositions whose inputs are all available after level `k - 1`.
pub fn schedule_from_plan(t: &PlanTree) -> Vec<Vec<CompositionOp>> {
    fn walk(t: &PlanTree, levels: &mut Vec<Vec<CompositionOp>>) -> usize {
        match t {
            PlanTree::Leaf(_) => 0,
            PlanTree::Branch { node, left, right } => {
                let h = 1 + walk(left, levels).max(walk(right, levels));
                if levels.len() < h {
                    levels.resize(h, Vec::new());
                }
                levels[h - 1].push(CompositionOp {
                    parent: node.clone(),
                    left: left.node().clone(),
                    right: right.node().clone(),
                });
                h
            }
        }
    }
    let mut levels = Vec::new();
    walk(t, &mut levels);
    levels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(k: usize) -> PlanTree {
        PlanTree::Leaf([k].into())
    }

    fn join(a: PlanTree, b: PlanTree) -> PlanTree {
        PlanTree::Branch {
            node: a.node().union(b.node()).copied().collect(),
            left: Box::new(a),
            right: Box::new(b),
        }
    }

    #[test]
    fn depth_and_heuristic() {
        let balanced = join(join(leaf(0), leaf(1)), join(leaf(2), leaf(3)));
        let linear = join(join(join(leaf(0), leaf(1)), leaf(2)), leaf(3));
        assert_eq!(balanced.depth(), 2);
        assert_eq!(linear.depth(), 3);
        assert_eq!(balanced.h_p(), 2.0);
        assert_eq!(PlanTree::Leaf([0, 1, 2, 3].into()).h_p(), 2.0);
        assert_eq!(leaf(0).h_p(), 0.0);
        assert_eq!(
            schedule_from_plan(&balanced)
                .iter()
                .map(Vec::len)
                .collect::<Vec<_>>(),
            [2, 1]
        );
        assert_eq!(
            schedule_from_plan(&linear)
                .iter()
                .map(Vec::len)
                .collect::<Vec<_>>(),
            [1, 1, 1]
        );
        assert!(schedule_from_plan(&leaf(0)).is_empty());
    }

    #[test]
    fn text_round_trip() {
        let t = join(join(leaf(0), leaf(1)), leaf(2));
        let s = t.to_string();
        assert_eq!(
            s,
            "([1,2,3], [[1,2]|[3]], ([1,2], [[1]|[2]], ([1]), ([2])), ([3]))"
        );
        assert_eq!(parse_plans(&s).unwrap(), vec![t]);
        assert!(parse_plans("([1,2], [[1]|[3]], ([1]), ([2]))").is_err());
        assert!(parse_plans("").is_err());
    }
}
