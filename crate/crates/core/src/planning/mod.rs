//! Conflict-resolution planning: cut-sets, the AND/OR graph of subnet
//! decompositions, plan trees and best-first plan selection.

mod cutsets;
mod dot;
mod graph;
mod search;
mod tree;

pub use cutsets::{all_cutsets, CutSet};
pub use dot::{andor_to_dot, plan_to_dot};
pub use graph::{
    generate_andor_graph, generate_andor_graph_filtered, keep_together, AndOrGraph, HyperEdge,
};
pub use search::{
    enumerate_complete_trees, heuristic_plan_selection, plan_dcsn, ParallelDepth, PlanMetric,
};
pub use tree::{check_plan, parse_plans, schedule_from_plan, CompositionOp, NodeSet, PlanTree};
