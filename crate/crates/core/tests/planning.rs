use std::collections::BTreeSet;

use decs_core::planning::*;
use decs_testkit::{gen, oracle, rng, ChaCha8Rng};
use rand::Rng;

/// Random partial tree below node `n`, with its best completion depth.
fn partial(
    g: &AndOrGraph,
    n: usize,
    edges: &BTreeSet<(usize, usize)>,
    r: &mut ChaCha8Rng,
) -> (PlanTree, usize) {
    let node = g.node(n).clone();
    let out = g.out_edge_ids(n);
    if out.is_empty() || r.gen_bool(0.3) {
        let best = oracle::min_plan_depth(&node, edges).unwrap();
        return (PlanTree::Leaf(node), best);
    }
    let [a, b] = g.edges()[out[r.gen_range(0..out.len())]].children;
    let (l, dl) = partial(g, a, edges, r);
    let (rt, dr) = partial(g, b, edges, r);
    (
        PlanTree::Branch {
            node,
            left: Box::new(l),
            right: Box::new(rt),
        },
        1 + dl.max(dr),
    )
}

#[test]
fn planning_agrees_with_exhaustive_search_on_every_small_topology() {
    let mut r = rng(7);
    let mut checked = 0;
    for m in 1..=5 {
        let vs: BTreeSet<usize> = (0..m).collect();
        for edges in oracle::connected_graphs(m) {
            let d = gen::topology_dcsn(m, &edges);
            assert!(d.validate().is_empty());
            let crn = d.build_crn(&d.full()).unwrap();
            if m > 1 {
                let got: BTreeSet<(BTreeSet<usize>, BTreeSet<usize>)> = all_cutsets(&crn)
                    .unwrap()
                    .into_iter()
                    .map(|c| (c.part_x, c.part_y))
                    .collect();
                assert_eq!(got, oracle::cutsets_exhaustive(&vs, &edges), "{edges:?}");
            }
            let g = generate_andor_graph(&d).unwrap();
            let best = oracle::min_plan_depth(&vs, &edges).unwrap();
            let plan = heuristic_plan_selection(&g, &ParallelDepth).unwrap();
            assert!(plan.is_complete());
            check_plan(&d, &plan).unwrap();
            assert_eq!(plan.depth(), best, "{edges:?}");
            let all = enumerate_complete_trees(&g);
            assert_eq!(all.len(), oracle::count_plan_trees(&vs, &edges));
            for t in &all {
                assert!(t.h_p() <= t.depth() as f64 + 1e-9);
                assert!(PlanTree::Leaf(vs.clone()).h_p() <= t.depth() as f64 + 1e-9);
            }
            for _ in 0..10 {
                let (p, completion) = partial(&g, g.root(), &edges, &mut r);
                assert!(p.h_p() <= completion as f64 + 1e-9, "{p}");
            }
            checked += 1;
        }
    }
    // 1 + 1 + 4 + 38 + 728 connected labelled graphs
    assert_eq!(checked, 772);
}

#[test]
fn transfer_line_plans() {
    let d = decs_core::models::transfer_line();
    let g = generate_andor_graph(&d).unwrap();
    // the constraint network is K4, which has 7 connected bipartitions
    assert_eq!(g.out_degree(g.root()), 7);
    let plan = heuristic_plan_selection(&g, &ParallelDepth).unwrap();
    assert_eq!(plan.depth(), 2);
    assert_eq!(plan.to_string(), "([1,2,3,4], [[1,2]|[3,4]], ([1,2], [[1]|[2]], ([1]), ([2])), ([3,4], [[3]|[4]], ([3]), ([4])))");
    let all = enumerate_complete_trees(&g);
    assert!(all.iter().filter(|t| t.depth() == 3).count() >= 2);
    assert_eq!(plan_dcsn(&d).unwrap(), vec![plan.clone()]);
    let sched = schedule_from_plan(&plan);
    assert_eq!(sched.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 1]);
}

#[test]
fn plan_text_round_trips() {
    let d = decs_core::models::transfer_line();
    let g = generate_andor_graph(&d).unwrap();
    for t in enumerate_complete_trees(&g) {
        let back = parse_plans(&t.to_string()).unwrap();
        assert_eq!(back, vec![t.clone()]);
        check_plan(&d, &t).unwrap();
    }
    let wrong = parse_plans("([1,2], [[1]|[3]], ([1]), ([3]))").unwrap();
    assert!(check_plan(&d, &wrong[0]).is_err());
    assert!(parse_plans("([1,2], [[1]|[2]], ([1]), ([3]))").is_err());
    assert!(parse_plans("").is_err());
    let two = parse_plans("([1]) # first\n([2])").unwrap();
    assert_eq!(two.len(), 2);
}

#[test]
fn filter_keeps_groups_together() {
    let d = decs_core::models::transfer_line();
    let keep: NodeSet = [0, 1].into();
    let g = generate_andor_graph_filtered(&d, &d.full(), &keep_together(keep.clone())).unwrap();
    for e in g.edges() {
        let parent = g.node(e.parent);
        if keep.is_subset(parent) && parent != &keep {
            assert!(e.children.iter().any(|&c| keep.is_subset(g.node(c))));
        }
    }
    assert!(generate_andor_graph_filtered(&d, &d.full(), &|_| false).is_err());
}

#[test]
fn disconnected_networks_plan_per_component() {
    let mut r = rng(11);
    for _ in 0..10 {
        let d = gen::dcsn(&mut r, 4, 3, 2, false);
        let plans = plan_dcsn(&d).unwrap();
        assert_eq!(plans.len(), d.components().len());
        let mut covered = BTreeSet::new();
        for p in &plans {
            check_plan(&d, p).unwrap();
            covered.extend(p.node().iter().copied());
        }
        assert_eq!(covered.len(), d.num_constraints());
    }
}
