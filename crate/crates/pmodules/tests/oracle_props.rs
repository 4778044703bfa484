//! Property tests: oracle sanity bounds, resume invariance, the Menger
//! cross-check, round-tripping through validators and path extraction, and
//! distributed-equals-centralized on small random modules.

use std::collections::BTreeSet;

use proptest::prelude::*;

use pmodules::engine::{run, CompiledProgram};
use pmodules::flowcheck::{
    extract_paths, max_edge_disjoint, max_node_disjoint, min_node_cut_bruteforce,
    solution_from_configuration, validate_edge, validate_node, MinNodeCut,
};
use pmodules::programs::{initial_configuration, templates_for, PathMode, ProgramKind};
use pmodules::rules::InstanceOrder;
use pmodules::Digraph;

fn arb_module(max_n: u32) -> impl Strategy<Value = (Digraph, u32, u32)> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (1..=n)
            .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
            .collect();
        let len = pairs.len();
        (
            Just(n),
            Just(pairs),
            proptest::collection::vec(any::<bool>(), len),
            proptest::collection::vec(any::<bool>(), len),
            0..(n * (n - 1)),
        )
            .prop_map(|(n, pairs, include, flip, st)| {
                let arcs: Vec<(u32, u32)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| include[*i])
                    .map(|(i, &(u, v))| if flip[i] { (v, u) } else { (u, v) })
                    .collect();
                let g = Digraph::new(n, &arcs).expect("generated arcs are valid");
                // decode an ordered (s, t) pair with s ≠ t
                let s = st / (n - 1) + 1;
                let mut t = st % (n - 1) + 1;
                if t >= s {
                    t += 1;
                }
                (g, s, t)
            })
    })
}

proptest! {
    #[test]
    fn oracle_counts_respect_degree_bounds((g, s, t) in arb_module(8)) {
        let edge = max_edge_disjoint(&g, s, t, false).unwrap();
        let node = max_node_disjoint(&g, s, t).unwrap();
        let bound = g.neighbors(s).len().min(g.neighbors(t).len()) as u32;
        prop_assert!(edge.k <= bound);
        prop_assert!(node.k <= edge.k);
    }

    #[test]
    fn resume_scan_is_equivalent((g, s, t) in arb_module(8)) {
        let plain = max_edge_disjoint(&g, s, t, false).unwrap();
        let resumed = max_edge_disjoint(&g, s, t, true).unwrap();
        prop_assert_eq!(plain.k, resumed.k);
    }

    #[test]
    fn node_count_equals_minimum_node_cut((g, s, t) in arb_module(8)) {
        prop_assume!(!g.are_neighbors(s, t));
        let k = max_node_disjoint(&g, s, t).unwrap().k;
        prop_assert_eq!(
            min_node_cut_bruteforce(&g, s, t).unwrap(),
            MinNodeCut::Size(k)
        );
    }

    #[test]
    fn oracle_outputs_round_trip((g, s, t) in arb_module(8)) {
        let edge = max_edge_disjoint(&g, s, t, false).unwrap();
        prop_assert!(validate_edge(&edge, &g, s, t).is_empty());
        let paths = extract_paths(&edge, s, t).unwrap();
        prop_assert_eq!(paths.len(), edge.k as usize);
        // paths are pairwise arc-disjoint and cover every flow arc exactly once
        let mut arcs = BTreeSet::new();
        for path in &paths {
            for w in path.windows(2) {
                prop_assert!(arcs.insert((w[0], w[1])), "duplicate arc {:?}", w);
            }
        }
        let recorded: usize = edge.succs.iter().map(BTreeSet::len).sum();
        prop_assert_eq!(arcs.len(), recorded);

        let node = max_node_disjoint(&g, s, t).unwrap();
        prop_assert!(validate_node(&node, &g, s, t).is_empty());
        let paths = extract_paths(&node, s, t).unwrap();
        prop_assert_eq!(paths.len(), node.k as usize);
        // interior nodes are pairwise disjoint
        let mut interior = BTreeSet::new();
        for path in &paths {
            for &v in &path[1..path.len() - 1] {
                prop_assert!(interior.insert(v), "node {} shared across paths", v);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distributed_equals_centralized((g, s, t) in arb_module(5)) {
        for mode in [PathMode::Edge, PathMode::Node] {
            for optimized in [false, true] {
                let kind = ProgramKind { mode, optimized };
                let prog = CompiledProgram::new(&templates_for(kind), g.n(), InstanceOrder::Ascending);
                let initial = initial_configuration(&g, s, t).unwrap();
                let bound = 20 * g.n() * g.arc_count().max(1);
                let out = run(initial, &prog, &g, bound, true);
                prop_assert!(out.halted, "no quiescence within {bound} steps");
                prop_assert!(out.audit_errors.is_empty(), "{:?}", out.audit_errors);
                let sol = solution_from_configuration(&out.final_config, s).unwrap();
                let oracle = match mode {
                    PathMode::Edge => max_edge_disjoint(&g, s, t, false).unwrap(),
                    PathMode::Node => max_node_disjoint(&g, s, t).unwrap(),
                };
                prop_assert_eq!(sol.k, oracle.k, "mode {:?} optimized {}", mode, optimized);
                let violations = match mode {
                    PathMode::Edge => validate_edge(&sol, &g, s, t),
                    PathMode::Node => validate_node(&sol, &g, s, t),
                };
                prop_assert!(violations.is_empty(), "{:?}", violations);
            }
        }
    }
}
