use proptest::prelude::*;
use sigcover_core::circuit::is_flow_admissible;
use sigcover_core::graph::{Sign, SignedGraph};
use sigcover_core::pipeline::{build_gprime, classify_edges, cover_full, cover_prime, Strategy as Plan};
use sigcover_core::signature::minimum_signature;
use sigcover_core::verify::{verify_cover, Requirements};

fn graph(n: usize, edges: &[(usize, usize, bool)]) -> SignedGraph {
    let e: Vec<_> = edges
        .iter()
        .map(|&(u, v, neg)| (u % n, v % n, if neg { Sign::Negative } else { Sign::Positive }))
        .collect();
    SignedGraph::from_edges(n, &e).unwrap()
}

fn small_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, any::<bool>()), n..=max_m.max(n)).prop_map(move |e| graph(n, &e))
    })
}

/// A path `0 - 1 - … - (n-1)` of positive edges plus negative chords and loops.
fn tree_with_chords() -> impl Strategy<Value = SignedGraph> {
    (2usize..13).prop_flat_map(|n| {
        (
            prop::collection::vec(0..n, n - 1),
            prop::collection::vec((0..n, 0..n), 2..10),
        )
            .prop_map(move |(parents, chords)| {
                let mut e = Vec::new();
                for v in 1..n {
                    e.push((parents[v - 1] % v, v, Sign::Positive));
                }
                for (u, v) in chords {
                    e.push((u, v, Sign::Negative));
                }
                SignedGraph::from_edges(n, &e).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 1000,
        max_global_rejects: 1 << 20,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn full_cover_is_valid_and_within_bound(g in small_graph(10, 18)) {
        prop_assume!(is_flow_admissible(&g));
        let c = cover_full(&g, Plan::Main).map_err(|e| TestCaseError::fail(format!("{e}\n{}", g.to_text())))?;
        let rep = verify_cover(&g, &c.cover, &Requirements::default());
        prop_assert!(rep.valid, "{:?}\n{}", rep.violations, g.to_text());
        prop_assert!(c.certified, "{} > {}", c.achieved, c.bound);
    }

    #[test]
    fn prime_cover_meets_its_guarantees(g in tree_with_chords()) {
        let all = g.all_edges();
        prop_assume!(g.negative_count(&all) >= 2);
        let p = cover_prime(&g, &all).map_err(|e| TestCaseError::fail(format!("{e}\n{}", g.to_text())))?;
        prop_assert!(p.cover.length() <= 2 * all.len());
        prop_assert!(!p.trace.iter().any(|t| t.contains("failed")), "{:?}\n{}", p.trace, g.to_text());
        for l in g.loops(&all).iter() {
            prop_assert_eq!(p.cover.width_of(l), 2);
        }
    }

    #[test]
    fn gprime_keeps_classes(g in small_graph(10, 18)) {
        prop_assume!(is_flow_admissible(&g) && g.is_connected(&g.all_edges()));
        let ms = minimum_signature(&g).unwrap();
        let all = g.all_edges();
        let cl = classify_edges(&ms.graph, &all).unwrap();
        prop_assume!(cl.x.len() >= 2);
        let gp = build_gprime(&ms.graph, &all, &cl.x).unwrap();
        let pc = sigcover_core::pipeline::prime_classes(&ms.graph, &gp).unwrap();
        prop_assert_eq!(pc.x, cl.x);
        prop_assert!(cl.b.is_subset(&pc.b));
        prop_assert!(cl.s.is_subset(&pc.s));
    }
}

#[test]
fn two_loops_and_three_chords_on_a_short_tree() {
    let g = SignedGraph::parse("3 7\n0 1 +\n0 2 +\n0 0 -\n1 0 -\n1 2 -\n0 0 -\n2 1 -\n").unwrap();
    let all = g.all_edges();
    let p = cover_prime(&g, &all).unwrap();
    assert!(p.cover.length() <= 2 * all.len());
}
