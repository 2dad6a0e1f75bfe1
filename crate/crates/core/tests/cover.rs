mod common;

use common::brute::{circuits, min_cover, signed_circuits};
use common::{config, sign, small_graph};
use proptest::prelude::*;
use sigcover_core::bridgeless::{cover_bridgeless, exact_min_circuit_cover};
use sigcover_core::circuit::is_flow_admissible;
use sigcover_core::graph::SignedGraph;
use sigcover_core::pipeline::{cover_full, Strategy as Plan};
use sigcover_core::verify::{oracle_min_cover, verify_cover, Requirements};

/// Bridgeless graph with a balanced signature hidden by a random switching.
fn balanced_bridgeless(max_n: usize, max_m: usize) -> impl Strategy<Value = SignedGraph> {
    (small_graph(max_n, max_m), any::<u32>())
        .prop_map(|(g, side)| {
            let e: Vec<_> = g
                .edges()
                .iter()
                .map(|e| (e.u, e.v, sign(e.u != e.v && (side >> e.u & 1) != (side >> e.v & 1))))
                .collect();
            SignedGraph::from_edges(g.vertex_count(), &e).unwrap()
        })
        .prop_filter("bridgeless", |g| g.bridges(&g.all_edges()).is_empty())
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn bridgeless_cover_is_minimum(g in balanced_bridgeless(6, 10)) {
        let all = g.all_edges();
        let m = all.len();
        let want = min_cover(m, &circuits(&g)).unwrap();
        let exact = exact_min_circuit_cover(&g, &all, 16).unwrap();
        prop_assert_eq!(exact.length(), want, "\n{}", g.to_text());
        let c = cover_bridgeless(&g, &all).unwrap();
        prop_assert!(c.exact);
        prop_assert_eq!(c.length(), want);
        prop_assert!(c.length() >= m);
        prop_assert!(3 * c.length() <= 5 * m, "{} > 5/3·{}\n{}", c.length(), m, g.to_text());
        prop_assert!(c.certified);
        let rep = verify_cover(&g, &c.cover, &Requirements::default());
        prop_assert!(rep.valid, "{:?}", rep.violations);
    }

    #[test]
    fn bridgeless_up_to_fourteen_edges(g in balanced_bridgeless(8, 14)) {
        let all = g.all_edges();
        let c = cover_bridgeless(&g, &all).unwrap();
        prop_assert!(c.exact && c.certified, "{} on {} edges\n{}", c.length(), all.len(), g.to_text());
        prop_assert!(verify_cover(&g, &c.cover, &Requirements::default()).valid);
    }

    #[test]
    fn oracle_is_the_minimum(g in small_graph(5, 9)) {
        let m = g.edge_count();
        let want = min_cover(m, &signed_circuits(&g));
        match oracle_min_cover(&g) {
            Ok(o) => {
                prop_assert_eq!(Some(o.length), want, "\n{}", g.to_text());
                prop_assert_eq!(o.cover.length(), o.length);
                prop_assert!(verify_cover(&g, &o.cover, &Requirements::default()).valid);
            }
            Err(e) => prop_assert!(want.is_none(), "{e}\n{}", g.to_text()),
        }
    }

    #[test]
    fn pipeline_never_beats_the_oracle(g in small_graph(7, 12)) {
        prop_assume!(is_flow_admissible(&g));
        let o = oracle_min_cover(&g).unwrap();
        prop_assert!(o.length >= g.edge_count());
        for plan in [Plan::Main, Plan::Alt1, Plan::Alt2] {
            let c = cover_full(&g, plan).unwrap();
            prop_assert!(o.length <= c.achieved, "{:?}: {} < {}\n{}", plan, c.achieved, o.length, g.to_text());
        }
    }
}
