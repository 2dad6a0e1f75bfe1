mod common;

use common::{config, small_graph};
use proptest::prelude::*;
use sigcover_core::circuit::enumerate_circuits;
use sigcover_core::graph::SignedGraph;
use sigcover_core::signature::{apply_switching, minimum_signature, Switching};

/// Number of negative edges after switching at the vertices in `mask`.
fn negatives_after(g: &SignedGraph, mask: u32) -> usize {
    g.edges()
        .iter()
        .filter(|e| e.sign.is_negative() != (((mask >> e.u) ^ (mask >> e.v)) & 1 == 1))
        .count()
}

fn brute_min(g: &SignedGraph) -> usize {
    (0u32..1 << g.vertex_count())
        .map(|m| negatives_after(g, m))
        .min()
        .unwrap()
}

fn switching_of(mask: u32, n: usize) -> Switching {
    Switching::new((0..n).filter(|&v| mask >> v & 1 == 1).collect())
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn switching_is_an_involution(g in small_graph(8, 14), mask in any::<u32>()) {
        let s = switching_of(mask, g.vertex_count());
        let once = apply_switching(&g, &s).unwrap();
        prop_assert_eq!(apply_switching(&once, &s).unwrap(), g);
    }

    #[test]
    fn circuit_signs_are_invariant(g in small_graph(6, 10), mask in any::<u32>()) {
        let s = switching_of(mask, g.vertex_count());
        let h = apply_switching(&g, &s).unwrap();
        for c in enumerate_circuits(&g, &g.all_edges(), 5000).unwrap() {
            prop_assert_eq!(g.negative_count(&c) % 2, h.negative_count(&c) % 2);
        }
    }

    #[test]
    fn minimum_matches_exhaustive_switching(g in small_graph(9, 16)) {
        let ms = minimum_signature(&g).unwrap();
        prop_assert_eq!(ms.eps_n, brute_min(&g));
        prop_assert_eq!(ms.graph.negative_count(&ms.graph.all_edges()), ms.eps_n);
        prop_assert_eq!(apply_switching(&g, &ms.switching).unwrap(), ms.graph);
    }

    #[test]
    fn minimum_signature_has_no_negative_majority_cut(g in small_graph(9, 16)) {
        let ms = minimum_signature(&g).unwrap();
        let h = &ms.graph;
        for mask in 1u32..1 << h.vertex_count() {
            let cut: Vec<_> = h.edges().iter().filter(|e| ((mask >> e.u) ^ (mask >> e.v)) & 1 == 1).collect();
            let neg = cut.iter().filter(|e| e.sign.is_negative()).count();
            prop_assert!(2 * neg <= cut.len(), "cut {mask:b} has {neg} of {} negative", cut.len());
        }
    }
}
