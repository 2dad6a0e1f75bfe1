mod common;

use common::{config, euler_tree, loopless_graph};
use proptest::prelude::*;
use sigcover_core::circuit::Cover;
use sigcover_core::edgeset::EdgeSet;
use sigcover_core::euler::{
    build_euler_tree, compress, decompose_eulerian, decompress, even_tree_cover, even_tree_three_covers, leaf_cover,
    odd_leaf_cover, Decomposition, LoopAssignment,
};
use sigcover_core::graph::{block_decompose, is_eulerian_edges, SignedGraph};
use sigcover_core::verify::classify_element;

fn assert_elements(g: &SignedGraph, h: &EdgeSet, c: &Cover) -> Result<(), TestCaseError> {
    for el in &c.elements {
        let edges = el.edges.to_vec();
        let kind = classify_element(g, &edges).map_err(TestCaseError::fail)?;
        prop_assert_eq!(kind, el.kind);
        prop_assert!(el.edges.is_subset(h));
    }
    Ok(())
}

fn non_bridge_negatives(g: &SignedGraph, h: &EdgeSet) -> usize {
    g.negative_count(&h.difference(&g.bridges(h)))
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn even_tree_three_covers_widths(g in euler_tree(6)) {
        let h = g.all_edges();
        prop_assume!(non_bridge_negatives(&g, &h) % 2 == 0);
        let covers = even_tree_three_covers(&g, &h).map_err(|e| TestCaseError::fail(format!("{e}\n{}", g.to_text())))?;
        let needed = h.difference(&g.bridges(&h));
        let m = g.edge_count();
        let mut total = vec![0; m];
        for c in &covers {
            assert_elements(&g, &h, c)?;
            prop_assert!(c.covers(&needed));
            let w = c.widths(m);
            prop_assert!(w.iter().all(|&x| x <= 2));
            for e in 0..m {
                total[e] += w[e];
            }
        }
        prop_assert!(total.iter().all(|&x| x <= 4));
        for l in g.loops(&h).iter().filter(|&l| g.is_negative(l)) {
            prop_assert_eq!(covers[0].width_of(l), 2);
        }
        let best = even_tree_cover(&g, &h).unwrap();
        prop_assert!(3 * best.length() <= 4 * h.len());
    }

    #[test]
    fn odd_leaf_cover_widths(g in euler_tree(6)) {
        let h = g.all_edges();
        let tree = build_euler_tree(&g, &h).unwrap();
        let leaves: Vec<_> = tree.leaves().collect();
        prop_assume!(leaves.len() >= 2 && leaves.iter().all(|b| b.odd));
        let c = odd_leaf_cover(&g, &h).map_err(|e| TestCaseError::fail(format!("{e}\n{}", g.to_text())))?;
        assert_elements(&g, &h, &c)?;
        let w = c.widths(g.edge_count());
        for e in &h {
            prop_assert!(w[e] >= 1 && w[e] <= 2);
            if g.is_loop(e) {
                prop_assert_eq!(w[e], 2);
            }
        }
    }

    #[test]
    fn leaf_cover_exact_widths(g in euler_tree(5)) {
        let h = g.all_edges();
        prop_assume!(g.loops(&h).is_empty());
        let bridges = g.bridges(&h);
        let deg = g.degrees(&h);
        let bd = block_decompose(&g, &h).unwrap();
        let circuits: Vec<_> = bd.blocks.iter().filter(|b| !b.is_bridge).collect();
        // a circuit is a leaf when everything else hangs off one of its vertices
        let is_leaf = |b: &sigcover_core::graph::Block| {
            let bdeg = g.degrees(&b.edges);
            b.vertices.iter().filter(|&&v| deg[v] > bdeg[v]).count() <= 1
        };
        // balloons are what is left after deleting bridges; each must be a circuit
        let balloons = g.components(&h.difference(&bridges));
        // a pendant vertex is a leaf balloon that is not a circuit
        prop_assume!(deg.iter().all(|&d| d != 1));
        prop_assume!(balloons.iter().all(|b| g.degrees(b).iter().all(|&d| d == 0 || d == 2)));
        prop_assume!(circuits.iter().filter(|b| is_leaf(b)).all(|b| g.negative_count(&b.edges) % 2 == 1));
        prop_assume!(circuits.iter().filter(|b| is_leaf(b)).count() >= 2);
        let c = leaf_cover(&g, &h).map_err(|e| TestCaseError::fail(format!("{e}\n{}", g.to_text())))?;
        assert_elements(&g, &h, &c)?;
        let w = c.widths(g.edge_count());
        for b in &circuits {
            let want = if is_leaf(b) { 2 } else { 1 };
            for e in &b.edges {
                prop_assert_eq!(w[e], want, "edge {} in\n{}", e, g.to_text());
            }
        }
        for e in &bridges {
            prop_assert_eq!(w[e], 2);
        }
    }

    #[test]
    fn eulerian_decomposition(g in loopless_graph(7, 14), v in any::<prop::sample::Index>()) {
        let h = g.all_edges();
        prop_assume!(!h.is_empty() && g.is_connected(&h) && is_eulerian_edges(&g, &h) && g.cut_vertices(&h).is_empty());
        let verts = g.vertices_of(&h);
        let v = verts[v.index(verts.len())];
        match decompose_eulerian(&g, &h, v).unwrap() {
            Decomposition::Circuit => {
                prop_assert!(g.degrees(&h).iter().all(|&d| d == 0 || d == 2));
            }
            Decomposition::Split { a1, a2 } => {
                prop_assert!(!a1.is_empty() && !a2.is_empty());
                prop_assert!(a1.is_disjoint(&a2));
                prop_assert_eq!(a1.union(&a2), h.clone());
                prop_assert!(is_eulerian_edges(&g, &a1) && is_eulerian_edges(&g, &a2));
                prop_assert_eq!(g.negative_count(&a2) % 2, 0);
                prop_assert!(g.vertex_mask(&a1)[v]);
            }
        }
    }

    #[test]
    fn compression_round_trip(g in euler_tree(5)) {
        let h = g.all_edges();
        let loops: EdgeSet = g.loops(&h).iter().filter(|&l| g.is_negative(l)).collect();
        prop_assume!(!loops.is_empty());
        let Ok(f) = LoopAssignment::smallest_edge(&g, &h, &loops) else {
            // a vertex carrying only loops has nothing to absorb them
            return Ok(());
        };
        let (gs, hs) = compress(&g, &h, &f).unwrap();
        prop_assert_eq!(decompress(&f, &hs), h.clone());
        prop_assert_eq!(gs.negative_count(&hs) % 2, g.negative_count(&h) % 2);
        let body = h.difference(&g.loops(&h));
        prop_assert_eq!(gs.cut_vertices(&hs), g.cut_vertices(&body));
    }
}
