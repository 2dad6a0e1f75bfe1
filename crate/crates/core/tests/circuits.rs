mod common;

use common::brute::{circuits, degree, kind_of, members, verts};
use common::{config, small_graph, tree_with_chords};
use proptest::prelude::*;
use sigcover_core::circuit::{
    barbell_on_cut_pair, is_flow_admissible, pair_circuit, CircuitKind, FundamentalSystem, SignedCircuit,
};
use sigcover_core::edgeset::EdgeSet;
use sigcover_core::graph::SignedGraph;
use sigcover_core::pipeline::prime_classes;
use sigcover_core::verify::classify_element;

proptest! {
    #![proptest_config(config(150))]

    #[test]
    fn classification_matches_the_definitions(g in small_graph(6, 9)) {
        let m = g.edge_count();
        let all = circuits(&g);
        for mask in 1u32..1 << m {
            let s = members(mask, m);
            let want = kind_of(&g, &all, mask);
            let got = classify_element(&g, &s).ok();
            prop_assert_eq!(got, want, "edges {:?} in\n{}", s, g.to_text());
            let set: EdgeSet = s.iter().copied().collect();
            prop_assert_eq!(SignedCircuit::from_edges(&g, set).ok().map(|c| c.kind), want);
        }
    }

    #[test]
    fn flow_admissible_iff_every_edge_is_in_a_signed_circuit(g in small_graph(6, 9)) {
        let m = g.edge_count();
        let all = circuits(&g);
        let mut reach = 0u32;
        for mask in 1u32..1 << m {
            if kind_of(&g, &all, mask).is_some() {
                reach |= mask;
            }
        }
        let want = reach == (1u32 << m) - 1;
        prop_assert_eq!(is_flow_admissible(&g), want, "\n{}", g.to_text());
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn fundamental_circuits(g in tree_with_chords(10, 8)) {
        let all = g.all_edges();
        let fs = FundamentalSystem::new(&g, &all).unwrap();
        for &x in &fs.negatives {
            let c = fs.circuit(x);
            prop_assert_eq!(g.negative_count(c), 1);
            prop_assert!(c.contains(x));
            let kind = SignedCircuit::from_edges(&g, c.clone()).err();
            prop_assert!(kind.is_some(), "a lone unbalanced circuit is not a signed circuit");
            prop_assert!(verts(&g, &c.to_vec()).iter().all(|&v| degree(&g, &c.to_vec(), v) == 2));
        }
        for (i, &x) in fs.negatives.iter().enumerate() {
            for &y in &fs.negatives[i + 1..] {
                let (cx, cy) = (fs.circuit(x), fs.circuit(y));
                if !cx.is_disjoint(cy) {
                    // two tree paths overlap in a path, so the sum is one circuit
                    let c = SignedCircuit::from_edges(&g, fs.sym_diff(&[x, y])).unwrap();
                    prop_assert_eq!(c.kind, CircuitKind::BalancedCircuit);
                } else if !fs.meet(&g, x, y) {
                    let b = barbell_on_cut_pair(&g, &fs, x, y, &[]).unwrap();
                    prop_assert!(b.is_some());
                    let b = b.unwrap();
                    prop_assert!(cx.union(cy).is_subset(&b.edges));
                    prop_assert!(b.path.is_subset(&fs.tree));
                }
                if let Some(p) = pair_circuit(&g, &fs, x, y) {
                    prop_assert!(p.edges.is_subset(&all));
                    prop_assert!(p.contains(x) && p.contains(y));
                    prop_assert!(classify_element(&g, &p.edges.to_vec()).is_ok());
                }
            }
        }
    }

    #[test]
    fn sums_of_fundamental_circuits(g in tree_with_chords(10, 8), pick in any::<u64>()) {
        let all = g.all_edges();
        let fs = FundamentalSystem::new(&g, &all).unwrap();
        let a: Vec<usize> = fs.negatives.iter().copied().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, x)| x).collect();
        let c = fs.sym_diff(&a);
        let d = fs.union(&a);
        prop_assert!(c.is_subset(&d));
        prop_assert_eq!(g.negative_edges(&c), a.iter().copied().collect::<EdgeSet>());
        let s = c.to_vec();
        prop_assert!(verts(&g, &s).iter().all(|&v| degree(&g, &s, v) % 2 == 0));
    }

    #[test]
    fn sums_of_two_fundamental_circuits(g in tree_with_chords(9, 6)) {
        let all = g.all_edges();
        let fs = FundamentalSystem::new(&g, &all).unwrap();
        let classes = prime_classes(&g, &all).unwrap();
        let bridges = g.bridges(&all);
        let base = g.components(&all).len();
        for &x in &fs.negatives {
            let partners: EdgeSet = fs
                .tree
                .iter()
                .filter(|&s| !bridges.contains(s) && !bridges.contains(x) && {
                    let mut rest = all.clone();
                    rest.remove(s);
                    rest.remove(x);
                    components_with_isolated(&g, &rest) > base
                })
                .collect();
            prop_assert_eq!(&classes.s_by[&x], &partners, "S' of {} in\n{}", x, g.to_text());
        }
        let xs = &fs.negatives;
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        subsets.extend(xs.iter().map(|&x| vec![x]));
        for (i, &x) in xs.iter().enumerate() {
            subsets.extend(xs[i + 1..].iter().map(|&y| vec![x, y]));
        }
        for a in subsets {
            let c = fs.sym_diff(&a);
            for x in &a {
                prop_assert!(c.contains(*x));
                prop_assert!(classes.s_by[x].is_subset(&c));
            }
            if a.len() == 2 {
                let signed = classify_element(&g, &c.to_vec()).ok();
                let ok = matches!(signed, Some(CircuitKind::BalancedCircuit | CircuitKind::ShortBarbell))
                    || two_disjoint_unbalanced_circuits(&g, &c);
                prop_assert!(ok, "C_{:?} in\n{}", a, g.to_text());
            }
        }
    }
}

/// Components of the graph on all vertices, isolated ones included.
fn components_with_isolated(g: &SignedGraph, edges: &EdgeSet) -> usize {
    let deg = g.degrees(edges);
    g.components(edges).len() + deg.iter().filter(|&&d| d == 0).count()
}

fn two_disjoint_unbalanced_circuits(g: &SignedGraph, c: &EdgeSet) -> bool {
    let parts = g.components(c);
    parts.len() == 2
        && parts.iter().all(|p| {
            let s = p.to_vec();
            g.negative_count(p) % 2 == 1 && verts(g, &s).iter().all(|&v| degree(g, &s, v) == 2)
        })
}
