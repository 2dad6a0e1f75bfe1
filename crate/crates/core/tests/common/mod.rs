#![allow(dead_code)]

pub mod brute;

use proptest::prelude::*;
use sigcover_core::graph::{Sign, SignedGraph};

pub fn sign(neg: bool) -> Sign {
    if neg {
        Sign::Negative
    } else {
        Sign::Positive
    }
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        max_global_rejects: 1 << 20,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Random multigraph on `1..=max_n` vertices with loops and parallel edges.
pub fn small_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, any::<bool>()), n..=max_m.max(n)).prop_map(move |e| {
            let e: Vec<_> = e.into_iter().map(|(u, v, s)| (u, v, sign(s))).collect();
            SignedGraph::from_edges(n, &e).unwrap()
        })
    })
}

/// Random loopless multigraph.
pub fn loopless_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = SignedGraph> {
    small_graph(max_n, max_m).prop_map(|g| {
        let e: Vec<_> = g
            .edges()
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| (e.u, e.v, e.sign))
            .collect();
        SignedGraph::from_edges(g.vertex_count(), &e).unwrap()
    })
}

/// A random recursive tree of positive edges plus negative chords and
/// loops.
pub fn tree_with_chords(max_n: usize, max_chords: usize) -> impl Strategy<Value = SignedGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec((0..n, 0..n), 2..=max_chords),
        )
            .prop_map(move |(parents, chords)| {
                let mut e = Vec::new();
                for v in 1..n {
                    e.push((parents[v - 1].index(v), v, Sign::Positive));
                }
                for (u, v) in chords {
                    e.push((u, v, Sign::Negative));
                }
                SignedGraph::from_edges(n, &e).unwrap()
            })
    })
}

#[derive(Clone, Debug)]
pub enum Piece {
    Loop,
    /// A circuit of the given length with the given signs.
    Circuit(Vec<bool>),
    /// A circuit plus a second circuit through two of its vertices.
    Theta(Vec<bool>, Vec<bool>),
}

fn piece() -> impl Strategy<Value = Piece> {
    prop_oneof![
        1 => Just(Piece::Loop),
        3 => prop::collection::vec(any::<bool>(), 2..5).prop_map(Piece::Circuit),
        1 => (prop::collection::vec(any::<bool>(), 3..5), prop::collection::vec(any::<bool>(), 2..4))
            .prop_map(|(a, b)| Piece::Theta(a, b)),
    ]
}

/// A tree of Eulerian graphs: pieces glued at a vertex or hung on a bridge.
pub fn euler_tree(max_pieces: usize) -> impl Strategy<Value = SignedGraph> {
    prop::collection::vec(
        (piece(), any::<prop::sample::Index>(), any::<bool>(), any::<bool>()),
        1..=max_pieces,
    )
    .prop_map(|pieces| {
        let mut g = SignedGraph::new(1);
        for (p, at, bridge, bridge_sign) in pieces {
            let mut a = at.index(g.vertex_count());
            if bridge {
                let b = g.add_vertex();
                g.add_edge(a, b, sign(bridge_sign)).unwrap();
                a = b;
            }
            match p {
                Piece::Loop => {
                    g.add_edge(a, a, Sign::Negative).unwrap();
                }
                Piece::Circuit(signs) => {
                    cycle(&mut g, a, &signs);
                }
                Piece::Theta(first, second) => {
                    let verts = cycle(&mut g, a, &first);
                    let (p, q) = (verts[0], verts[verts.len() / 2]);
                    path(&mut g, p, q, &second[..1]);
                    path(&mut g, q, p, &second[1..]);
                }
            }
        }
        g
    })
}

fn cycle(g: &mut SignedGraph, a: usize, signs: &[bool]) -> Vec<usize> {
    let mut verts = vec![a];
    for _ in 1..signs.len() {
        verts.push(g.add_vertex());
    }
    for i in 0..signs.len() {
        g.add_edge(verts[i], verts[(i + 1) % verts.len()], sign(signs[i]))
            .unwrap();
    }
    verts
}

fn path(g: &mut SignedGraph, p: usize, q: usize, signs: &[bool]) {
    let mut cur = p;
    for (i, &s) in signs.iter().enumerate() {
        let next = if i + 1 == signs.len() { q } else { g.add_vertex() };
        g.add_edge(cur, next, sign(s)).unwrap();
        cur = next;
    }
}
