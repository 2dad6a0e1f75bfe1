//! Definitions checked by exhaustive search, for graphs with few edges.

use sigcover_core::circuit::CircuitKind;
use sigcover_core::graph::SignedGraph;

pub fn verts(g: &SignedGraph, s: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = s.iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn degree(g: &SignedGraph, s: &[usize], v: usize) -> usize {
    s.iter()
        .map(|&e| (g.edge(e).u == v) as usize + (g.edge(e).v == v) as usize)
        .sum()
}

pub fn connected(g: &SignedGraph, s: &[usize]) -> bool {
    let vs = verts(g, s);
    if vs.is_empty() {
        return true;
    }
    let mut seen = vec![vs[0]];
    loop {
        let before = seen.len();
        for &e in s {
            let (u, v) = (g.edge(e).u, g.edge(e).v);
            if seen.contains(&u) && !seen.contains(&v) {
                seen.push(v);
            } else if seen.contains(&v) && !seen.contains(&u) {
                seen.push(u);
            }
        }
        if seen.len() == before {
            return seen.len() == vs.len();
        }
    }
}

pub fn negatives(g: &SignedGraph, s: &[usize]) -> usize {
    s.iter().filter(|&&e| g.is_negative(e)).count()
}

pub fn members(mask: u32, m: usize) -> Vec<usize> {
    (0..m).filter(|&e| mask >> e & 1 == 1).collect()
}

/// Brute force: every circuit of `g` as an edge mask.
pub fn circuits(g: &SignedGraph) -> Vec<u32> {
    let m = g.edge_count();
    (1u32..1 << m)
        .filter(|&mask| {
            let s = members(mask, m);
            connected(g, &s) && verts(g, &s).iter().all(|&v| degree(g, &s, v) == 2)
        })
        .collect()
}

/// Kind of signed circuit `mask` is, straight from the definitions.
pub fn kind_of(g: &SignedGraph, all: &[u32], mask: u32) -> Option<CircuitKind> {
    let m = g.edge_count();
    if all.contains(&mask) {
        return (negatives(g, &members(mask, m)) % 2 == 0).then_some(CircuitKind::BalancedCircuit);
    }
    let odd: Vec<u32> = all
        .iter()
        .copied()
        .filter(|&c| c & mask == c && negatives(g, &members(c, m)) % 2 == 1)
        .collect();
    for (i, &c1) in odd.iter().enumerate() {
        for &c2 in &odd[i + 1..] {
            if c1 & c2 != 0 {
                continue;
            }
            let (v1, v2) = (verts(g, &members(c1, m)), verts(g, &members(c2, m)));
            let shared = v1.iter().filter(|v| v2.contains(v)).count();
            let p = members(mask & !(c1 | c2), m);
            if p.is_empty() {
                if shared == 1 {
                    return Some(CircuitKind::ShortBarbell);
                }
                continue;
            }
            let pv = verts(g, &p);
            let ends: Vec<usize> = pv.iter().copied().filter(|&v| degree(g, &p, v) == 1).collect();
            let is_path = shared == 0
                && connected(g, &p)
                && pv.len() == p.len() + 1
                && ends.len() == 2
                && pv.iter().all(|&v| degree(g, &p, v) <= 2);
            if !is_path {
                continue;
            }
            let on1: Vec<usize> = pv.iter().copied().filter(|v| v1.contains(v)).collect();
            let on2: Vec<usize> = pv.iter().copied().filter(|v| v2.contains(v)).collect();
            if on1.len() == 1 && on2.len() == 1 && ends.contains(&on1[0]) && ends.contains(&on2[0]) {
                return Some(CircuitKind::LongBarbell);
            }
        }
    }
    None
}

/// Minimum total length of a family of the given edge masks covering all
/// `m` edges, by dynamic programming over the uncovered set.
pub fn min_cover(m: usize, sets: &[u32]) -> Option<usize> {
    let full = (1usize << m) - 1;
    let mut best: Vec<Option<usize>> = vec![None; full + 1];
    best[0] = Some(0);
    for rest in 1..=full {
        let low = rest.trailing_zeros();
        best[rest] = sets
            .iter()
            .filter(|&&c| c >> low & 1 == 1)
            .filter_map(|&c| Some(best[rest & !(c as usize)]? + c.count_ones() as usize))
            .min();
    }
    best[full]
}

/// Every signed circuit of `g` as an edge mask.
pub fn signed_circuits(g: &SignedGraph) -> Vec<u32> {
    let all = circuits(g);
    (1u32..1 << g.edge_count())
        .filter(|&mask| kind_of(g, &all, mask).is_some())
        .collect()
}
