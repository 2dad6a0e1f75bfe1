//! Trees of circuits: the closed tour that walks every circuit once and
//! every bridge twice, trail windows between circuits and the barbell
//! covers built from them.

use alloc::vec;
use alloc::vec::Vec;

use super::{audit_full, audit_three, empty_three, single, split_positive_loops, Step};
use crate::circuit::{circuit_order, circuit_walk, CircuitKind, Cover, Scope, SignedCircuit};
use crate::edgeset::EdgeSet;
use crate::error::{construction, precondition, Result};
use crate::graph::{EdgeId, SignedGraph, VertexId};
use crate::signature::is_balanced;

/// A tree of circuits without positive loops, with its tour.
pub(crate) struct CircuitTree {
    pub circuits: Vec<EdgeSet>,
    pub unbalanced: Vec<bool>,
    /// Loops, circuits of valency 1 and circuits whose attachments all sit
    /// at one vertex.
    pub leaf_like: Vec<bool>,
    pub valency: Vec<usize>,
    masks: Vec<Vec<bool>>,
    steps: Vec<Step>,
    first: Vec<usize>,
}

impl CircuitTree {
    pub fn new(g: &SignedGraph, h: &EdgeSet) -> Result<Self> {
        if h.is_empty() || !g.is_connected(h) {
            return Err(precondition!("a tree of circuits must be connected and non-empty"));
        }
        let n = g.vertex_count();
        let bridges = g.bridges(h);
        let rest = h.difference(&bridges);
        let loops = g.loops(&rest);
        if loops.iter().any(|l| !g.is_negative(l)) {
            return Err(precondition!("positive loops must be removed first"));
        }
        let body = rest.difference(&loops);
        let mut circuits: Vec<EdgeSet> = loops.iter().map(|l| [l].into_iter().collect()).collect();
        let mut circuit_at = vec![usize::MAX; n];
        for comp in g.components(&body) {
            if circuit_order(g, &comp).is_none() {
                return Err(precondition!("not a tree of circuits"));
            }
            for v in g.vertices_of(&comp) {
                circuit_at[v] = circuits.len();
            }
            circuits.push(comp);
        }
        let mut loops_at: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        for l in &loops {
            loops_at[g.edge(l).u].push(l);
        }
        let bridge_adj = g.adjacency(&bridges);

        let mut tour = Tour {
            g,
            circuits: &circuits,
            circuit_at: &circuit_at,
            loops_at: &loops_at,
            bridge_adj: &bridge_adj,
            seen: vec![false; n],
            used_bridge: EdgeSet::new(),
            done_circuit: vec![false; circuits.len()],
            steps: Vec::new(),
        };
        let root = g.vertices_of(h)[0];
        tour.explore(root);
        let steps = tour.steps;
        if steps.len() != loops.len() + body.len() + 2 * bridges.len() {
            return Err(construction!("tour does not traverse the tree of circuits"));
        }

        let mut first = vec![usize::MAX; circuits.len()];
        let mut owner = vec![usize::MAX; g.edge_count()];
        for (i, c) in circuits.iter().enumerate() {
            for e in c {
                owner[e] = i;
            }
        }
        for (pos, &(e, _, _)) in steps.iter().enumerate() {
            let c = owner[e];
            if c != usize::MAX && first[c] == usize::MAX {
                first[c] = pos;
            }
        }

        let mut unbalanced = Vec::new();
        let mut leaf_like = Vec::new();
        let mut valency = Vec::new();
        let masks: Vec<Vec<bool>> = circuits.iter().map(|c| g.vertex_mask(c)).collect();
        for (i, c) in circuits.iter().enumerate() {
            unbalanced.push(!is_balanced(g, c));
            if i < loops.len() {
                leaf_like.push(true);
                valency.push(1);
                continue;
            }
            let mut attach = Vec::new();
            let mut val = 0;
            for v in g.vertices_of(c) {
                let k = loops_at[v].len() + bridge_adj[v].len();
                val += k;
                if k > 0 {
                    attach.push(v);
                }
            }
            valency.push(val);
            leaf_like.push(attach.len() <= 1);
        }
        Ok(Self {
            circuits,
            unbalanced,
            leaf_like,
            valency,
            masks,
            steps,
            first,
        })
    }

    /// Indices of the circuits selected by `keep`, by first traversal.
    pub fn ordered(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.circuits.len()).filter(|&i| keep(i)).collect();
        idx.sort_by_key(|&i| self.first[i]);
        idx
    }

    fn vertex_at(&self, pos: usize) -> VertexId {
        self.steps[pos % self.steps.len()].1
    }

    /// Shortest stretch of the tour between the first traversals of `s` and
    /// `t` that starts on `C_s` and ends on `C_t`, with closed sub-walks cut
    /// out. Returns the remaining path and the cut-out closed walks.
    pub fn window(&self, s: usize, t: usize) -> (Vec<EdgeId>, Vec<EdgeSet>) {
        let len = self.steps.len();
        let start = self.first[s];
        let mut end = self.first[t];
        if end <= start {
            end += len;
        }
        let (ms, mt) = (&self.masks[s], &self.masks[t]);
        let mut best: Option<(usize, usize)> = None;
        for a in start..=end {
            if !ms[self.vertex_at(a)] {
                continue;
            }
            if let Some(b) = (a..=end).find(|&b| mt[self.vertex_at(b)]) {
                if best.is_none_or(|(x, y)| b - a < y - x) {
                    best = Some((a, b));
                }
            }
        }
        let (a, b) = best.expect("the first traversal of C_t lies on C_t");
        let mut verts = vec![self.vertex_at(a)];
        let mut path: Vec<EdgeId> = Vec::new();
        let mut chunks = Vec::new();
        for i in a..b {
            let (e, _, to) = self.steps[i % len];
            if let Some(k) = verts.iter().position(|&x| x == to) {
                let mut chunk: EdgeSet = path[k..].iter().copied().collect();
                chunk.insert(e);
                chunks.push(chunk);
                verts.truncate(k + 1);
                path.truncate(k);
            } else {
                verts.push(to);
                path.push(e);
            }
        }
        (path, chunks)
    }

    pub fn barbell(&self, g: &SignedGraph, s: usize, t: usize, path: &[EdgeId]) -> Result<SignedCircuit> {
        let mut edges = self.circuits[s].union(&self.circuits[t]);
        edges.extend(path.iter().copied());
        let el = SignedCircuit::from_edges(g, edges).map_err(|why| construction!("window barbell invalid: {why}"))?;
        if !el.is_barbell() {
            return Err(construction!("window barbell is a balanced circuit"));
        }
        Ok(el)
    }
}

struct Tour<'a> {
    g: &'a SignedGraph,
    circuits: &'a [EdgeSet],
    circuit_at: &'a [usize],
    loops_at: &'a [Vec<EdgeId>],
    bridge_adj: &'a [Vec<(EdgeId, VertexId)>],
    seen: Vec<bool>,
    used_bridge: EdgeSet,
    done_circuit: Vec<bool>,
    steps: Vec<Step>,
}

impl Tour<'_> {
    /// At `v`: its loops, then each unexplored bridge down and back, then
    /// its circuit, exploring every vertex met on the way.
    fn explore(&mut self, v: VertexId) {
        self.seen[v] = true;
        let loops_at = self.loops_at;
        for &l in &loops_at[v] {
            self.steps.push((l, v, v));
        }
        let bridge_adj = self.bridge_adj;
        for &(b, w) in &bridge_adj[v] {
            if self.used_bridge.insert(b) {
                self.steps.push((b, v, w));
                self.explore(w);
                self.steps.push((b, w, v));
            }
        }
        let c = self.circuit_at[v];
        if c != usize::MAX && !self.done_circuit[c] {
            self.done_circuit[c] = true;
            let circuits = self.circuits;
            let (_, walk) = circuit_walk(self.g, &circuits[c], Some(v)).expect("component is a circuit");
            for (e, from, to) in walk {
                self.steps.push((e, from, to));
                if !self.seen[to] {
                    self.explore(to);
                }
            }
        }
    }
}

/// Barbells between consecutive leaf-like unbalanced circuits in tour order,
/// plus the balanced circuits cut out of the windows.
fn leaf_barbells(g: &SignedGraph, t: &CircuitTree) -> Result<Cover> {
    let mut cover = Cover::new(Scope::Full);
    for i in 0..t.circuits.len() {
        if !t.unbalanced[i] && t.valency[i] == 1 {
            return Err(precondition!("leaf circuit is balanced"));
        }
    }
    let leaves = t.ordered(|i| t.unbalanced[i] && t.leaf_like[i]);
    if leaves.len() < 2 {
        return Err(precondition!("fewer than two unbalanced leaf circuits"));
    }
    for k in 0..leaves.len() {
        let (s, u) = (leaves[k], leaves[(k + 1) % leaves.len()]);
        let (path, chunks) = t.window(s, u);
        cover.push(t.barbell(g, s, u, &path)?);
        for chunk in chunks {
            let el = SignedCircuit::from_edges(g, chunk).map_err(|why| construction!("cut-out walk: {why}"))?;
            if el.kind != CircuitKind::BalancedCircuit {
                return Err(construction!("cut-out walk is not a balanced circuit"));
            }
            cover.push(el);
        }
    }
    // a balanced circuit hanging at a single vertex right after a leaf loop
    // is skipped by every window
    let covered = cover.covered();
    for i in 0..t.circuits.len() {
        if !t.unbalanced[i] && t.circuits[i].is_disjoint(&covered) {
            let el = SignedCircuit::from_edges(g, t.circuits[i].clone()).map_err(|why| construction!("{why}"))?;
            cover.push(el);
        }
    }
    Ok(cover)
}

/// Full cover of a tree of circuits whose leaf circuits are unbalanced, by
/// barbells joining consecutive leaf circuits along the tour. Leaf circuits
/// and bridges get width 2, other circuits width 1 (an unbalanced circuit
/// whose attachments all sit at one vertex is treated as a leaf).
pub fn leaf_cover(g: &SignedGraph, h: &EdgeSet) -> Result<Cover> {
    let cover = leaf_rec(g, h)?;
    audit_full(g, h, &cover)?;
    Ok(cover)
}

pub(crate) fn leaf_rec(g: &SignedGraph, h: &EdgeSet) -> Result<Cover> {
    let (pos, rest) = split_positive_loops(g, h);
    let mut cover = Cover::new(Scope::Full);
    for l in &pos {
        cover.push(single(g, l)?);
    }
    if !rest.is_empty() {
        let bridges = g.bridges(&rest);
        if bridges.is_empty() && circuit_order(g, &rest).is_some() && is_balanced(g, &rest) {
            cover.push(SignedCircuit::from_edges(g, rest.clone()).map_err(|why| construction!("{why}"))?);
        } else {
            let t = CircuitTree::new(g, &rest)?;
            cover.absorb(leaf_barbells(g, &t)?);
        }
    }
    Ok(cover)
}

/// Three weak covers of a tree of circuits with an even number of
/// unbalanced circuits: total width at most 4, the first covering every
/// negative loop exactly twice.
pub fn three_weak_covers_circuits(g: &SignedGraph, h: &EdgeSet) -> Result<[Cover; 3]> {
    let covers = three_rec(g, h)?;
    audit_three(g, h, &covers)?;
    Ok(covers)
}

pub(crate) fn three_rec(g: &SignedGraph, h: &EdgeSet) -> Result<[Cover; 3]> {
    let (pos, rest) = split_positive_loops(g, h);
    let mut out = empty_three();
    for l in &pos {
        let el = single(g, l)?;
        for c in out.iter_mut() {
            c.push(el.clone());
        }
    }
    if rest.is_empty() {
        return Ok(out);
    }
    if is_balanced(g, &rest) {
        let bridges = g.bridges(&rest);
        for comp in g.components(&rest.difference(&bridges)) {
            let el =
                SignedCircuit::from_edges(g, comp).map_err(|why| precondition!("not a tree of circuits: {why}"))?;
            for c in out.iter_mut() {
                c.push(el.clone());
            }
        }
        return Ok(out);
    }
    // a bridge with a balanced side splits the problem
    for b in &g.bridges(&rest) {
        let mut without = rest.clone();
        without.remove(b);
        let sides = g.components(&without);
        let ed = g.edge(b);
        let balanced_end = [ed.u, ed.v].into_iter().any(|x| {
            sides
                .iter()
                .find(|s| g.vertex_mask(s)[x])
                .is_none_or(|s| is_balanced(g, s))
        });
        if balanced_end {
            for side in sides {
                let part = three_rec(g, &side)?;
                for (a, p) in out.iter_mut().zip(part) {
                    a.absorb(p);
                }
            }
            return Ok(out);
        }
    }
    let t = CircuitTree::new(g, &rest)?;
    let unb = t.ordered(|i| t.unbalanced[i]);
    if unb.len() % 2 == 1 {
        return Err(precondition!("odd number of unbalanced circuits"));
    }
    out[0].absorb(leaf_barbells(g, &t)?);
    let u = unb.len();
    for k in 0..u {
        let (s, r) = (unb[k], unb[(k + 1) % u]);
        let (path, chunks) = t.window(s, r);
        for chunk in &chunks {
            if !is_balanced(g, chunk) {
                return Err(construction!("cut-out walk between unbalanced circuits is unbalanced"));
            }
        }
        out[1 + k % 2].push(t.barbell(g, s, r, &path)?);
    }
    for i in t.ordered(|i| !t.unbalanced[i]) {
        let el = SignedCircuit::from_edges(g, t.circuits[i].clone()).map_err(|why| construction!("{why}"))?;
        out[1].push(el.clone());
        out[2].push(el);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::{self, Negative as N, Positive as P};

    fn g(n: usize, e: &[(usize, usize, Sign)]) -> SignedGraph {
        SignedGraph::from_edges(n, e).unwrap()
    }

    #[test]
    fn balanced_circuit_covers_itself() {
        let sq = g(4, &[(0, 1, P), (1, 2, N), (2, 3, N), (3, 0, P)]);
        let c = leaf_cover(&sq, &sq.all_edges()).unwrap();
        assert_eq!(c.elements.len(), 1);
        let three = three_weak_covers_circuits(&sq, &sq.all_edges()).unwrap();
        assert!(three.iter().all(|c| c.length() == 4));
    }

    #[test]
    fn long_barbell_two_copies() {
        let h = g(3, &[(0, 0, N), (0, 1, P), (1, 2, P), (2, 2, N)]);
        let c = leaf_cover(&h, &h.all_edges()).unwrap();
        assert_eq!(c.elements.len(), 2);
        assert_eq!(c.elements[0].edges, c.elements[1].edges);
        assert_eq!(c.widths(4), [2, 2, 2, 2]);
    }

    #[test]
    fn three_leaves_around_inner_triangle() {
        // inner unbalanced triangle 0-1-2, leaf triangles hanging off each corner
        let mut e = vec![(0, 1, N), (1, 2, P), (2, 0, P)];
        for (k, base) in [(0usize, 3usize), (1, 6), (2, 9)] {
            e.push((k, base, P));
            e.extend([(base, base + 1, N), (base + 1, base + 2, P), (base + 2, base, P)]);
        }
        let h = g(12, &e);
        let c = leaf_cover(&h, &h.all_edges()).unwrap();
        assert_eq!(c.elements.len(), 3);
        let w = c.widths(h.edge_count());
        assert!(w[..3].iter().all(|&x| x == 1));
        assert!(w[3..].iter().all(|&x| x == 2));
    }

    #[test]
    fn two_loops_at_a_vertex() {
        let h = g(1, &[(0, 0, N), (0, 0, N)]);
        let [c1, c2, c3] = three_weak_covers_circuits(&h, &h.all_edges()).unwrap();
        assert_eq!(c1.widths(2), [2, 2]);
        assert_eq!(c2.elements.len(), 1);
        assert_eq!(c3.elements.len(), 1);
    }

    #[test]
    fn four_triangles_on_a_path() {
        let mut e = Vec::new();
        for k in 0..4 {
            let b = 3 * k;
            e.extend([(b, b + 1, N), (b + 1, b + 2, P), (b + 2, b, P)]);
            if k > 0 {
                e.push((b - 1, b, P));
            }
        }
        let h = g(12, &e);
        let covers = three_weak_covers_circuits(&h, &h.all_edges()).unwrap();
        let m = h.edge_count();
        let w: Vec<usize> = (0..m).map(|i| covers.iter().map(|c| c.widths(m)[i]).sum()).collect();
        assert!(w.iter().all(|&x| x <= 4));
    }

    #[test]
    fn pseudo_leaf_and_cut_out_circuit() {
        // unbalanced triangle A at 0 with two leaf loops hanging by bridges
        // from 0, plus a balanced triangle hanging from vertex 3 with a loop
        let h = g(
            8,
            &[
                (0, 1, N),
                (1, 2, P),
                (2, 0, P),
                (0, 3, P),
                (3, 3, N),
                (0, 4, P),
                (4, 4, N),
                (3, 5, P),
                (5, 6, P),
                (6, 3, P),
            ],
        );
        let c = leaf_cover(&h, &h.all_edges()).unwrap();
        let w = c.widths(h.edge_count());
        assert_eq!(&w[..3], [2, 2, 2]);
        assert_eq!(&w[7..], [1, 1, 1]);
        three_weak_covers_circuits(&h, &h.all_edges()).unwrap_err();
    }

    #[test]
    fn odd_unbalanced_count_rejected() {
        let tri = g(3, &[(0, 1, N), (1, 2, P), (2, 0, P)]);
        assert!(three_weak_covers_circuits(&tri, &tri.all_edges()).is_err());
        assert!(leaf_cover(&tri, &tri.all_edges()).is_err());
    }
}
