//! Switching, balance and minimum signatures.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Sign, SignedGraph, VertexId};

/// Exhaustive switching search is used up to this many vertices per
/// component; larger components go through budgeted branch and bound.
pub const EXACT_SWITCH_LIMIT: usize = 24;

/// Node budget of the branch and bound used above [`EXACT_SWITCH_LIMIT`].
pub const BRANCH_BUDGET: u64 = 20_000_000;

/// A switching set: the signs of non-loop edges with exactly one end in the
/// set are negated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Switching {
    vertices: Vec<VertexId>,
}

impl Switching {
    pub fn new(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.vertices {
            m[v] = true;
        }
        m
    }
}

pub fn apply_switching(g: &SignedGraph, s: &Switching) -> Result<SignedGraph> {
    if let Some(&v) = s.vertices.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::Structural(format!("switching references unknown vertex {v}")));
    }
    let inside = s.mask(g.vertex_count());
    let mut out = g.clone();
    for e in 0..g.edge_count() {
        let ed = g.edge(e);
        if inside[ed.u] != inside[ed.v] {
            out.set_sign(e, ed.sign.flip());
        }
    }
    Ok(out)
}

/// Vertex potentials `p` with `σ(uv) = p(u)·p(v)` on a spanning forest of
/// the subgraph, or `None` if some edge is inconsistent. Positive loops are
/// consistent, negative loops never are.
fn potentials(g: &SignedGraph, edges: &EdgeSet) -> Option<Vec<bool>> {
    let adj = g.adjacency(edges);
    let mut side: Vec<Option<bool>> = vec![None; g.vertex_count()];
    for s in g.vertices_of(edges) {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let sv = side[v].unwrap();
            for &(e, w) in &adj[v] {
                let want = sv ^ g.is_negative(e);
                match side[w] {
                    None => {
                        side[w] = Some(want);
                        stack.push(w);
                    }
                    Some(sw) if sw != want => return None,
                    _ => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.unwrap_or(false)).collect())
}

/// True iff every circuit of the subgraph has an even number of negative
/// edges.
pub fn is_balanced(g: &SignedGraph, edges: &EdgeSet) -> bool {
    potentials(g, edges).is_some()
}

/// A switching that makes a balanced subgraph all-positive.
pub fn balancing_switching(g: &SignedGraph, edges: &EdgeSet) -> Option<Switching> {
    let side = potentials(g, edges)?;
    Some(Switching::new((0..g.vertex_count()).filter(|&v| side[v]).collect()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureStats {
    pub eps: usize,
    pub eps_tilde: usize,
}

pub fn signature_stats(g: &SignedGraph, edges: &EdgeSet) -> SignatureStats {
    let bridges = g.bridges(edges);
    SignatureStats {
        eps: g.negative_count(edges),
        eps_tilde: edges
            .iter()
            .filter(|&e| g.is_negative(e) && !bridges.contains(e))
            .count(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimumSignature {
    pub graph: SignedGraph,
    pub switching: Switching,
    pub eps_n: usize,
}

/// Minimum signature of the whole graph, component by component.
///
/// Within a component the first vertex is never switched; among optimal
/// switchings the one with the smallest bitmask (bit `i` = `i`-th vertex of
/// the component after the first) is returned. Components above
/// [`EXACT_SWITCH_LIMIT`] vertices are solved by branch and bound and yield
/// [`Error::InexactSignature`] if the budget runs out.
pub fn minimum_signature(g: &SignedGraph) -> Result<MinimumSignature> {
    minimum_signature_with(g, EXACT_SWITCH_LIMIT, BRANCH_BUDGET)
}

pub fn minimum_signature_with(g: &SignedGraph, exact_limit: usize, budget: u64) -> Result<MinimumSignature> {
    let mut switched: Vec<VertexId> = Vec::new();
    for comp in g.components(&g.all_edges()) {
        let verts = g.vertices_of(&comp);
        let fixed_loops = comp.iter().filter(|&e| g.is_loop(e) && g.is_negative(e)).count();
        let body: Vec<EdgeId> = comp.iter().filter(|&e| !g.is_loop(e)).collect();
        if verts.len() > 64 {
            return Err(Error::LimitExceeded(format!(
                "component with {} vertices is beyond the switching search",
                verts.len()
            )));
        }
        let (mask, _) = if verts.len() <= exact_limit {
            exhaustive(g, &verts, &body)
        } else {
            branch_and_bound(g, &verts, &body, budget).map_err(|best| Error::InexactSignature {
                best: best + fixed_loops,
            })?
        };
        for (i, &v) in verts.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                switched.push(v);
            }
        }
    }
    let switching = Switching::new(switched);
    let graph = apply_switching(g, &switching)?;
    let eps_n = graph.negative_count(&graph.all_edges());
    Ok(MinimumSignature {
        graph,
        switching,
        eps_n,
    })
}

/// Gray-code enumeration over all switchings of `verts[1..]`.
fn exhaustive(g: &SignedGraph, verts: &[VertexId], body: &[EdgeId]) -> (u64, usize) {
    let k = verts.len();
    if k <= 1 {
        return (0, 0);
    }
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let mut inc: Vec<Vec<EdgeId>> = vec![Vec::new(); k];
    for &e in body {
        let ed = g.edge(e);
        inc[local[ed.u]].push(e);
        inc[local[ed.v]].push(e);
    }
    let mut neg: Vec<bool> = (0..g.edge_count()).map(|e| g.is_negative(e)).collect();
    let mut count = body.iter().filter(|&&e| neg[e]).count();
    let (mut best, mut best_mask) = (count, 0u64);
    let mut mask = 0u64;
    let total: u64 = 1 << (k - 1);
    for step in 1..total {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        for &e in &inc[bit + 1] {
            if neg[e] {
                count -= 1;
            } else {
                count += 1;
            }
            neg[e] = !neg[e];
        }
        if count < best || (count == best && mask < best_mask) {
            best = count;
            best_mask = mask;
        }
    }
    (best_mask, best)
}

/// Depth-first branch and bound over vertex sides in component order. The
/// bound counts negative edges between already assigned vertices.
fn branch_and_bound(
    g: &SignedGraph,
    verts: &[VertexId],
    body: &[EdgeId],
    budget: u64,
) -> core::result::Result<(u64, usize), usize> {
    let k = verts.len();
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    // back[i]: edges from vertex i to vertices with smaller index, with sign.
    let mut back: Vec<Vec<(usize, bool)>> = vec![Vec::new(); k];
    for &e in body {
        let (a, b) = (local[g.edge(e).u], local[g.edge(e).v]);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        back[hi].push((lo, g.is_negative(e)));
    }
    let (best_mask, best) = greedy_start(&back, k);
    let mut state = Bnb {
        back: &back,
        side: vec![false; k],
        best,
        best_mask,
        nodes: 0,
        budget,
    };
    let exhausted = !state.search(1, 0);
    if exhausted {
        Err(state.best)
    } else {
        Ok((state.best_mask, state.best))
    }
}

/// Place each vertex on the side that minimises negatives towards the
/// already placed ones.
fn greedy_start(back: &[Vec<(usize, bool)>], k: usize) -> (u64, usize) {
    let mut side = vec![false; k];
    let mut total = 0;
    let mut mask = 0u64;
    for i in 0..k {
        let cost = |side: &[bool], s: bool| back[i].iter().filter(|&&(j, neg)| neg ^ s ^ side[j]).count();
        let (pos, neg) = (cost(&side, false), cost(&side, true));
        let s = i > 0 && neg < pos;
        side[i] = s;
        total += if s { neg } else { pos };
        if s {
            mask |= 1 << (i - 1);
        }
    }
    (mask, total)
}

struct Bnb<'a> {
    back: &'a [Vec<(usize, bool)>],
    side: Vec<bool>,
    best: usize,
    best_mask: u64,
    nodes: u64,
    budget: u64,
}

impl Bnb<'_> {
    /// Returns false when the budget ran out.
    fn search(&mut self, i: usize, cost: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if i == self.side.len() {
            let mask = self.mask();
            if cost < self.best || (cost == self.best && mask < self.best_mask) {
                self.best = cost;
                self.best_mask = mask;
            }
            return true;
        }
        for s in [false, true] {
            self.side[i] = s;
            let add = self.back[i].iter().filter(|&&(j, neg)| neg ^ s ^ self.side[j]).count();
            if cost + add <= self.best && !self.search(i + 1, cost + add) {
                return false;
            }
        }
        self.side[i] = false;
        true
    }

    fn mask(&self) -> u64 {
        self.side
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &s)| s)
            .fold(0, |m, (i, _)| m | 1 << (i - 1))
    }
}

/// An edge cut with more negative than positive edges, if one exists among
/// all vertex bipartitions. Exponential; only for small graphs.
pub fn improving_cut(g: &SignedGraph) -> Option<Switching> {
    let n = g.vertex_count();
    assert!(n <= 24, "improving_cut is exhaustive");
    if n < 2 {
        return None;
    }
    for mask in 1u64..(1 << (n - 1)) {
        let inside = |v: usize| v > 0 && mask >> (v - 1) & 1 == 1;
        let (mut neg, mut pos) = (0usize, 0usize);
        for ed in g.edges() {
            if inside(ed.u) != inside(ed.v) {
                if ed.sign == Sign::Negative {
                    neg += 1;
                } else {
                    pos += 1;
                }
            }
        }
        if neg > pos {
            return Some(Switching::new((1..n).filter(|&v| inside(v)).collect()));
        }
    }
    None
}
