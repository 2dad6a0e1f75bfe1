//! Trees of Eulerian graphs: balloons, Eulerian circuits, loop compression
//! and the cover constructions for trees of circuits, even trees and trees
//! whose leaf balloons are all odd.

mod decompose;
mod even;
mod odd;
mod tour;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{validate_element, Cover, Scope};
use crate::edgeset::EdgeSet;
use crate::error::{construction, precondition, Error, Result};
use crate::graph::{is_eulerian_edges, EdgeId, SignedGraph, Subgraph, VertexId};

pub use decompose::{decompose_eulerian, Decomposition};
pub use even::{even_tree_cover, even_tree_three_covers};
pub use odd::odd_leaf_cover;
pub use tour::{leaf_cover, three_weak_covers_circuits};

/// One traversal step of a walk: `(edge, from, to)`.
pub type Step = (EdgeId, VertexId, VertexId);

/// A balloon: a negative loop, or a component of the graph without bridges
/// from which all loops were deleted (possibly a single vertex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Balloon {
    pub edges: EdgeSet,
    /// The vertex of a trivial balloon.
    pub anchor: Option<VertexId>,
    pub valency: usize,
    pub leaf: bool,
    pub odd: bool,
    pub trivial: bool,
    pub is_loop: bool,
}

impl Balloon {
    pub fn subgraph<'g>(&self, g: &'g SignedGraph) -> Subgraph<'g> {
        match self.anchor {
            Some(v) if self.trivial => Subgraph::trivial(g, v),
            _ => Subgraph::new(g, self.edges.clone()).expect("balloon edges belong to the graph"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EulerTree {
    pub edges: EdgeSet,
    pub bridges: EdgeSet,
    pub balloons: Vec<Balloon>,
}

impl EulerTree {
    pub fn leaves(&self) -> impl Iterator<Item = &Balloon> {
        self.balloons.iter().filter(|b| b.leaf)
    }

    /// True iff every non-loop balloon is a single vertex or a circuit.
    pub fn is_tree_of_circuits(&self, g: &SignedGraph) -> bool {
        self.balloons
            .iter()
            .all(|b| b.trivial || b.is_loop || g.degrees(&b.edges).iter().all(|&d| d == 0 || d == 2))
    }

    /// Number of negative edges outside the bridges.
    pub fn eps_tilde(&self, g: &SignedGraph) -> usize {
        g.negative_count(&self.edges.difference(&self.bridges))
    }
}

/// Bridges and balloons of a connected subgraph. Fails unless every
/// component left after deleting the bridges is Eulerian.
pub fn build_euler_tree(g: &SignedGraph, h: &EdgeSet) -> Result<EulerTree> {
    if !g.is_connected(h) {
        return Err(precondition!("subgraph is not connected"));
    }
    let bridges = g.bridges(h);
    let rest = h.difference(&bridges);
    let mut balloons = Vec::new();
    let loops = g.loops(&rest);
    let mut touched = g.vertex_mask(&rest);
    for comp in g.components(&rest) {
        if !is_eulerian_edges(g, &comp) {
            return Err(Error::Structural("not a tree of Eulerian graphs".into()));
        }
        let body = comp.difference(&loops);
        let verts = g.vertices_of(&comp);
        let valency = bridge_and_loop_count(g, &bridges, &loops, &verts);
        balloons.push(Balloon {
            odd: g.negative_count(&body) % 2 == 1,
            trivial: body.is_empty(),
            anchor: body.is_empty().then(|| verts[0]),
            edges: body,
            valency,
            leaf: valency == 1,
            is_loop: false,
        });
    }
    for v in g.vertices_of(h) {
        if !touched[v] {
            touched[v] = true;
            let valency = bridge_and_loop_count(g, &bridges, &loops, &[v]);
            balloons.push(Balloon {
                edges: EdgeSet::new(),
                anchor: Some(v),
                valency,
                leaf: valency == 1,
                odd: false,
                trivial: true,
                is_loop: false,
            });
        }
    }
    if h.is_empty() {
        // a single vertex without edges has nothing to record
        return Ok(EulerTree {
            edges: EdgeSet::new(),
            bridges,
            balloons,
        });
    }
    for e in loops.iter().filter(|&e| g.is_negative(e)) {
        balloons.push(Balloon {
            edges: [e].into_iter().collect(),
            anchor: None,
            valency: 1,
            leaf: true,
            odd: true,
            trivial: false,
            is_loop: true,
        });
    }
    Ok(EulerTree {
        edges: h.clone(),
        bridges,
        balloons,
    })
}

fn bridge_and_loop_count(g: &SignedGraph, bridges: &EdgeSet, loops: &EdgeSet, verts: &[VertexId]) -> usize {
    let at = |e: EdgeId| {
        let ed = g.edge(e);
        verts.contains(&ed.u) as usize + (!ed.is_loop() && verts.contains(&ed.v)) as usize
    };
    bridges.iter().map(at).sum::<usize>() + loops.iter().filter(|&e| g.is_negative(e)).map(at).sum::<usize>()
}

/// `ε̃`: negative edges of `h` that are not bridges of `h`.
pub fn eps_tilde(g: &SignedGraph, h: &EdgeSet) -> usize {
    g.negative_count(&h.difference(&g.bridges(h)))
}

/// Closed Eulerian trail of a connected even subgraph starting at `start`,
/// always extending along the smallest unused edge.
pub fn euler_circuit(g: &SignedGraph, edges: &EdgeSet, start: VertexId) -> Option<Vec<Step>> {
    if !is_eulerian_edges(g, edges) {
        return None;
    }
    if edges.is_empty() {
        return Some(Vec::new());
    }
    let adj = g.adjacency(edges);
    if adj[start].is_empty() {
        return None;
    }
    let mut next = vec![0usize; g.vertex_count()];
    let mut used = EdgeSet::new();
    let mut stack: Vec<(VertexId, Option<(EdgeId, VertexId)>)> = vec![(start, None)];
    let mut out = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        let mut advanced = false;
        while next[v] < adj[v].len() {
            let (e, w) = adj[v][next[v]];
            next[v] += 1;
            if used.insert(e) {
                stack.push((w, Some((e, v))));
                advanced = true;
                break;
            }
        }
        if !advanced {
            let (w, via) = stack.pop().unwrap();
            if let Some((e, from)) = via {
                out.push((e, from, w));
            }
        }
    }
    out.reverse();
    Some(out)
}

/// Assignment of negative loops to adjacent non-loop edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopAssignment {
    pub map: BTreeMap<EdgeId, EdgeId>,
}

impl LoopAssignment {
    /// Each loop goes to the smallest non-loop edge of `h` at its vertex.
    pub fn smallest_edge(g: &SignedGraph, h: &EdgeSet, loops: &EdgeSet) -> Result<Self> {
        Self::preferring(g, h, loops, &EdgeSet::new())
    }

    /// Like [`LoopAssignment::smallest_edge`], but a loop whose vertex meets
    /// an edge of `preferred` goes to the smallest such edge.
    pub fn preferring(g: &SignedGraph, h: &EdgeSet, loops: &EdgeSet, preferred: &EdgeSet) -> Result<Self> {
        let adj = g.adjacency(h);
        let mut map = BTreeMap::new();
        for l in loops {
            let v = g.edge(l).u;
            let candidates = || adj[v].iter().map(|&(e, _)| e).filter(|&e| !g.is_loop(e));
            let pick = candidates()
                .filter(|&e| preferred.contains(e))
                .min()
                .or_else(|| candidates().min())
                .ok_or_else(|| precondition!("loop {l} has no adjacent non-loop edge"))?;
            map.insert(l, pick);
        }
        Ok(Self { map })
    }

    pub fn loops(&self) -> EdgeSet {
        self.map.keys().copied().collect()
    }
}

/// Compression: delete the assigned loops and flip the sign of every edge
/// receiving an odd number of them. Returns the re-signed graph and the
/// remaining edges.
pub fn compress(g: &SignedGraph, h: &EdgeSet, f: &LoopAssignment) -> Result<(SignedGraph, EdgeSet)> {
    let mut out = g.clone();
    for (&l, &e) in &f.map {
        if !h.contains(l) || !h.contains(e) || !g.is_loop(l) || g.is_loop(e) {
            return Err(precondition!(
                "assignment {l} -> {e} is not a loop-to-edge map inside the graph"
            ));
        }
        let (a, b) = (g.edge(l), g.edge(e));
        if a.u != b.u && a.u != b.v {
            return Err(precondition!("loop {l} is not adjacent to edge {e}"));
        }
        out.set_sign(e, out.sign(e).flip());
    }
    Ok((out, h.difference(&f.loops())))
}

/// Decompression: add back the loops assigned into `part`.
pub fn decompress(f: &LoopAssignment, part: &EdgeSet) -> EdgeSet {
    let mut out = part.clone();
    for (&l, &e) in &f.map {
        if part.contains(e) {
            out.insert(l);
        }
    }
    out
}

/// Validate elements and audit three weak covers: each element inside `h`,
/// every non-bridge edge covered by each cover, width at most 2 per cover,
/// total width at most 4 and negative loops covered exactly twice by the
/// first cover.
pub(crate) fn audit_three(g: &SignedGraph, h: &EdgeSet, covers: &[Cover; 3]) -> Result<()> {
    let m = g.edge_count();
    let needed = h.difference(&g.bridges(h));
    let mut total = vec![0usize; m];
    for (i, c) in covers.iter().enumerate() {
        audit_elements(g, h, c)?;
        if !c.covers(&needed) {
            return Err(construction!("cover {} misses a non-bridge edge", i + 1));
        }
        let w = c.widths(m);
        if let Some(e) = h.iter().find(|&e| w[e] > 2) {
            return Err(construction!("cover {} has width {} on edge {e}", i + 1, w[e]));
        }
        for e in h {
            total[e] += w[e];
        }
    }
    if let Some(e) = h.iter().find(|&e| total[e] > 4) {
        return Err(construction!("total width {} on edge {e}", total[e]));
    }
    let w1 = covers[0].widths(m);
    for l in g.loops(h).iter().filter(|&l| g.is_negative(l)) {
        if w1[l] != 2 {
            return Err(construction!("first cover covers loop {l} {} times", w1[l]));
        }
    }
    Ok(())
}

pub(crate) fn audit_elements(g: &SignedGraph, h: &EdgeSet, c: &Cover) -> Result<()> {
    for el in &c.elements {
        if !el.edges.is_subset(h) {
            return Err(construction!("element leaves the subgraph"));
        }
        validate_element(g, el).map_err(|why| construction!("invalid element: {why}"))?;
    }
    Ok(())
}

/// Full cover audit: every edge covered, width at most 2, every loop
/// covered exactly twice.
pub(crate) fn audit_full(g: &SignedGraph, h: &EdgeSet, c: &Cover) -> Result<()> {
    audit_elements(g, h, c)?;
    let w = c.widths(g.edge_count());
    for e in h {
        let want_exact = g.is_loop(e);
        if w[e] == 0 || w[e] > 2 || (want_exact && w[e] != 2) {
            return Err(construction!("edge {e} has width {}", w[e]));
        }
    }
    Ok(())
}

pub(crate) fn empty_three() -> [Cover; 3] {
    [
        Cover::new(Scope::Weak),
        Cover::new(Scope::Weak),
        Cover::new(Scope::Weak),
    ]
}

pub(crate) fn absorb_three(into: &mut [Cover; 3], from: [Cover; 3]) {
    for (a, b) in into.iter_mut().zip(from) {
        a.absorb(b);
    }
}

/// Positive loops of `h` and the rest.
pub(crate) fn split_positive_loops(g: &SignedGraph, h: &EdgeSet) -> (EdgeSet, EdgeSet) {
    let pos: EdgeSet = g.loops(h).iter().filter(|&e| !g.is_negative(e)).collect();
    let rest = h.difference(&pos);
    (pos, rest)
}

pub(crate) fn single(g: &SignedGraph, e: EdgeId) -> Result<crate::circuit::SignedCircuit> {
    crate::circuit::SignedCircuit::from_edges(g, [e].into_iter().collect())
        .map_err(|why| construction!("loop {e} is not a signed circuit: {why}"))
}
