//! Signed multigraphs, subgraphs and the structural primitives everything
//! else is built on: components, bridges, cut vertices, blocks, Eulerian
//! tests and shortest paths.
//!
//! Subgraphs are plain [`EdgeSet`]s over a parent [`SignedGraph`]; the
//! vertex set of a subgraph is implied by the endpoints of its edges.
//! Loops count twice towards the degree of their vertex.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::ptr;

use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `w`. For a loop this is `w` itself.
    pub fn other(&self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// A signed multigraph on vertices `0..n`. Edge ids are dense and equal to
/// insertion order; appending edges never renumbers existing ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl SignedGraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId, Sign)]) -> Result<Self> {
        let mut g = SignedGraph::new(n);
        for &(u, v, s) in edges {
            g.add_edge(u, v, s)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, sign: Sign) -> Result<EdgeId> {
        if u >= self.n || v >= self.n {
            return Err(Error::Structural(format!(
                "edge ({u},{v}) references a vertex outside 0..{}",
                self.n
            )));
        }
        self.edges.push(Edge { u, v, sign });
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn sign(&self, e: EdgeId) -> Sign {
        self.edges[e].sign
    }

    pub fn set_sign(&mut self, e: EdgeId, sign: Sign) {
        self.edges[e].sign = sign;
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.edges[e].is_loop()
    }

    pub fn is_negative(&self, e: EdgeId) -> bool {
        self.edges[e].sign.is_negative()
    }

    pub fn all_edges(&self) -> EdgeSet {
        (0..self.edges.len()).collect()
    }

    pub fn negative_edges(&self, within: &EdgeSet) -> EdgeSet {
        within.iter().filter(|&e| self.is_negative(e)).collect()
    }

    pub fn negative_count(&self, within: &EdgeSet) -> usize {
        within.iter().filter(|&e| self.is_negative(e)).count()
    }

    pub fn loops(&self, within: &EdgeSet) -> EdgeSet {
        within.iter().filter(|&e| self.is_loop(e)).collect()
    }

    /// Vertices incident with edges of `edges`, in increasing order.
    pub fn vertices_of(&self, edges: &EdgeSet) -> Vec<VertexId> {
        let mut seen = vec![false; self.n];
        for e in edges {
            let ed = &self.edges[e];
            seen[ed.u] = true;
            seen[ed.v] = true;
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    pub fn vertex_mask(&self, edges: &EdgeSet) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        for e in edges {
            let ed = &self.edges[e];
            seen[ed.u] = true;
            seen[ed.v] = true;
        }
        seen
    }

    /// Degrees in the subgraph; loops contribute 2.
    pub fn degrees(&self, edges: &EdgeSet) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in edges {
            let ed = &self.edges[e];
            deg[ed.u] += 1;
            deg[ed.v] += 1;
        }
        deg
    }

    /// Incidence lists `(edge, other endpoint)` restricted to `edges`, each in
    /// increasing edge-id order. A loop appears once in its vertex's list.
    pub fn adjacency(&self, edges: &EdgeSet) -> Vec<Vec<(EdgeId, VertexId)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in edges {
            let ed = &self.edges[e];
            adj[ed.u].push((e, ed.v));
            if !ed.is_loop() {
                adj[ed.v].push((e, ed.u));
            }
        }
        adj
    }

    /// Connected components of the subgraph, as edge sets, ordered by their
    /// smallest vertex.
    pub fn components(&self, edges: &EdgeSet) -> Vec<EdgeSet> {
        let labels = self.component_labels(edges);
        let mut out: Vec<EdgeSet> = Vec::new();
        let mut index = vec![usize::MAX; self.n];
        for &l in labels.iter().flatten() {
            if index[l] == usize::MAX {
                index[l] = out.len();
                out.push(EdgeSet::new());
            }
        }
        for e in edges {
            let l = labels[self.edges[e].u].expect("edge endpoint labelled");
            out[index[l]].insert(e);
        }
        out
    }

    /// Component label (smallest vertex of the component) for every vertex
    /// touched by `edges`.
    pub fn component_labels(&self, edges: &EdgeSet) -> Vec<Option<VertexId>> {
        let adj = self.adjacency(edges);
        let present = self.vertex_mask(edges);
        let mut label = vec![None; self.n];
        for s in 0..self.n {
            if !present[s] || label[s].is_some() {
                continue;
            }
            label[s] = Some(s);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(_, w) in &adj[v] {
                    if label[w].is_none() {
                        label[w] = Some(s);
                        stack.push(w);
                    }
                }
            }
        }
        label
    }

    pub fn is_connected(&self, edges: &EdgeSet) -> bool {
        self.components(edges).len() <= 1
    }

    /// Bridges of the subgraph: non-loop edges whose removal increases the
    /// number of components. Parallel edges are never bridges.
    pub fn bridges(&self, edges: &EdgeSet) -> EdgeSet {
        let lowlink = LowLink::compute(self, edges);
        lowlink.bridges
    }

    /// Cut vertices in the sense used throughout: deleting the vertex (and
    /// its loops) increases the number of components.
    pub fn cut_vertices(&self, edges: &EdgeSet) -> Vec<VertexId> {
        let lowlink = LowLink::compute(self, edges);
        (0..self.n).filter(|&v| lowlink.articulation[v]).collect()
    }

    /// Shortest path (by edge count) from any vertex in `sources` to any
    /// vertex in `targets`, using only `allowed` edges and never passing
    /// through a vertex marked in `blocked` internally. Returns the vertex
    /// sequence and edge sequence. Ties are broken by edge id.
    pub fn shortest_path(
        &self,
        allowed: &EdgeSet,
        sources: &[bool],
        targets: &[bool],
        blocked: Option<&[bool]>,
    ) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
        let adj = self.adjacency(allowed);
        let mut prev: Vec<Option<(VertexId, EdgeId)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        for v in 0..self.n {
            if sources[v] {
                if targets[v] {
                    return Some((vec![v], Vec::new()));
                }
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &adj[v] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                prev[w] = Some((v, e));
                if targets[w] {
                    let mut verts = vec![w];
                    let mut path = Vec::new();
                    let mut cur = w;
                    while let Some((p, pe)) = prev[cur] {
                        path.push(pe);
                        verts.push(p);
                        cur = p;
                    }
                    verts.reverse();
                    path.reverse();
                    return Some((verts, path));
                }
                if blocked.is_some_and(|b| b[w]) {
                    continue;
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// Serialize in the text graph format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.sign.symbol());
        }
        s
    }

    /// Parse the text graph format: a header `n m`, then `m` lines `u v s`
    /// with `s` one of `+`/`-`. Blank lines and lines starting with `#` are
    /// ignored. Line numbers in errors are 1-based.
    pub fn parse(text: &str) -> Result<SignedGraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header line `n m`".into(),
        })?;
        let mut it = header.split_whitespace();
        let n = parse_count(it.next(), hline, "vertex count")?;
        let m = parse_count(it.next(), hline, "edge count")?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be exactly `n m`".into(),
            });
        }
        let mut g = SignedGraph::new(n);
        let mut last = hline;
        for (line, body) in lines {
            last = line;
            if g.edge_count() == m {
                return Err(Error::Parse {
                    line,
                    msg: format!("more than the declared {m} edge lines"),
                });
            }
            let mut it = body.split_whitespace();
            let u = parse_count(it.next(), line, "endpoint u")?;
            let v = parse_count(it.next(), line, "endpoint v")?;
            let sign = match it.next() {
                Some("+") => Sign::Positive,
                Some("-") => Sign::Negative,
                other => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected sign `+` or `-`, found {:?}", other.unwrap_or("")),
                    })
                }
            };
            if it.next().is_some() {
                return Err(Error::Parse {
                    line,
                    msg: "edge line must be exactly `u v s`".into(),
                });
            }
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex index out of range 0..{n}"),
                });
            }
            g.add_edge(u, v, sign)?;
        }
        if g.edge_count() != m {
            return Err(Error::Parse {
                line: last + 1,
                msg: format!("expected {m} edge lines, found {}", g.edge_count()),
            });
        }
        Ok(g)
    }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

/// Bridges and articulation points by a single DFS lowlink pass over the
/// loopless part of a subgraph.
struct LowLink {
    bridges: EdgeSet,
    articulation: Vec<bool>,
    /// Biconnected components of the loopless part, as edge sets.
    blocks: Vec<EdgeSet>,
}

impl LowLink {
    fn compute(g: &SignedGraph, edges: &EdgeSet) -> LowLink {
        let n = g.vertex_count();
        let loopless: EdgeSet = edges.iter().filter(|&e| !g.is_loop(e)).collect();
        let adj = g.adjacency(&loopless);
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut out = LowLink {
            bridges: EdgeSet::new(),
            articulation: vec![false; n],
            blocks: Vec::new(),
        };
        let mut timer = 0;
        let mut edge_stack: Vec<EdgeId> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX || adj[root].is_empty() {
                continue;
            }
            // Iterative DFS: frame = (vertex, parent edge, next adjacency index).
            let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < adj[v].len() {
                    let (e, w) = adj[v][*idx];
                    *idx += 1;
                    if Some(e) == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(e);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, Some(e), 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push(e);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        let pe = pe.expect("non-root frame has a parent edge");
                        if low[v] > disc[p] {
                            out.bridges.insert(pe);
                        }
                        if low[v] >= disc[p] {
                            if p != root {
                                out.articulation[p] = true;
                            }
                            let mut block = EdgeSet::new();
                            while let Some(e) = edge_stack.pop() {
                                block.insert(e);
                                if e == pe {
                                    break;
                                }
                            }
                            out.blocks.push(block);
                        }
                    }
                }
            }
            if root_children > 1 {
                out.articulation[root] = true;
            }
        }
        out
    }
}

/// One block of a [`BlockDecomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Non-loop edges of the block plus the loops attached to it.
    pub edges: EdgeSet,
    pub vertices: Vec<VertexId>,
    /// The block is a single non-loop edge that is a bridge of the graph
    /// (loops at its ends may be attached).
    pub is_bridge: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub bridges: EdgeSet,
    pub cut_vertices: Vec<VertexId>,
    /// Indices into `blocks` of the blocks containing at most one cut vertex.
    pub endblocks: Vec<usize>,
}

impl BlockDecomposition {
    /// Blocks that are not bridges.
    pub fn non_bridge_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| !b.is_bridge)
    }
}

/// Biconnected decomposition of a connected subgraph.
///
/// Loops never create cut vertices. Each loop is attached to the
/// lowest-indexed block containing its vertex; a vertex that carries loops
/// but no other edge forms a block of its own.
pub fn block_decompose(g: &SignedGraph, edges: &EdgeSet) -> Result<BlockDecomposition> {
    if !g.is_connected(edges) {
        return Err(Error::Structural("block decomposition of a disconnected graph".into()));
    }
    let ll = LowLink::compute(g, edges);
    let mut blocks: Vec<Block> = ll
        .blocks
        .iter()
        .map(|b| Block {
            edges: b.clone(),
            vertices: g.vertices_of(b),
            is_bridge: b.len() == 1 && ll.bridges.contains(b.first().unwrap()),
        })
        .collect();
    blocks.sort_by_key(|b| b.edges.first());
    for e in edges.iter().filter(|&e| g.is_loop(e)) {
        let w = g.edge(e).u;
        match blocks.iter_mut().find(|b| b.vertices.contains(&w)) {
            Some(b) => {
                b.edges.insert(e);
            }
            None => blocks.push(Block {
                edges: [e].into_iter().collect(),
                vertices: vec![w],
                is_bridge: false,
            }),
        }
    }
    let cut_vertices: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| ll.articulation[v]).collect();
    let endblocks = blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| {
            let loop_only = b.edges.iter().all(|e| g.is_loop(e));
            let cuts = b.vertices.iter().filter(|v| cut_vertices.contains(v)).count();
            !(loop_only && b.edges.len() == 1) && cuts <= 1
        })
        .map(|(i, _)| i)
        .collect();
    Ok(BlockDecomposition {
        blocks,
        bridges: ll.bridges,
        cut_vertices,
        endblocks,
    })
}

/// Split a connected subgraph with a cut vertex at one of its end blocks.
///
/// Returns `(h1, h2, v)` where `h1` is a non-loop block containing exactly
/// one cut vertex `v`, together with the loops at its other vertices, and
/// `h2` is everything else (including loops at `v`). Returns `None` when the
/// subgraph has no cut vertex.
pub fn end_block_split(g: &SignedGraph, edges: &EdgeSet) -> Option<(EdgeSet, EdgeSet, VertexId)> {
    let ll = LowLink::compute(g, edges);
    let cut: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| ll.articulation[v]).collect();
    if cut.is_empty() {
        return None;
    }
    let mut blocks = ll.blocks.clone();
    blocks.sort_by_key(|b| b.first());
    for block in &blocks {
        let verts = g.vertices_of(block);
        let cuts: Vec<VertexId> = verts.iter().copied().filter(|v| cut.contains(v)).collect();
        if cuts.len() != 1 {
            continue;
        }
        let v = cuts[0];
        let mut h1 = block.clone();
        for e in edges.iter().filter(|&e| g.is_loop(e)) {
            let w = g.edge(e).u;
            if w != v && verts.contains(&w) {
                h1.insert(e);
            }
        }
        let h2 = edges.difference(&h1);
        return Some((h1, h2, v));
    }
    None
}

/// True iff the subgraph is connected and every degree is even. The empty
/// edge set (a single trivial vertex) counts as Eulerian.
pub fn is_eulerian_edges(g: &SignedGraph, edges: &EdgeSet) -> bool {
    g.degrees(edges).iter().all(|d| d % 2 == 0) && g.is_connected(edges)
}

/// True iff all degrees are even (a cycle in the cycle-space sense).
pub fn is_cycle_space_element(g: &SignedGraph, edges: &EdgeSet) -> bool {
    g.degrees(edges).iter().all(|d| d % 2 == 0)
}

/// A subgraph of a parent signed graph, identified by its edges. The vertex
/// set is the set of endpoints, except for a trivial subgraph which may keep
/// a single anchor vertex.
#[derive(Clone, Debug)]
pub struct Subgraph<'g> {
    graph: &'g SignedGraph,
    edges: EdgeSet,
    anchor: Option<VertexId>,
}

impl<'g> Subgraph<'g> {
    pub fn new(graph: &'g SignedGraph, edges: EdgeSet) -> Result<Self> {
        if let Some(e) = edges.iter().last() {
            if e >= graph.edge_count() {
                return Err(Error::Structural(format!("edge {e} not in parent graph")));
            }
        }
        Ok(Self {
            graph,
            edges,
            anchor: None,
        })
    }

    pub fn whole(graph: &'g SignedGraph) -> Self {
        Self {
            graph,
            edges: graph.all_edges(),
            anchor: None,
        }
    }

    /// A single-vertex subgraph without edges.
    pub(crate) fn trivial(graph: &'g SignedGraph, v: VertexId) -> Self {
        Self {
            graph,
            edges: EdgeSet::new(),
            anchor: Some(v),
        }
    }

    pub fn graph(&self) -> &'g SignedGraph {
        self.graph
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn into_edges(self) -> EdgeSet {
        self.edges
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        match (self.edges.is_empty(), self.anchor) {
            (true, Some(v)) => vec![v],
            _ => self.graph.vertices_of(&self.edges),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `self - other`: drop the edges of `other`, then drop vertices left
    /// without incident edges.
    pub fn subtract(&self, other: &Subgraph<'_>) -> Result<Subgraph<'g>> {
        if !ptr::eq(self.graph, other.graph) {
            return Err(Error::Structural("subtraction of subgraphs of different graphs".into()));
        }
        Ok(Subgraph {
            graph: self.graph,
            edges: self.edges.difference(&other.edges),
            anchor: None,
        })
    }

    pub fn is_eulerian(&self) -> bool {
        is_eulerian_edges(self.graph, &self.edges)
    }
}
