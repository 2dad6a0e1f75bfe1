//! Signed circuits, covers, circuit enumeration, flow-admissibility,
//! fundamental circuits over a spanning tree and the barbell constructors
//! built on top of them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::edgeset::EdgeSet;
use crate::error::{construction, precondition, Result};
use crate::graph::{EdgeId, SignedGraph, VertexId};
use crate::signature::is_balanced;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircuitKind {
    BalancedCircuit,
    ShortBarbell,
    LongBarbell,
}

impl CircuitKind {
    pub fn name(self) -> &'static str {
        match self {
            CircuitKind::BalancedCircuit => "balanced-circuit",
            CircuitKind::ShortBarbell => "short-barbell",
            CircuitKind::LongBarbell => "long-barbell",
        }
    }

    pub fn from_name(s: &str) -> Option<CircuitKind> {
        match s {
            "balanced-circuit" => Some(CircuitKind::BalancedCircuit),
            "short-barbell" => Some(CircuitKind::ShortBarbell),
            "long-barbell" => Some(CircuitKind::LongBarbell),
            _ => None,
        }
    }
}

/// A signed circuit with its witness structure.
///
/// For a balanced circuit `circuits` holds the circuit itself and `path` is
/// empty. For a barbell `circuits` holds the two unbalanced circuits and
/// `path_order` is the connecting path as a vertex sequence (a single
/// vertex for a short barbell).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCircuit {
    pub kind: CircuitKind,
    pub edges: EdgeSet,
    pub circuits: Vec<EdgeSet>,
    pub cycle_orders: Vec<Vec<VertexId>>,
    pub path: EdgeSet,
    pub path_order: Vec<VertexId>,
}

impl SignedCircuit {
    /// Classify an edge set. Fails with a reason when it is not a signed
    /// circuit of `g`.
    pub fn from_edges(g: &SignedGraph, edges: EdgeSet) -> core::result::Result<Self, String> {
        if edges.is_empty() {
            return Err("empty edge set".into());
        }
        if let Some(e) = edges.iter().find(|&e| e >= g.edge_count()) {
            return Err(format!("edge {e} does not exist"));
        }
        if !g.is_connected(&edges) {
            return Err("not connected".into());
        }
        let deg = g.degrees(&edges);
        if deg.iter().all(|&d| d == 0 || d == 2) {
            if g.negative_count(&edges) % 2 == 1 {
                return Err("unbalanced circuit".into());
            }
            let order = circuit_order(g, &edges).expect("connected 2-regular");
            return Ok(SignedCircuit {
                kind: CircuitKind::BalancedCircuit,
                circuits: vec![edges.clone()],
                cycle_orders: vec![order],
                edges,
                path: EdgeSet::new(),
                path_order: Vec::new(),
            });
        }
        let bridges = g.bridges(&edges);
        if bridges.is_empty() {
            let hubs: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| deg[v] == 4).collect();
            if hubs.len() != 1 || deg.iter().any(|&d| d != 0 && d != 2 && d != 4) {
                return Err("not a circuit or barbell".into());
            }
            let c = hubs[0];
            let parts = split_at_vertex(g, &edges, c);
            if parts.len() != 2 {
                return Err("not a circuit or barbell".into());
            }
            let (a, b) = (&parts[0], &parts[1]);
            let (oa, ob) = match (circuit_order(g, a), circuit_order(g, b)) {
                (Some(oa), Some(ob)) => (oa, ob),
                _ => return Err("not a circuit or barbell".into()),
            };
            if g.negative_count(a) % 2 == 0 || g.negative_count(b) % 2 == 0 {
                return Err("barbell with a balanced circuit".into());
            }
            return Ok(SignedCircuit {
                kind: CircuitKind::ShortBarbell,
                circuits: vec![a.clone(), b.clone()],
                cycle_orders: vec![oa, ob],
                edges,
                path: EdgeSet::new(),
                path_order: vec![c],
            });
        }
        let rest = edges.difference(&bridges);
        let comps = g.components(&rest);
        if comps.len() != 2 {
            return Err("not a circuit or barbell".into());
        }
        let (oa, ob) = match (circuit_order(g, &comps[0]), circuit_order(g, &comps[1])) {
            (Some(oa), Some(ob)) => (oa, ob),
            _ => return Err("not a circuit or barbell".into()),
        };
        if g.negative_count(&comps[0]) % 2 == 0 || g.negative_count(&comps[1]) % 2 == 0 {
            return Err("barbell with a balanced circuit".into());
        }
        let in_a = g.vertex_mask(&comps[0]);
        let in_b = g.vertex_mask(&comps[1]);
        let pdeg = g.degrees(&bridges);
        let ends: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| pdeg[v] == 1).collect();
        if ends.len() != 2 || pdeg.iter().any(|&d| d > 2) || !g.is_connected(&bridges) {
            return Err("connecting part is not a path".into());
        }
        let (s, t) = if in_a[ends[0]] {
            (ends[0], ends[1])
        } else {
            (ends[1], ends[0])
        };
        if !in_a[s] || !in_b[t] {
            return Err("path does not join the two circuits".into());
        }
        for v in 0..g.vertex_count() {
            if pdeg[v] == 2 && (in_a[v] || in_b[v]) {
                return Err("path meets a circuit internally".into());
            }
        }
        let path_order = walk_path(g, &bridges, s);
        Ok(SignedCircuit {
            kind: CircuitKind::LongBarbell,
            circuits: vec![comps[0].clone(), comps[1].clone()],
            cycle_orders: vec![oa, ob],
            edges,
            path: bridges,
            path_order,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(e)
    }

    pub fn is_barbell(&self) -> bool {
        self.kind != CircuitKind::BalancedCircuit
    }
}

/// Re-derive the element's structure from its edges and compare.
pub fn validate_element(g: &SignedGraph, el: &SignedCircuit) -> core::result::Result<(), String> {
    let fresh = SignedCircuit::from_edges(g, el.edges.clone())?;
    if fresh.kind != el.kind {
        return Err(format!(
            "declared {} but the edges form a {}",
            el.kind.name(),
            fresh.kind.name()
        ));
    }
    let mut a = fresh.circuits.clone();
    let mut b = el.circuits.clone();
    a.sort();
    b.sort();
    if a != b || fresh.path != el.path {
        return Err("witness does not match the edge set".into());
    }
    Ok(())
}

/// Cyclic vertex order of a connected 2-regular edge set, starting at its
/// smallest vertex and leaving along the smallest edge there.
pub fn circuit_order(g: &SignedGraph, edges: &EdgeSet) -> Option<Vec<VertexId>> {
    if edges.is_empty() || !g.is_connected(edges) {
        return None;
    }
    let deg = g.degrees(edges);
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return None;
    }
    let (_, steps) = circuit_walk(g, edges, None)?;
    Some(steps.iter().map(|&(_, from, _)| from).collect())
}

/// Walk a circuit from `start` (default: smallest vertex) leaving along the
/// smallest incident edge. Returns the start and the steps `(edge, from, to)`.
pub fn circuit_walk(
    g: &SignedGraph,
    edges: &EdgeSet,
    start: Option<VertexId>,
) -> Option<(VertexId, Vec<(EdgeId, VertexId, VertexId)>)> {
    let adj = g.adjacency(edges);
    let start = start.or_else(|| g.vertices_of(edges).first().copied())?;
    let mut used = EdgeSet::new();
    let mut steps = Vec::new();
    let mut v = start;
    loop {
        let (e, w) = *adj[v].iter().find(|(e, _)| !used.contains(*e))?;
        used.insert(e);
        steps.push((e, v, w));
        v = w;
        if v == start {
            break;
        }
    }
    if used.len() != edges.len() {
        return None;
    }
    Some((start, steps))
}

/// Vertex sequence of a path given by its edges, starting at end `s`.
fn walk_path(g: &SignedGraph, path: &EdgeSet, s: VertexId) -> Vec<VertexId> {
    let adj = g.adjacency(path);
    let mut order = vec![s];
    let mut used = EdgeSet::new();
    let mut v = s;
    while let Some(&(e, w)) = adj[v].iter().find(|(e, _)| !used.contains(*e)) {
        used.insert(e);
        order.push(w);
        v = w;
    }
    order
}

/// Group the edges of a subgraph into the pieces obtained by splitting
/// vertex `c` into one copy per incident edge. Loops at `c` are singletons.
pub fn split_at_vertex(g: &SignedGraph, edges: &EdgeSet, c: VertexId) -> Vec<EdgeSet> {
    let adj = g.adjacency(edges);
    let mut assigned = EdgeSet::new();
    let mut parts = Vec::new();
    for e in edges {
        if assigned.contains(e) {
            continue;
        }
        let mut part = EdgeSet::new();
        let mut stack = vec![e];
        assigned.insert(e);
        while let Some(f) = stack.pop() {
            part.insert(f);
            let ed = g.edge(f);
            for w in [ed.u, ed.v] {
                if w == c {
                    continue;
                }
                for &(h, _) in &adj[w] {
                    if assigned.insert(h) {
                        stack.push(h);
                    }
                }
            }
        }
        parts.push(part);
    }
    parts
}

/// Whether a cover must reach every edge or only non-bridge edges of its
/// target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Full,
    Weak,
}

/// A multiset of signed circuits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub elements: Vec<SignedCircuit>,
    pub scope: Scope,
}

impl Cover {
    pub fn new(scope: Scope) -> Self {
        Self {
            elements: Vec::new(),
            scope,
        }
    }

    pub fn push(&mut self, el: SignedCircuit) {
        self.elements.push(el);
    }

    pub fn absorb(&mut self, other: Cover) {
        self.elements.extend(other.elements);
    }

    pub fn length(&self) -> usize {
        self.elements.iter().map(|c| c.len()).sum()
    }

    /// Per-edge widths over edge ids `0..m`.
    pub fn widths(&self, m: usize) -> Vec<usize> {
        let mut w = vec![0; m];
        for el in &self.elements {
            for e in &el.edges {
                if e < m {
                    w[e] += 1;
                }
            }
        }
        w
    }

    pub fn width_of(&self, e: EdgeId) -> usize {
        self.elements.iter().filter(|c| c.contains(e)).count()
    }

    pub fn width(&self) -> usize {
        let m = self
            .elements
            .iter()
            .filter_map(|c| c.edges.iter().last())
            .max()
            .map_or(0, |e| e + 1);
        self.widths(m).into_iter().max().unwrap_or(0)
    }

    pub fn covered(&self) -> EdgeSet {
        let mut s = EdgeSet::new();
        for el in &self.elements {
            s.union_with(&el.edges);
        }
        s
    }

    pub fn covers(&self, target: &EdgeSet) -> bool {
        target.is_subset(&self.covered())
    }
}

/// Per-edge total width of a family of covers.
pub fn total_widths(covers: &[&Cover], m: usize) -> Vec<usize> {
    let mut w = vec![0; m];
    for c in covers {
        for (i, x) in c.widths(m).into_iter().enumerate() {
            w[i] += x;
        }
    }
    w
}

/// All circuits of a subgraph, each reported once as an edge set. Returns
/// `Err` with the circuits found so far when more than `cap` exist.
pub fn enumerate_circuits(
    g: &SignedGraph,
    edges: &EdgeSet,
    cap: usize,
) -> core::result::Result<Vec<EdgeSet>, Vec<EdgeSet>> {
    let adj = g.adjacency(edges);
    let mut out = Vec::new();
    for e in edges {
        let ed = *g.edge(e);
        if ed.is_loop() {
            out.push([e].into_iter().collect());
        } else {
            // simple v..u paths using only edges above e close a circuit with e
            let mut on_path = vec![false; g.vertex_count()];
            on_path[ed.v] = true;
            let mut path = vec![e];
            if !extend_paths(&adj, e, ed.v, ed.u, &mut on_path, &mut path, &mut out, cap) {
                return Err(out);
            }
        }
        if out.len() > cap {
            return Err(out);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_paths(
    adj: &[Vec<(EdgeId, VertexId)>],
    min: EdgeId,
    v: VertexId,
    target: VertexId,
    on_path: &mut [bool],
    path: &mut Vec<EdgeId>,
    out: &mut Vec<EdgeSet>,
    cap: usize,
) -> bool {
    for &(f, w) in &adj[v] {
        if f <= min || w == v {
            continue;
        }
        if w == target {
            path.push(f);
            out.push(path.iter().copied().collect());
            path.pop();
            if out.len() > cap {
                return false;
            }
            continue;
        }
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        path.push(f);
        let ok = extend_paths(adj, min, w, target, on_path, path, out, cap);
        path.pop();
        on_path[w] = false;
        if !ok {
            return false;
        }
    }
    true
}

/// An edge of the subgraph that lies in no signed circuit, if any.
///
/// Uses the characterization of flow-admissible signed graphs: a connected
/// signed graph is flow-admissible iff it has no bridge with a balanced
/// side and it is not equivalent to a signature with exactly one negative
/// edge. The witness is the offending bridge or the single frustrated edge.
pub fn inadmissible_edge(g: &SignedGraph, edges: &EdgeSet) -> Option<EdgeId> {
    for comp in g.components(edges) {
        let bridges = g.bridges(&comp);
        for b in &bridges {
            let rest = {
                let mut r = comp.clone();
                r.remove(b);
                r
            };
            let ed = g.edge(b);
            let labels = g.component_labels(&rest);
            for end in [ed.u, ed.v] {
                let side: EdgeSet = match labels[end] {
                    None => EdgeSet::new(),
                    Some(l) => rest.iter().filter(|&e| labels[g.edge(e).u] == Some(l)).collect(),
                };
                if is_balanced(g, &side) {
                    return Some(b);
                }
            }
        }
        if is_balanced(g, &comp) {
            continue;
        }
        for e in &comp {
            let mut rest = comp.clone();
            rest.remove(e);
            if is_balanced(g, &rest) {
                return Some(e);
            }
        }
    }
    None
}

pub fn is_flow_admissible(g: &SignedGraph) -> bool {
    inadmissible_edge(g, &g.all_edges()).is_none()
}

/// Spanning tree `T` of `G'` given by its positive edges, and the
/// fundamental circuit `C_x` of every negative edge `x`.
#[derive(Clone, Debug)]
pub struct FundamentalSystem {
    pub gprime: EdgeSet,
    pub tree: EdgeSet,
    pub negatives: Vec<EdgeId>,
    circuits: BTreeMap<EdgeId, EdgeSet>,
}

impl FundamentalSystem {
    pub fn new(g: &SignedGraph, gprime: &EdgeSet) -> Result<Self> {
        let tree: EdgeSet = gprime.iter().filter(|&e| !g.is_negative(e)).collect();
        let verts = g.vertices_of(gprime);
        let tree_verts = g.vertices_of(&tree);
        if tree.iter().any(|e| g.is_loop(e))
            || !g.is_connected(&tree)
            || tree.len() + 1 != verts.len()
            || (!tree.is_empty() && tree_verts.len() != verts.len())
        {
            return Err(precondition!("positive edges do not form a spanning tree"));
        }
        let negatives: Vec<EdgeId> = gprime.iter().filter(|&e| g.is_negative(e)).collect();
        let mut circuits = BTreeMap::new();
        for &x in &negatives {
            let ed = g.edge(x);
            let mut c: EdgeSet = tree_path(g, &tree, ed.u, ed.v).into_iter().collect();
            c.insert(x);
            circuits.insert(x, c);
        }
        Ok(Self {
            gprime: gprime.clone(),
            tree,
            negatives,
            circuits,
        })
    }

    pub fn circuit(&self, x: EdgeId) -> &EdgeSet {
        &self.circuits[&x]
    }

    /// `C_A`: symmetric difference of the fundamental circuits of `A`.
    pub fn sym_diff(&self, a: &[EdgeId]) -> EdgeSet {
        let mut s = EdgeSet::new();
        for x in a {
            s.symmetric_difference_with(self.circuit(*x));
        }
        s
    }

    /// `D_A`: union of the fundamental circuits of `A`.
    pub fn union(&self, a: &[EdgeId]) -> EdgeSet {
        let mut s = EdgeSet::new();
        for x in a {
            s.union_with(self.circuit(*x));
        }
        s
    }

    pub fn loops(&self, g: &SignedGraph) -> Vec<EdgeId> {
        self.negatives.iter().copied().filter(|&x| g.is_loop(x)).collect()
    }

    /// True iff `C_x` and `C_y` share a vertex.
    pub fn meet(&self, g: &SignedGraph, x: EdgeId, y: EdgeId) -> bool {
        let a = g.vertex_mask(self.circuit(x));
        g.vertices_of(self.circuit(y)).into_iter().any(|v| a[v])
    }
}

/// Edges of the unique `u`–`v` path in a tree.
pub fn tree_path(g: &SignedGraph, tree: &EdgeSet, u: VertexId, v: VertexId) -> Vec<EdgeId> {
    let n = g.vertex_count();
    let mut src = vec![false; n];
    let mut dst = vec![false; n];
    src[u] = true;
    dst[v] = true;
    g.shortest_path(tree, &src, &dst, None)
        .map(|(_, p)| p)
        .unwrap_or_default()
}

/// `B_{x,y}^Y`: contract `C_x` and `C_y`, take the tree path between the two
/// new vertices, add the fundamental circuits of `Y` modulo 2 (ignoring
/// edges inside `C_x ∪ C_y`) and, if the result is a path, close it into a
/// long barbell. `Ok(None)` when the result is not a path.
pub fn barbell_on_cut_pair(
    g: &SignedGraph,
    fs: &FundamentalSystem,
    x: EdgeId,
    y: EdgeId,
    yset: &[EdgeId],
) -> Result<Option<SignedCircuit>> {
    if yset.contains(&x) || yset.contains(&y) || x == y {
        return Err(precondition!("x and y must be distinct and outside Y"));
    }
    if fs.meet(g, x, y) {
        return Err(precondition!("C_{x} and C_{y} are not vertex-disjoint"));
    }
    let (cx, cy) = (fs.circuit(x), fs.circuit(y));
    let inner = cx.union(cy);
    let allowed = fs.tree.difference(&inner);
    let (_, p) = g
        .shortest_path(&allowed, &g.vertex_mask(cx), &g.vertex_mask(cy), None)
        .ok_or_else(|| construction!("no tree path between C_{x} and C_{y}"))?;
    let mut r: EdgeSet = p.into_iter().collect();
    for &z in yset {
        r.symmetric_difference_with(fs.circuit(z));
    }
    r.difference_with(&inner);
    let candidate = r.union(&inner);
    Ok(SignedCircuit::from_edges(g, candidate)
        .ok()
        .filter(|c| c.kind == CircuitKind::LongBarbell && c.path == r))
}

/// Join two vertex-disjoint unbalanced circuits into a long barbell along a
/// shortest path inside `allowed` that avoids the vertices in `avoid`.
pub fn join_circuits(
    g: &SignedGraph,
    allowed: &EdgeSet,
    c1: &EdgeSet,
    c2: &EdgeSet,
    avoid: &[VertexId],
) -> Option<SignedCircuit> {
    let mut blocked = g.vertex_mask(c1);
    for (b, x) in blocked.iter_mut().zip(g.vertex_mask(c2)) {
        *b |= x;
    }
    let mut pool = allowed.difference(&c1.union(c2));
    for e in pool.clone().iter() {
        let ed = g.edge(e);
        if avoid.contains(&ed.u) || avoid.contains(&ed.v) {
            pool.remove(e);
        }
    }
    let (_, p) = g.shortest_path(&pool, &g.vertex_mask(c1), &g.vertex_mask(c2), Some(&blocked))?;
    let edges: EdgeSet = c1.union(c2).union(&p.into_iter().collect());
    SignedCircuit::from_edges(g, edges).ok().filter(|c| c.is_barbell())
}

/// A signed circuit containing both fundamental circuits of a pair: `C_{a,b}`
/// itself when it is a balanced circuit or short barbell, otherwise the
/// shortest barbell joining the two disjoint circuits inside `G'`.
pub fn pair_circuit(g: &SignedGraph, fs: &FundamentalSystem, a: EdgeId, b: EdgeId) -> Option<SignedCircuit> {
    let c = fs.sym_diff(&[a, b]);
    if let Ok(el) = SignedCircuit::from_edges(g, c) {
        return Some(el);
    }
    if fs.meet(g, a, b) {
        return None;
    }
    join_circuits(g, &fs.gprime, fs.circuit(a), fs.circuit(b), &[])
}

/// Merge two barbells that end in auxiliary negative loops `e1`, `e2` at
/// the same vertex: `(p − e1) ∪ (q − e2)`, reclassified in `g`.
pub fn merge_at_loops(
    g: &SignedGraph,
    p: &SignedCircuit,
    e1: EdgeId,
    q: &SignedCircuit,
    e2: EdgeId,
) -> Result<SignedCircuit> {
    let mut edges = p.edges.clone();
    edges.remove(e1);
    let mut rest = q.edges.clone();
    rest.remove(e2);
    if !edges.is_disjoint(&rest) {
        return Err(construction!("merged barbells overlap"));
    }
    edges.union_with(&rest);
    SignedCircuit::from_edges(g, edges).map_err(|why| construction!("merged element invalid: {why}"))
}

/// Pair up the elements containing `e1` in `a` with those containing `e2`
/// in `b` (in order), replacing each pair by its merge. All other elements
/// are kept. Fails unless both sides have the same number of such elements.
pub fn merge_covers_at_loops(g: &SignedGraph, a: Cover, e1: EdgeId, b: Cover, e2: EdgeId) -> Result<Cover> {
    let (with1, mut out): (Vec<_>, Vec<_>) = a.elements.into_iter().partition(|c| c.contains(e1));
    let (with2, rest): (Vec<_>, Vec<_>) = b.elements.into_iter().partition(|c| c.contains(e2));
    if with1.len() != with2.len() {
        return Err(construction!(
            "cannot merge: {} elements through one auxiliary loop, {} through the other",
            with1.len(),
            with2.len()
        ));
    }
    out.extend(rest);
    for (p, q) in with1.iter().zip(&with2) {
        out.push(merge_at_loops(g, p, e1, q, e2)?);
    }
    Ok(Cover {
        elements: out,
        scope: a.scope,
    })
}

/// Connect vertex-disjoint Eulerian parts into a tree of Eulerian graphs by
/// adding edges of `allowed`. With at most three parts the connector is a
/// minimum one (a Steiner tree in the graph with the parts contracted);
/// otherwise parts are merged greedily by shortest paths.
pub fn connect_into_euler_tree(g: &SignedGraph, allowed: &EdgeSet, parts: &[EdgeSet]) -> Result<EdgeSet> {
    let mut result = EdgeSet::new();
    for p in parts {
        result.union_with(p);
    }
    if parts.len() <= 1 {
        return Ok(result);
    }
    let n = g.vertex_count();
    let k = parts.len();
    // node ids: 0..k for parts, k + v for other vertices
    let mut node = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for v in g.vertices_of(p) {
            if node[v] != usize::MAX {
                return Err(precondition!("parts are not vertex-disjoint"));
            }
            node[v] = i;
        }
    }
    for (v, slot) in node.iter_mut().enumerate() {
        if *slot == usize::MAX {
            *slot = k + v;
        }
    }
    let nodes = k + n;
    let mut adj: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); nodes];
    for e in allowed.difference(&result).iter() {
        let ed = g.edge(e);
        let (a, b) = (node[ed.u], node[ed.v]);
        if a != b {
            adj[a].push((e, b));
            adj[b].push((e, a));
        }
    }
    let bfs = |sources: &[usize]| {
        let mut dist = vec![usize::MAX; nodes];
        let mut prev: Vec<Option<(usize, EdgeId)>> = vec![None; nodes];
        let mut queue = alloc::collections::VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(a) = queue.pop_front() {
            for &(e, b) in &adj[a] {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    prev[b] = Some((a, e));
                    queue.push_back(b);
                }
            }
        }
        (dist, prev)
    };
    let trace = |prev: &[Option<(usize, EdgeId)>], mut t: usize, out: &mut EdgeSet, seen: &mut Vec<bool>| {
        while let Some((a, e)) = prev[t] {
            out.insert(e);
            seen[t] = true;
            t = a;
        }
        seen[t] = true;
    };
    let mut added = EdgeSet::new();
    let mut in_tree = vec![false; nodes];
    if k == 3 {
        let runs: Vec<_> = (0..3).map(|i| bfs(&[i])).collect();
        let center = (0..nodes)
            .filter(|&c| runs.iter().all(|(d, _)| d[c] != usize::MAX))
            .min_by_key(|&c| runs.iter().map(|(d, _)| d[c]).sum::<usize>())
            .ok_or_else(|| construction!("parts cannot be connected"))?;
        for (_, prev) in &runs {
            trace(prev, center, &mut added, &mut in_tree);
        }
    } else {
        in_tree[0] = true;
        for _ in 1..k {
            let sources: Vec<usize> = (0..nodes).filter(|&a| in_tree[a]).collect();
            let (dist, prev) = bfs(&sources);
            let t = (0..k)
                .filter(|&t| !in_tree[t] && dist[t] != usize::MAX)
                .min_by_key(|&t| dist[t])
                .ok_or_else(|| construction!("parts cannot be connected"))?;
            trace(&prev, t, &mut added, &mut in_tree);
        }
    }
    result.union_with(&added);
    let bridges = g.bridges(&result);
    if !added.is_subset(&bridges) || !g.is_connected(&result) {
        return Err(construction!("connector is not a set of bridges"));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::{self, Negative as N, Positive as P};

    fn g(n: usize, e: &[(usize, usize, Sign)]) -> SignedGraph {
        SignedGraph::from_edges(n, e).unwrap()
    }

    fn set(ids: &[usize]) -> EdgeSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn classify_examples() {
        let two_loops = g(1, &[(0, 0, N), (0, 0, N)]);
        let c = SignedCircuit::from_edges(&two_loops, two_loops.all_edges()).unwrap();
        assert_eq!(c.kind, CircuitKind::ShortBarbell);
        assert!(validate_element(&two_loops, &c).is_ok());

        let square = g(4, &[(0, 1, P), (1, 2, P), (2, 3, P), (3, 0, P)]);
        let c = SignedCircuit::from_edges(&square, square.all_edges()).unwrap();
        assert_eq!(c.kind, CircuitKind::BalancedCircuit);
        assert_eq!(c.cycle_orders[0], [0, 1, 2, 3]);

        let bar = g(3, &[(0, 0, N), (0, 1, P), (1, 2, P), (2, 2, N)]);
        let c = SignedCircuit::from_edges(&bar, bar.all_edges()).unwrap();
        assert_eq!(c.kind, CircuitKind::LongBarbell);
        assert_eq!(c.path_order, [0, 1, 2]);
        let mut wrong = c.clone();
        wrong.kind = CircuitKind::ShortBarbell;
        assert!(validate_element(&bar, &wrong).is_err());
    }

    #[test]
    fn classify_rejects_non_circuits() {
        // theta graph: two vertices, three parallel edges, one negative
        let theta = g(2, &[(0, 1, N), (0, 1, P), (0, 1, P)]);
        assert!(SignedCircuit::from_edges(&theta, theta.all_edges()).is_err());
        // two unbalanced triangles sharing two vertices
        let h = g(4, &[(0, 1, N), (1, 2, P), (2, 0, P), (0, 3, N), (3, 1, P)]);
        assert!(SignedCircuit::from_edges(&h, h.all_edges()).is_err());
        let tri = g(3, &[(0, 1, N), (1, 2, P), (2, 0, P)]);
        assert!(SignedCircuit::from_edges(&tri, tri.all_edges()).is_err());
        // barbell with a balanced end
        let bad = g(3, &[(0, 0, N), (0, 1, P), (1, 2, P), (2, 2, P)]);
        assert!(SignedCircuit::from_edges(&bad, bad.all_edges()).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_flow_admissible(&g(1, &[(0, 0, N)])));
        assert!(is_flow_admissible(&g(1, &[(0, 0, N), (0, 0, N)])));
        let k4 = g(4, &[(0, 1, P), (0, 2, P), (0, 3, P), (1, 2, P), (1, 3, P), (2, 3, P)]);
        assert!(is_flow_admissible(&k4));
        let tri = g(3, &[(0, 1, N), (1, 2, P), (2, 0, P)]);
        assert_eq!(inadmissible_edge(&tri, &tri.all_edges()), Some(0));
        let pendant = g(3, &[(0, 0, N), (0, 0, N), (0, 1, P)]);
        assert_eq!(inadmissible_edge(&pendant, &pendant.all_edges()), Some(2));
    }

    #[test]
    fn enumerate_circuits_of_k4() {
        let k4 = g(4, &[(0, 1, P), (0, 2, P), (0, 3, P), (1, 2, P), (1, 3, P), (2, 3, P)]);
        let c = enumerate_circuits(&k4, &k4.all_edges(), 100).unwrap();
        assert_eq!(c.len(), 7);
        let digon = g(2, &[(0, 1, P), (0, 1, P), (1, 1, N)]);
        assert_eq!(enumerate_circuits(&digon, &digon.all_edges(), 100).unwrap().len(), 2);
        assert!(enumerate_circuits(&k4, &k4.all_edges(), 3).is_err());
    }

    #[test]
    fn fundamental_system_examples() {
        // star centred at 0 plus a negative edge between leaves 1 and 2
        let star = g(4, &[(0, 1, P), (0, 2, P), (0, 3, P), (1, 2, N)]);
        let fs = FundamentalSystem::new(&star, &star.all_edges()).unwrap();
        assert_eq!(fs.circuit(3).len(), 3);

        let path = g(4, &[(0, 1, P), (1, 2, P), (2, 3, P), (0, 2, N), (1, 3, N)]);
        let fs = FundamentalSystem::new(&path, &path.all_edges()).unwrap();
        assert_eq!(fs.circuit(3).to_vec(), [0, 1, 3]);
        assert_eq!(fs.circuit(4).to_vec(), [1, 2, 4]);
        assert_eq!(fs.circuit(3).intersection(fs.circuit(4)).to_vec(), [1]);
        let c = fs.sym_diff(&[3, 4]);
        assert_eq!(c.to_vec(), [0, 2, 3, 4]);
        assert_eq!(
            SignedCircuit::from_edges(&path, c).unwrap().kind,
            CircuitKind::BalancedCircuit
        );

        let lp = g(2, &[(0, 1, P), (1, 1, N), (0, 0, N)]);
        let fs = FundamentalSystem::new(&lp, &lp.all_edges()).unwrap();
        assert_eq!(fs.circuit(1).to_vec(), [1]);
        let b = barbell_on_cut_pair(&lp, &fs, 1, 2, &[]).unwrap().unwrap();
        assert_eq!(b.kind, CircuitKind::LongBarbell);
        assert_eq!(b.len(), 3);

        let bad = g(3, &[(0, 1, P), (1, 2, P), (2, 0, P)]);
        assert!(FundamentalSystem::new(&bad, &bad.all_edges()).is_err());
    }

    #[test]
    fn connect_examples() {
        // two triangles joined by the unique path 2-6-3
        let h = g(
            7,
            &[
                (0, 1, N),
                (1, 2, P),
                (2, 0, P),
                (3, 4, N),
                (4, 5, P),
                (5, 3, P),
                (2, 6, P),
                (6, 3, P),
            ],
        );
        let parts = [set(&[0, 1, 2]), set(&[3, 4, 5])];
        let r = connect_into_euler_tree(&h, &h.all_edges(), &parts).unwrap();
        assert_eq!(r.to_vec(), [0, 1, 2, 3, 4, 5, 6, 7]);
        let single = connect_into_euler_tree(&h, &h.all_edges(), &parts[..1]).unwrap();
        assert_eq!(single, parts[0]);
    }

    #[test]
    fn merge_two_barbells() {
        // loops 0 at vertex 0 and 3 at vertex 2, auxiliary loops 4,5 at vertex 1
        let h = g(3, &[(0, 0, N), (0, 1, P), (1, 2, P), (2, 2, N), (1, 1, N), (1, 1, N)]);
        let p = SignedCircuit::from_edges(&h, set(&[0, 1, 4])).unwrap();
        let q = SignedCircuit::from_edges(&h, set(&[2, 3, 5])).unwrap();
        let m = merge_at_loops(&h, &p, 4, &q, 5).unwrap();
        assert_eq!(m.kind, CircuitKind::LongBarbell);
        assert_eq!(m.edges.to_vec(), [0, 1, 2, 3]);
    }
}
