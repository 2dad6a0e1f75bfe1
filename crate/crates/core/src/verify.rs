//! Independent cover verification and an exact minimum-cover oracle.
//!
//! Nothing here calls into the constructive modules: element shapes are
//! recognised from degrees, the cyclomatic number and fundamental cycles,
//! and the oracle enumerates its own circuits and barbells.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Rational64;

use crate::circuit::{CircuitKind, Cover, Scope, SignedCircuit};
use crate::edgeset::EdgeSet;
use crate::error::{construction, Error, Result};
use crate::graph::{EdgeId, SignedGraph, VertexId};
use crate::setcover::{min_weight_cover, SetCoverOutcome};

/// Shape of an edge set that is a signed circuit, or why it is not one.
pub fn classify_element(g: &SignedGraph, edges: &[EdgeId]) -> core::result::Result<CircuitKind, String> {
    if edges.is_empty() {
        return Err("empty element".into());
    }
    let mut seen = BTreeSet::new();
    for &e in edges {
        if e >= g.edge_count() {
            return Err(format!("edge {e} does not exist"));
        }
        if !seen.insert(e) {
            return Err(format!("edge {e} repeated"));
        }
    }
    let verts: Vec<VertexId> = edges
        .iter()
        .flat_map(|&e| [g.edge(e).u, g.edge(e).v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let idx = |v: VertexId| verts.binary_search(&v).expect("vertex of element");
    let n = verts.len();
    let mut deg = vec![0usize; n];
    for &e in edges {
        deg[idx(g.edge(e).u)] += 1;
        deg[idx(g.edge(e).v)] += 1;
    }
    if deg.iter().any(|&d| d < 2) {
        return Err("vertex of degree one".into());
    }
    // spanning forest by union-find in edge order
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::new();
    let mut extra = Vec::new();
    for &e in edges {
        let (a, b) = (root(&mut parent, idx(g.edge(e).u)), root(&mut parent, idx(g.edge(e).v)));
        if a == b {
            extra.push(e);
        } else {
            parent[a] = b;
            tree.push(e);
        }
    }
    if tree.len() + 1 != n {
        return Err("not connected".into());
    }
    let negatives = |set: &[EdgeId]| set.iter().filter(|&&e| g.is_negative(e)).count();
    match extra.len() {
        1 => {
            if deg.iter().any(|&d| d != 2) {
                return Err("not 2-regular".into());
            }
            if negatives(edges) % 2 == 1 {
                return Err("unbalanced circuit".into());
            }
            Ok(CircuitKind::BalancedCircuit)
        }
        2 => {
            let d1 = fundamental(g, &tree, extra[0]);
            let d2 = fundamental(g, &tree, extra[1]);
            if negatives(&d1) % 2 == 0 || negatives(&d2) % 2 == 0 {
                return Err("contains a balanced circuit".into());
            }
            let xor: Vec<EdgeId> = d1
                .iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .symmetric_difference(&d2.iter().copied().collect())
                .copied()
                .collect();
            if is_circuit(g, &xor) {
                return Err("three internally disjoint paths".into());
            }
            if deg.contains(&4) {
                Ok(CircuitKind::ShortBarbell)
            } else {
                Ok(CircuitKind::LongBarbell)
            }
        }
        k => Err(format!("cyclomatic number {k}")),
    }
}

/// The circuit closed by the non-tree edge `f`.
fn fundamental(g: &SignedGraph, tree: &[EdgeId], f: EdgeId) -> Vec<EdgeId> {
    let (s, t) = (g.edge(f).u, g.edge(f).v);
    let mut out = vec![f];
    if s == t {
        return out;
    }
    // depth-first search over tree edges from s to t
    let mut stack = vec![(s, usize::MAX, 0usize)];
    let mut via: Vec<EdgeId> = Vec::new();
    while let Some(&mut (v, from, ref mut next)) = stack.last_mut() {
        if v == t {
            break;
        }
        let cand = tree.iter().enumerate().skip(*next).find(|&(_, &e)| {
            let ed = g.edge(e);
            e != from && (ed.u == v || ed.v == v)
        });
        match cand {
            Some((i, &e)) => {
                *next = i + 1;
                let w = g.edge(e).other(v);
                via.push(e);
                stack.push((w, e, 0));
            }
            None => {
                stack.pop();
                via.pop();
            }
        }
    }
    out.extend(via);
    out
}

fn is_circuit(g: &SignedGraph, edges: &[EdgeId]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut deg = alloc::collections::BTreeMap::new();
    for &e in edges {
        *deg.entry(g.edge(e).u).or_insert(0) += 1;
        *deg.entry(g.edge(e).v).or_insert(0) += 1;
    }
    // 2-regular with as many vertices as edges is a circuit iff connected
    if deg.values().any(|&d| d != 2) || deg.len() != edges.len() {
        return false;
    }
    let mut reached = BTreeSet::new();
    let mut todo = vec![g.edge(edges[0]).u];
    while let Some(v) = todo.pop() {
        if reached.insert(v) {
            for &e in edges {
                let ed = g.edge(e);
                if ed.u == v || ed.v == v {
                    todo.push(ed.other(v));
                }
            }
        }
    }
    reached.len() == deg.len()
}

#[derive(Clone, Debug, Default)]
pub struct Requirements {
    /// Edges that must be covered; all edges of the graph when `None`.
    pub target: Option<EdgeSet>,
    /// Bridges of the target need not be covered.
    pub weak: bool,
    pub max_width: Option<usize>,
    /// Every negative loop of the target must have width exactly 2.
    pub loops_exactly_twice: bool,
    pub max_length: Option<Rational64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UncoveredEdge { edge: EdgeId },
    InvalidElement { index: usize, reason: String },
    WidthBreach { edge: EdgeId, width: usize, cap: usize },
    LoopWidth { edge: EdgeId, width: usize },
    LengthBreach { length: usize, bound: Rational64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UncoveredEdge { edge } => write!(f, "uncovered edge {edge}"),
            Violation::InvalidElement { index, reason } => write!(f, "invalid element {index}: {reason}"),
            Violation::WidthBreach { edge, width, cap } => write!(f, "edge {edge} has width {width} > {cap}"),
            Violation::LoopWidth { edge, width } => write!(f, "negative loop {edge} has width {width}, not 2"),
            Violation::LengthBreach { length, bound } => write!(f, "length {length} exceeds bound {bound}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub length: usize,
    pub widths: Vec<usize>,
}

pub fn verify_cover(g: &SignedGraph, cover: &Cover, req: &Requirements) -> VerificationReport {
    let m = g.edge_count();
    let mut violations = Vec::new();
    let mut widths = vec![0usize; m];
    let mut length = 0;
    for (index, el) in cover.elements.iter().enumerate() {
        let edges = el.edges.to_vec();
        length += edges.len();
        for &e in &edges {
            if e < m {
                widths[e] += 1;
            }
        }
        match classify_element(g, &edges) {
            Ok(kind) if kind == el.kind => {}
            Ok(kind) => violations.push(Violation::InvalidElement {
                index,
                reason: format!("declared {} but is {}", el.kind.name(), kind.name()),
            }),
            Err(reason) => violations.push(Violation::InvalidElement { index, reason }),
        }
    }
    let target = req.target.clone().unwrap_or_else(|| g.all_edges());
    let exempt = if req.weak {
        bridges_by_removal(g, &target)
    } else {
        EdgeSet::new()
    };
    for e in &target {
        if e < m && widths[e] == 0 && !exempt.contains(e) {
            violations.push(Violation::UncoveredEdge { edge: e });
        }
    }
    if let Some(cap) = req.max_width {
        for (edge, &width) in widths.iter().enumerate() {
            if width > cap {
                violations.push(Violation::WidthBreach { edge, width, cap });
            }
        }
    }
    if req.loops_exactly_twice {
        for e in &target {
            if e < m && g.is_loop(e) && g.is_negative(e) && widths[e] != 2 {
                violations.push(Violation::LoopWidth {
                    edge: e,
                    width: widths[e],
                });
            }
        }
    }
    if let Some(bound) = req.max_length {
        if Rational64::from_integer(length as i64) > bound {
            violations.push(Violation::LengthBreach { length, bound });
        }
    }
    VerificationReport {
        valid: violations.is_empty(),
        violations,
        length,
        widths,
    }
}

/// Bridges found by deleting each edge and testing whether its ends are
/// still joined.
fn bridges_by_removal(g: &SignedGraph, edges: &EdgeSet) -> EdgeSet {
    edges
        .iter()
        .filter(|&e| {
            let ed = g.edge(e);
            if ed.is_loop() {
                return false;
            }
            let mut reached = vec![false; g.vertex_count()];
            reached[ed.u] = true;
            let mut todo = vec![ed.u];
            while let Some(v) = todo.pop() {
                for f in edges {
                    let fd = g.edge(f);
                    if f != e && (fd.u == v || fd.v == v) && !reached[fd.other(v)] {
                        reached[fd.other(v)] = true;
                        todo.push(fd.other(v));
                    }
                }
            }
            !reached[ed.v]
        })
        .collect()
}

pub const DEFAULT_ORACLE_EDGES: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_edges: usize,
    /// Maximum number of enumerated signed circuits.
    pub element_cap: usize,
    /// Maximum number of connecting paths per pair of disjoint circuits.
    pub path_cap: usize,
    pub state_budget: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_edges: DEFAULT_ORACLE_EDGES,
            element_cap: 200_000,
            path_cap: 10_000,
            state_budget: 1 << 22,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleCover {
    pub length: usize,
    pub cover: Cover,
    /// Number of signed circuits the set cover chose from.
    pub candidates: usize,
}

pub fn oracle_min_cover(g: &SignedGraph) -> Result<OracleCover> {
    oracle_min_cover_with(g, &OracleLimits::default())
}

/// Minimum length signed circuit cover of all edges by exact set cover over
/// every signed circuit. Any cap that is hit is reported as
/// `LimitExceeded`, never as a possibly wrong optimum.
pub fn oracle_min_cover_with(g: &SignedGraph, limits: &OracleLimits) -> Result<OracleCover> {
    let m = g.edge_count();
    if m > limits.max_edges || m > 64 {
        return Err(Error::LimitExceeded(format!(
            "{m} edges exceed the oracle limit {}",
            limits.max_edges
        )));
    }
    let elements = signed_circuits(g, limits)?;
    let sets: Vec<(u64, usize)> = elements
        .iter()
        .map(|el| (el.iter().fold(0u64, |a, &e| a | 1 << e), el.len()))
        .collect();
    let universe = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    match min_weight_cover(universe, &sets, limits.state_budget) {
        SetCoverOutcome::Optimal { cost, chosen } => {
            let mut cover = Cover::new(Scope::Full);
            for i in chosen {
                let set: EdgeSet = elements[i].iter().copied().collect();
                let el = SignedCircuit::from_edges(g, set).map_err(|e| construction!("oracle element: {e}"))?;
                cover.push(el);
            }
            Ok(OracleCover {
                length: cost,
                cover,
                candidates: elements.len(),
            })
        }
        SetCoverOutcome::Infeasible { element } => Err(Error::NotFlowAdmissible {
            edge: element as EdgeId,
        }),
        SetCoverOutcome::BudgetExceeded => Err(Error::LimitExceeded("oracle set cover state budget".into())),
    }
}

/// Every signed circuit of `g` as a sorted edge list: balanced circuits,
/// unbalanced pairs sharing one vertex, and vertex-disjoint unbalanced pairs
/// joined by every admissible path.
pub fn signed_circuits(g: &SignedGraph, limits: &OracleLimits) -> Result<Vec<Vec<EdgeId>>> {
    let n = g.vertex_count();
    let circuits = all_circuits(g, limits.element_cap)?;
    let mut out: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    let mut odd: Vec<(Vec<EdgeId>, Vec<bool>)> = Vec::new();
    for c in circuits {
        if c.iter().filter(|&&e| g.is_negative(e)).count() % 2 == 0 {
            out.insert(c);
        } else {
            let mut mask = vec![false; n];
            for &e in &c {
                mask[g.edge(e).u] = true;
                mask[g.edge(e).v] = true;
            }
            odd.push((c, mask));
        }
    }
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            let (c1, m1) = &odd[i];
            let (c2, m2) = &odd[j];
            let shared = (0..n).filter(|&v| m1[v] && m2[v]).count();
            if shared > 1 {
                continue;
            }
            let mut base: Vec<EdgeId> = c1.iter().chain(c2).copied().collect();
            base.sort_unstable();
            if shared == 1 {
                out.insert(base);
            } else {
                let blocked: Vec<bool> = (0..n).map(|v| m1[v] || m2[v]).collect();
                let paths = connecting_paths(g, m1, m2, &blocked, limits.path_cap)?;
                for p in paths {
                    let mut el = base.clone();
                    el.extend(p);
                    el.sort_unstable();
                    out.insert(el);
                }
            }
            if out.len() > limits.element_cap {
                return Err(Error::LimitExceeded("oracle element cap".into()));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// All circuits, each as a sorted edge list. A circuit is found once, from
/// its smallest edge.
fn all_circuits(g: &SignedGraph, cap: usize) -> Result<Vec<Vec<EdgeId>>> {
    let m = g.edge_count();
    let mut out = Vec::new();
    for first in 0..m {
        let ed = *g.edge(first);
        if ed.is_loop() {
            out.push(vec![first]);
            continue;
        }
        let mut visited = vec![false; g.vertex_count()];
        visited[ed.u] = true;
        visited[ed.v] = true;
        let mut path = vec![first];
        walk(g, first, ed.v, ed.u, &mut visited, &mut path, &mut out, cap)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    g: &SignedGraph,
    first: EdgeId,
    at: VertexId,
    home: VertexId,
    visited: &mut [bool],
    path: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
    cap: usize,
) -> Result<()> {
    for e in first + 1..g.edge_count() {
        let ed = g.edge(e);
        if ed.is_loop() || (ed.u != at && ed.v != at) {
            continue;
        }
        let next = ed.other(at);
        if next == home {
            let mut c = path.clone();
            c.push(e);
            c.sort_unstable();
            out.push(c);
            if out.len() > cap {
                return Err(Error::LimitExceeded("oracle circuit cap".into()));
            }
        } else if !visited[next] {
            visited[next] = true;
            path.push(e);
            walk(g, first, next, home, visited, path, out, cap)?;
            path.pop();
            visited[next] = false;
        }
    }
    Ok(())
}

/// Paths from a vertex of `from` to a vertex of `to` whose interior avoids
/// `blocked`.
fn connecting_paths(
    g: &SignedGraph,
    from: &[bool],
    to: &[bool],
    blocked: &[bool],
    cap: usize,
) -> Result<Vec<Vec<EdgeId>>> {
    let mut out = Vec::new();
    let mut visited = vec![false; g.vertex_count()];
    for s in (0..g.vertex_count()).filter(|&v| from[v]) {
        let mut path = Vec::new();
        extend(g, s, to, blocked, &mut visited, &mut path, &mut out, cap)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &SignedGraph,
    at: VertexId,
    to: &[bool],
    blocked: &[bool],
    visited: &mut [bool],
    path: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
    cap: usize,
) -> Result<()> {
    for e in 0..g.edge_count() {
        let ed = g.edge(e);
        if ed.is_loop() || (ed.u != at && ed.v != at) {
            continue;
        }
        let next = ed.other(at);
        if to[next] {
            let mut p = path.clone();
            p.push(e);
            out.push(p);
            if out.len() > cap {
                return Err(Error::LimitExceeded("oracle path cap".into()));
            }
        } else if !blocked[next] && !visited[next] {
            visited[next] = true;
            path.push(e);
            extend(g, next, to, blocked, visited, path, out, cap)?;
            path.pop();
            visited[next] = false;
        }
    }
    Ok(())
}
