//! Covers of width 2 for trees of Eulerian graphs whose leaf balloons are
//! all odd, covering every loop exactly twice.

use alloc::vec;
use alloc::vec::Vec;

use super::even::even_rec;
use super::tour::leaf_rec;
use super::{
    audit_full, build_euler_tree, compress, decompose_eulerian, decompress, single, split_positive_loops,
    Decomposition, LoopAssignment, Step,
};
use crate::circuit::{circuit_order, circuit_walk, merge_covers_at_loops, Cover, Scope, SignedCircuit};
use crate::edgeset::EdgeSet;
use crate::error::{construction, precondition, Result};
use crate::graph::{end_block_split, is_eulerian_edges, EdgeId, Sign, SignedGraph, VertexId};

/// A signed circuit cover of width at most 2 covering every loop exactly
/// twice, for a tree of Eulerian graphs with at least two leaf balloons, all
/// of them odd.
pub fn odd_leaf_cover(g: &SignedGraph, h: &EdgeSet) -> Result<Cover> {
    let tree = build_euler_tree(g, h)?;
    let leaves: Vec<_> = tree.leaves().collect();
    if leaves.len() < 2 || leaves.iter().any(|b| !b.odd) {
        return Err(precondition!("needs at least two leaf balloons, all odd"));
    }
    let cover = odd_rec(g, h)?;
    audit_full(g, h, &cover)?;
    Ok(cover)
}

pub(crate) fn odd_rec(g: &SignedGraph, h: &EdgeSet) -> Result<Cover> {
    let (pos, h) = split_positive_loops(g, h);
    let mut out = Cover::new(Scope::Full);
    for l in &pos {
        let el = single(g, l)?;
        out.push(el.clone());
        out.push(el);
    }
    if h.is_empty() {
        return Ok(out);
    }
    if let Some((h1, h2, v)) = end_block_split(g, &h) {
        let single_even_balloon =
            |s: &EdgeSet| g.loops(s).is_empty() && g.bridges(s).is_empty() && g.negative_count(s) % 2 == 0;
        if single_even_balloon(&h1) {
            out.absorb(first_cover(g, &h1)?);
            out.absorb(odd_rec(g, &h2)?);
        } else if single_even_balloon(&h2) {
            out.absorb(first_cover(g, &h2)?);
            out.absorb(odd_rec(g, &h1)?);
        } else {
            let mut g2 = g.clone();
            let e1 = g2.add_edge(v, v, Sign::Negative)?;
            let e2 = g2.add_edge(v, v, Sign::Negative)?;
            let mut p = h1;
            p.insert(e1);
            let mut q = h2;
            q.insert(e2);
            let a = odd_rec(&g2, &p)?;
            let b = odd_rec(&g2, &q)?;
            out.absorb(merge_covers_at_loops(&g2, a, e1, b, e2)?);
        }
        return Ok(out);
    }
    let loops = g.loops(&h);
    let body = h.difference(&loops);
    if body.is_empty() || !g.bridges(&h).is_empty() {
        out.absorb(leaf_rec(g, &h)?);
        return Ok(out);
    }
    match loops.len() {
        0 => Err(precondition!("bridgeless balloon without loops")),
        1 => {
            out.absorb(first_cover(g, &h)?);
            Ok(out)
        }
        _ => {
            out.absorb(many_loops(g, &h, &loops, &body)?);
            Ok(out)
        }
    }
}

/// The first of the three covers of an even tree; full when `h` has no
/// bridges.
fn first_cover(g: &SignedGraph, h: &EdgeSet) -> Result<Cover> {
    let [c1, _, _] = even_rec(g, h)?;
    Ok(Cover {
        elements: c1.elements,
        scope: Scope::Full,
    })
}

/// One non-loop balloon with at least two loops on it.
fn many_loops(g: &SignedGraph, h: &EdgeSet, loops: &EdgeSet, body: &EdgeSet) -> Result<Cover> {
    if circuit_order(g, body).is_some() {
        return leaf_rec(g, h);
    }
    let ls = loops.to_vec();
    let (e1, e2) = (ls[0], ls[1]);
    let (v1, v2) = (g.edge(e1).u, g.edge(e2).u);
    let mut inner = h.clone();
    inner.remove(e1);
    inner.remove(e2);
    let mut others = loops.clone();
    others.remove(e1);
    others.remove(e2);
    let ctx = Ctx { g, e1, e2, v1, v2 };

    if v1 == v2 {
        let f = LoopAssignment::smallest_edge(g, &inner, &others)?;
        let (gs, hs) = compress(g, &inner, &f)?;
        return match decompose_eulerian(&gs, &hs, v1)? {
            Decomposition::Split { a1, a2 } => ctx.finish(&gs, &f, &a1, &a2),
            Decomposition::Circuit => Err(construction!("compressed balloon unexpectedly a circuit")),
        };
    }

    let (p1, p2) = two_disjoint_paths(g, body, v1, v2).ok_or_else(|| construction!("no two disjoint paths"))?;
    let pedges: EdgeSet = p1.1.iter().chain(&p2.1).copied().collect();
    let f = LoopAssignment::preferring(g, &inner, &others, &pedges)?;
    let (gs, hs) = compress(g, &inner, &f)?;
    let comps = g.components(&hs.difference(&pedges));
    for (i, a) in comps.iter().enumerate() {
        if let Some(part) = even_piece(&gs, a, i, &comps, &[&p1, &p2])? {
            let s = hs.difference(&part);
            return ctx.finish(&gs, &f, &s, &part);
        }
    }
    ctx.terminal(h, &comps, &p1, &p2)
}

type Path = (Vec<VertexId>, Vec<EdgeId>);

struct Ctx<'a> {
    g: &'a SignedGraph,
    e1: EdgeId,
    e2: EdgeId,
    v1: VertexId,
    v2: VertexId,
}

impl Ctx<'_> {
    /// Cover `decompress(s) + e1 + e2` recursively and the even part by the
    /// first even-tree cover.
    fn finish(&self, gs: &SignedGraph, f: &LoopAssignment, s: &EdgeSet, even: &EdgeSet) -> Result<Cover> {
        let mask = gs.vertex_mask(s);
        if !is_eulerian_edges(gs, s)
            || !is_eulerian_edges(gs, even)
            || even.is_empty()
            || !mask[self.v1]
            || !mask[self.v2]
            || gs.negative_count(even) % 2 == 1
        {
            return Err(construction!("partition of the compressed balloon is invalid"));
        }
        let mut hs = decompress(f, s);
        hs.insert(self.e1);
        hs.insert(self.e2);
        let mut out = odd_rec(self.g, &hs)?;
        out.absorb(first_cover(self.g, &decompress(f, even))?);
        Ok(out)
    }

    /// All components of `H* − P1 − P2` are unbalanced circuits meeting each
    /// path once. Walk `P1` (going around components that carry loops) and
    /// return along `P2`; join consecutive loops and loop-free components by
    /// barbells along the walk.
    fn terminal(&self, h: &EdgeSet, comps: &[EdgeSet], p1: &Path, p2: &Path) -> Result<Cover> {
        let g = self.g;
        let n = g.vertex_count();
        let mut on1 = vec![false; n];
        let mut on2 = vec![false; n];
        p1.0.iter().for_each(|&v| on1[v] = true);
        p2.0.iter().for_each(|&v| on2[v] = true);
        let loops = g.loops(h);
        let mut loop_at = vec![false; n];
        for l in &loops {
            loop_at[g.edge(l).u] = true;
        }
        let mut detour_at: Vec<Option<&EdgeSet>> = vec![None; n];
        let mut circuits: Vec<EdgeSet> = loops.iter().map(|l| [l].into_iter().collect()).collect();
        for c in comps {
            let vs = g.vertices_of(c);
            let a: Vec<VertexId> = vs.iter().copied().filter(|&v| on1[v]).collect();
            let b: Vec<VertexId> = vs.iter().copied().filter(|&v| on2[v]).collect();
            if circuit_order(g, c).is_none() || a.len() != 1 || b.len() != 1 || a[0] == b[0] {
                return Err(construction!("component of H* - P1 - P2 has an unexpected shape"));
            }
            if vs.iter().any(|&v| !on1[v] && !on2[v] && loop_at[v]) {
                detour_at[a[0]] = Some(c);
            } else {
                circuits.push(c.clone());
            }
        }
        let mut steps: Vec<Step> = Vec::new();
        for (i, &x) in p1.0.iter().enumerate() {
            if let Some(c) = detour_at[x] {
                let (_, walk) = circuit_walk(g, c, Some(x)).ok_or_else(|| construction!("detour is not a circuit"))?;
                steps.extend(walk);
            }
            if i + 1 < p1.0.len() {
                steps.push((p1.1[i], x, p1.0[i + 1]));
            }
        }
        for i in (0..p2.1.len()).rev() {
            steps.push((p2.1[i], p2.0[i + 1], p2.0[i]));
        }
        let covered: EdgeSet = steps.iter().map(|s| s.0).chain(circuits.iter().flatten()).collect();
        if covered != *h || steps.iter().map(|s| s.0).collect::<EdgeSet>().len() != steps.len() {
            return Err(construction!("closed trail and circuits do not partition the balloon"));
        }
        let len = steps.len();
        let vertex = |k: usize| if k == len { self.v1 } else { steps[k].1 };
        let mut order: Vec<(usize, usize, usize)> = Vec::new();
        for (i, c) in circuits.iter().enumerate() {
            let mask = g.vertex_mask(c);
            let first = (0..len)
                .find(|&k| mask[vertex(k)])
                .ok_or_else(|| construction!("the trail never meets a circuit of S"))?;
            let rank = if c.contains(self.e1) { 0 } else { 1 };
            order.push((first, rank, i));
        }
        order.sort();
        if order[0].2 != circuits.iter().position(|c| c.contains(self.e1)).unwrap() || order[0].0 != 0 {
            return Err(construction!("trail does not start at the first loop"));
        }
        let mut cover = Cover::new(Scope::Full);
        for k in 0..order.len() {
            let (from, _, i) = order[k];
            let (to, j) = if k + 1 < order.len() {
                (order[k + 1].0, order[k + 1].2)
            } else {
                (len, order[0].2)
            };
            let mut seen = vec![false; n];
            seen[vertex(from)] = true;
            for s in &steps[from..to] {
                if seen[s.2] {
                    return Err(construction!(
                        "trail segment repeats vertex {} with no loop in between",
                        s.2
                    ));
                }
                seen[s.2] = true;
            }
            let mut edges = circuits[i].union(&circuits[j]);
            edges.extend(steps[from..to].iter().map(|s| s.0));
            let el = SignedCircuit::from_edges(g, edges).map_err(|why| construction!("trail barbell: {why}"))?;
            if !el.is_barbell() {
                return Err(construction!("trail barbell is balanced"));
            }
            cover.push(el);
        }
        Ok(cover)
    }
}

/// An even Eulerian piece of the component `a` of `H* − P1 − P2` whose
/// removal keeps the rest Eulerian and containing both path ends.
fn even_piece(
    gs: &SignedGraph,
    a: &EdgeSet,
    idx: usize,
    comps: &[EdgeSet],
    paths: &[&Path; 2],
) -> Result<Option<EdgeSet>> {
    let even = |s: &EdgeSet| gs.negative_count(s) % 2 == 0;
    if let Some((a1, _, _)) = end_block_split(gs, a) {
        let a2 = a.difference(&a1);
        let pick = if even(&a1) {
            a1
        } else if even(&a2) {
            a2
        } else {
            a.clone()
        };
        return Ok(Some(pick));
    }
    let n = gs.vertex_count();
    let mut on_p = vec![false; n];
    for p in paths {
        p.0.iter().for_each(|&v| on_p[v] = true);
    }
    let w = gs
        .vertices_of(a)
        .into_iter()
        .find(|&v| on_p[v])
        .ok_or_else(|| construction!("component does not meet the paths"))?;
    if let Decomposition::Split { a2, .. } = decompose_eulerian(gs, a, w)? {
        return Ok(Some(a2));
    }
    if even(a) {
        return Ok(Some(a.clone()));
    }
    let in_a = gs.vertex_mask(a);
    for p in paths {
        let hits: Vec<usize> = (0..p.0.len()).filter(|&i| in_a[p.0[i]]).collect();
        if hits.len() < 2 {
            continue;
        }
        let (i, j) = (hits[0], hits[1]);
        let (u1, u2) = (p.0[i], p.0[j]);
        let sub: EdgeSet = p.1[i..j].iter().copied().collect();
        let interior = &p.0[i + 1..j];
        let mut attached = EdgeSet::new();
        for (k, c) in comps.iter().enumerate() {
            if k == idx {
                continue;
            }
            let touch: Vec<VertexId> = gs.vertices_of(c).into_iter().filter(|&v| on_p[v]).collect();
            if !touch.is_empty() && touch.iter().all(|v| interior.contains(v)) {
                attached.union_with(c);
            }
        }
        let (_, walk) = circuit_walk(gs, a, Some(u1)).ok_or_else(|| construction!("component is not a circuit"))?;
        let cut = walk.iter().position(|s| s.2 == u2).expect("u2 lies on the circuit");
        let arc1: EdgeSet = walk[..=cut].iter().map(|s| s.0).collect();
        let arc2 = a.difference(&arc1);
        let base = sub.union(&attached);
        let arc = if even(&base.union(&arc1)) { arc1 } else { arc2 };
        return Ok(Some(base.union(&arc)));
    }
    Ok(None)
}

/// Two internally vertex-disjoint `s`–`t` paths in a loopless subgraph,
/// as vertex and edge sequences.
fn two_disjoint_paths(g: &SignedGraph, body: &EdgeSet, s: VertexId, t: VertexId) -> Option<(Path, Path)> {
    struct Arc {
        to: usize,
        cap: u8,
        edge: Option<EdgeId>,
    }
    let n = g.vertex_count();
    let mut arcs: Vec<Arc> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut add = |arcs: &mut Vec<Arc>, a: usize, b: usize, cap: u8, edge: Option<EdgeId>| {
        adj[a].push(arcs.len());
        arcs.push(Arc { to: b, cap, edge });
        adj[b].push(arcs.len());
        arcs.push(Arc {
            to: a,
            cap: 0,
            edge: None,
        });
    };
    for v in 0..n {
        add(&mut arcs, 2 * v, 2 * v + 1, if v == s || v == t { 2 } else { 1 }, None);
    }
    for e in body.iter().filter(|&e| !g.is_loop(e)) {
        let ed = g.edge(e);
        add(&mut arcs, 2 * ed.u + 1, 2 * ed.v, 1, Some(e));
        add(&mut arcs, 2 * ed.v + 1, 2 * ed.u, 1, Some(e));
    }
    let initial: Vec<u8> = arcs.iter().map(|a| a.cap).collect();
    let (source, sink) = (2 * s + 1, 2 * t);
    for _ in 0..2 {
        let mut prev = vec![usize::MAX; 2 * n];
        let mut seen = vec![false; 2 * n];
        seen[source] = true;
        let mut queue = alloc::collections::VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &ai in &adj[x] {
                let y = arcs[ai].to;
                if arcs[ai].cap > 0 && !seen[y] {
                    seen[y] = true;
                    prev[y] = ai;
                    queue.push_back(y);
                }
            }
        }
        if !seen[sink] {
            return None;
        }
        let mut y = sink;
        while y != source {
            let ai = prev[y];
            arcs[ai].cap -= 1;
            arcs[ai ^ 1].cap += 1;
            y = arcs[ai ^ 1].to;
        }
    }
    // flow on each edge direction, cancelling opposite flows
    let mut flow: Vec<bool> = (0..arcs.len())
        .map(|i| i % 2 == 0 && arcs[i].cap < initial[i])
        .collect();
    let mut by_edge: alloc::collections::BTreeMap<EdgeId, Vec<usize>> = Default::default();
    for (i, a) in arcs.iter().enumerate() {
        if let (Some(e), true) = (a.edge, flow[i]) {
            by_edge.entry(e).or_default().push(i);
        }
    }
    for ids in by_edge.values() {
        if ids.len() == 2 {
            flow[ids[0]] = false;
            flow[ids[1]] = false;
        }
    }
    let take = |flow: &mut Vec<bool>| -> Option<Path> {
        let mut verts = vec![s];
        let mut edges = Vec::new();
        let mut cur = s;
        while cur != t {
            let ai = *adj[2 * cur + 1]
                .iter()
                .find(|&&ai| flow[ai] && arcs[ai].edge.is_some())?;
            flow[ai] = false;
            cur = arcs[ai].to / 2;
            verts.push(cur);
            edges.push(arcs[ai].edge.unwrap());
            if verts.len() > n + 1 {
                return None;
            }
        }
        Some((verts, edges))
    };
    let p1 = take(&mut flow)?;
    let p2 = take(&mut flow)?;
    Some((p1, p2))
}
