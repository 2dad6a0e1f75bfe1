//! Covering `X' ∪ B' ∪ S'` in a graph whose positive edges form a spanning
//! tree, within twice its size and with every negative loop covered
//! exactly twice.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{case_b, case_c, prime_classes};
use crate::circuit::{
    connect_into_euler_tree, join_circuits, merge_covers_at_loops, pair_circuit, tree_path, validate_element, Cover,
    FundamentalSystem, Scope, SignedCircuit,
};
use crate::edgeset::EdgeSet;
use crate::error::{construction, precondition, Result};
use crate::euler::{build_euler_tree, even_tree_cover, even_tree_three_covers, odd_leaf_cover};
use crate::graph::{end_block_split, EdgeId, Sign, SignedGraph};

#[derive(Clone, Debug)]
pub struct PrimeCover {
    pub cover: Cover,
    /// One line per construction step.
    pub trace: Vec<String>,
}

/// Cover `X' ∪ B' ∪ S'` of `gprime` (an edge set of `g` whose positive
/// edges form a spanning tree and which has at least two negative edges)
/// with total length at most `2·|E(G')|`, covering every negative loop
/// exactly twice.
pub fn cover_prime(g: &SignedGraph, gprime: &EdgeSet) -> Result<PrimeCover> {
    let classes = prime_classes(g, gprime)?;
    if classes.x.len() < 2 {
        return Err(precondition!("at least two negative edges are needed"));
    }
    let mut trace = Vec::new();
    let cover = rec(g, gprime, &mut trace)?;
    let w = cover.widths(g.edge_count());
    for el in &cover.elements {
        if !el.edges.is_subset(gprime) {
            return Err(construction!("element leaves G'"));
        }
        validate_element(g, el).map_err(|why| construction!("invalid element: {why}"))?;
    }
    if let Some(e) = classes.target().iter().find(|&e| w[e] == 0) {
        return Err(construction!("edge {e} of X' ∪ B' ∪ S' is uncovered"));
    }
    if let Some(l) = g.loops(gprime).iter().find(|&l| w[l] != 2) {
        return Err(construction!("negative loop {l} covered {} times", w[l]));
    }
    if cover.length() > 2 * gprime.len() {
        return Err(construction!(
            "length {} exceeds 2·|E(G')| = {}",
            cover.length(),
            2 * gprime.len()
        ));
    }
    Ok(PrimeCover { cover, trace })
}

fn rec(g: &SignedGraph, h: &EdgeSet, trace: &mut Vec<String>) -> Result<Cover> {
    let h = strip_pendant(g, h);
    if g.negative_count(&h) < 2 {
        return Err(construction!("fewer than two negative edges after stripping"));
    }
    if let Some((h1, h2, v)) = end_block_split(g, &h) {
        trace.push(format!("split at cut vertex {v}"));
        let mut g2 = g.clone();
        let e1 = g2.add_edge(v, v, Sign::Negative)?;
        let e2 = g2.add_edge(v, v, Sign::Negative)?;
        let mut p = h1;
        p.insert(e1);
        let mut q = h2;
        q.insert(e2);
        let a = rec(&g2, &p, trace)?;
        let b = rec(&g2, &q, trace)?;
        let (la, lb) = (a.length(), b.length());
        let merged = merge_covers_at_loops(&g2, a, e1, b, e2)?;
        // 2·|E(G''_1)| − 2 + 2·|E(G''_2)| − 2 = 2·|E(G')|
        if 2 * p.len() - 2 + 2 * q.len() - 2 != 2 * h.len() || merged.length() + 4 != la + lb {
            return Err(construction!("merge length accounting failed"));
        }
        return Ok(merged);
    }
    let loops = g.loops(&h);
    if h.difference(&loops).is_empty() || !g.bridges(&h).is_empty() {
        trace.push(format!("base: {} loops around a vertex or a bridge", loops.len()));
        return loop_ring(g, &h, &loops);
    }
    let fs = FundamentalSystem::new(g, &h)?;
    let mut engine = Engine::new(g, &h, fs);
    match loops.len() {
        0 => case_c_cover(&mut engine, trace),
        1 => case_b_cover(&mut engine, loops.first().expect("one loop"), trace),
        _ => case_a_cover(&engine, trace),
    }
}

/// Remove degree-one vertices until none is left.
pub(crate) fn strip_pendant(g: &SignedGraph, h: &EdgeSet) -> EdgeSet {
    let mut h = h.clone();
    loop {
        let deg = g.degrees(&h);
        let Some(e) = h.iter().find(|&e| {
            let ed = g.edge(e);
            !ed.is_loop() && (deg[ed.u] == 1 || deg[ed.v] == 1)
        }) else {
            return h;
        };
        h.remove(e);
    }
}

/// Consecutive pairs of loops in a cyclic order (by vertex, then id) joined
/// into barbells: every loop lies in exactly two of them.
fn loop_ring(g: &SignedGraph, h: &EdgeSet, loops: &EdgeSet) -> Result<Cover> {
    let mut order = loops.to_vec();
    order.sort_by_key(|&l| (g.edge(l).u, l));
    if order.len() < 2 {
        return Err(construction!("a ring needs two loops"));
    }
    let tree = h.difference(loops);
    let mut cover = Cover::new(Scope::Full);
    for i in 0..order.len() {
        let (a, b) = (order[i], order[(i + 1) % order.len()]);
        let mut edges: EdgeSet = tree_path(g, &tree, g.edge(a).u, g.edge(b).u).into_iter().collect();
        edges.insert(a);
        edges.insert(b);
        cover.push(SignedCircuit::from_edges(g, edges).map_err(|why| construction!("ring barbell: {why}"))?);
    }
    Ok(cover)
}

/// Shared state for the 2-connected cases: the fundamental circuits, the
/// target `X' ∪ S'` and cached covers of `C_{X' − a}`.
pub(crate) struct Engine<'g> {
    pub g: &'g SignedGraph,
    pub h: EdgeSet,
    pub fs: FundamentalSystem,
    pub target: EdgeSet,
    three: BTreeMap<Option<EdgeId>, [Cover; 3]>,
}

impl<'g> Engine<'g> {
    pub(crate) fn new(g: &'g SignedGraph, h: &EdgeSet, fs: FundamentalSystem) -> Self {
        let mut target: EdgeSet = fs.negatives.iter().copied().collect();
        for e in &fs.tree {
            if fs.negatives.iter().filter(|&&x| fs.circuit(x).contains(e)).count() == 1 {
                target.insert(e);
            }
        }
        Self {
            g,
            h: h.clone(),
            fs,
            target,
            three: BTreeMap::new(),
        }
    }

    /// `C_A` connected into a tree of Eulerian graphs inside the current
    /// graph, for `A` all negative edges except `skip`.
    pub fn euler_tree(&self, skip: Option<EdgeId>) -> Result<EdgeSet> {
        let a: Vec<EdgeId> = self.fs.negatives.iter().copied().filter(|&x| Some(x) != skip).collect();
        let c = self.fs.sym_diff(&a);
        connect_into_euler_tree(self.g, &self.h, &self.g.components(&c))
    }

    /// The three weak covers of `C_{X' − a}` connected into a tree.
    pub fn three(&mut self, skip: Option<EdgeId>) -> Result<&[Cover; 3]> {
        if !self.three.contains_key(&skip) {
            let t = self.euler_tree(skip)?;
            let covers = even_tree_three_covers(self.g, &t)?;
            self.three.insert(skip, covers);
        }
        Ok(&self.three[&skip])
    }

    pub fn circuit(&self, x: EdgeId) -> &EdgeSet {
        self.fs.circuit(x)
    }

    /// Shortest signed circuit containing `C_x ∪ C_y` for vertex-disjoint
    /// unbalanced fundamental circuits, or `C_{x,y}` itself otherwise.
    pub fn pair(&self, x: EdgeId, y: EdgeId) -> Option<SignedCircuit> {
        pair_circuit(self.g, &self.fs, x, y)
    }

    /// Shortest signed circuit containing the loop `l` and `C_a`.
    pub fn with_loop(&self, l: EdgeId, a: EdgeId) -> Option<SignedCircuit> {
        let lset: EdgeSet = [l].into_iter().collect();
        if self.g.vertex_mask(self.circuit(a))[self.g.edge(l).u] {
            return SignedCircuit::from_edges(self.g, lset.union(self.circuit(a))).ok();
        }
        join_circuits(self.g, &self.h, &lset, self.circuit(a), &[])
    }

    /// Whether `c` covers the target and covers `loop_` exactly twice.
    pub fn acceptable(&self, c: &Cover, loop_: Option<EdgeId>) -> bool {
        if !c.covers(&self.target) {
            return false;
        }
        loop_.is_none_or(|l| c.width_of(l) == 2)
    }

    pub fn bound(&self) -> usize {
        2 * self.h.len()
    }

    /// Serialized instance for diagnostics.
    pub fn instance(&self) -> String {
        format!("edges {:?} of\n{}", self.h.to_vec(), self.g.to_text())
    }
}

fn with_element(base: &Cover, el: &SignedCircuit) -> Cover {
    let mut c = Cover::new(Scope::Full);
    c.absorb(base.clone());
    c.push(el.clone());
    c
}

/// At least two loops: connect `C_{X'}` into a tree, peel even leaf
/// balloons with the even-tree construction and cover the remainder with
/// the odd-leaf construction.
fn case_a_cover(e: &Engine<'_>, trace: &mut Vec<String>) -> Result<Cover> {
    let g = e.g;
    let mut t = e.euler_tree(None)?;
    let mut cover = Cover::new(Scope::Full);
    let mut peeled = 0;
    loop {
        let tree = build_euler_tree(g, &t)?;
        let Some(f) = tree
            .balloons
            .iter()
            .find(|b| b.leaf && !b.is_loop && !b.trivial && !b.odd)
        else {
            break;
        };
        cover.absorb(even_tree_cover(g, &f.edges)?);
        t.difference_with(&f.edges);
        t = strip_pendant(g, &t);
        peeled += 1;
    }
    trace.push(format!(
        "case A: {} loops, {peeled} even leaf balloons peeled",
        g.loops(&e.h).len()
    ));
    cover.absorb(odd_leaf_cover(g, &t)?);
    Ok(cover)
}

fn case_b_cover(e: &mut Engine<'_>, l: EdgeId, trace: &mut Vec<String>) -> Result<Cover> {
    if e.fs.negatives.len() % 2 == 0 {
        trace.push("case B: even".into());
        let c = e.three(None)?[0].clone();
        return Ok(as_full(c));
    }
    let mut best: Option<(Cover, String)> = None;
    let mut consider = |c: Cover, how: String, e: &Engine<'_>| {
        if e.acceptable(&c, Some(l)) && best.as_ref().is_none_or(|(b, _)| c.length() < b.length()) {
            best = Some((c, how));
        }
    };
    match case_b::solutions(e, l) {
        Ok(case_b::Outcome::Direct(c, how)) => consider(c, format!("case B: direct cover ({how})"), e),
        Ok(case_b::Outcome::Solutions(sols, how)) => {
            for s in &sols {
                let three = e.three(Some(s.a))?.clone();
                consider(with_element(&three[0], &s.c2), format!("case B: {how}, a = {}", s.a), e);
                for t in &three[1..] {
                    consider(with_element(t, &s.c1), format!("case B: {how}, a = {}", s.a), e);
                }
            }
        }
        Err(err) => trace.push(format!("case B: solution engine failed: {err}")),
    }
    // every pair (a, b) with the shortest admissible C1 and C2
    let xs: Vec<EdgeId> = e.fs.negatives.iter().copied().filter(|&x| x != l).collect();
    for &a in &xs {
        let three = e.three(Some(a))?.clone();
        if let Some(c1) = e.with_loop(l, a) {
            for t in &three[1..] {
                consider(with_element(t, &c1), format!("case B: pool, a = {a}"), e);
            }
        }
        let c2 = xs
            .iter()
            .filter(|&&b| b != a)
            .filter_map(|&b| e.pair(a, b))
            .filter(|c| !c.contains(l))
            .min_by_key(|c| c.len());
        if let Some(c2) = c2 {
            consider(with_element(&three[0], &c2), format!("case B: pool, a = {a}"), e);
        }
    }
    finish(e, best, trace)
}

fn case_c_cover(e: &mut Engine<'_>, trace: &mut Vec<String>) -> Result<Cover> {
    if e.fs.negatives.len() % 2 == 0 {
        trace.push("case C: even".into());
        return Ok(as_full(shortest(e.three(None)?)));
    }
    let mut best: Option<(Cover, String)> = None;
    let mut consider = |c: Cover, how: String, e: &Engine<'_>| {
        if e.acceptable(&c, None) && best.as_ref().is_none_or(|(b, _)| c.length() < b.length()) {
            best = Some((c, how));
        }
    };
    match case_c::choose_pair(e) {
        Ok(case_c::Choice::Pair { a, b, element, how }) => {
            for skip in [a, b] {
                let t = shortest(e.three(Some(skip))?);
                consider(with_element(&t, &element), format!("case C: {how}, a = {skip}"), e);
            }
        }
        Ok(case_c::Choice::Direct(c)) => consider(c, "case C: two barbells cover G'".into(), e),
        Err(err) => trace.push(format!("case C: pair selection failed: {err}")),
    }
    let xs = e.fs.negatives.clone();
    for &a in &xs {
        let t = shortest(e.three(Some(a))?);
        if let Some(c2) = xs
            .iter()
            .filter(|&&b| b != a)
            .filter_map(|&b| e.pair(a, b))
            .min_by_key(|c| c.len())
        {
            consider(with_element(&t, &c2), format!("case C: pool, a = {a}"), e);
        }
    }
    finish(e, best, trace)
}

fn shortest(three: &[Cover; 3]) -> Cover {
    three.iter().min_by_key(|c| c.length()).expect("three covers").clone()
}

fn as_full(c: Cover) -> Cover {
    Cover {
        elements: c.elements,
        scope: Scope::Full,
    }
}

fn finish(e: &Engine<'_>, best: Option<(Cover, String)>, trace: &mut Vec<String>) -> Result<Cover> {
    match best {
        Some((c, how)) if c.length() <= e.bound() => {
            trace.push(format!("{how}: length {} of {}", c.length(), e.bound()));
            Ok(c)
        }
        Some((c, _)) => Err(construction!(
            "no candidate within 2·|E(G')|: best {} > {}; instance {}",
            c.length(),
            e.bound(),
            e.instance()
        )),
        None => Err(construction!("no candidate cover; instance {}", e.instance())),
    }
}
