//! The full cover pipeline.
//!
//! Per component: minimise the signature, split the edges into the
//! negative edges `X`, the bridges `B`, the edges `S` forming a 2-edge-cut
//! with a negative edge and the bridgeless balanced residual. The residual
//! gets a circuit cover; `X ∪ B ∪ S` is covered inside `G' = T ∪ X` for a
//! spanning tree `T` of `G − X` by [`cover_prime`].

mod case_b;
mod case_c;
mod prime;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Rational64;

use crate::bridgeless::{cover_bridgeless_with, DEFAULT_EXACT_LIMIT};
use crate::circuit::{inadmissible_edge, validate_element, Cover, FundamentalSystem, Scope};
use crate::edgeset::EdgeSet;
use crate::error::{construction, Error, Result};
use crate::graph::{EdgeId, SignedGraph};
use crate::signature::{is_balanced, minimum_signature_with, Switching, BRANCH_BUDGET, EXACT_SWITCH_LIMIT};

pub use prime::{cover_prime, PrimeCover};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// `11/3·m − 5/3·ε_N`
    Main,
    /// `5/3·m + 2n + ε_N/3 − 2c`
    Alt1,
    /// `m + 3n + ε_N − 3c`, needs the residual cover within `m_R + n − 1`
    Alt2,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Main => "main",
            Strategy::Alt1 => "alt1",
            Strategy::Alt2 => "alt2",
        }
    }

    pub fn from_name(s: &str) -> Option<Strategy> {
        match s {
            "main" => Some(Strategy::Main),
            "alt1" => Some(Strategy::Alt1),
            "alt2" => Some(Strategy::Alt2),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub strategy: Strategy,
    /// Components of the residual up to this many edges are covered
    /// exactly.
    pub bridgeless_exact_limit: usize,
    pub switch_exact_limit: usize,
    pub switch_budget: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Main,
            bridgeless_exact_limit: DEFAULT_EXACT_LIMIT,
            switch_exact_limit: EXACT_SWITCH_LIMIT,
            switch_budget: BRANCH_BUDGET,
        }
    }
}

/// The three bounds, summed over components (`c` of them, isolated
/// vertices included).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub main: Rational64,
    pub alt1: Rational64,
    pub alt2: Rational64,
}

impl Bounds {
    pub fn new(m: usize, n: usize, components: usize, eps_n: usize) -> Self {
        let r = |x: usize| Rational64::from_integer(x as i64);
        let third = Rational64::new(1, 3);
        Self {
            main: r(11) * third * r(m) - r(5) * third * r(eps_n),
            alt1: r(5) * third * r(m) + r(2 * n) + third * r(eps_n) - r(2 * components),
            alt2: r(m) + r(3 * n) + r(eps_n) - r(3 * components),
        }
    }

    pub fn get(&self, s: Strategy) -> Rational64 {
        match s {
            Strategy::Main => self.main,
            Strategy::Alt1 => self.alt1,
            Strategy::Alt2 => self.alt2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoverCertificate {
    pub cover: Cover,
    pub m: usize,
    pub n: usize,
    pub components: usize,
    pub eps_n: usize,
    pub x_size: usize,
    /// Negative edges of the minimum signature.
    pub negative_edges: Vec<EdgeId>,
    pub switching: Switching,
    pub requested: Strategy,
    /// The strategy whose bound is certified; differs from `requested`
    /// only when `alt2` had to fall back to `main`.
    pub strategy: Strategy,
    pub downgraded: bool,
    pub bounds: Bounds,
    pub bound: Rational64,
    pub achieved: usize,
    pub residual_length: usize,
    pub prime_length: usize,
    /// Every residual component was covered by the exact solver.
    pub residual_exact: bool,
    pub widths: Vec<usize>,
    pub certified: bool,
    pub trace: Vec<String>,
}

/// `X`, `B`, `S` and the residual of one component under a minimum
/// signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClasses {
    pub x: EdgeSet,
    pub b: EdgeSet,
    pub s: EdgeSet,
    pub residual: EdgeSet,
}

/// Split a connected, flow-admissible component with a minimum signature.
pub fn classify_edges(g: &SignedGraph, comp: &EdgeSet) -> Result<EdgeClasses> {
    if let Some(edge) = inadmissible_edge(g, comp) {
        return Err(Error::NotFlowAdmissible { edge });
    }
    let x = g.negative_edges(comp);
    let b = g.bridges(comp);
    if let Some(e) = b.intersection(&x).first() {
        return Err(Error::Structural(format!(
            "negative bridge {e}: signature is not minimum"
        )));
    }
    let s = g.bridges(&comp.difference(&x).difference(&b));
    if let Some(e) = s.intersection(&x).first() {
        return Err(Error::Structural(format!(
            "edge {e} in S ∩ X: signature is not minimum"
        )));
    }
    let by_cut = two_cut_partners(g, comp, &x, &b);
    if by_cut != s {
        return Err(construction!(
            "bridges of G − X − B {:?} differ from the 2-edge-cut partners of X {:?}",
            s,
            by_cut
        ));
    }
    let residual = comp.difference(&x).difference(&b).difference(&s);
    if !g.bridges(&residual).is_empty() || !is_balanced(g, &residual) {
        return Err(construction!("residual is not bridgeless and balanced"));
    }
    Ok(EdgeClasses { x, b, s, residual })
}

/// Edges `s ∉ X ∪ B` for which some `t ∈ X` makes `{s, t}` a 2-edge-cut.
fn two_cut_partners(g: &SignedGraph, comp: &EdgeSet, x: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    let base = g.components(comp).len();
    let mut out = EdgeSet::new();
    for t in x {
        let mut without_t = comp.clone();
        without_t.remove(t);
        if g.components(&without_t).len() != base || !same_vertices(g, comp, &without_t) {
            continue;
        }
        for s in comp.difference(x).difference(b).iter() {
            let mut rest = without_t.clone();
            rest.remove(s);
            if g.components(&rest).len() > base || !same_vertices(g, comp, &rest) {
                out.insert(s);
            }
        }
    }
    out
}

fn same_vertices(g: &SignedGraph, a: &EdgeSet, b: &EdgeSet) -> bool {
    g.vertices_of(a) == g.vertices_of(b)
}

/// `G' = T ∪ X` for the breadth-first spanning tree `T` of `G − X` rooted at
/// the smallest vertex (edges scanned in id order).
pub fn build_gprime(g: &SignedGraph, comp: &EdgeSet, x: &EdgeSet) -> Result<EdgeSet> {
    let verts = g.vertices_of(comp);
    let rest = comp.difference(x);
    let adj = g.adjacency(&rest);
    let mut seen = vec![false; g.vertex_count()];
    let mut tree = EdgeSet::new();
    let mut queue = VecDeque::new();
    if let Some(&r) = verts.first() {
        seen[r] = true;
        queue.push_back(r);
    }
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                tree.insert(e);
                queue.push_back(w);
            }
        }
    }
    if verts.iter().any(|&v| !seen[v]) {
        return Err(Error::Structural(
            "G − X is disconnected: signature is not minimum".into(),
        ));
    }
    Ok(tree.union(x))
}

/// `X'`, `B'` and `S'` of a graph whose positive edges form a spanning
/// tree, with `S'` split by partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeClasses {
    pub x: EdgeSet,
    pub b: EdgeSet,
    pub s: EdgeSet,
    /// `S'_x` for every negative edge `x`.
    pub s_by: BTreeMap<EdgeId, EdgeSet>,
}

impl PrimeClasses {
    pub fn target(&self) -> EdgeSet {
        self.x.union(&self.b).union(&self.s)
    }
}

/// A tree edge lying on no fundamental circuit is a bridge; it is in `B'`
/// when both sides carry a negative edge. A tree edge on exactly one
/// fundamental circuit `C_x` forms a 2-edge-cut with `x`.
pub fn prime_classes(g: &SignedGraph, gprime: &EdgeSet) -> Result<PrimeClasses> {
    let fs = FundamentalSystem::new(g, gprime)?;
    let mut b = EdgeSet::new();
    let mut s = EdgeSet::new();
    let mut s_by: BTreeMap<EdgeId, EdgeSet> = fs.negatives.iter().map(|&x| (x, EdgeSet::new())).collect();
    for e in &fs.tree {
        let on: Vec<EdgeId> = fs
            .negatives
            .iter()
            .copied()
            .filter(|&x| fs.circuit(x).contains(e))
            .collect();
        match on.len() {
            0 => {
                let mut rest = gprime.clone();
                rest.remove(e);
                let labels = g.component_labels(&rest);
                let ed = g.edge(e);
                let negative_side = |end| {
                    rest.iter().any(|f| {
                        g.is_negative(f) && labels[g.edge(f).u].is_some() && labels[g.edge(f).u] == labels[end]
                    })
                };
                if negative_side(ed.u) && negative_side(ed.v) {
                    b.insert(e);
                }
            }
            1 => {
                s.insert(e);
                s_by.get_mut(&on[0]).expect("negative edge").insert(e);
            }
            _ => {}
        }
    }
    Ok(PrimeClasses {
        x: fs.negatives.iter().copied().collect(),
        b,
        s,
        s_by,
    })
}

pub fn cover_full(g: &SignedGraph, strategy: Strategy) -> Result<CoverCertificate> {
    cover_full_with(
        g,
        &PipelineConfig {
            strategy,
            ..PipelineConfig::default()
        },
    )
}

pub fn cover_full_with(g: &SignedGraph, cfg: &PipelineConfig) -> Result<CoverCertificate> {
    if let Some(edge) = inadmissible_edge(g, &g.all_edges()) {
        return Err(Error::NotFlowAdmissible { edge });
    }
    let ms = minimum_signature_with(g, cfg.switch_exact_limit, cfg.switch_budget)?;
    let gs = &ms.graph;
    let mut cover = Cover::new(Scope::Full);
    let mut trace = Vec::new();
    let (mut residual_length, mut prime_length) = (0, 0);
    let mut residual_exact = true;
    let mut fan_ok = true;
    let mut negative_edges = Vec::new();
    let comps = g.components(&g.all_edges());
    for comp in &comps {
        let classes = classify_edges(gs, comp)?;
        negative_edges.extend(classes.x.iter());
        let verts = gs.vertices_of(comp).len();
        trace.push(format!(
            "component {:?}: |X| = {}, |B| = {}, |S| = {}, residual {} edges",
            gs.vertices_of(comp),
            classes.x.len(),
            classes.b.len(),
            classes.s.len(),
            classes.residual.len()
        ));
        if !classes.residual.is_empty() {
            let pc = cover_bridgeless_with(gs, &classes.residual, cfg.bridgeless_exact_limit)?;
            residual_exact &= pc.exact;
            // the alternative bound needs the residual within m − |X| + n − 1
            if pc.length() + classes.x.len() > comp.len() + verts - 1 {
                fan_ok = false;
            }
            residual_length += pc.length();
            cover.absorb(pc.cover);
        }
        match classes.x.len() {
            0 => continue,
            1 => {
                return Err(Error::NotFlowAdmissible {
                    edge: classes.x.first().expect("one edge"),
                })
            }
            _ => {}
        }
        let gprime = build_gprime(gs, comp, &classes.x)?;
        let pcl = prime_classes(gs, &gprime)?;
        if pcl.x != classes.x || !classes.b.is_subset(&pcl.b) || !classes.s.is_subset(&pcl.s) {
            return Err(construction!("G' does not keep X and extend B and S"));
        }
        let pc = cover_prime(gs, &gprime)?;
        if !pc.cover.covers(&classes.x.union(&classes.b).union(&classes.s)) {
            return Err(construction!("G' cover misses an edge of X ∪ B ∪ S"));
        }
        trace.extend(pc.trace);
        prime_length += pc.cover.length();
        cover.absorb(pc.cover);
    }
    for el in &cover.elements {
        validate_element(g, el).map_err(|why| construction!("invalid element in final cover: {why}"))?;
    }
    let all = g.all_edges();
    if !cover.covers(&all) {
        return Err(construction!("final cover misses an edge"));
    }
    let m = g.edge_count();
    let n = g.vertex_count();
    let deg = g.degrees(&all);
    let components = comps.len() + deg.iter().filter(|&&d| d == 0).count();
    let bounds = Bounds::new(m, n, components, ms.eps_n);
    let achieved = cover.length();
    let (strategy, downgraded) = match cfg.strategy {
        Strategy::Alt2 if !(fan_ok && residual_exact) => (Strategy::Main, true),
        s => (s, false),
    };
    let bound = bounds.get(strategy);
    let certified = Rational64::from_integer(achieved as i64) <= bound;
    Ok(CoverCertificate {
        widths: cover.widths(m),
        cover,
        m,
        n,
        components,
        eps_n: ms.eps_n,
        x_size: negative_edges.len(),
        negative_edges,
        switching: ms.switching,
        requested: cfg.strategy,
        strategy,
        downgraded,
        bounds,
        bound,
        achieved,
        residual_length,
        prime_length,
        residual_exact,
        certified,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::{self, Negative as N, Positive as P};
    use crate::verify::{verify_cover, Requirements};

    fn g(n: usize, e: &[(usize, usize, Sign)]) -> SignedGraph {
        SignedGraph::from_edges(n, e).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn check(gr: &SignedGraph) -> CoverCertificate {
        let c = cover_full(gr, Strategy::Main).unwrap();
        let rep = verify_cover(gr, &c.cover, &Requirements::default());
        assert!(rep.valid, "{:?}", rep.violations);
        assert!(c.certified);
        c
    }

    #[test]
    fn two_loops_on_an_edge() {
        let h = g(2, &[(0, 0, N), (0, 1, P), (1, 1, N)]);
        let p = cover_prime(&h, &h.all_edges()).unwrap();
        assert_eq!(p.cover.length(), 6);
        assert_eq!(p.cover.elements.len(), 2);
        assert!(p
            .cover
            .elements
            .iter()
            .all(|c| c.kind == crate::circuit::CircuitKind::LongBarbell));
    }

    #[test]
    fn long_barbell_certificate() {
        let h = g(3, &[(0, 0, N), (0, 1, P), (1, 2, P), (2, 2, N)]);
        let c = check(&h);
        assert_eq!(c.eps_n, 2);
        assert_eq!(c.bounds.main, r(34, 3));
        assert!(c.achieved <= 8);
    }

    #[test]
    fn petersen_with_negative_pentagon() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5, N));
            e.push((i, i + 5, P));
            e.push((i + 5, (i + 2) % 5 + 5, P));
        }
        let c = check(&g(10, &e));
        // switching at two non-adjacent outer vertices leaves three
        // negative edges
        assert_eq!(c.eps_n, 3);
        assert_eq!(c.bounds.main, r(50, 1));
        assert!(c.achieved <= 46);
    }

    #[test]
    fn balanced_bridgeless() {
        let h = g(4, &[(0, 1, P), (1, 2, P), (2, 3, P), (3, 0, P), (0, 2, P)]);
        let c = check(&h);
        assert_eq!(c.eps_n, 0);
        assert_eq!(c.bounds.main, r(55, 3));
        assert!(3 * c.achieved <= 25);
    }

    #[test]
    fn triangles_over_a_bridge() {
        let h = g(
            6,
            &[
                (0, 1, N),
                (1, 2, P),
                (2, 0, P),
                (2, 3, P),
                (3, 4, P),
                (4, 5, N),
                (5, 3, P),
            ],
        );
        let ms = crate::signature::minimum_signature(&h).unwrap();
        let cl = classify_edges(&ms.graph, &h.all_edges()).unwrap();
        assert_eq!(cl.b.to_vec(), vec![3]);
        assert_eq!(cl.x.len(), 2);
        assert_eq!(cl.s.len(), 4);
        assert!(cl.residual.is_empty());
        check(&h);
    }

    #[test]
    fn bridge_to_a_balanced_side() {
        // in G' a bridge with no negative edge beyond it is not in B'
        let h = g(3, &[(0, 0, N), (0, 1, P), (1, 1, N), (1, 2, P)]);
        let pc = prime_classes(&h, &h.all_edges()).unwrap();
        assert_eq!(pc.b.to_vec(), vec![1]);
        // in G such a bridge lies on no signed circuit
        let t = g(
            6,
            &[
                (0, 0, N),
                (0, 1, P),
                (1, 1, N),
                (1, 2, P),
                (2, 3, P),
                (3, 4, P),
                (4, 2, P),
            ],
        );
        assert!(matches!(
            classify_edges(&t, &t.all_edges()),
            Err(Error::NotFlowAdmissible { edge: 3 })
        ));
    }

    #[test]
    fn one_negative_loop_is_rejected() {
        let h = g(2, &[(0, 0, N), (0, 1, P), (1, 0, P)]);
        assert!(matches!(
            cover_full(&h, Strategy::Main),
            Err(Error::NotFlowAdmissible { .. })
        ));
    }

    #[test]
    fn three_circuits_pool_beats_two_barbells() {
        // path 0-1-2-3-4-5, chords x = 0-2, y = 1-4, z = 3-5
        let h = g(
            6,
            &[
                (0, 1, P),
                (1, 2, P),
                (2, 3, P),
                (3, 4, P),
                (4, 5, P),
                (0, 2, N),
                (1, 4, N),
                (3, 5, N),
            ],
        );
        let p = cover_prime(&h, &h.all_edges()).unwrap();
        assert!(p.cover.length() <= 10, "{:?}", p.trace);
    }

    #[test]
    fn alt2_downgrades_without_exact_residual() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5, N));
            e.push((i, i + 5, P));
            e.push((i + 5, (i + 2) % 5 + 5, P));
        }
        let h = g(10, &e);
        let cfg = PipelineConfig {
            strategy: Strategy::Alt2,
            bridgeless_exact_limit: 0,
            ..PipelineConfig::default()
        };
        let c = cover_full_with(&h, &cfg).unwrap();
        assert!(c.downgraded);
        assert_eq!(c.strategy, Strategy::Main);
    }

    #[test]
    fn disconnected_components_sum() {
        let h = g(7, &[(0, 0, N), (0, 1, P), (1, 1, N), (2, 3, P), (3, 4, P), (4, 2, P)]);
        let c = check(&h);
        assert_eq!(c.components, 4);
        assert_eq!(c.bounds.alt2, r(6 + 21 + 2 - 12, 1));
    }
}
