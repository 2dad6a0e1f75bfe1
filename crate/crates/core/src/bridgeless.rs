//! Circuit covers of bridgeless balanced graphs.
//!
//! Components with at most [`DEFAULT_EXACT_LIMIT`] edges get a minimum
//! length circuit cover. Larger ones fall back to a greedy cover, which is
//! reported as not certified unless it happens to meet `5/3·m`.

use alloc::vec::Vec;

use crate::circuit::{enumerate_circuits, Cover, Scope, SignedCircuit};
use crate::edgeset::EdgeSet;
use crate::error::{construction, precondition, Error, Result};
use crate::graph::SignedGraph;
use crate::setcover::{min_weight_cover, SetCoverOutcome};
use crate::signature::is_balanced;

pub const DEFAULT_EXACT_LIMIT: usize = 16;
const CIRCUIT_CAP: usize = 20_000;
const STATE_BUDGET: usize = 1 << 20;

#[derive(Clone, Debug)]
pub struct PositiveCover {
    pub cover: Cover,
    /// Every component was solved to optimality.
    pub exact: bool,
    /// `3·length ≤ 5·m`.
    pub certified: bool,
}

impl PositiveCover {
    pub fn length(&self) -> usize {
        self.cover.length()
    }
}

pub fn cover_bridgeless(g: &SignedGraph, edges: &EdgeSet) -> Result<PositiveCover> {
    cover_bridgeless_with(g, edges, DEFAULT_EXACT_LIMIT)
}

pub fn cover_bridgeless_with(g: &SignedGraph, edges: &EdgeSet, exact_limit: usize) -> Result<PositiveCover> {
    check_input(g, edges)?;
    let mut cover = Cover::new(Scope::Full);
    let mut exact = true;
    for comp in g.components(edges) {
        let part = if comp.len() <= exact_limit {
            match exact_component(g, &comp) {
                Ok(c) => c,
                Err(Error::LimitExceeded(_)) => {
                    exact = false;
                    greedy_component(g, &comp)?
                }
                Err(e) => return Err(e),
            }
        } else {
            exact = false;
            greedy_component(g, &comp)?
        };
        cover.absorb(part);
    }
    let certified = 3 * cover.length() <= 5 * edges.len();
    Ok(PositiveCover {
        cover,
        exact,
        certified,
    })
}

/// Minimum length circuit cover; fails with `LimitExceeded` above `limit`
/// edges or when the circuit enumeration overflows.
pub fn exact_min_circuit_cover(g: &SignedGraph, edges: &EdgeSet, limit: usize) -> Result<PositiveCover> {
    check_input(g, edges)?;
    if edges.len() > limit {
        return Err(Error::LimitExceeded(alloc::format!(
            "{} edges exceed the exact limit {limit}",
            edges.len()
        )));
    }
    let mut cover = Cover::new(Scope::Full);
    for comp in g.components(edges) {
        cover.absorb(exact_component(g, &comp)?);
    }
    let certified = 3 * cover.length() <= 5 * edges.len();
    Ok(PositiveCover {
        cover,
        exact: true,
        certified,
    })
}

fn check_input(g: &SignedGraph, edges: &EdgeSet) -> Result<()> {
    if let Some(b) = g.bridges(edges).first() {
        return Err(precondition!("edge {b} is a bridge"));
    }
    if !is_balanced(g, edges) {
        return Err(precondition!("graph is not balanced"));
    }
    Ok(())
}

fn element(g: &SignedGraph, c: EdgeSet) -> Result<SignedCircuit> {
    SignedCircuit::from_edges(g, c).map_err(|e| construction!("circuit rejected: {e}"))
}

fn exact_component(g: &SignedGraph, comp: &EdgeSet) -> Result<Cover> {
    if comp.len() > 64 {
        return Err(Error::LimitExceeded("component too large".into()));
    }
    let circuits =
        enumerate_circuits(g, comp, CIRCUIT_CAP).map_err(|_| Error::LimitExceeded("too many circuits".into()))?;
    let ids = comp.to_vec();
    let bit = |e| 1u64 << ids.binary_search(&e).expect("edge of component");
    let sets: Vec<(u64, usize)> = circuits
        .iter()
        .map(|c| (c.iter().fold(0, |m, e| m | bit(e)), c.len()))
        .collect();
    let universe = if ids.len() == 64 {
        u64::MAX
    } else {
        (1 << ids.len()) - 1
    };
    match min_weight_cover(universe, &sets, STATE_BUDGET) {
        SetCoverOutcome::Optimal { chosen, .. } => {
            let mut cover = Cover::new(Scope::Full);
            for i in chosen {
                cover.push(element(g, circuits[i].clone())?);
            }
            Ok(cover)
        }
        SetCoverOutcome::Infeasible { element } => {
            Err(construction!("edge {} lies on no circuit", ids[element as usize]))
        }
        SetCoverOutcome::BudgetExceeded => Err(Error::LimitExceeded("set cover state budget".into())),
    }
}

/// Shortest circuit through the smallest uncovered edge until everything
/// is covered, then drop redundant circuits, longest first.
fn greedy_component(g: &SignedGraph, comp: &EdgeSet) -> Result<Cover> {
    let n = g.vertex_count();
    let mut uncovered = comp.clone();
    let mut chosen: Vec<EdgeSet> = Vec::new();
    while let Some(e) = uncovered.first() {
        let ed = *g.edge(e);
        let c: EdgeSet = if ed.is_loop() {
            [e].into_iter().collect()
        } else {
            let mut without = comp.clone();
            without.remove(e);
            let mut src = alloc::vec![false; n];
            let mut dst = alloc::vec![false; n];
            src[ed.v] = true;
            dst[ed.u] = true;
            let (_, path) = g
                .shortest_path(&without, &src, &dst, None)
                .ok_or_else(|| construction!("edge {e} lies on no circuit"))?;
            path.into_iter().chain([e]).collect()
        };
        uncovered.difference_with(&c);
        chosen.push(c);
    }
    let mut order: Vec<usize> = (0..chosen.len()).collect();
    order.sort_by_key(|&i| core::cmp::Reverse((chosen[i].len(), i)));
    let mut keep = alloc::vec![true; chosen.len()];
    for i in order {
        keep[i] = false;
        let mut rest = EdgeSet::new();
        for (j, c) in chosen.iter().enumerate() {
            if keep[j] {
                rest.union_with(c);
            }
        }
        if !chosen[i].is_subset(&rest) {
            keep[i] = true;
        }
    }
    let mut cover = Cover::new(Scope::Full);
    for (c, k) in chosen.into_iter().zip(keep) {
        if k {
            cover.push(element(g, c)?);
        }
    }
    Ok(cover)
}
