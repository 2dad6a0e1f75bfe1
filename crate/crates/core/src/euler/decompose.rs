//! Splitting a 2-connected Eulerian graph into two Eulerian parts, one of
//! them with an even number of negative edges.

use alloc::vec::Vec;

use super::euler_circuit;
use crate::circuit::{circuit_order, circuit_walk};
use crate::edgeset::EdgeSet;
use crate::error::{construction, precondition, Result};
use crate::graph::{end_block_split, is_eulerian_edges, SignedGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// The input is a circuit.
    Circuit,
    /// `a1` contains the requested vertex, `a2` has an even number of
    /// negative edges. Both are non-trivial Eulerian and partition the input.
    Split { a1: EdgeSet, a2: EdgeSet },
}

/// Either report that `a` is a circuit or split it into Eulerian `A1 ∋ v`
/// and `A2` with `ε(A2)` even.
pub fn decompose_eulerian(g: &SignedGraph, a: &EdgeSet, v: VertexId) -> Result<Decomposition> {
    if a.is_empty() || !is_eulerian_edges(g, a) {
        return Err(precondition!("input must be a non-trivial Eulerian graph"));
    }
    if g.loops(a).iter().any(|l| g.is_negative(l)) {
        return Err(precondition!("input has a negative loop"));
    }
    if !g.vertex_mask(a)[v] {
        return Err(precondition!("vertex {v} is not in the graph"));
    }
    if end_block_split(g, a).is_some() {
        return Err(precondition!("input is not 2-connected"));
    }
    if circuit_order(g, a).is_some() {
        return Ok(Decomposition::Circuit);
    }
    let circuit = circuit_through(g, a, v)?;
    let rest = a.difference(&circuit);
    let comps = g.components(&rest);
    let out = if let Some(even) = comps.iter().find(|c| g.negative_count(c) % 2 == 0) {
        Decomposition::Split {
            a1: a.difference(even),
            a2: even.clone(),
        }
    } else {
        split_odd(g, a, v, &circuit, &comps)?
    };
    if let Decomposition::Split { a1, a2 } = &out {
        check_split(g, a, v, a1, a2)?;
    }
    Ok(out)
}

/// A circuit through `v`: a positive loop at `v`, or the smallest edge at
/// `v` closed by a shortest path.
fn circuit_through(g: &SignedGraph, a: &EdgeSet, v: VertexId) -> Result<EdgeSet> {
    let adj = g.adjacency(a);
    if let Some(&(l, _)) = adj[v].iter().find(|&&(e, _)| g.is_loop(e)) {
        return Ok([l].into_iter().collect());
    }
    let &(e, w) = adj[v].first().ok_or_else(|| construction!("vertex {v} has no edge"))?;
    let mut without = a.clone();
    without.remove(e);
    let n = g.vertex_count();
    let mut src = alloc::vec![false; n];
    let mut dst = alloc::vec![false; n];
    src[w] = true;
    dst[v] = true;
    let (_, path) = g
        .shortest_path(&without, &src, &dst, None)
        .ok_or_else(|| construction!("edge {e} lies on no circuit"))?;
    let mut c: EdgeSet = path.into_iter().collect();
    c.insert(e);
    Ok(c)
}

/// Every component of `A − C` is odd: reroute through the first one.
fn split_odd(g: &SignedGraph, a: &EdgeSet, v: VertexId, circuit: &EdgeSet, comps: &[EdgeSet]) -> Result<Decomposition> {
    let first = &comps[0];
    let in_first = g.vertex_mask(first);
    let (_, walk) = circuit_walk(g, circuit, Some(v)).ok_or_else(|| construction!("C is not a circuit"))?;
    let order: Vec<VertexId> = walk.iter().map(|&(_, from, _)| from).collect();
    let hits: Vec<usize> = (0..order.len()).filter(|&i| in_first[order[i]]).collect();
    if hits.len() < 2 {
        return Err(construction!("component meets the circuit in fewer than two vertices"));
    }
    let (i, j) = (hits[0], hits[1]);
    let (v1, v2) = (order[i], order[j]);
    // arc of C from v1 to v2 that avoids v internally
    let arc: EdgeSet = walk[i..j].iter().map(|&(e, _, _)| e).collect();
    let interior: Vec<VertexId> = order[i + 1..j].to_vec();
    let mut attached = EdgeSet::new();
    for c in &comps[1..] {
        let vs = g.vertices_of(c);
        let on_circuit: Vec<VertexId> = vs.iter().copied().filter(|x| order.contains(x)).collect();
        if !on_circuit.is_empty() && on_circuit.iter().all(|x| interior.contains(x)) {
            attached.union_with(c);
        }
    }
    let trail = euler_circuit(g, first, v1).ok_or_else(|| construction!("component is not Eulerian"))?;
    let cut = trail
        .iter()
        .position(|&(_, _, to)| to == v2)
        .ok_or_else(|| construction!("trail never reaches v2"))?;
    let w1: EdgeSet = trail[..=cut].iter().map(|&(e, _, _)| e).collect();
    let w2 = first.difference(&w1);
    let base = g.negative_count(&arc) + g.negative_count(&attached);
    let chosen = if (base + g.negative_count(&w1)) % 2 == 0 {
        w1
    } else {
        w2
    };
    let a2 = chosen.union(&arc).union(&attached);
    Ok(Decomposition::Split {
        a1: a.difference(&a2),
        a2,
    })
}

fn check_split(g: &SignedGraph, a: &EdgeSet, v: VertexId, a1: &EdgeSet, a2: &EdgeSet) -> Result<()> {
    let ok = !a1.is_empty()
        && !a2.is_empty()
        && a1.is_disjoint(a2)
        && a1.union(a2) == *a
        && is_eulerian_edges(g, a1)
        && is_eulerian_edges(g, a2)
        && g.vertex_mask(a1)[v]
        && g.negative_count(a2) % 2 == 0;
    if ok {
        Ok(())
    } else {
        Err(construction!("decomposition postconditions fail for {:?}", a.to_vec()))
    }
}
