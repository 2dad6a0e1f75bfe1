//! Three weak covers of a tree of Eulerian graphs with `ε̃` even.

use super::tour::three_rec;
use super::{
    absorb_three, audit_three, build_euler_tree, compress, decompose_eulerian, decompress, empty_three, eps_tilde,
    single, split_positive_loops, Decomposition, LoopAssignment,
};
use crate::circuit::{circuit_order, merge_covers_at_loops, Cover};
use crate::edgeset::EdgeSet;
use crate::error::{precondition, Result};
use crate::graph::{end_block_split, Sign, SignedGraph};

/// Three weak signed circuit covers of a tree of Eulerian graphs with an
/// even number of negative non-bridge edges: each of width at most 2, total
/// width at most 4, the first covering every negative loop exactly twice.
pub fn even_tree_three_covers(g: &SignedGraph, h: &EdgeSet) -> Result<[Cover; 3]> {
    build_euler_tree(g, h)?;
    if eps_tilde(g, h) % 2 == 1 {
        return Err(precondition!("odd number of negative non-bridge edges"));
    }
    let covers = even_rec(g, h)?;
    audit_three(g, h, &covers)?;
    Ok(covers)
}

/// The shortest of the three covers; its length is at most `4/3·|E(H)|`.
pub fn even_tree_cover(g: &SignedGraph, h: &EdgeSet) -> Result<Cover> {
    let covers = even_tree_three_covers(g, h)?;
    Ok(covers.into_iter().min_by_key(|c| c.length()).expect("three covers"))
}

pub(crate) fn even_rec(g: &SignedGraph, h: &EdgeSet) -> Result<[Cover; 3]> {
    let (pos, h) = split_positive_loops(g, h);
    let mut out = empty_three();
    for l in &pos {
        let el = single(g, l)?;
        for c in out.iter_mut() {
            c.push(el.clone());
        }
    }
    if h.is_empty() {
        return Ok(out);
    }
    if let Some((h1, h2, v)) = end_block_split(g, &h) {
        if eps_tilde(g, &h1) % 2 == 0 {
            absorb_three(&mut out, even_rec(g, &h1)?);
            absorb_three(&mut out, even_rec(g, &h2)?);
        } else {
            let mut g2 = g.clone();
            let e1 = g2.add_edge(v, v, Sign::Negative)?;
            let e2 = g2.add_edge(v, v, Sign::Negative)?;
            let mut p = h1.clone();
            p.insert(e1);
            let mut q = h2.clone();
            q.insert(e2);
            let a = even_rec(&g2, &p)?;
            let b = even_rec(&g2, &q)?;
            for (slot, (x, y)) in out.iter_mut().zip(a.into_iter().zip(b)) {
                slot.absorb(merge_covers_at_loops(&g2, x, e1, y, e2)?);
            }
        }
        return Ok(out);
    }
    let loops = g.loops(&h);
    let body = h.difference(&loops);
    if body.is_empty() || !g.bridges(&h).is_empty() {
        // a vertex with loops, or an edge with loops at its ends
        absorb_three(&mut out, three_rec(g, &h)?);
        return Ok(out);
    }
    let f = LoopAssignment::smallest_edge(g, &h, &loops)?;
    let (gs, hs) = compress(g, &h, &f)?;
    if circuit_order(&gs, &hs).is_some() {
        absorb_three(&mut out, three_rec(g, &h)?);
        return Ok(out);
    }
    let v = g.vertices_of(&hs)[0];
    match decompose_eulerian(&gs, &hs, v)? {
        Decomposition::Split { a1, a2 } => {
            absorb_three(&mut out, even_rec(g, &decompress(&f, &a1))?);
            absorb_three(&mut out, even_rec(g, &decompress(&f, &a2))?);
        }
        Decomposition::Circuit => absorb_three(&mut out, three_rec(g, &h)?),
    }
    Ok(out)
}
