//! No loops and an odd number of negative edges: find `a, b` whose
//! fundamental circuits fit in a signed circuit of length at most
//! `2/3·|E(G')|`, or cover `G'` directly by two barbells.

use alloc::vec::Vec;

use super::prime::Engine;
use crate::circuit::{barbell_on_cut_pair, Cover, Scope, SignedCircuit};
use crate::error::{construction, Result};
use crate::graph::EdgeId;

pub(crate) enum Choice {
    Pair {
        a: EdgeId,
        b: EdgeId,
        element: SignedCircuit,
        how: &'static str,
    },
    Direct(Cover),
}

pub(crate) fn choose_pair(e: &Engine<'_>) -> Result<Choice> {
    let (g, fs) = (e.g, &e.fs);
    let xs = &fs.negatives;
    let meet = |p: EdgeId, q: EdgeId| fs.meet(g, p, q);
    let short_enough = |c: &SignedCircuit| 3 * c.len() <= 2 * e.h.len();
    // three pairwise meeting circuits: the three sums have no common edge
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate().skip(i + 1) {
            if !meet(x, y) {
                continue;
            }
            for &z in &xs[j + 1..] {
                if !(meet(x, z) && meet(y, z)) {
                    continue;
                }
                let best = [(x, y), (x, z), (y, z)]
                    .into_iter()
                    .filter_map(|(p, q)| Some((p, q, SignedCircuit::from_edges(g, fs.sym_diff(&[p, q])).ok()?)))
                    .min_by_key(|(_, _, c)| c.len())
                    .ok_or_else(|| construction!("pairwise sums of meeting circuits are not signed circuits"))?;
                if !short_enough(&best.2) {
                    return Err(construction!("shortest pairwise sum exceeds 2/3·|E(G')|"));
                }
                return Ok(Choice::Pair {
                    a: best.0,
                    b: best.1,
                    element: best.2,
                    how: "three pairwise meeting circuits",
                });
            }
        }
    }
    // the argument works for any x, y, z with the required overlaps; try
    // them in id order
    let share = |p: EdgeId, q: EdgeId| !fs.circuit(p).is_disjoint(fs.circuit(q));
    let mut last_err = None;
    for &x0 in xs {
        for &y0 in xs.iter().filter(|&&y| y != x0 && share(x0, y)) {
            let dxy = fs.union(&[x0, y0]);
            for &z in xs
                .iter()
                .filter(|&&z| z != x0 && z != y0 && !fs.circuit(z).is_disjoint(&dxy))
            {
                // no three circuits meet pairwise, so C_z misses one of them
                let (x, y) = if meet(x0, z) { (y0, x0) } else { (x0, y0) };
                match with_triple(e, x, y, z) {
                    Ok(c) => return Ok(c),
                    Err(err) => last_err = Some(err),
                }
            }
        }
    }
    Err(last_err.unwrap_or_else(|| construction!("no three circuits overlap in a chain")))
}

fn with_triple(e: &Engine<'_>, x: EdgeId, y: EdgeId, z: EdgeId) -> Result<Choice> {
    let (g, fs) = (e.g, &e.fs);
    let d = fs.union(&[x, y, z]);
    if d == e.h {
        let b1 = barbell_on_cut_pair(g, fs, x, z, &[])?;
        let b2 = barbell_on_cut_pair(g, fs, x, z, &[y])?;
        let (Some(b1), Some(b2)) = (b1, b2) else {
            return Err(construction!("G' = D_{{x,y,z}} but the two barbells do not exist"));
        };
        return Ok(Choice::Direct(Cover {
            elements: alloc::vec![b1, b2],
            scope: Scope::Full,
        }));
    }
    let mut last_err = None;
    for &w in fs
        .negatives
        .iter()
        .filter(|&&w| ![x, y, z].contains(&w) && !fs.circuit(w).is_disjoint(&d))
    {
        match with_four(e, [x, y, z, w]) {
            Ok(c) => return Ok(c),
            Err(err) => last_err = Some(err),
        }
    }
    Err(last_err.unwrap_or_else(|| construction!("no circuit extends D_{{x,y,z}}")))
}

fn with_four(e: &Engine<'_>, four: [EdgeId; 4]) -> Result<Choice> {
    let (g, fs) = (e.g, &e.fs);
    let meet = |p: EdgeId, q: EdgeId| fs.meet(g, p, q);
    let mut candidates: Vec<(EdgeId, EdgeId, SignedCircuit)> = Vec::new();
    for (i, &p) in four.iter().enumerate() {
        for &q in &four[i + 1..] {
            if meet(p, q) {
                if let Ok(c) = SignedCircuit::from_edges(g, fs.sym_diff(&[p, q])) {
                    candidates.push((p, q, c));
                }
                continue;
            }
            let mut ys: Vec<Vec<EdgeId>> = alloc::vec![Vec::new()];
            ys.extend(four.iter().filter(|&&r| r != p && r != q).map(|&r| alloc::vec![r]));
            for yset in ys {
                if let Some(c) = barbell_on_cut_pair(g, fs, p, q, &yset)? {
                    candidates.push((p, q, c));
                }
            }
        }
    }
    let (a, b, element) = candidates
        .into_iter()
        .min_by_key(|(_, _, c)| c.len())
        .ok_or_else(|| construction!("no signed circuit on the four circuits"))?;
    if 3 * element.len() > 2 * e.h.len() {
        return Err(construction!(
            "shortest element on the four circuits exceeds 2/3·|E(G')|"
        ));
    }
    let how = if four.iter().any(|&r| four.iter().all(|&q| q == r || meet(r, q))) {
        "one circuit meets the other three"
    } else {
        "chain of four circuits"
    };
    Ok(Choice::Pair { a, b, element, how })
}
