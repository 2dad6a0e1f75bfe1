//! Seeded instance generators. The same parameters and seed always give
//! the same graph, edge order included.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigcover_core::euler::build_euler_tree;
use sigcover_core::graph::{Sign, SignedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Random spanning tree plus uniform extra edges; loops and parallel
    /// edges allowed.
    RandomMultigraph,
    /// Positive spanning tree plus chords, the chords negative.
    TreePlusChords,
    /// Circuits, double circuits and negative loops glued at vertices or
    /// hung on bridges.
    EulerTree,
}

#[derive(Clone, Debug)]
pub struct GenParams {
    pub model: Model,
    /// Vertex count; not used by `euler-tree`, whose size is set by `m`.
    pub n: Option<usize>,
    pub m: usize,
    /// Number of negative edges. For `euler-tree` this counts non-loop
    /// edges only, loops are always negative.
    pub negatives: Option<usize>,
    /// `euler-tree` only: make every leaf balloon odd.
    pub odd_leaves: bool,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("a connected graph on {n} vertices needs at least {} edges, got {m}", n - 1)]
    TooFewEdges { n: usize, m: usize },
    #[error("{0}")]
    Parameters(String),
}

pub fn generate(p: &GenParams) -> Result<SignedGraph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    match p.model {
        Model::RandomMultigraph => {
            let n = need_n(p)?;
            random_multigraph(&mut rng, n, p.m, p.negatives)
        }
        Model::TreePlusChords => {
            let n = need_n(p)?;
            tree_plus_chords(&mut rng, n, p.m, p.negatives)
        }
        Model::EulerTree => {
            if p.n.is_some() {
                return Err(GenError::Parameters("euler-tree is sized by -m alone".into()));
            }
            if p.odd_leaves && p.negatives.is_some() {
                return Err(GenError::Parameters(
                    "--odd-leaves fixes signs, drop --negatives".into(),
                ));
            }
            euler_tree(&mut rng, p.m, p.negatives, p.odd_leaves)
        }
    }
}

fn need_n(p: &GenParams) -> Result<usize, GenError> {
    if p.odd_leaves {
        return Err(GenError::Parameters("--odd-leaves applies to euler-tree only".into()));
    }
    match p.n {
        Some(0) | None => Err(GenError::Parameters("need -n of at least 1".into())),
        Some(n) if p.m + 1 < n => Err(GenError::TooFewEdges { n, m: p.m }),
        Some(n) => Ok(n),
    }
}

fn sign(neg: bool) -> Sign {
    if neg {
        Sign::Negative
    } else {
        Sign::Positive
    }
}

/// Random recursive tree on `0..n`.
fn tree_edges<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|v| (rng.random_range(0..v), v)).collect()
}

fn build(n: usize, edges: &[(usize, usize, Sign)]) -> SignedGraph {
    SignedGraph::from_edges(n, edges).expect("generated endpoints are in range")
}

pub fn random_multigraph<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    negatives: Option<usize>,
) -> Result<SignedGraph, GenError> {
    if let Some(k) = negatives.filter(|&k| k > m) {
        return Err(GenError::Parameters(format!("{k} negative edges asked of {m}")));
    }
    let mut pairs = tree_edges(rng, n);
    while pairs.len() < m {
        pairs.push((rng.random_range(0..n), rng.random_range(0..n)));
    }
    // mix tree edges and extra edges in the id order
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.random_range(0..=i));
    }
    let neg: Vec<bool> = match negatives {
        Some(k) => {
            let mut v = vec![false; m];
            for i in sample(rng, m, k) {
                v[i] = true;
            }
            v
        }
        None => (0..m).map(|_| rng.random_bool(0.5)).collect(),
    };
    let edges: Vec<_> = pairs.iter().zip(&neg).map(|(&(u, v), &s)| (u, v, sign(s))).collect();
    Ok(build(n, &edges))
}

/// Positive tree edges first, then `m − n + 1` chords (loops allowed), the
/// first `negatives` of them negative (all by default).
pub fn tree_plus_chords<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    negatives: Option<usize>,
) -> Result<SignedGraph, GenError> {
    let chords = m + 1 - n;
    let k = negatives.unwrap_or(chords);
    if k > chords {
        return Err(GenError::Parameters(format!(
            "only {chords} chords, {k} negative edges asked"
        )));
    }
    let mut edges: Vec<_> = tree_edges(rng, n)
        .into_iter()
        .map(|(u, v)| (u, v, Sign::Positive))
        .collect();
    for i in 0..chords {
        edges.push((rng.random_range(0..n), rng.random_range(0..n), sign(i < k)));
    }
    Ok(build(n, &edges))
}

/// A tree of Eulerian graphs with exactly `m` edges and no pendant vertex.
pub fn euler_tree<R: Rng>(
    rng: &mut R,
    m: usize,
    negatives: Option<usize>,
    odd_leaves: bool,
) -> Result<SignedGraph, GenError> {
    if m == 0 {
        return Err(GenError::Parameters("euler-tree needs -m of at least 1".into()));
    }
    let mut n = 1;
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    let mut bridges = Vec::new();
    let mut left = m;
    while left > 0 {
        let mut at = rng.random_range(0..n);
        if !edges.is_empty() && left >= 2 && rng.random_bool(0.4) {
            bridges.push(edges.len());
            edges.push((at, n, false));
            at = n;
            n += 1;
            left -= 1;
        }
        let size = match left {
            1 => 1,
            _ if rng.random_bool(0.2) => 1,
            _ => rng.random_range(2..=left.min(7)),
        };
        if size == 1 {
            edges.push((at, at, true));
        } else if size >= 5 && rng.random_bool(0.4) {
            // two circuits through the same pair of vertices
            let first = rng.random_range(3..=size - 2);
            let verts = cycle(&mut edges, &mut n, at, first);
            let (p, q) = (verts[0], verts[first / 2]);
            let mut cur = p;
            for i in 0..size - first {
                let next = match i + 1 == size - first {
                    true => p,
                    false if i == 0 => q,
                    false => {
                        n += 1;
                        n - 1
                    }
                };
                edges.push((cur, next, false));
                cur = next;
            }
        } else {
            cycle(&mut edges, &mut n, at, size);
        }
        left -= size;
    }
    let free: Vec<usize> = (0..m).filter(|&i| edges[i].0 != edges[i].1).collect();
    match negatives {
        Some(k) if k > free.len() => {
            return Err(GenError::Parameters(format!(
                "{k} negative edges asked, only {} non-loop edges",
                free.len()
            )))
        }
        Some(k) => {
            for i in sample(rng, free.len(), k) {
                edges[free[i]].2 = true;
            }
        }
        None => {
            for &i in &free {
                edges[i].2 = rng.random_bool(0.5);
            }
        }
    }
    let mut g = build(n, &edges.iter().map(|&(u, v, s)| (u, v, sign(s))).collect::<Vec<_>>());
    if odd_leaves {
        let h = g.all_edges();
        let tree = build_euler_tree(&g, &h).map_err(|e| GenError::Parameters(e.to_string()))?;
        for leaf in tree.leaves().filter(|b| !b.odd && !b.trivial) {
            let e = leaf.edges.first().expect("non-trivial balloon");
            g.set_sign(e, g.sign(e).flip());
        }
    }
    Ok(g)
}

/// Circuit of length `len ≥ 2` through `at` on new vertices.
fn cycle(edges: &mut Vec<(usize, usize, bool)>, n: &mut usize, at: usize, len: usize) -> Vec<usize> {
    let mut verts = vec![at];
    for _ in 1..len {
        verts.push(*n);
        *n += 1;
    }
    for i in 0..len {
        edges.push((verts[i], verts[(i + 1) % len], false));
    }
    verts
}
