//! Output records and the cover file format.
//!
//! Text certificates are `key value` lines. Elements are written as
//!
//! ```text
//! element long-barbell 0 1 2 3 4 ; circuits 0-1-2 | 3-4 ; path 2-3
//! ```
//!
//! and only the part before the first `;` is read back. A cover file is any
//! text with `element` lines, or a JSON record with an `elements` array.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use sigcover_core::circuit::{CircuitKind, Cover, Scope, SignedCircuit};
use sigcover_core::edgeset::EdgeSet;
use sigcover_core::graph::SignedGraph;
use sigcover_core::pipeline::CoverCertificate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub kind: String,
    pub edges: Vec<usize>,
    /// Vertex sequences of the circuits of the element.
    #[serde(default)]
    pub circuits: Vec<Vec<usize>>,
    /// Vertex sequence of the connecting path of a barbell.
    #[serde(default)]
    pub path: Vec<usize>,
}

impl ElementRecord {
    pub fn new(el: &SignedCircuit) -> Self {
        Self {
            kind: el.kind.name().to_string(),
            edges: el.edges.to_vec(),
            circuits: el.cycle_orders.clone(),
            path: if el.is_barbell() {
                el.path_order.clone()
            } else {
                Vec::new()
            },
        }
    }

    fn text(&self) -> String {
        let mut s = format!("element {} {}", self.kind, join(&self.edges, " "));
        if !self.circuits.is_empty() {
            let cs: Vec<String> = self.circuits.iter().map(|c| join(c, "-")).collect();
            let _ = write!(s, " ; circuits {}", cs.join(" | "));
        }
        if !self.path.is_empty() {
            let _ = write!(s, " ; path {}", join(&self.path, "-"));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsRecord {
    pub main: String,
    pub alt1: String,
    pub alt2: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateRecord {
    pub input: String,
    pub m: usize,
    pub n: usize,
    pub components: usize,
    pub eps_n: usize,
    pub x_size: usize,
    pub negative_edges: Vec<usize>,
    pub switching: Vec<usize>,
    pub requested: String,
    pub strategy: String,
    pub downgraded: bool,
    pub bound: String,
    pub bounds: BoundsRecord,
    pub achieved: usize,
    pub residual_length: usize,
    pub prime_length: usize,
    pub residual_exact: bool,
    pub certified: bool,
    pub elements: Vec<ElementRecord>,
    pub widths: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl CertificateRecord {
    pub fn new(input: &str, c: &CoverCertificate, with_trace: bool) -> Self {
        Self {
            input: input.to_string(),
            m: c.m,
            n: c.n,
            components: c.components,
            eps_n: c.eps_n,
            x_size: c.x_size,
            negative_edges: c.negative_edges.clone(),
            switching: c.switching.vertices().to_vec(),
            requested: c.requested.name().to_string(),
            strategy: c.strategy.name().to_string(),
            downgraded: c.downgraded,
            bound: c.bound.to_string(),
            bounds: BoundsRecord {
                main: c.bounds.main.to_string(),
                alt1: c.bounds.alt1.to_string(),
                alt2: c.bounds.alt2.to_string(),
            },
            achieved: c.achieved,
            residual_length: c.residual_length,
            prime_length: c.prime_length,
            residual_exact: c.residual_exact,
            certified: c.certified,
            elements: c.cover.elements.iter().map(ElementRecord::new).collect(),
            widths: c.widths.clone(),
            trace: if with_trace { c.trace.clone() } else { Vec::new() },
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{}", format!("{k:<16}{v}").trim_end());
        };
        kv("input", self.input.clone());
        kv("m", self.m.to_string());
        kv("n", self.n.to_string());
        kv("components", self.components.to_string());
        kv("eps_n", self.eps_n.to_string());
        kv("x_size", self.x_size.to_string());
        kv("negative_edges", join(&self.negative_edges, " "));
        kv("switching", join(&self.switching, " "));
        kv("requested", self.requested.clone());
        kv("strategy", self.strategy.clone());
        kv("downgraded", yes_no(self.downgraded));
        kv("bound", self.bound.clone());
        kv("bound_main", self.bounds.main.clone());
        kv("bound_alt1", self.bounds.alt1.clone());
        kv("bound_alt2", self.bounds.alt2.clone());
        kv("achieved", self.achieved.to_string());
        kv("residual_length", self.residual_length.to_string());
        kv("prime_length", self.prime_length.to_string());
        kv("residual_exact", yes_no(self.residual_exact));
        kv("certified", yes_no(self.certified));
        kv("elements", self.elements.len().to_string());
        kv("widths", join(&self.widths, " "));
        for t in &self.trace {
            kv("trace", t.clone());
        }
        for el in &self.elements {
            let _ = writeln!(s, "{}", el.text());
        }
        s
    }
}

pub fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

pub fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Oracle output.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRecord {
    pub input: String,
    pub m: usize,
    pub length: usize,
    pub candidates: usize,
    pub elements: Vec<ElementRecord>,
}

impl OracleRecord {
    pub fn text(&self) -> String {
        let mut s = format!(
            "input           {}\nm               {}\nlength          {}\ncandidates      {}\nelements        {}\n",
            self.input,
            self.m,
            self.length,
            self.candidates,
            self.elements.len()
        );
        for el in &self.elements {
            let _ = writeln!(s, "{}", el.text());
        }
        s
    }
}

/// A cover read from a file, with the bound it claims if any.
#[derive(Clone, Debug)]
pub struct CoverFile {
    pub elements: Vec<ElementRecord>,
    pub bound: Option<Rational64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CoverFileError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("malformed JSON cover: {0}")]
    Json(String),
    #[error("no elements in cover file")]
    Empty,
    #[error("element {index}: {msg}")]
    Element { index: usize, msg: String },
}

#[derive(Deserialize)]
struct JsonCover {
    elements: Vec<ElementRecord>,
    #[serde(default)]
    bound: Option<String>,
}

pub fn parse_cover_file(text: &str) -> Result<CoverFile, CoverFileError> {
    if text.trim_start().starts_with('{') {
        let j: JsonCover = serde_json::from_str(text).map_err(|e| CoverFileError::Json(e.to_string()))?;
        let bound = match j.bound {
            Some(b) => Some(parse_rational(&b).ok_or_else(|| CoverFileError::Json(format!("bad bound {b:?}")))?),
            None => None,
        };
        return Ok(CoverFile {
            elements: j.elements,
            bound,
        });
    }
    let mut elements = Vec::new();
    let mut bound = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("").trim();
        let mut it = line.split_whitespace();
        match it.next() {
            Some("element") => {
                let kind = it.next().ok_or(CoverFileError::Line {
                    line: i + 1,
                    msg: "missing element kind".into(),
                })?;
                let edges = it
                    .map(|t| {
                        t.parse().map_err(|_| CoverFileError::Line {
                            line: i + 1,
                            msg: format!("invalid edge id {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<usize>, _>>()?;
                elements.push(ElementRecord {
                    kind: kind.to_string(),
                    edges,
                    circuits: Vec::new(),
                    path: Vec::new(),
                });
            }
            Some("bound") => {
                let v = it.next().unwrap_or("");
                bound = Some(parse_rational(v).ok_or_else(|| CoverFileError::Line {
                    line: i + 1,
                    msg: format!("bad bound {v:?}"),
                })?);
            }
            _ => {}
        }
    }
    Ok(CoverFile { elements, bound })
}

/// `a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().ok()?;
            let b: i64 = b.trim().parse().ok()?;
            (b != 0).then(|| Rational64::new(a, b))
        }
        None => Some(Rational64::from_integer(s.trim().parse().ok()?)),
    }
}

/// Turn records into a cover the verifier can check. Only the shape of
/// the file is checked here: kinds must be known names and edge ids must
/// exist and not repeat. Whether an element really is a signed circuit
/// of its kind is left to the verifier.
pub fn to_cover(g: &SignedGraph, file: &CoverFile) -> Result<Cover, CoverFileError> {
    if file.elements.is_empty() {
        return Err(CoverFileError::Empty);
    }
    let mut cover = Cover::new(Scope::Full);
    for (index, r) in file.elements.iter().enumerate() {
        let err = |msg: String| CoverFileError::Element { index, msg };
        let kind = CircuitKind::from_name(&r.kind).ok_or_else(|| err(format!("unknown kind {:?}", r.kind)))?;
        let mut edges = EdgeSet::new();
        for &e in &r.edges {
            if e >= g.edge_count() {
                return Err(err(format!("edge {e} does not exist")));
            }
            if !edges.insert(e) {
                return Err(err(format!("edge {e} repeated")));
            }
        }
        // keep the witness when the element is what it claims to be
        let el = match SignedCircuit::from_edges(g, edges.clone()) {
            Ok(el) if el.kind == kind => el,
            _ => SignedCircuit {
                kind,
                edges,
                circuits: Vec::new(),
                cycle_orders: Vec::new(),
                path: EdgeSet::new(),
                path_order: Vec::new(),
            },
        };
        cover.push(el);
    }
    Ok(cover)
}
