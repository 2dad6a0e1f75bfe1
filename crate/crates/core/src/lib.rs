//! Short signed circuit covers of flow-admissible signed graphs.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is a pure
//! function over an immutable [`SignedGraph`]; recursive constructions that
//! need auxiliary loops work on a cloned graph with appended edges, so edge
//! ids of the input stay valid throughout.
//!
//! Entry points:
//!
//! * [`pipeline::cover_full`] builds a cover and a [`pipeline::CoverCertificate`]
//!   with the bound `11/3·m − 5/3·ε_N` (or one of the alternative bounds).
//! * [`verify::verify_cover`] checks a cover independently of the
//!   constructions, and [`verify::oracle_min_cover`] computes an exact optimum
//!   for small graphs.

#![no_std]

extern crate alloc;

pub mod bridgeless;
pub mod circuit;
pub mod edgeset;
pub mod error;
pub mod euler;
pub mod graph;
pub mod pipeline;
pub mod setcover;
pub mod signature;
pub mod verify;

pub use circuit::{CircuitKind, Cover, Scope, SignedCircuit};
pub use edgeset::EdgeSet;
pub use error::{Error, Result};
pub use graph::{EdgeId, Sign, SignedGraph, Subgraph, VertexId};
pub use num_rational::Rational64;
