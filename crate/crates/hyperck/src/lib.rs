//! Finite hypergraph toolkit for operator-algebra combinatorics.
//!
//! The crate models finite directed hypergraphs (edges carry vertex *sets*
//! as source and range), applies the standard combinatorial constructions on
//! them (range decomposition, dual graph, moves S/R/O/I, indelay, quotient
//! restrictions), rewrites elements of the associated universal *-algebra
//! modulo the Cuntz-Krieger-style relations, searches for non-amenability
//! witnesses, checks gauge-invariant-uniqueness preconditions, and verifies
//! candidate matrix families numerically.
//!
//! Everything is deterministic: sets are ordered, fresh names are derived
//! from their provenance, and random corpora are seeded.

pub mod analysis;
pub mod canonical;
pub mod hypergraph;
pub mod io;
pub mod matrix;
pub mod repcheck;
pub mod rewrite;
pub mod scalar;
pub mod span;
pub mod star;
pub mod transform;

pub use hypergraph::{EdgeEnds, EdgeId, Hypergraph, HypergraphKind, PathClass, VertexId};
pub use scalar::Scalar;
pub use star::{Generator, StarExpression, Word};
