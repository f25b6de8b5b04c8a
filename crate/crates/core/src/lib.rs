//! k-circular matroids of edge-labeled multigraphs.
//!
//! The crate builds `M_k(G)` from its circuit family (edge sets `C` whose
//! induced subgraph has `|C| - |V(G<C>)| = k` and no leaves, isolated
//! vertices or cycle components), pairs every structural graph predicate
//! with a brute-force matroid oracle, and decides unique definability of a
//! graph by its k-circular matroid either by certificate or by exhaustive
//! search for a rival graph.
//!
//! Module map:
//! - [`graph`]: the multigraph value type and graph-theoretic constructions.
//! - [`matroid`]: explicit-circuit matroids with brute-force rank, bases,
//!   cocircuits, connectivity and fundamental (co)circuits.
//! - [`kcirc`]: `M_k(G)` and the fast graph characterizations of its
//!   nontriviality, connectivity, bases and rooted cocircuits.
//! - [`stars`]: vertex-star classification and non-separating cocircuits.
//! - [`uniqueness`]: strong isomorphism, certificates and rival search.
//! - [`corpus`]: exhaustive small-multigraph generation and the
//!   predicate-versus-oracle verification harness.

pub mod corpus;
mod edgeset;
mod error;
pub mod families;
pub mod graph;
pub mod kcirc;
pub mod matroid;
pub mod stars;
pub mod uniqueness;

pub use edgeset::EdgeSet;
pub use error::{Error, Result};
pub use graph::{DegreeProfile, Edge, Membership, Multigraph, NontreeTreeSplit};
pub use kcirc::{CocircuitType, CocircuitTypeTag, KContext, RankFormulas};
pub use matroid::{BaseWitness, Matroid};
pub use stars::{StarReport, StarStatus, WitnessMode};
pub use uniqueness::{
    Hypothesis, SearchBounds, SearchOutcome, StrongIsoWitness, TheoremId, UniquenessCertificate,
    Verdict,
};

/// Hard cap on edges and vertices of a [`Multigraph`]; edge and vertex sets
/// are 64-bit masks.
pub const MAX_LABELS: usize = 64;

/// Default cap on `|E|` for exhaustive subset enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 16;
