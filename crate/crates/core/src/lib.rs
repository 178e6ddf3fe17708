//! Exact multilinear coefficients of the dual of bipartite perfect matching, brute-force
//! oracles that cross-check them, and the approximate-degree and sensitivity bounds that
//! follow from them.

pub mod approxdeg;
pub mod bigraph;
pub mod cli;
pub mod coeff;
pub mod error;
pub mod oracle;
pub mod ordered;
pub mod polyspace;
pub mod sensitivity;

pub use bigraph::BipartiteGraph;
pub use error::{Error, Result};
pub use ordered::RepresentingSequence;
pub use polyspace::DualPolynomial;

/// Size caps. Exhaustive routines refuse larger inputs with `Error::SizeLimit`.
pub mod limits {
    /// Largest side size of a `BipartiteGraph` (rows are `u32` bit-sets).
    pub const MAX_N: usize = 32;
    /// Largest side size with an `n²`-bit `u64` edge mask.
    pub const MASK_MAX_N: usize = 8;
    pub const HETYEI_MAX_N: usize = 5;
    pub const MOBIUS_MAX_EDGES: usize = 25;
    /// Supergraph enumeration in the chi-sum and elementary-sum oracles.
    pub const SUPERGRAPH_MAX_N: usize = 4;
    pub const PERMITTED_MAX_N: usize = 5;
    pub const TABLE_MAX_N: usize = 4;
    /// Table size reachable with the explicit `--huge` acknowledgement.
    pub const TABLE_HUGE_MAX_N: usize = 5;
    pub const SEQUENCE_MAX_N: usize = 10;
    pub const MATERIALIZE_MAX_N: usize = 4;
    pub const SENSITIVITY_MAX_N: usize = 16;
    /// Largest AND arity; the bound pipeline needs `m = n²` up to `n = 64`.
    pub const AND_MAX_ARITY: usize = 4096;
    /// Largest arity for which the generic LP route and exact witnesses are built.
    pub const AND_LP_MAX_ARITY: usize = 256;
    pub const BOUND_MAX_N: usize = 64;
    pub const ASSEMBLE_MAX_N: usize = 3;
}
