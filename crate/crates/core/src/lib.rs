//! Bi-holes in bipartite graphs with bounded degrees.
//!
//! A bi-hole of size `k` in a bipartite graph with parts `A`, `B` is a pair
//! `X ⊆ A`, `Y ⊆ B` with `|X| = |Y| = k` and no edge between them, i.e. a
//! `K_{k,k}` in the bipartite complement.
//!
//! - [`graph`]: the graph type, certificates and verification
//! - [`io`]: the edge-list text format
//! - [`exact`]: branch and bound plus a brute-force oracle
//! - [`constructive`]: procedures with a guaranteed bi-hole size
//! - [`generators`]: random and structured instances
//! - [`bounds`]: numeric constants, tail bounds and extremal estimates
//! - [`harness`]: seeded experiment drivers used by the CLI

pub mod bounds;
pub mod constructive;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;

pub use error::{Error, Result};
pub use graph::{verify_bihole, BiHoleCertificate, BipartiteGraph, Side};
