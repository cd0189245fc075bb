//! Decomposition of highly edge-connected bipartite multigraphs into
//! edge-disjoint paths of a fixed length.
//!
//! The pipeline splits the graph into two halves carrying fractional
//! factorizations, builds balanced tracking decompositions by induction on
//! the path length, and untangles non-path trails with augmenting sequences.
//! Every decomposition that leaves the crate has passed an independent
//! verifier.

pub mod graph;
pub mod flowcut;
pub mod structops;
pub mod packing;
pub mod factorize;
pub mod tracking;
pub mod disentangle;
pub mod pathdec;
pub mod testbed;
