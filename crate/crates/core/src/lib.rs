//! Computational toolkit for the Farey graph and its amalgamation class.
//!
//! The crate builds the coloured Farey levels, decides membership in the
//! class of graphs with removable-vertex peelings, amalgamates over strong
//! subgraphs, builds tree-of-Fareys and generic models, decomposes graphs into
//! their block trees, and evaluates the cycle/distance predicates used for
//! quantifier elimination.

pub mod amalgam;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod farey;
pub mod graph;
pub mod kclass;
pub mod lprime;
pub mod model;

pub use error::{Error, Result};
pub use graph::{Cycle, Edge, Graph, Path, VertexId};
