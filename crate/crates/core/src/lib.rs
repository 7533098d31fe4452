//! Discovery and checking of functional, multivalued and degenerated
//! multivalued dependencies through formal concept analysis.
//!
//! - [`context`] binarizes a relation into a formal context over tuple pairs;
//!   FDs are exactly the implications of that context.
//! - [`partitions`] describes attribute sets by the tuple partitions they
//!   induce; FDs are the pairs `X`, `XY` inducing the same partition.
//! - [`fd_discovery`] mines all minimal FDs levelwise with stripped partitions.
//! - [`mvd`] implements the Galois connection between attribute partitions
//!   and tuple-class families, and the closure-based MVD test.
//! - [`dmvd_lattice`] builds the meet-closed partition lattice from pairwise
//!   agreement vectors.
//! - [`oracle`] holds brute-force reference implementations for testing.

pub mod cli;
pub mod context;
pub mod dmvd_lattice;
pub mod error;
pub mod fd_discovery;
mod labels;
pub mod mvd;
pub mod oracle;
pub mod partitions;
pub mod relation;

pub use error::{Error, Result};
pub use relation::{AttrSet, IngestOptions, Relation};
