//! Enumeration, bounds and structural classification of sets with small
//! sumset doubling in abelian groups, built around an asymmetric hypergraph
//! container algorithm with deterministic fingerprint replay.

pub mod census;
pub mod container;
pub mod error;
pub mod group;
pub mod hypergraph;
pub mod oracle;
pub mod suite;
pub mod sumset;
pub mod supersat;

pub use error::{Error, Result};
pub use group::{Element, ElementSet, GroupDescriptor, Rational};
pub use hypergraph::{BoundedHypergraph, Edge, IndependentPair};
