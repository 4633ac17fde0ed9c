//! Structural identifiability analysis for acyclic dynamic networks.
//!
//! A dynamic network couples scalar vertex signals through rational transfer
//! modules along the edges of a directed acyclic graph. Some vertices receive
//! known excitation signals, some are measured; the question is whether the
//! observed closed-loop responses pin down every module uniquely (for almost
//! every parameter value).
//!
//! The crate provides:
//!
//! * [`graph`] — DAG primitives: reachability, layering, path enumeration.
//! * [`flow`] — vertex-disjoint path counts and minimum disconnecting sets.
//! * [`model`] — model sets: topology + signal pattern + per-edge knowledge.
//! * [`checkers`] — necessary and sufficient identifiability tests.
//! * [`covering`] — disjoint tree/anti-tree coverings and signal allocation.
//! * [`oracle`] — numerical cross-validation on random rational instances.
//! * [`random`] — seeded generators for fuzz and property tests.
//! * [`samples`] — small fixed networks used across tests and docs.

pub mod graph;
pub mod flow;

pub use graph::{Dag, GraphError, Path, Vertex, VertexSet};
