//! Digital spaces (simple graphs read as discrete topological spaces),
//! their classification as digital spheres, manifolds and surfaces, and an
//! explicit diffusion scheme on them.

pub mod canon;
pub mod catalog;
pub mod error;
pub mod graph;
pub mod invariants;
mod mask;
pub mod solver;
pub mod topology;

pub use error::{CatalogError, GraphError, InvariantsError, SolverError, TopologyError};
pub use graph::{DigitalSpace, GraphJson, PointId, Subspace};
