//! Graphs cellularly embedded in compact orientable surfaces, their duals,
//! medial and quadri-tiling graphs, and bounded regions cut out of them.

pub mod embedding;
pub mod generate;
pub mod quad;
pub mod region;

pub use embedding::{CellEmbedding, Labels};
pub use generate::{generate, Generated, GraphSpec};
pub use quad::{FaceTag, QuadEdgeKind, QuadGraph};
pub use region::BoundedSurfaceGraph;
