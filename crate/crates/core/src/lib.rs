//! Exact computations for the double (XOR) Ising model, the 6-vertex model
//! and the bipartite quadri-tiling dimer model on graphs embedded in compact
//! orientable surfaces.
//!
//! Everything is desk-scale and exact: graphs are rotation systems, homology
//! is over Z/2, partition functions are enumerated exhaustively, and the
//! default arithmetic is exact rational in the variable `x_e = exp(-2 J_{e*})`
//! so that every identity between the models can be checked with `==` rather
//! than a tolerance. Floating point is available through the same generic
//! code paths for larger-but-inexact runs.

pub mod error;
pub mod numeric;
pub mod surface;
pub mod homology;
pub mod ising;
pub mod six_vertex;
pub mod dimer;
pub mod isoradial;
pub mod height;
pub mod export;
pub mod render;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::scalar::{Q, Scalar};
