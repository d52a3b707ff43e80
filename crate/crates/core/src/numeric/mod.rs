//! Small numeric toolbox: the scalar abstraction shared by exact and float
//! modes, Z/2 bit vectors and linear algebra, and seeded rational fields.

pub mod bits;
pub mod gf2;
pub mod rng;
pub mod scalar;

pub use bits::Bits;
pub use scalar::{Q, Scalar};
