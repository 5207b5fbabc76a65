//! Flips of the building of a `2n`-dimensional unitary space over `F_{q^2}`.

pub mod building;
pub mod classify;
pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod random;
pub mod semilinear;
pub mod serial;
pub mod space;
pub mod stabilizer;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
