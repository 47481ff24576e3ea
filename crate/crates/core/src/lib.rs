//! Coxeter diagram, toric and integral-affine machinery for the stable-pair
//! compactification of degree-2 K3 surfaces.

#![allow(clippy::needless_range_loop)]

pub mod chamber;
pub mod cli;
pub mod diagrams;
pub mod error;
pub mod exact;
pub mod ias;
pub mod kulikov;
pub mod lattice;
pub mod sample;
pub mod sl2;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{roots, AVector};
