//! Exact computations on polarized abelian surfaces and on irrational
//! fibrations of surfaces with `p_g = q = 2`.
//!
//! Everything is integral or rational: lattices are handled through their
//! basis coordinates, torsion points and characters through `Q/Z` vectors,
//! and vector bundles on an elliptic curve through their Atiyah data.
//! Each geometric classification comes with an independent brute-force
//! enumeration that can be run against the closed-form answer.

pub mod bundles;
pub mod character;
pub mod cli;
pub mod error;
pub mod fibration;
pub mod intersection;
pub mod lattice;
pub mod names;
pub mod polarization;
pub mod rational;
pub mod report;
pub mod torus;

pub use error::{Error, Result};
pub use rational::Rat;
