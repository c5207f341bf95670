//! Exact-integer analysis of lattice polytopes with a distinguished origin.
//!
//! The library computes convex hulls, lattice point completions, polar duals,
//! reflexivity checks and affine normal forms over `Z^n`, together with the
//! derived data used in toric geometry: face lattices, Hodge numbers of
//! Calabi-Yau hypersurfaces, Landau-Ginzburg charge spectra of quasihomogeneous
//! potentials, fibration structures, free quotient actions, and the
//! classification of reflexive polytopes by recursive subpolytope search.
//!
//! All arithmetic is performed on fixed-width integers with explicit overflow
//! detection: every computation either returns an exact result or reports an
//! error, never a silently wrapped value.

pub mod bits;
pub mod classify;
pub mod complete;
pub mod config;
pub mod cws;
pub mod driver;
pub mod error;
pub mod faces;
pub mod fiber;
pub mod hodge;
pub mod hull;
pub mod lg;
pub mod mat;
pub mod nf;
pub mod num;
pub mod parse;
pub mod point;
pub mod render;

pub use error::{Error, Result};
pub use num::{Int, Wide};
