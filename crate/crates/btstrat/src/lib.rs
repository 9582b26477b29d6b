//! Bruhat-Tits strata of basic unramified unitary Rapoport-Zink spaces at
//! parahoric level, in a finite equal-characteristic model.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`], [`series`]: finite fields and truncated power series with Frobenius.
//! * [`lattice`]: window lattices with Hermite normal forms, duals, sums, intersections.
//! * [`linalg`], [`hermitian`]: subspaces and hermitian residue spaces over finite fields.
//! * [`coxeter`]: symmetric-group combinatorics with Frobenius twists.
//! * [`dl`]: flags, relative positions, fine and coarse Deligne-Lusztig point counts.
//! * [`strata`]: parahoric tuples, Bruhat-Tits indices, stratum descriptors, lattice points.
//! * [`report`]: deterministic report payloads used by the command-line tool.

pub mod coxeter;
pub mod dl;
pub mod error;
pub mod field;
pub mod hermitian;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod series;
pub mod strata;

pub use error::{Error, Result};
