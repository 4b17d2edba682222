//! Exact reconstruction of the cohomology of the branched real Lagrangian
//! cover of the mirror quintic threefold.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] enumerates lattice points and faces of lattice polytopes and
//!   evaluates the Batyrev Hodge-number formula.
//! * [`base_complex`] builds the boundary of the quintic simplex, its
//!   discriminant graph, the 25-element open cover and its nerve.
//! * [`monodromy`] holds the mod-2 local system whose torsion points are the
//!   seven sheets, the sheet permutations around discriminant segments and
//!   orbit computations.
//! * [`exact_linalg`] is the integer linear algebra substrate.
//! * [`local_models`] presents the first homology of the preimage of every
//!   cover element and nerve intersection.
//! * [`cech_engine`] assembles the Cech complexes and the E2 pages.
//! * [`heegaard_oracle`] recomputes first homology of the coarse cover by a
//!   Heegaard-splitting presentation, independently of the Cech machinery.
//! * [`toric_square`] computes the mod-2 square-map rank for smooth toric
//!   Fano fourfolds.

pub mod base_complex;
pub mod cech_engine;
pub mod error;
pub mod exact_linalg;
pub mod heegaard_oracle;
pub mod lattice;
pub mod local_models;
pub mod monodromy;
pub mod toric_square;

pub use error::{Error, Result};
