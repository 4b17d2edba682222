//! Exact integer linear algebra.
//!
//! Everything here works with arbitrary-precision integers: sparse
//! matrices, Smith normal forms with and without transforms, ranks over
//! prime fields, kernels with coordinate maps, and the abelian groups that
//! describe cokernels and cohomology.

mod group;
mod kernel;
mod matrix;
mod modp;
mod snf;
mod triplet;

pub use group::{cohomology_at, cohomology_dim_mod2, AbelianGroup};
pub use kernel::{KernelBasis, Ring};
pub use matrix::SparseIntMatrix;
pub use modp::{rank_mod2, rank_mod_p, rank_rational, BitMatrix};
pub use snf::{determinant, invariant_factors, normalize_diagonal, smith_normal_form, SmithForm};
pub use triplet::{dump_triplets, parse_triplets, MAX_DIM};
