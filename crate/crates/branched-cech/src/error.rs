//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by the library.
///
/// Variants are grouped by the layer that raises them. Input errors
/// (malformed files, unsupported polytopes, invalid fans) are distinguished
/// from internal consistency failures so that front ends can map them to
/// different exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A matrix or vector had the wrong shape for the requested operation.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Two differentials do not compose to zero.
    #[error("not a complex: {0}")]
    NotAComplex(String),

    /// A vector that should lie in a kernel does not.
    #[error("vector is not in the kernel: {0}")]
    NotInKernel(String),

    /// A triplet or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The polytope is lower-dimensional where a full-dimensional one is required.
    #[error("not full-dimensional: affine dimension {0}")]
    NotFullDimensional(usize),

    /// A listed vertex is not an extreme point of the convex hull.
    #[error("redundant vertex {0:?}: not an extreme point")]
    RedundantVertex([i64; 4]),

    /// The polytope is not reflexive.
    #[error("not reflexive: {0}")]
    NotReflexive(String),

    /// The polytope is outside the supported class for the base complex.
    #[error("unsupported polytope: {0}")]
    Unsupported(String),

    /// A fan cone is not generated by a lattice basis.
    #[error("not smooth: cone {cone} has determinant {det}")]
    NotSmooth { cone: usize, det: i64 },

    /// The fan does not cover the whole space exactly once.
    #[error("not complete: {0}")]
    NotComplete(String),

    /// Any other violated structural precondition of a fan.
    #[error("invalid fan: {0}")]
    InvalidFan(String),

    /// The requested nerve pair is not an incident edge/face pair.
    #[error("not incident: {0}")]
    NotIncident(String),

    /// A lifted loop failed to close in the covering graph.
    #[error("inconsistent covering data: {0}")]
    Inconsistent(String),

    /// A spectral-sequence page failed its degeneration check.
    #[error("spectral sequence does not degenerate: {0}")]
    NotDegenerate(String),

    /// A class that must lie in the kernel of the dual differential does not.
    #[error("correspondence failure: {0}")]
    Correspondence(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
