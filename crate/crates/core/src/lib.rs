//! Semidefinite programming upper bounds for mixed binary/ternary codes.
//!
//! The level-3 bound optimizes over functions on codes of size at most three
//! that are invariant under the isometry group of the Hamming space. The
//! positive semidefiniteness constraints are block-diagonalized with
//! representative sets built from semistandard Young tableaux, and the block
//! coefficients are computed exactly.
//!
//! Exact arithmetic goes through [`Rational`]; the numerical side is generic
//! over [`scalar::Real`] with `f64` as the default.

pub mod clique;
pub mod codes;
pub mod coefficients;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod sdp;
pub mod sdpa;
pub mod solver;
pub mod symmetry;
pub mod table;
pub mod verify;

pub use codes::{
    canonical_orbit, enumerate_orbits, exact_n, hamming_distance, Code, OrbitId, OrbitTable, ProblemSpec, Word,
};
pub use error::{Error, Result};
pub use sdp::{build_model, SdpProblem};
pub use solver::{certified_bound, certify, solve, BoundRecord, CertifiedBound, Solution, SolverOptions};

/// Exact coefficient field.
pub type Rational = num_rational::BigRational;
/// Dual-basis polynomial with exact coefficients.
pub type ExactPoly = poly::DualPoly<Rational>;
/// Reduced block with exact coefficients.
pub type ExactBlock = coefficients::BlockSpec<Rational>;
/// Reduced problem with exact coefficients.
pub type ExactProblem = sdp::SdpProblem<Rational>;
/// Solver data in double precision.
pub type SdpData64 = sdp::SdpData<f64>;
/// Solver data in single precision.
pub type SdpData32 = sdp::SdpData<f32>;
