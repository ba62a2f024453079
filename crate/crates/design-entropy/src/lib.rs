//! Exact and Monte Carlo machinery for entanglement entropies of random
//! quantum states, random unitary channels, and design ensembles.
//!
//! The crate computes Haar-averaged trace powers of reduced density operators
//! in exact rational arithmetic: symmetric-group sums for bipartite pure
//! states and Weingarten double sums for Choi states of unitaries. The exact
//! moments convert into certified lower bounds on the average Rényi entropy
//! of any exact design, a family of closed-form bound calculators covers the
//! asymptotic and finite-size regimes, and an explicit two-design orbit shows
//! that higher-order Rényi entropies of a 2-design can sit far below maximal.
//! Every exact value is cross-checked by reproducible Monte Carlo sampling.
//!
//! Module map:
//! - [`permgroup`]: permutations, integer partitions, symmetric-group
//!   characters, irrep dimensions, and the cycle inequality behind the
//!   Catalan asymptotics
//! - [`weingarten`]: exact Weingarten functions of the unitary group
//! - [`moments`]: exact Haar moments, asymptotics, Jensen lower bounds, and
//!   the closed-form entropy bound calculators
//! - [`quantum`]: dense complex states and channels, partial traces, trace
//!   powers, and the generalized entropy family
//! - [`sampling`]: seeded Haar sampling and Monte Carlo estimators
//! - [`ensembles`]: explicit state/unitary ensembles and design testers
//! - [`cli`]: the table-producing commands behind the `design-entropy` binary

pub mod cli;
pub mod ensembles;
pub mod moments;
pub mod permgroup;
pub mod quantum;
pub mod sampling;
pub mod weingarten;

/// Arbitrary-precision rational scalar used for every exact result.
pub type Rational = num::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num::BigInt;
/// Double-precision complex scalar used for all floating-point linear algebra.
pub type Complex64 = num::complex::Complex64;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("S_{alpha} has {size} elements, above the enumeration cap of S_{cap}")]
    EnumerationCap { alpha: u32, cap: u32, size: u128 },
    #[error("invalid permutation images: {0}")]
    InvalidPermutation(String),
    #[error("invalid integer partition: {0}")]
    InvalidPartition(String),
    #[error("order mismatch: expected objects of order {expected}, got {got}")]
    OrderMismatch { expected: u32, got: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("outside the supported regime: {0}")]
    Regime(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary: largest deviation {0:.3e}")]
    NotUnitary(f64),
    #[error("state is not normalized: |norm^2 - 1| = {0:.3e}")]
    NotNormalized(f64),
    #[error("matrix is not a density operator: {0}")]
    NotDensity(String),
    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
