//! Finite frame toolkit: deterministic frame constructions, coherence
//! geometry, restricted-isometry and spark certification with brute-force
//! oracles, and the downstream algorithms they feed (one-step thresholding
//! recovery, linear-time flipping, polarization phase retrieval, and
//! fingerprint collusion detection).
//!
//! Everything operates on dense complex matrices at desk scale and is
//! deterministic: constructions are pure functions of their parameters, and
//! randomized routines are pure functions of (parameters, seed).

pub mod coherence;
pub mod fingerprint;
pub mod finite;
pub mod flip;
pub mod frames;
pub mod numerics;
pub mod ost;
pub mod phase;
pub mod rip;

pub use frames::Frame;
pub use numerics::{Matrix, Rng, C64};

use thiserror::Error;

/// Unified error type for every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H*| entry = {0:.3e}")]
    NotHermitian(f64),
    #[error("eigensolver failed to converge after {0} sweeps")]
    FailedToConverge(usize),
    #[error("matrix is rank deficient: sigma_min/sigma_max = {0:.3e}")]
    RankDeficient(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported Hadamard size {0} for kind {1}")]
    UnsupportedSize(usize, String),
    #[error("inadmissible design parameters: {0}")]
    InadmissibleParameters(String),
    #[error("no Hadamard matrix of size {0} available in the requested kind")]
    HadamardUnavailable(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is not congruent to 1 mod 4")]
    BadPrime(u64),
    #[error("row index set is empty")]
    EmptyRowSet,
    #[error("row index set must not contain zero")]
    ZeroIndexIncluded,
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("subset enumeration budget exceeded: {0} subsets > {1}")]
    BudgetExceeded(u128, u128),
    #[error("selected columns are rank deficient")]
    RankDeficientSelection,
    #[error("surviving measurement graph has no connected component of size >= {0}")]
    Disconnected(usize),
    #[error("cycle phase products deviate by {0:.3e}; measurements are inconsistent")]
    InconsistentCycle(f64),
    #[error("graph construction failed: {0}")]
    GraphConstruction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
