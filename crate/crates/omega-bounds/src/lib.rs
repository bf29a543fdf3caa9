//! Numerical verification toolkit for the average orders of the prime omega
//! functions ω(n) (distinct prime divisors) and Ω(n) (prime divisors with
//! multiplicity).
//!
//! The crate computes exact summatory values S_ω(x) = Σ_{k≤x} ω(k) and
//! S_Ω(x) = Σ_{k≤x} Ω(k) with a segmented sieve, evaluates the classical
//! hyperbola identity for S_ω as an integer-exact cross-check, reproduces the
//! Meissel–Mertens family of constants (M, M′, M″, the expansion coefficients
//! a_j) to dozens of digits with rigorous error bounds, evaluates every
//! explicit remainder envelope used by the global bounds, and range-scans the
//! bound inequalities themselves, recording extrema, equality witnesses and
//! violations in machine-readable reports.
//!
//! Modules map onto the main functional areas:
//!
//! - [`sieve`] — prime tables, per-integer ω/Ω blocks, exact prefix sums.
//! - [`identities`] — the hyperbola split of S_ω and the convolution form of ω.
//! - [`bigfloat`] — fixed-point arbitrary-precision reals with tracked error.
//! - [`constants`] — γ, ζ(k), M, M′, M″, a_j, li/Ei.
//! - [`envelopes`] — R, R̂, tail integrals, E_ω/E_Ω and RH variants, h(z), κ.
//! - [`verifier`] — theorem range scans, reports, checkpoints, shard merging.
//! - [`cli`] — the `omega-bounds` command-line front end.

pub mod bigfloat;
pub mod cli;
pub mod constants;
pub mod envelopes;
pub mod float;
pub mod identities;
pub mod sieve;
pub mod verifier;

pub use bigfloat::BigReal;
pub use float::Real;
pub use sieve::{OmegaBlock, PrefixState, PrimeTable};

/// Default scalar for the real-valued envelope layer.
pub type Scalar = f64;

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("limit must be at least 2 (got {0})")]
    LimitTooSmall(u64),
    #[error("limit {requested} exceeds the configured memory budget for prime tables ({max})")]
    LimitExceedsBudget { requested: u64, max: u64 },
    #[error("{arg} out of range: {msg}")]
    Domain { arg: &'static str, msg: String },
    #[error("prime table covers only [2, {limit}], need {needed}")]
    InsufficientTable { limit: u64, needed: u64 },
    #[error("precision request of {requested} digits exceeds the supported maximum of {max}")]
    Precision { requested: u32, max: u32 },
    #[error("checkpoint/range mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("unknown claim id: {0}")]
    UnknownClaim(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(arg: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { arg, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
