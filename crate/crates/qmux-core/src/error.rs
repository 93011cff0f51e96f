//! Error types shared across the crate.

use alloc::string::String;
use thiserror::Error;

/// Errors produced by register, gate, and circuit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A subsystem index, local index, or register does not match the
    /// dimensions it is used with.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// An amplitude list that must be normalized is not, within tolerance.
    #[error("normalization error: squared norm deviates from 1 by {deviation:e}")]
    Normalization {
        /// `|Σ|amp|² − 1|` of the offending vector.
        deviation: f64,
    },

    /// An argument is structurally invalid (empty keep set, control equal to
    /// target, out-of-range control set, ...).
    #[error("argument error: {0}")]
    Argument(String),

    /// Plain (non-wrapping) arithmetic left the target's `0..dim` range on a
    /// basis state carrying nonzero amplitude.
    ///
    /// This error is the executable form of the claim that plain addition
    /// and subtraction suffice whenever the qudit starts in `|0⟩`: any legal
    /// multiplex/demultiplex run must complete without it.
    #[error("arithmetic range error: local index {from} maps to {to} outside 0..{dim}")]
    ArithmeticRange {
        /// Local index before the shift.
        from: usize,
        /// Signed result of the shift.
        to: i64,
        /// Dimension of the shifted subsystem.
        dim: usize,
    },

    /// A size bound (dense-matrix dimension, channel count, block count) was
    /// exceeded.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// An internal invariant failed; this signals a bug upstream, not bad
    /// user input.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
