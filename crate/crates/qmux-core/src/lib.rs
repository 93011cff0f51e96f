//! State-vector simulation of quantum multiplexing: carrying `n` qubit
//! channels inside a single `2^n`-dimensional qudit and recovering them.
//!
//! The crate is organized around four layers:
//!
//! - [`hilbert`] — mixed-radix registers, state vectors, measurement, and
//!   reduced density matrices;
//! - [`gates`] — the primitive gate family (shifts, controlled adds,
//!   set-controlled gates, digit-controlled flips) applied by amplitude
//!   index transformation;
//! - [`circuits`] — builders for swap, state transfer, the two controlled-add
//!   decompositions, the multiplexer/demultiplexer, mid-path channel
//!   add/drop, base-`l` transfer, and the superdense-coding shortcut;
//! - [`analysis`] — independent closed-form oracles (the final-state
//!   amplitude law, digit subspaces, disentanglement and block-commutation
//!   checks) used to verify the simulation path.
//!
//! All values are immutable from the caller's point of view; operations are
//! pure functions returning new values, so everything is safe to share and
//! move across threads. The crate is `no_std` (with `alloc`); IO, file
//! formats, and the CLI live in the companion `qmux-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod circuits;
pub mod error;
pub mod gates;
pub mod hilbert;
pub mod matrix;
pub mod tol;

pub use error::{Error, Result};
