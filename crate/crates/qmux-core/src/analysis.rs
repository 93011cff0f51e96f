//! Closed-form oracles (in progress).
