//! Operational classicality analysis for pairs of quantum observables.
//!
//! The crate decides and verifies membership of POVM pairs in the nested
//! layers
//!
//! > broadcastable ⊆ one-side broadcastable ⊆ mutually nondisturbing
//! > ⊆ nondisturbing ⊆ compatible,
//!
//! constructs and checks broadcasting channels, instruments and
//! ancilla witnesses, and ships a [`scenario`] suite plus a CLI that
//! exercise the characteristic counterexamples of the taxonomy
//! (transitivity failure, non-convexity of the upper layers, absence of
//! a broadcasting analogue of the degree of compatibility).
//!
//! Entry points:
//!
//! * [`observable::Observable`] — POVMs, smearing, margins.
//! * [`channel::Channel`] / [`channel::BroadcastingChannel`] — CPTP maps
//!   in Choi form and the broadcast predicates.
//! * [`instrument::Instrument`] — Lüders measurements, nondisturbance.
//! * [`compatibility::are_compatible`] — joint-measurability decisions.
//! * [`layers::classify_pair_general`] — the layer classifier.
//!
//! A rendered guide with worked examples lives in `book/`; its code
//! blocks compile and run as part of `cargo test`.

// Index-based loops are used deliberately throughout the matrix kernels:
// the indices are tensor coordinates.
#![allow(clippy::needless_range_loop)]

pub mod channel;
pub mod compatibility;
pub mod error;
pub mod instrument;
pub mod json;
pub mod layers;
pub mod observable;
pub mod operator;
pub mod random;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};

/// Default tolerance for positivity, normalization and fixed-point checks.
pub const DEFAULT_TOL: f64 = 1e-9;
