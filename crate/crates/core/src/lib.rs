//! Brickwork random-circuit toolkit.
//!
//! Three independent routes to the same physics, each usable as a check on
//! the others:
//!
//! * [`domainwall`]: exact ensemble-averaged purity of an interval on the
//!   infinite chain from domain-wall path counting, in arbitrary precision.
//! * [`qudit_sim`]: a dense statevector simulator for brickwork circuits of
//!   Haar-random two-site gates, with partial traces, entropies and fidelities.
//! * [`analytics`], [`projector_lab`], [`memory_lab`]: closed-form bounds and
//!   predictions together with the Monte Carlo experiments that probe them.
//!
//! Random sampling lives in [`rng_linalg`]. Every Monte Carlo routine takes an
//! [`RngStream`] and derives one sub-stream per trial, so results do not depend
//! on how trials are scheduled across threads.

pub mod analytics;
pub mod domainwall;
pub mod error;
pub mod estimate;
pub mod memory_lab;
pub mod parallel;
pub mod projector_lab;
pub mod qudit_sim;
pub mod rng_linalg;

pub use error::{Error, Result};
pub use estimate::EnsembleEstimate;
pub use parallel::Execution;
pub use rng_linalg::RngStream;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
