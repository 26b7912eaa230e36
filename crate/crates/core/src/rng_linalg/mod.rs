//! Random-matrix sampling and the Haar/Gaussian moment identities.
//!
//! Gaussian variance convention: real components are drawn from N(0, 1/2),
//! so a complex Gaussian entry has unit second moment `E|z|^2 = 1`. This is
//! the convention under which `(1/m) * sum_{i<2m} x_i^2` has mean one; it is
//! half the variance of the unit-normal convention.

mod haar;
mod moments;
mod stream;

pub use haar::{
    complex_gaussian, gaussian_matrix, sample_haar_isometry, sample_haar_unitary,
    sample_haar_unitary_with,
    sample_projector, Projector, UnitaryMatrix,
};
pub use moments::{
    chi2_moment_exact, chi2_moment_mc, overlap_samples, projector_overlap_moment_mc, tail_bound,
    tail_exceedance, TailCheck,
};
pub use stream::RngStream;

/// Tolerance for structural identities (unitarity, idempotence, hermiticity).
pub const STRUCTURAL_TOL: f64 = 1e-10;
