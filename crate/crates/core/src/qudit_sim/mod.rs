//! Dense statevector simulation of brickwork circuits.
//!
//! Sites are ordered with site 0 as the most significant tensor factor. All
//! circuits start from `|0...0>`; entropies use the natural log.

mod circuit;
mod density;
mod ensemble;
mod geometry;
mod state;

pub use circuit::{run_brickwork, Brick, Circuit};
pub use density::{
    mutual_information, mutual_information_rho, reduce, region_entropy, region_purity, DensityOperator, EntropyKind,
    EIG_CLIP, HERMITIAN_TOL, TRACE_TOL,
};
pub use ensemble::{ensemble_average, ensemble_profile, ensemble_samples, EntropyCache, Metric};
pub use geometry::{Boundary, CircuitGeometry, IntervalSpec, DEFAULT_MEM_CAP};
pub use state::StateVector;
