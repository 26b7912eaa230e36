//! Closed-form evaluators: the mutual-information profile and the complexity
//! bounds it implies, thermalization and overlap-probability bounds,
//! holographic piecewise formulas, packing counts and extremal norm
//! conversions. Logarithms are natural unless stated otherwise.

mod bounds;
mod extremal;
mod holographic;
mod packing;
mod profile;
mod report;

pub use bounds::{gate_count_lower_bound, prob_overlap_bound, thermalization_time};
pub use extremal::{fidelity_extremal, norm_extremal_onetwo, norm_extremal_onetwo_with, ExtremalRatio};
pub use holographic::{holographic_complexity, holographic_entropy, Piecewise, Region};
pub use packing::{packing_design_bound, packing_fidelity_count, packing_full_bound, packing_rank_bound};
pub use profile::{
    complexity_lower_bound, mi_continuity, mi_gate_bound, mi_profile, trapezoid_area, TrapezoidProfile,
};
pub use report::{BoundReport, Condition, Scale};
