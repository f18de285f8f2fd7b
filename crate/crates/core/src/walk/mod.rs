//! Step sets and the two independent routes to walk counts.

pub mod dp;
pub mod functional;
pub mod stepset;

pub use dp::{enumerate_dp, enumerate_dp_capped, probability_table, CountTable, ProbabilityTable};
pub use functional::{
    agreement_depth, apply_functional_map, functional_residual, is_zero_to, iterate_quadratic_map, mode_view,
    quadratic_residual,
    series_iterate_1d, series_iterate_2d,
};
pub use stepset::{CountMode, StepSet};
