//! Weight sequences and the summation methods built from them.

pub mod means;
pub mod sweep;
pub mod weights;

pub use means::{
    abel_growth_coefficient, abel_identity, abel_kernel_gap, condition_checks, domination_bound, domination_bounds,
    fejer_kernel, fejer_mean, norlund_mean, partial_sum, t_kernel, t_mean, AbelIdentity, ConditionReport,
};
pub use sweep::PartialSumSweep;
pub use weights::{cesaro_number, Monotonicity, WeightKind, WeightPrefix, WeightSequence, DIRECT_LIMIT};
