//! Maximal operators, quasi-norms and Hardy-space tools.

pub mod hardy;
pub mod maximal;
pub mod norms;

pub use hardy::{
    conditional_expectation, hp_atomic_bound, hp_norm, validate_atom, AtomCheck, AtomTerm, AtomicDecomposition,
    Martingale,
};
pub use maximal::{
    domination_report, fejer_maximal, maximal_t, maximal_t_family, Argmax, DominationCheck, DominationReport,
    MaximalResult,
};
pub use norms::{lp_norm, lp_norm_abs, weak_lp, weak_lp_abs};
