//! Numerical laboratory for Fourier analysis on bounded Vilenkin groups.
//!
//! The group `G_m` is the product of cyclic groups `Z_{m_k}`; at depth `N`
//! functions are stored on the `M_N = m_0 ... m_{N-1}` level-`N` cylinders.
//! On top of the fast Vilenkin-Fourier transform the crate provides T-means
//! and Nörlund means, their maximal operators, Hardy-space tools and the
//! construction of a martingale on which the maximal operator is unbounded
//! from `H_p` to weak-`L_p` for `p < 1/2`.

pub mod config;
pub mod counterexample;
pub mod error;
pub mod experiments;
pub mod group;
pub mod numeric;
pub mod operators;
pub mod rng;
pub mod spectral;
pub mod summability;

pub use error::{Result, VlabError};
pub use group::{Basis, Cylinder, Point};
pub use spectral::{GridFunction, SpectralFunction, C64};
pub use summability::{WeightKind, WeightSequence};
