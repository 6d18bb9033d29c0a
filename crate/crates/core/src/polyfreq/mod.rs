//! Polynomial and rational-function engine in the spatial Laplace variable.
//!
//! `s` has units 1/m and frequencies `w` are spatial, rad/m.

pub mod bode;
pub mod coeff;
pub mod hinf;
pub mod poly;
pub mod rational;
pub mod routh;
pub mod svd;
pub mod transfer;

pub use bode::{bode_integral, BodeResult};
pub use coeff::{coefficient_condition, coefficient_condition_tf, CoefficientCondition};
pub use hinf::{hinf_norm, hinf_norm_matrix, HinfResult, PeakLocation};
pub use poly::Poly;
pub use rational::{PolyMatrix2, RationalTF, TFMatrix};
pub use routh::{is_hurwitz, routh_hurwitz, RouthReport};
pub use svd::{rank1_perturbation_bound, sigma1_2x2, singular_values_2x2};
pub use transfer::{
    adj_input, build_h_ff_matrix, build_h_lfp_scalar, build_h_lfp_vector, closed_loop_matrix,
    lfp_open_loop, FfTransfer,
};
