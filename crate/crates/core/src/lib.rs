//! Lateral string stability of vehicle platoons in the arc-length domain.
//!
//! Errors of every vehicle are expressed as functions of the distance `l_d`
//! travelled along a shared desired path, so consecutive vehicles are
//! compared at the same spatial location. The crate simulates the platoon
//! under feedback-feedforward (predecessor tracking) and learn-from-predecessor
//! (desired-path tracking) control, builds the inter-vehicle transfer
//! functions in the spatial Laplace variable `s` (1/m), and certifies or
//! refutes L2 string stability.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod control;
pub mod design;
pub mod error;
pub mod model;
pub mod path;
pub mod polyfreq;
pub mod sim;

pub use analysis::{attenuation_report, l2_norm, verdict, Certificate, NormReport, Verdict};
pub use control::{delay_margin, GainSet, LearnedSignal, OutputSelector};
pub use design::{design_lfp, kff_formula, DesignOutcome, DesignSpec};
pub use error::{Error, Result};
pub use model::{build_matrices, error_accel, ErrorState, SystemMatrices, VehicleParams};
pub use path::DesiredPath;
pub use sim::{simulate, PlatoonTrajectory, Scenario, Strategy};
