//! Secrecy outage probability (SOP) for RIS-assisted MIMOME wiretap channels.
//!
//! The crate is organized bottom-up:
//!
//! - [`model`]: system configuration, seeded Rayleigh channels, capacities, noise budget.
//! - [`analytics`]: closed-form outage expressions built on the regularized upper
//!   incomplete gamma function.
//! - [`montecarlo`]: empirical outage estimates and distribution checks.
//! - [`optimize`]: beamformer and RIS phase solvers plus the alternating driver.
//! - [`harness`]: scenario files, parameter sweeps, CSV output and the validation suite.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/` directory.

pub mod analytics;
pub mod error;
pub mod harness;
pub mod model;
pub mod montecarlo;
pub mod optimize;

pub use error::{Error, Result};

/// Complex scalar used for every channel coefficient.
pub type C64 = nalgebra::Complex<f64>;
