//! Closed-form secrecy outage expressions.

mod gamma;
mod sop;

pub use gamma::{gain_cdf, reg_upper_gamma, GammaFit};
pub use sop::{
    sop_from_inputs, sop_high_snr_bound, sop_single_alice, sop_single_eve, sop_theory,
    wiretap_gamma_argument, SopInputs,
};
