//! Domain types shared by every other module.

mod capacity;
mod channel;
mod config;
mod noise;
mod rng;

pub use capacity::{
    effective_channel, main_capacity, main_capacity_single_alice, main_capacity_single_bob,
    main_gain,
};
pub use channel::{Beamformer, ChannelSet, EveChannels, PhaseVector};
pub use config::SystemConfig;
pub use noise::{dbm_to_watts, noise_floor_dbm, watts_to_dbm, LinkGains, NoiseModel};
pub(crate) use rng::complex_normal;
pub use rng::{derive_seed, random_unit_vector, sample_rayleigh, stream_rng, StreamRng};

/// Unit-modulus tolerance for phase vectors and unit-norm tolerance for beamformers.
pub const UNIT_TOL: f64 = 1e-12;
