//! Thermal noise floor for a few receiver bandwidths and the transmit power that
//! a target SNR implies.

use ris_sop::model::{dbm_to_watts, noise_floor_dbm, watts_to_dbm, NoiseModel};

fn main() -> ris_sop::Result<()> {
    for bw in [1e6, 10e6, 20e6, 100e6] {
        let nm = NoiseModel { bandwidth_hz: bw, ..NoiseModel::default() };
        let floor = noise_floor_dbm(&nm)?;
        let p20 = dbm_to_watts(floor + 20.0);
        println!("{:>6.0} MHz: floor {floor:7.2} dBm, 20 dB SNR needs {p20:.3e} W ({:.2} dBm)", bw / 1e6, watts_to_dbm(p20));
    }
    Ok(())
}
