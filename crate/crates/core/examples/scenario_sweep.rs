//! Runs a shipped scenario file and prints the CSV to stdout. Pass another path to
//! run a different file.

use ris_sop::harness::{run_scenario, write_csv, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/single_bob_snr.toml");
    let path = std::env::args().nth(1).unwrap_or_else(|| default.to_owned());
    let mut s = Scenario::load(&path)?;
    s.trials = s.trials.min(2_000);
    write_csv(&run_scenario(&s)?, std::io::stdout().lock(), false)?;
    Ok(())
}
