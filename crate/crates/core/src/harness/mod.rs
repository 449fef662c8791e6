//! Scenario files, parameter sweeps with CSV output, and the acceptance suite.

pub mod oracles;
mod scenario;
mod sweep;
mod validate;

pub use scenario::{Scenario, Scheme, Sweep, SweepAxis};
pub use sweep::{channel_seed, format_g9, run_scenario, run_scheme, scenario_channels, write_csv, ResultRow, SchemeOutcome, CSV_HEADER};
pub use validate::{all_passed, run_criterion, validate, Comparison, CriterionReport, ValidateOptions, CRITERIA};
