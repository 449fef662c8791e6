//! Runs selected acceptance checks. Criteria ids come from the command line; the
//! default picks the fast ones.

use ris_sop::harness::{run_criterion, ValidateOptions, CRITERIA};

fn main() {
    let ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { vec![2, 4, 8, 9] } else { ids };
    let opts = ValidateOptions::default();
    for id in ids {
        match CRITERIA.iter().find(|c| c.0 == id) {
            Some(_) => println!("{}", run_criterion(id, &opts)),
            None => eprintln!("unknown criterion {id}"),
        }
    }
}
