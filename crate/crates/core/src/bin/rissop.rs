use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ris_sop::analytics::sop_theory;
use ris_sop::harness::{self, run_scheme, Scenario, Scheme, ValidateOptions};
use ris_sop::model::ChannelSet;
use ris_sop::montecarlo::{empirical_sop, DEFAULT_TRIALS};
use ris_sop::optimize::{alternating_optimize_with, mrt_phase_search, AoOptions, PhaseSolver};
use ris_sop::{Error, Result};

#[derive(Parser)]
#[command(name = "rissop", version, about = "Secrecy outage analysis and optimization for RIS-assisted wiretap channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the Monte Carlo trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form outage of each scheme at the scenario's base system.
    SopTheory {
        #[command(flatten)]
        common: Common,
    },
    /// Closed form next to a Monte Carlo estimate at the base system.
    SopMc {
        #[command(flatten)]
        common: Common,
    },
    /// One alternating-optimization run; prints its trace.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// One of ao_cs, ao_sdr, ao_man, mrt_ps. Defaults to ao_cs for a single-antenna Bob, else ao_man.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long, default_value_t = 1e-5)]
        xi: f64,
        #[arg(long, default_value_t = 50)]
        iter_max: usize,
    },
    /// Runs the scenario sweep and writes CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Fills the wall_ms column (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Runs the acceptance suite.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated criterion ids to run.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        /// Multiplies every upper tolerance.
        #[arg(long, default_value_t = 1.0, hide = true)]
        tolerance_scale: f64,
    },
}

fn load(common: &Common) -> Result<Scenario> {
    let path = common.config.as_ref().ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let mut s = Scenario::load(path)?;
    if let Some(seed) = common.seed {
        s.seed = seed;
    }
    if let Some(trials) = common.trials {
        s.trials = trials;
    }
    Ok(s)
}

fn output(common: &Common) -> Result<Box<dyn Write>> {
    Ok(match &common.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn base_channels(s: &Scenario) -> Result<ChannelSet> {
    harness::scenario_channels(s.seed, &s.system, &s.noise.link_gains)
}

fn sop_point(common: &Common, with_mc: bool) -> Result<()> {
    let s = load(common)?;
    let ch = base_channels(&s)?;
    let trials = if s.trials > 0 { s.trials } else { DEFAULT_TRIALS };
    let mut out = output(common)?;
    writeln!(out, "{}", if with_mc { "scheme,sop_theory,sop_mc,sop_mc_stderr" } else { "scheme,sop_theory" })?;
    for scheme in &s.schemes {
        scheme.check(&s.system)?;
        let o = run_scheme(*scheme, &s.system, &ch, s.seed)?;
        let theory = sop_theory(&s.system, &o.channels, &o.phase, &o.beamformer)?;
        if with_mc {
            let mc = empirical_sop(&s.system, &o.channels, &o.phase, &o.beamformer, trials, s.seed)?;
            writeln!(
                out,
                "{scheme},{},{},{}",
                harness::format_g9(theory),
                harness::format_g9(mc.p_hat),
                harness::format_g9(mc.std_err)
            )?;
        } else {
            writeln!(out, "{scheme},{}", harness::format_g9(theory))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn optimize(common: &Common, scheme: Option<&str>, xi: f64, iter_max: usize) -> Result<()> {
    let s = load(common)?;
    let cfg = s.system;
    let scheme = match scheme {
        Some(name) => Scheme::parse(name)?,
        None if cfg.n_r == 1 => Scheme::AoCs,
        None => Scheme::AoMan,
    };
    scheme.check(&cfg)?;
    let ch = base_channels(&s)?;
    let opts = AoOptions { xi, iter_max, ..AoOptions::default() };
    let report = match scheme {
        Scheme::AoCs => alternating_optimize_with(&cfg, &ch, PhaseSolver::ClosedForm, s.seed, &opts)?,
        Scheme::AoSdr => alternating_optimize_with(&cfg, &ch, PhaseSolver::Sdr, s.seed, &opts)?,
        Scheme::AoMan => alternating_optimize_with(&cfg, &ch, PhaseSolver::Manifold, s.seed, &opts)?,
        Scheme::MrtPs => mrt_phase_search(&cfg, &ch, s.seed, &opts)?,
        other => return Err(Error::Config(format!("scheme {other} has no iterative optimizer"))),
    };
    let mut out = output(common)?;
    writeln!(out, "iteration,p_out,z")?;
    for e in &report.trace {
        writeln!(out, "{},{},{}", e.iteration, harness::format_g9(e.p_out), harness::format_g9(e.z))?;
    }
    writeln!(
        out,
        "# scheme {scheme}: best p_out {} after {} iterations, converged {}",
        harness::format_g9(report.p_out),
        report.iterations_used,
        report.converged
    )?;
    let angles: Vec<String> = report.final_q.angles().iter().map(|a| harness::format_g9(*a)).collect();
    writeln!(out, "# phases (rad): {}", angles.join(" "))?;
    out.flush()?;
    Ok(())
}

fn sweep(common: &Common, timing: bool) -> Result<()> {
    let s = load(common)?;
    let rows = harness::run_scenario(&s)?;
    let mut out = output(common)?;
    harness::write_csv(&rows, &mut out, timing)?;
    out.flush()?;
    Ok(())
}

fn validate(common: &Common, only: Option<Vec<u8>>, tolerance_scale: f64) -> Result<bool> {
    if let Some(bad) = only.iter().flatten().find(|id| !harness::CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(Error::Config(format!("no criterion with id {bad}")));
    }
    let opts = ValidateOptions { seed: common.seed.unwrap_or(1), tolerance_scale, only };
    let mut out = output(common)?;
    let mut passed = true;
    for (id, _) in harness::CRITERIA {
        if opts.only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let r = harness::run_criterion(id, &opts);
        writeln!(out, "{r}")?;
        out.flush()?;
        passed &= r.passed;
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SopTheory { common } => sop_point(common, false).map(|_| true),
        Command::SopMc { common } => sop_point(common, true).map(|_| true),
        Command::Optimize { common, scheme, xi, iter_max } => {
            optimize(common, scheme.as_deref(), *xi, *iter_max).map(|_| true)
        }
        Command::Sweep { common, timing } => sweep(common, *timing).map(|_| true),
        Command::Validate { common, only, tolerance_scale } => validate(common, only.clone(), *tolerance_scale),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("rissop: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
