use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use super::scenario::{Scenario, Scheme};
use crate::analytics::sop_theory;
use crate::error::Result;
use crate::model::{derive_seed, sample_rayleigh, Beamformer, ChannelSet, LinkGains, PhaseVector, SystemConfig};
use crate::C64;
use crate::montecarlo::empirical_sop;
use crate::optimize::{alternating_optimize_with, mrt_baseline, mrt_phase_search, AoOptions, PhaseSolver};

pub const CSV_HEADER: &str = "scenario,scheme,sweep_axis,sweep_value,snr_db,r_s,n_t,n_r,n_e,n_s,alpha,beta,\
sop_theory,sop_mc,sop_mc_stderr,iterations,wall_ms,seed";

/// One (sweep point, scheme) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub scheme: Scheme,
    pub sweep_axis: &'static str,
    pub sweep_value: f64,
    pub cfg: SystemConfig,
    pub sop_theory: f64,
    pub sop_mc: Option<f64>,
    pub sop_mc_stderr: Option<f64>,
    /// Alternating-optimization iterations; absent for closed-form schemes.
    pub iterations: Option<usize>,
    pub wall_ms: f64,
    pub seed: u64,
}

/// Seed tied to the array sizes of `cfg`, independent of power, rate and `n_e`.
pub fn channel_seed(seed: u64, cfg: &SystemConfig) -> u64 {
    let tag = (cfg.n_t as u64) | (cfg.n_r as u64) << 16 | (cfg.n_s as u64) << 32;
    derive_seed(seed, tag)
}

/// Legitimate channels for a sweep point. Each block is seeded only by its own
/// dimensions, so a block is unchanged along any axis that does not resize it.
pub fn scenario_channels(seed: u64, cfg: &SystemConfig, gains: &LinkGains) -> Result<ChannelSet> {
    let block = |kind: u64, rows: usize, cols: usize| derive_seed(seed, kind << 48 | (rows as u64) << 24 | cols as u64);
    let amp = |g: f64| C64::from(g);
    ChannelSet::new(
        sample_rayleigh(cfg.n_r, cfg.n_t, block(1, cfg.n_r, cfg.n_t), 0)? * amp(gains.direct),
        sample_rayleigh(cfg.n_s, cfg.n_t, block(2, cfg.n_s, cfg.n_t), 0)? * amp(gains.alice_ris),
        sample_rayleigh(cfg.n_r, cfg.n_s, block(3, cfg.n_r, cfg.n_s), 0)? * amp(gains.ris_bob),
    )
}

/// Optimized (or baseline) operating point of one scheme.
#[derive(Debug, Clone)]
pub struct SchemeOutcome {
    /// Channels the scheme is evaluated on (RIS links zeroed for `mrt_no_ris`).
    pub channels: ChannelSet,
    pub phase: PhaseVector,
    pub beamformer: Beamformer,
    pub iterations: Option<usize>,
}

pub fn run_scheme(scheme: Scheme, cfg: &SystemConfig, ch: &ChannelSet, seed: u64) -> Result<SchemeOutcome> {
    scheme.check(cfg)?;
    let ao = |solver| alternating_optimize_with(cfg, ch, solver, seed, &AoOptions::default());
    let (channels, phase, beamformer, iterations) = match scheme {
        Scheme::MrtNoRis => {
            let bare = ch.without_ris();
            let bf = mrt_baseline(&bare, cfg, false, None)?;
            (bare, PhaseVector::ones(cfg.n_s), bf, None)
        }
        Scheme::MrtRand => {
            let q = PhaseVector::random(cfg.n_s, channel_seed(seed, cfg), 3);
            let bf = mrt_baseline(ch, cfg, true, Some(&q))?;
            (ch.clone(), q, bf, None)
        }
        Scheme::MrtPs => {
            let r = mrt_phase_search(cfg, ch, seed, &AoOptions::default())?;
            (ch.clone(), r.final_q, r.final_b, Some(r.iterations_used))
        }
        Scheme::AoCs | Scheme::AoSdr | Scheme::AoMan => {
            let solver = match scheme {
                Scheme::AoCs => PhaseSolver::ClosedForm,
                Scheme::AoSdr => PhaseSolver::Sdr,
                _ => PhaseSolver::Manifold,
            };
            let r = ao(solver)?;
            (ch.clone(), r.final_q, r.final_b, Some(r.iterations_used))
        }
    };
    Ok(SchemeOutcome { channels, phase, beamformer, iterations })
}

/// Evaluates every (point, scheme) cell. Cells run in parallel; rows come back in
/// grid order, schemes in file order.
pub fn run_scenario(s: &Scenario) -> Result<Vec<ResultRow>> {
    s.validate()?;
    let points = s.points();
    let cells: Vec<(usize, usize)> =
        (0..points.len()).flat_map(|p| (0..s.schemes.len()).map(move |k| (p, k))).collect();
    cells
        .par_iter()
        .map(|&(p, k)| {
            let cfg = &points[p];
            let scheme = s.schemes[k];
            let start = Instant::now();
            let ch = scenario_channels(s.seed, cfg, &s.noise.link_gains)?;
            let out = run_scheme(scheme, cfg, &ch, s.seed)?;
            let theory = sop_theory(cfg, &out.channels, &out.phase, &out.beamformer)?;
            let mc = if s.trials > 0 {
                let mc_seed = derive_seed(s.seed, ((p as u64) << 8) | k as u64);
                Some(empirical_sop(cfg, &out.channels, &out.phase, &out.beamformer, s.trials, mc_seed)?)
            } else {
                None
            };
            Ok(ResultRow {
                scenario: s.name.clone(),
                scheme,
                sweep_axis: s.sweep.axis.as_str(),
                sweep_value: s.sweep.values[p],
                cfg: *cfg,
                sop_theory: theory,
                sop_mc: mc.map(|m| m.p_hat),
                sop_mc_stderr: mc.map(|m| m.std_err),
                iterations: out.iterations,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                seed: s.seed,
            })
        })
        .collect()
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed, exponent
/// form outside `[1e-4, 1e9)`.
pub fn format_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes header and rows. `wall_ms` stays empty unless `timing` is set, which keeps
/// output byte-identical across runs.
pub fn write_csv<W: Write>(rows: &[ResultRow], mut w: W, timing: bool) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    let opt = |x: Option<f64>| x.map(format_g9).unwrap_or_default();
    for r in rows {
        let c = &r.cfg;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.scenario,
            r.scheme,
            r.sweep_axis,
            format_g9(r.sweep_value),
            format_g9(c.snr_db()),
            format_g9(c.r_s),
            c.n_t,
            c.n_r,
            c.n_e,
            c.n_s,
            format_g9(c.alpha),
            format_g9(c.beta),
            format_g9(r.sop_theory),
            opt(r.sop_mc),
            opt(r.sop_mc_stderr),
            r.iterations.map(|i| i.to_string()).unwrap_or_default(),
            if timing { format_g9(r.wall_ms) } else { String::new() },
            r.seed,
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_formatting() {
        assert_eq!(format_g9(0.0), "0");
        assert_eq!(format_g9(1.0), "1");
        assert_eq!(format_g9(9.0), "9");
        assert_eq!(format_g9(0.123456789012), "0.123456789");
        assert_eq!(format_g9(123456.7890123), "123456.789");
        assert_eq!(format_g9(-2.5), "-2.5");
        assert_eq!(format_g9(1.5e-7), "1.5e-07");
        assert_eq!(format_g9(9.999999999e-6), "1e-05");
        assert_eq!(format_g9(1e-5), "1e-05");
        assert_eq!(format_g9(0.0001), "0.0001");
        assert_eq!(format_g9(123456789.0), "123456789");
        assert_eq!(format_g9(1234567890.0), "1.23456789e+09");
        assert_eq!(format_g9(0.99999999999), "1");
    }

    fn scenario(schemes: &str, trials: usize) -> Scenario {
        Scenario::from_toml_str(&format!(
            r#"
name = "unit"
seed = 3
trials = {trials}
schemes = [{schemes}]
[system]
n_t = 3
n_r = 1
n_e = 2
n_s = 6
alpha = 0.8
beta = 0.8
r_s = 1.0
snr_db = 5.0
sigma2 = 1.0
[sweep]
axis = "r_s"
values = [0.5, 1.0, 2.0]
"#
        ))
        .unwrap()
    }

    #[test]
    fn rows_in_grid_then_scheme_order() {
        let rows = run_scenario(&scenario("\"ao_cs\", \"mrt_no_ris\"", 0)).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].scheme, Scheme::AoCs);
        assert_eq!(rows[1].scheme, Scheme::MrtNoRis);
        assert_eq!(rows[2].sweep_value, 1.0);
        assert!(rows.iter().all(|r| r.sop_mc.is_none() && r.sop_mc_stderr.is_none()));
        for pair in rows.chunks(2) {
            assert!(pair[0].sop_theory <= pair[1].sop_theory + 1e-12);
        }
    }

    #[test]
    fn blocks_survive_unrelated_resizing() {
        let s = scenario("\"mrt_no_ris\"", 0);
        let a = scenario_channels(5, &s.system, &LinkGains::default()).unwrap();
        let b = scenario_channels(5, &SystemConfig { n_s: 11, n_e: 4, ..s.system }, &LinkGains::default()).unwrap();
        assert_eq!(a.h_b, b.h_b);
        assert_ne!(a.h_ris.nrows(), b.h_ris.nrows());
    }

    #[test]
    fn csv_is_reproducible_and_complete() {
        let s = scenario("\"mrt_rand\", \"mrt_ps\"", 500);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&run_scenario(&s).unwrap(), &mut a, false).unwrap();
        write_csv(&run_scenario(&s).unwrap(), &mut b, false).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        let fields = CSV_HEADER.split(',').count();
        for line in text.lines() {
            assert_eq!(line.split(',').count(), fields, "{line}");
        }
        let first = text.lines().nth(1).unwrap();
        assert!(first.starts_with("unit,mrt_rand,r_s,0.5,5,0.5,3,1,2,6,0.8,0.8,"), "{first}");
    }
}
