//! The acceptance suite. Every criterion reduces to one measured value compared with
//! one tolerance; `detail` carries the sub-measurements.

use std::fmt;
use std::time::Instant;

use nalgebra::DVector;

use super::oracles::{finite_difference_gradient, grid_best_phase, upper_gamma_quadrature};
use super::sweep::{channel_seed, run_scheme};
use super::Scheme;
use crate::analytics::{reg_upper_gamma, sop_high_snr_bound, sop_theory, GammaFit};
use crate::error::Result;
use crate::model::{
    derive_seed, random_unit_vector, sample_rayleigh, Beamformer, ChannelSet, PhaseVector, SystemConfig,
};
use crate::montecarlo::{empirical_cdf_distance, empirical_gain_moments, empirical_sop};
use crate::optimize::{
    alternating_optimize, closed_form_phase_single_bob, manifold_phase_opt, mrt_baseline,
    optimal_beamformer, sdr_phase_opt, single_bob_alignment_bound, PhaseObjective, PhaseSolver,
    SdrProblem, SubproblemMatrices,
};
use crate::C64;

/// Identifier and short name of every criterion, in order.
pub const CRITERIA: [(u8, &str); 9] = [
    (1, "theory matches Monte Carlo"),
    (2, "monotone in rate and SNR"),
    (3, "high-SNR bound is tight"),
    (4, "wiretap gain is gamma distributed"),
    (5, "alternating optimization converges"),
    (6, "optimizers beat baselines"),
    (7, "eavesdropper dominance"),
    (8, "subproblem oracles"),
    (9, "numerical kernels"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub measured: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let op = match self.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        write!(
            f,
            "[{verdict}] {}. {}: measured {:.6e} (need {op} {:.6e}); {}",
            self.id, self.name, self.measured, self.tolerance, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    /// Multiplies every `<=` tolerance. Values below 1 tighten the suite; 0 makes any
    /// non-zero error fail.
    pub tolerance_scale: f64,
    /// Restricts the run to these criterion ids.
    pub only: Option<Vec<u8>>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { seed: 1, tolerance_scale: 1.0, only: None }
    }
}

struct Outcome {
    measured: f64,
    comparison: Comparison,
    tolerance: f64,
    /// Extra conditions that must also hold, already evaluated.
    side_ok: bool,
    detail: String,
}

impl Outcome {
    fn at_most(measured: f64, tolerance: f64, detail: String) -> Self {
        Self { measured, comparison: Comparison::AtMost, tolerance, side_ok: true, detail }
    }
}

/// Runs one criterion. Solver errors are reported as a failure, not propagated.
pub fn run_criterion(id: u8, opts: &ValidateOptions) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown criterion");
    let seed = opts.seed;
    let result = match id {
        1 => theory_vs_mc(seed),
        2 => monotone_trends(seed),
        3 => high_snr_bound(seed),
        4 => gamma_law(seed),
        5 => ao_convergence(seed),
        6 => beats_baselines(seed),
        7 => eve_dominance(seed),
        8 => subproblem_oracles(seed),
        9 => kernels(seed),
        _ => Err(crate::Error::Config(format!("no criterion with id {id}"))),
    };
    match result {
        Ok(o) => {
            let tol = match o.comparison {
                Comparison::AtMost => o.tolerance * opts.tolerance_scale,
                Comparison::AtLeast => o.tolerance,
            };
            let within = match o.comparison {
                Comparison::AtMost => o.measured <= tol,
                Comparison::AtLeast => o.measured >= tol,
            };
            CriterionReport {
                id,
                name,
                measured: o.measured,
                comparison: o.comparison,
                tolerance: tol,
                passed: within && o.side_ok && o.measured.is_finite(),
                detail: o.detail,
            }
        }
        Err(e) => CriterionReport {
            id,
            name,
            measured: f64::NAN,
            comparison: Comparison::AtMost,
            tolerance: f64::NAN,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Runs the selected criteria in id order.
pub fn validate(opts: &ValidateOptions) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|(id, _)| opts.only.as_ref().is_none_or(|o| o.contains(id)))
        .map(|(id, _)| run_criterion(*id, opts))
        .collect()
}

pub fn all_passed(reports: &[CriterionReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

fn system(n_t: usize, n_r: usize, n_e: usize, n_s: usize, r_s: f64, snr_db: f64) -> SystemConfig {
    SystemConfig { n_t, n_r, n_e, n_s, alpha: 0.8, beta: 0.8, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s }
        .with_snr_db(snr_db)
}

const RATE_GRID: [f64; 8] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
const SNR_GRID: [f64; 6] = [0.0, 3.0, 6.0, 9.0, 12.0, 15.0];
const EVE_BOB: [(usize, usize); 3] = [(2, 4), (4, 4), (2, 1)];

/// Channels, random phases and MRT beamformer for the theory-vs-simulation setting.
fn mrt_setting(cfg: &SystemConfig, seed: u64) -> Result<(ChannelSet, PhaseVector, Beamformer)> {
    let cs = channel_seed(seed, cfg);
    let ch = ChannelSet::rayleigh(cfg, cs)?;
    let q = PhaseVector::random(cfg.n_s, cs, 3);
    let bf = mrt_baseline(&ch, cfg, true, Some(&q))?;
    Ok((ch, q, bf))
}

fn theory_vs_mc(seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for (n_e, n_r) in EVE_BOB {
        for (i, &r_s) in RATE_GRID.iter().enumerate() {
            let cfg = system(10, n_r, n_e, 16, r_s, 9.0);
            let (ch, q, bf) = mrt_setting(&cfg, seed)?;
            let theory = sop_theory(&cfg, &ch, &q, &bf)?;
            let mc_seed = derive_seed(seed, (n_e * 100 + n_r * 10 + i) as u64);
            let mc = empirical_sop(&cfg, &ch, &q, &bf, 100_000, mc_seed)?;
            worst = worst.max((theory - mc.p_hat).abs());
            points += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        side_ok: secs <= 120.0,
        ..Outcome::at_most(worst, 0.015, format!("max |theory - MC| over {points} points, {secs:.1} s (limit 120 s)"))
    })
}

fn monotone_trends(seed: u64) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for (n_e, n_r) in EVE_BOB {
        let base = system(10, n_r, n_e, 16, 3.0, 9.0);
        let (ch, q, bf) = mrt_setting(&base, seed)?;
        let mut by_rate = Vec::new();
        for &r_s in &RATE_GRID {
            by_rate.push(sop_theory(&SystemConfig { r_s, ..base }, &ch, &q, &bf)?);
        }
        let mut by_snr = Vec::new();
        for &snr in &SNR_GRID {
            let cfg = base.with_snr_db(snr);
            by_snr.push(sop_theory(&cfg, &ch, &q, &bf.with_power(cfg.rho)?)?);
        }
        for w in by_rate.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
        for w in by_snr.windows(2) {
            worst = worst.max(w[1] - w[0]);
        }
    }
    Ok(Outcome::at_most(worst.max(0.0), 1e-12, "largest step against the expected direction".into()))
}

fn high_snr_bound(seed: u64) -> Result<Outcome> {
    let mut max_gap: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for i in 0..20 {
        let cfg = system(10, 4, 2, 16, 3.0, 40.0);
        let (ch, q, bf) = mrt_setting(&cfg, derive_seed(seed, 300 + i))?;
        let gap = sop_theory(&cfg, &ch, &q, &bf)? - sop_high_snr_bound(&cfg, &ch, &q, &bf)?;
        max_gap = max_gap.max(gap);
        min_gap = min_gap.min(gap);
    }
    Ok(Outcome {
        side_ok: min_gap >= 0.0,
        ..Outcome::at_most(max_gap, 1e-3, format!("theory - bound over 20 instances, smallest gap {min_gap:.3e} (must be >= 0)"))
    })
}

fn gamma_law(seed: u64) -> Result<Outcome> {
    let mut rng_seed = derive_seed(seed, 400);
    let (mut ks_max, mut mean_err, mut var_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..10u64 {
        rng_seed = derive_seed(rng_seed, i);
        let draws = random_unit_vector(3, rng_seed, 0)?;
        let beta = draws[0].norm();
        let m = 1 + (i as usize % 4);
        let n = 1 + (i as usize * 3) % 8;
        let u: DVector<C64> = sample_rayleigh(n, 1, rng_seed, 1)?.column(0).into_owned() * C64::from(draws[1].norm() + 0.2);
        let fit = GammaFit::new(beta, m as u32, u.norm_squared())?;
        ks_max = ks_max.max(empirical_cdf_distance(beta, m, &u, 100_000, derive_seed(rng_seed, 2))?);
        let (mean, var) = empirical_gain_moments(beta, m, &u, 1_000_000, derive_seed(rng_seed, 3))?;
        mean_err = mean_err.max((mean / fit.mean() - 1.0).abs());
        var_err = var_err.max((var / fit.variance() - 1.0).abs());
    }
    let worst = (ks_max / 0.01).max(mean_err / 0.01).max(var_err / 0.03);
    Ok(Outcome::at_most(
        worst,
        1.0,
        format!("worst of KS {ks_max:.4}/0.01, mean {mean_err:.4}/0.01, variance {var_err:.4}/0.03 over 10 configurations"),
    ))
}

fn ao_convergence(seed: u64) -> Result<Outcome> {
    let xi = 1e-5;
    let runs = [(1usize, PhaseSolver::ClosedForm), (3, PhaseSolver::Manifold), (3, PhaseSolver::Sdr)];
    let mut worst_iters = 0usize;
    let mut all_converged = true;
    let mut sdr_rise = 0.0f64;
    let mut parts = Vec::new();
    for (n_r, solver) in runs {
        let cfg = system(10, n_r, 2, 32, 3.0, 7.0);
        let ch = ChannelSet::rayleigh(&cfg, channel_seed(seed, &cfg))?;
        let r = alternating_optimize(&cfg, &ch, solver, seed, xi, 50)?;
        worst_iters = worst_iters.max(r.iterations_used);
        all_converged &= r.converged;
        if solver == PhaseSolver::Sdr {
            for w in r.trace.windows(2) {
                sdr_rise = sdr_rise.max(w[1].p_out - w[0].p_out);
            }
        }
        let p10 = r.trace.get(10).map_or(r.p_out, |e| e.p_out);
        parts.push(format!(
            "{solver:?}: {} iterations, converged {}, P_out {:.5} (after 10: {p10:.5})",
            r.iterations_used, r.converged, r.p_out
        ));
    }
    parts.push(format!("largest SDR-path rise {sdr_rise:.2e} (limit {xi:e})"));
    Ok(Outcome {
        side_ok: all_converged && sdr_rise <= xi,
        ..Outcome::at_most(worst_iters as f64, 10.0, parts.join("; "))
    })
}

fn beats_baselines(seed: u64) -> Result<Outcome> {
    let seeds = 10;
    let schemes = [Scheme::AoMan, Scheme::AoSdr, Scheme::MrtNoRis, Scheme::MrtRand];
    let mut worst = f64::NEG_INFINITY;
    let mut parts = Vec::new();
    for &snr in &SNR_GRID {
        let mut avg = [0.0; 4];
        for s in 0..seeds {
            let cfg = system(10, 3, 2, 32, 4.0, snr);
            let sd = derive_seed(seed, 600 + s);
            let ch = ChannelSet::rayleigh(&cfg, channel_seed(sd, &cfg))?;
            for (k, scheme) in schemes.iter().enumerate() {
                let o = run_scheme(*scheme, &cfg, &ch, sd)?;
                avg[k] += sop_theory(&cfg, &o.channels, &o.phase, &o.beamformer)? / seeds as f64;
            }
        }
        let baseline = avg[2].min(avg[3]);
        worst = worst.max(avg[0].max(avg[1]) - baseline);
        parts.push(format!("{snr} dB: man {:.4} sdr {:.4} no-ris {:.4} rand {:.4}", avg[0], avg[1], avg[2], avg[3]));
    }
    Ok(Outcome::at_most(worst, 0.0, format!("max(AO) - min(baseline), seed-averaged; {}", parts.join("; "))))
}

fn eve_dominance(seed: u64) -> Result<Outcome> {
    let base = system(10, 1, 1, 32, 3.0, 9.0);
    let ch = ChannelSet::rayleigh(&base, channel_seed(seed, &base))?;
    let mut sops = Vec::new();
    for n_e in 1..=12 {
        let cfg = SystemConfig { n_e, ..base };
        let r = alternating_optimize(&cfg, &ch, PhaseSolver::ClosedForm, seed, 1e-5, 50)?;
        sops.push(sop_theory(&cfg, &ch, &r.final_q, &r.final_b)?);
    }
    let drop = sops.windows(2).map(|w| w[0] - w[1]).fold(0.0f64, f64::max);
    let tail = sops[base.n_t..].iter().copied().fold(1.0f64, f64::min);
    let list: Vec<String> = sops.iter().map(|p| format!("{p:.4}")).collect();
    Ok(Outcome {
        measured: tail,
        comparison: Comparison::AtLeast,
        tolerance: 0.99,
        side_ok: drop <= 1e-12,
        detail: format!("min SOP for n_e > n_t; largest decrease in n_e {drop:.2e}; SOP by n_e = 1..12: {}", list.join(" ")),
    })
}

fn subproblem_oracles(seed: u64) -> Result<Outcome> {
    // (a) generalized eigenvector against random directions
    let cfg = system(3, 2, 2, 4, 2.0, 9.0);
    let ch = ChannelSet::rayleigh(&cfg, derive_seed(seed, 800))?;
    let sub = SubproblemMatrices::new(&cfg, &ch, &PhaseVector::random(cfg.n_s, seed, 801))?;
    let best = sub.ratio(optimal_beamformer(&sub, cfg.beta)?.b(), cfg.beta);
    let mut excess = f64::NEG_INFINITY;
    for s in 0..100_000 {
        excess = excess.max(sub.ratio(&random_unit_vector(3, derive_seed(seed, 802), s)?, cfg.beta) - best);
    }
    let a = excess.max(0.0) / 1e-9;

    // (b) manifold CG against a 4096 x 4096 grid
    let cfg = system(1, 2, 2, 2, 2.0, 9.0);
    let mut b_err: f64 = 0.0;
    for i in 0..3 {
        let ch = ChannelSet::rayleigh(&cfg, derive_seed(seed, 810 + i))?;
        let bf = Beamformer::scalar(cfg.rho)?;
        let obj = PhaseObjective::new(&cfg, &ch, &bf)?;
        let (g, _) = grid_best_phase(&obj.sigma, &obj.direct, 4096);
        let f_grid = -obj.k * (g + obj.t);
        let out = manifold_phase_opt(&ch, &bf, &cfg, &PhaseVector::ones(2))?;
        b_err = b_err.max((out.objective - f_grid).abs());
    }
    let b = b_err / 1e-4;

    // (c) closed-form alignment identity
    let cfg = system(4, 1, 2, 12, 2.0, 9.0);
    let mut c_err: f64 = 0.0;
    for i in 0..100 {
        let ch = ChannelSet::rayleigh(&cfg, derive_seed(seed, 900 + i))?;
        let bf = Beamformer::new(random_unit_vector(4, derive_seed(seed, 901), i)?, cfg.rho)?;
        let q = closed_form_phase_single_bob(&ch, &bf, cfg.alpha)?;
        let m = crate::model::effective_channel(&cfg, &ch, &q)? * bf.b();
        c_err = c_err.max((m.norm() - single_bob_alignment_bound(&ch, &bf, cfg.alpha)).abs());
    }
    let c = c_err / 1e-10;

    // (d) relaxation sandwich at n_s = 2 (4096 per axis) and n_s = 3 (256 per axis)
    let mut d_viol = f64::NEG_INFINITY;
    for (n_s, res, count) in [(2usize, 4096usize, 3u64), (3, 256, 2)] {
        let cfg = system(2, 2, 2, n_s, 2.0, 9.0);
        for i in 0..count {
            let ch = ChannelSet::rayleigh(&cfg, derive_seed(seed, 1000 + 10 * n_s as u64 + i))?;
            let bf = Beamformer::new(random_unit_vector(2, derive_seed(seed, 1001), i)?, cfg.rho)?;
            let problem = SdrProblem::new(&cfg, &ch, &bf)?;
            let r = sdr_phase_opt(&ch, &bf, &cfg)?;
            let (g, _) = grid_best_phase(&problem.sigma_mat, &problem.direct, res);
            let grid_best = g + problem.t;
            let scale = 1.0 + r.sdp_value.abs();
            d_viol = d_viol.max((grid_best - r.sdp_value) / scale).max((r.feasible_value - r.sdp_value) / scale);
        }
    }
    let d = d_viol.max(0.0) / 1e-9;

    let worst = a.max(b).max(c).max(d);
    Ok(Outcome::at_most(
        worst,
        1.0,
        format!(
            "normalized errors: (a) beamformer {a:.3} [excess {excess:.2e}/1e-9], (b) manifold vs grid {b:.3} [{b_err:.2e}/1e-4], \
             (c) alignment {c:.3} [{c_err:.2e}/1e-10], (d) sandwich {d:.3} [{d_viol:.2e}/1e-9]"
        ),
    ))
}

fn kernels(seed: u64) -> Result<Outcome> {
    let mut gamma_err: f64 = 0.0;
    for m in 1..=20u32 {
        for &z in &[1e-3, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 15.0, 20.0, 30.0, 50.0, 75.0, 100.0] {
            let exact = upper_gamma_quadrature(m, z);
            gamma_err = gamma_err.max((reg_upper_gamma(m, z)? / exact - 1.0).abs());
        }
    }
    let cfg = system(3, 2, 2, 6, 2.0, 9.0);
    let mut fd_err: f64 = 0.0;
    for i in 0..10 {
        let ch = ChannelSet::rayleigh(&cfg, derive_seed(seed, 1100 + i))?;
        let bf = Beamformer::new(random_unit_vector(3, derive_seed(seed, 1101), i)?, cfg.rho)?;
        let obj = PhaseObjective::new(&cfg, &ch, &bf)?;
        let q = PhaseVector::random(cfg.n_s, seed, 1102 + i);
        let g = obj.euclidean_gradient(q.as_vector());
        let fd = finite_difference_gradient(|x| obj.value(x), q.as_vector(), 1e-6);
        fd_err = fd_err.max((&g - &fd).norm() / g.norm());
    }
    let worst = (gamma_err / 1e-10).max(fd_err / 1e-4);
    Ok(Outcome::at_most(
        worst,
        1.0,
        format!("normalized: incomplete gamma vs quadrature {gamma_err:.2e}/1e-10, gradient vs differences {fd_err:.2e}/1e-4"),
    ))
}
