//! Monitored quantities and verification of the flow's exact identities,
//! monotone laws and explicit bounds against a finished trajectory.
//!
//! Everything here is a pure function of the trajectory: re-running a check
//! gives a bit-identical report.

use std::f64::consts::PI;

use crate::dynamics::{DissipationGauges, RunConfig, SimState, Trajectory};
use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};
use crate::norms::{integral, norm_lp, norm_sobolev, norm_wiener};
use crate::ops::{analyze, derivative, half_laplacian, hilbert, synthesize_grid};

/// Context frozen at `t = 0`: equilibrium value, initial norms, the clip
/// gauge, and the initial label density for transport distances.
#[derive(Debug, Clone)]
pub struct DiagContext {
    pub grid_size: usize,
    pub alpha: f64,
    pub l1_f0: f64,
    pub l1_big_f0: f64,
    /// Harmonic-mean equilibrium `f_inf = 2*pi / ||1/f_0||_L1`.
    pub f_inf: f64,
    pub wiener01_0: f64,
    pub gauges: DissipationGauges,
    initial_big_f: GridField,
}

impl DiagContext {
    pub fn new(f0: &SpectralField, cfg: &RunConfig) -> Self {
        let gauges = DissipationGauges::new(f0);
        let grid_size = gauges.grid_size;
        let fg = synthesize_grid(f0, grid_size);
        let big_f = fg.map(|v| 1.0 / v.max(1e-300));
        let l1_f0 = norm_lp(&fg, 1.0);
        let l1_big_f0 = norm_lp(&big_f, 1.0);
        Self {
            grid_size,
            alpha: cfg.alpha,
            l1_f0,
            l1_big_f0,
            f_inf: 2.0 * PI / l1_big_f0,
            wiener01_0: norm_wiener(f0, 0, 0.0),
            gauges,
            initial_big_f: big_f,
        }
    }

    /// Conservative analyticity width `nu(t) = ln[(1 + e^{2 f_inf t})/2] / 2`.
    pub fn nu(&self, t: f64) -> f64 {
        let a = 2.0 * self.f_inf * t;
        let softplus = if a > 40.0 { a + (-a).exp() } else { a.exp().ln_1p() };
        0.5 * (softplus - std::f64::consts::LN_2)
    }
}

/// One time slice of every monitored scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagRecord {
    pub t: f64,
    pub fbar: f64,
    pub fmin: f64,
    pub fmax: f64,
    pub l1_f: f64,
    pub l2_f: f64,
    pub l4_f: f64,
    pub l1_big_f: f64,
    pub l2_big_f: f64,
    pub l4_big_f: f64,
    /// `||f||_{Hdot^{1/2}}` from coefficients.
    pub hhalf_f: f64,
    /// `||ln f||_{Hdot^{1/2}}` from grid analysis.
    pub hhalf_lnf: f64,
    /// `||sqrt f||_{Hdot^1}` from grid analysis.
    pub h1_sqrtf: f64,
    /// `integral F ln F dx`.
    pub entropy: f64,
    /// `integral f * Lambda f dx` (instantaneous).
    pub dissipation: f64,
    /// Running `integral_0^t integral f * Lambda f` (Simpson-accumulated).
    pub diss_integral: f64,
    /// Running `integral_0^t integral (1/f) * Lambda f`.
    pub entropy_flux_integral: f64,
    /// Running flux integral for the clipped convex gauge.
    pub clip_flux_integral: f64,
    /// `integral Phi_clip(F) dx`: excursion of `F` outside the initial range.
    pub clip_excess: f64,
    /// Relative defect of the energy balance at this time.
    pub energy_residual: f64,
    pub dxf_min: f64,
    pub dxf_max: f64,
    pub wiener01: f64,
    pub wiener01_nu: f64,
    pub holder_alpha: f64,
    /// `||(-Delta)^{-1/4}(F - Fbar)||_{L^2}`.
    pub hminus_half_big_f: f64,
    /// `integral f * (HF)^2 dx`.
    pub hm_dissipation: f64,
    /// `W_1` between the normalized initial and current label densities.
    pub w1_to_initial: f64,
}

/// Populate a full record from a simulation state.
pub fn record(s: &SimState, ctx: &DiagContext) -> DiagRecord {
    let m = ctx.grid_size;
    let f = &s.field;
    let fg = synthesize_grid(f, m);
    let big_f = fg.map(|v| 1.0 / v.max(1e-300));
    let dxf = synthesize_grid(&derivative(f), m);
    let lf = synthesize_grid(&half_laplacian(f), m);
    let h = fg.spacing();

    let l1_f = norm_lp(&fg, 1.0);
    let l1_big_f = norm_lp(&big_f, 1.0);
    // Cauchy-Schwarz floor; equality only for constants.
    debug_assert!(l1_f * l1_big_f >= 4.0 * PI * PI - 1e-6);

    let k_grid = (m - 1) / 2;
    let lnf_hat = analyze(&fg.map(f64::ln), k_grid).expect("grid sized for analysis");
    let sqrtf_hat = analyze(&fg.map(f64::sqrt), k_grid).expect("grid sized for analysis");
    let mut bigf_hat = analyze(&big_f, k_grid).expect("grid sized for analysis");

    let entropy = h * big_f
        .samples()
        .iter()
        .map(|&v| v * v.max(1e-300).ln())
        .sum::<f64>();
    let dissipation = h * fg
        .samples()
        .iter()
        .zip(lf.samples())
        .map(|(a, b)| a * b)
        .sum::<f64>();

    let clip_excess = h * big_f
        .samples()
        .iter()
        .map(|&v| {
            if v < ctx.gauges.clip_lo {
                (v - ctx.gauges.clip_lo).powi(2)
            } else if v > ctx.gauges.clip_hi {
                (v - ctx.gauges.clip_hi).powi(2)
            } else {
                0.0
            }
        })
        .sum::<f64>();

    let half_l1_0 = 0.5 * ctx.l1_f0;
    let energy_residual = (0.5 * l1_f + s.diss_integral - half_l1_0) / half_l1_0;

    let hf_of_big_f = synthesize_grid(&hilbert(&bigf_hat), m);
    let hm_dissipation = h * fg
        .samples()
        .iter()
        .zip(hf_of_big_f.samples())
        .map(|(a, b)| a * b * b)
        .sum::<f64>();
    // Mean-zero part of F for the negative-order norm.
    bigf_hat.coeffs_mut()[0] = num_complex::Complex64::new(0.0, 0.0);
    let hminus_half_big_f = norm_sobolev(&bigf_hat, -0.5).expect("mean removed");

    let w1_to_initial = wasserstein1_circle(
        &normalize_density(&ctx.initial_big_f),
        &normalize_density(&big_f),
    )
    .expect("conserved mass stays matched");

    DiagRecord {
        t: s.t,
        fbar: f.mean(),
        fmin: s.fmin,
        fmax: s.fmax,
        l1_f,
        l2_f: norm_lp(&fg, 2.0),
        l4_f: norm_lp(&fg, 4.0),
        l1_big_f,
        l2_big_f: norm_lp(&big_f, 2.0),
        l4_big_f: norm_lp(&big_f, 4.0),
        hhalf_f: norm_sobolev(f, 0.5).expect("positive order"),
        hhalf_lnf: norm_sobolev(&lnf_hat, 0.5).expect("positive order"),
        h1_sqrtf: norm_sobolev(&sqrtf_hat, 1.0).expect("positive order"),
        entropy,
        dissipation,
        diss_integral: s.diss_integral,
        entropy_flux_integral: s.entropy_flux_integral,
        clip_flux_integral: s.clip_flux_integral,
        clip_excess,
        energy_residual,
        dxf_min: dxf.min(),
        dxf_max: dxf.max(),
        wiener01: norm_wiener(f, 0, 0.0),
        wiener01_nu: norm_wiener(f, 0, ctx.nu(s.t)),
        holder_alpha: holder_seminorm(&fg, ctx.alpha),
        hminus_half_big_f,
        hm_dissipation,
        w1_to_initial,
    }
}

fn normalize_density(g: &GridField) -> GridField {
    let mass = integral(g);
    g.map(|v| v / mass)
}

/// Outcome of one verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

/// Result of one check: worst violation, when it happened, tolerance used.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    pub worst: f64,
    pub t_worst: f64,
    pub tolerance: f64,
    pub note: String,
}

impl CheckReport {
    fn from_worst(name: &str, worst: f64, t_worst: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            status: if worst <= tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            worst,
            t_worst,
            tolerance,
            note: String::new(),
        }
    }

    fn skipped(name: &str, note: &str) -> Self {
        Self {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            worst: 0.0,
            t_worst: 0.0,
            tolerance: 0.0,
            note: note.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// Energy balance: `||f(t)||_L1 / 2 + integral_0^t ||f||_{Hdot^{1/2}}^2 dtau`
/// stays at its initial value; reports the worst relative defect.
pub fn check_energy_identity(traj: &Trajectory) -> CheckReport {
    let tol = traj.config.tol("energy", 1e-6);
    let (worst, t) = worst_over(&traj.records, |r| r.energy_residual.abs());
    CheckReport::from_worst("energy_identity", worst, t, tol)
}

/// `||1/f||_L1` is conserved; reports the worst relative drift.
pub fn check_conservation_big_f(traj: &Trajectory) -> CheckReport {
    let tol = traj.config.tol("conservation", 1e-6);
    let base = traj.records[0].l1_big_f;
    let (worst, t) = worst_over(&traj.records, |r| (r.l1_big_f - base).abs() / base);
    CheckReport::from_worst("conservation_big_f", worst, t, tol)
}

/// Quantities with a proven monotone law along the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneQuantity {
    L1F,
    L2F,
    L4F,
    L1BigF,
    L2BigF,
    L4BigF,
    Fmax,
    Fmin,
    DxfMax,
    DxfMin,
    HhalfLnf,
    H1Sqrtf,
    Entropy,
}

impl MonotoneQuantity {
    pub const ALL: [MonotoneQuantity; 13] = [
        MonotoneQuantity::L1F,
        MonotoneQuantity::L2F,
        MonotoneQuantity::L4F,
        MonotoneQuantity::L1BigF,
        MonotoneQuantity::L2BigF,
        MonotoneQuantity::L4BigF,
        MonotoneQuantity::Fmax,
        MonotoneQuantity::Fmin,
        MonotoneQuantity::DxfMax,
        MonotoneQuantity::DxfMin,
        MonotoneQuantity::HhalfLnf,
        MonotoneQuantity::H1Sqrtf,
        MonotoneQuantity::Entropy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MonotoneQuantity::L1F => "l1_f_decreasing",
            MonotoneQuantity::L2F => "l2_f_decreasing",
            MonotoneQuantity::L4F => "l4_f_decreasing",
            MonotoneQuantity::L1BigF => "l1_big_f_decreasing",
            MonotoneQuantity::L2BigF => "l2_big_f_decreasing",
            MonotoneQuantity::L4BigF => "l4_big_f_decreasing",
            MonotoneQuantity::Fmax => "fmax_decreasing",
            MonotoneQuantity::Fmin => "fmin_increasing",
            MonotoneQuantity::DxfMax => "dxf_max_decreasing",
            MonotoneQuantity::DxfMin => "dxf_min_increasing",
            MonotoneQuantity::HhalfLnf => "hhalf_lnf_decreasing",
            MonotoneQuantity::H1Sqrtf => "h1_sqrtf_decreasing",
            MonotoneQuantity::Entropy => "entropy_decreasing",
        }
    }

    fn extract(&self, r: &DiagRecord) -> f64 {
        match self {
            MonotoneQuantity::L1F => r.l1_f,
            MonotoneQuantity::L2F => r.l2_f,
            MonotoneQuantity::L4F => r.l4_f,
            MonotoneQuantity::L1BigF => r.l1_big_f,
            MonotoneQuantity::L2BigF => r.l2_big_f,
            MonotoneQuantity::L4BigF => r.l4_big_f,
            MonotoneQuantity::Fmax => r.fmax,
            MonotoneQuantity::Fmin => r.fmin,
            MonotoneQuantity::DxfMax => r.dxf_max,
            MonotoneQuantity::DxfMin => r.dxf_min,
            MonotoneQuantity::HhalfLnf => r.hhalf_lnf,
            MonotoneQuantity::H1Sqrtf => r.h1_sqrtf,
            MonotoneQuantity::Entropy => r.entropy,
        }
    }

    fn increasing(&self) -> bool {
        matches!(self, MonotoneQuantity::Fmin | MonotoneQuantity::DxfMin)
    }
}

/// Verify the stated monotonicity across consecutive records with additive
/// slack `slack_factor * scale`.
pub fn check_monotone(
    traj: &Trajectory,
    quantity: MonotoneQuantity,
    slack_factor: Option<f64>,
) -> CheckReport {
    let factor = slack_factor.unwrap_or_else(|| traj.config.tol("monotone", 1e-10));
    let values: Vec<f64> = traj.records.iter().map(|r| quantity.extract(r)).collect();
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1e-30);
    let tol = factor * scale;
    let mut worst = f64::NEG_INFINITY;
    let mut t_worst = 0.0;
    for (w, r) in values.windows(2).zip(&traj.records[1..]) {
        let violation = if quantity.increasing() {
            w[0] - w[1]
        } else {
            w[1] - w[0]
        };
        if violation > worst {
            worst = violation;
            t_worst = r.t;
        }
    }
    CheckReport::from_worst(quantity.name(), worst.max(0.0), t_worst, tol)
}

/// Integrated form of the entropy law: the entropy drop from `0` to `t`
/// dominates `integral ||ln f||_{Hdot^{1/2}}^2 dtau` (trapezoid in time).
pub fn check_entropy_production(traj: &Trajectory) -> CheckReport {
    let scale = traj.records[0].entropy.abs().max(1.0);
    let tol = traj.config.tol("entropy_production", 1e-4) * scale;
    let mut acc = 0.0;
    let mut worst = f64::NEG_INFINITY;
    let mut t_worst = 0.0;
    let r0 = &traj.records[0];
    for w in traj.records.windows(2) {
        let dt = w[1].t - w[0].t;
        acc += 0.5 * dt * (w[0].hhalf_lnf.powi(2) + w[1].hhalf_lnf.powi(2));
        let violation = w[1].entropy - r0.entropy + acc;
        if violation > worst {
            worst = violation;
            t_worst = w[1].t;
        }
    }
    CheckReport::from_worst("entropy_production", worst.max(0.0), t_worst, tol)
}

/// Scale-invariant lower bound for `min f` with fully explicit constants:
/// `f_*(t) >= 8/||F_0||_L1 * exp(-coth(4 t / (pi ||F_0||_L1)))`.
pub fn lower_bound_explicit(l1_big_f0: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let arg = 4.0 / PI / l1_big_f0 * t;
    8.0 / l1_big_f0 * (-1.0 / arg.tanh()).exp()
}

/// Calibrated constants for the bounds whose universal constants are proven
/// to exist but never pinned down. Defaults come from the shipped
/// calibration sweep (`calibrate` subcommand); they are empirical, not
/// ground truth.
#[derive(Debug, Clone, Copy)]
pub struct Constants {
    /// `C` in `||f(t)||_inf <= C t^{-1/2} ||f_0||_L1^{1/2}`.
    pub linf_decay: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { linf_decay: 1.0 }
    }
}

/// Explicit-bound suite: the coth lower bound (paper constants), the
/// calibrated `t^{-1/2}` upper bound, and the scaling-exponent regression
/// of `max f` on the short-time window.
pub fn check_explicit_bounds(traj: &Trajectory, constants: &Constants) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let l1_big_f0 = traj.records[0].l1_big_f;
    let l1_f0 = traj.records[0].l1_f;

    let (worst, t_worst) = worst_over(&traj.records, |r| {
        if r.t <= 0.0 {
            f64::NEG_INFINITY
        } else {
            lower_bound_explicit(l1_big_f0, r.t) - r.fmin
        }
    });
    out.push(CheckReport::from_worst(
        "min_lower_bound",
        worst.max(0.0),
        t_worst,
        traj.config.tol("lower_bound", 1e-12),
    ));

    let horizon = 1.0 / l1_f0;
    let (worst, t_worst) = worst_over(&traj.records, |r| {
        if r.t > 0.0 && r.t <= horizon {
            r.fmax - constants.linf_decay * r.t.powf(-0.5) * l1_f0.sqrt()
        } else {
            f64::NEG_INFINITY
        }
    });
    out.push(CheckReport::from_worst(
        "linf_decay_bound",
        worst.max(0.0),
        t_worst,
        traj.config.tol("linf_bound", 1e-12),
    ));

    // Slope of log max f against log t must not fall below -1/2 by more
    // than the stated margin.
    let pts: Vec<(f64, f64)> = traj
        .records
        .iter()
        .filter(|r| r.t >= 1e-3 && r.t <= horizon)
        .map(|r| (r.t.ln(), r.fmax.ln()))
        .collect();
    if pts.len() < 3 {
        out.push(CheckReport::skipped(
            "linf_decay_slope",
            "fewer than 3 records in [1e-3, 1/||f_0||]",
        ));
    } else {
        let slope = linear_fit_slope(&pts);
        let floor = -0.55;
        let mut rep = CheckReport::from_worst("linf_decay_slope", (floor - slope).max(0.0), 0.0, 0.0);
        rep.note = format!("slope {slope:.4}, floor {floor}");
        out.push(rep);
    }
    out
}

/// Convex gauges for the dissipative inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiGauge {
    /// `Phi(y) = 1/y`: reproduces the energy balance.
    Energy,
    /// `Phi(y) = y ln y`: reproduces the entropy balance.
    Entropy,
    /// Piecewise `(y-a)^2 / 0 / (y-b)^2` with the initial range `[a, b]`;
    /// passing confirms `F(t)` stays inside that range.
    ClippedSquare,
}

impl PhiGauge {
    pub fn name(&self) -> &'static str {
        match self {
            PhiGauge::Energy => "dissipative_energy",
            PhiGauge::Entropy => "dissipative_entropy",
            PhiGauge::ClippedSquare => "dissipative_clipped",
        }
    }
}

/// Verify `integral Phi(F(t)) + integral_0^t integral (Phi - F Phi') Lf
/// <= integral Phi(F_0) + slack` at every record, using the
/// Simpson-accumulated flux integrals.
pub fn check_dissipative_inequality(traj: &Trajectory, phi: PhiGauge) -> CheckReport {
    let tol = traj.config.tol("dissipative", 1e-8);
    let r0 = &traj.records[0];
    let (worst, t_worst) = worst_over(&traj.records, |r| match phi {
        // Phi - F Phi' = 2f, and integral Phi(F) = integral f.
        PhiGauge::Energy => r.l1_f + 2.0 * r.diss_integral - r0.l1_f,
        // Phi - F Phi' = -F.
        PhiGauge::Entropy => r.entropy - r.entropy_flux_integral - r0.entropy,
        // Phi(F_0) = 0 by construction of the gauge.
        PhiGauge::ClippedSquare => r.clip_excess + r.clip_flux_integral,
    });
    CheckReport::from_worst(phi.name(), worst.max(0.0), t_worst, tol)
}

/// Exact-identity monitor for the negative-order norm of `F`:
/// `d/dt ||(-D)^{-1/4}(F - Fbar)||^2 + integral f (HF)^2 = 2 pi Fbar -
/// Fbar^2 integral f`, via centered differences at record cadence, plus the
/// sign of the right-hand side.
pub fn check_hminus_identity(traj: &Trajectory) -> Vec<CheckReport> {
    let tol = traj.config.tol("hminus", 1e-3);
    let rs = &traj.records;
    if rs.len() < 3 {
        return vec![CheckReport::skipped(
            "hminus_identity",
            "need at least 3 records for centered differences",
        )];
    }
    let mut worst = f64::NEG_INFINITY;
    let mut t_worst = 0.0;
    let mut sign_worst = f64::NEG_INFINITY;
    let mut sign_t = 0.0;
    for i in 1..rs.len() - 1 {
        let dq = rs[i + 1].hminus_half_big_f.powi(2) - rs[i - 1].hminus_half_big_f.powi(2);
        let dt = rs[i + 1].t - rs[i - 1].t;
        let fbar_big = rs[i].l1_big_f / (2.0 * PI);
        let rhs = 2.0 * PI * fbar_big - fbar_big * fbar_big * rs[i].l1_f;
        let lhs = dq / dt + rs[i].hm_dissipation;
        let denom = rhs.abs().max(rs[i].hm_dissipation.abs()).max(1e-12);
        let rel = (lhs - rhs).abs() / denom;
        if rel > worst {
            worst = rel;
            t_worst = rs[i].t;
        }
        if rhs > sign_worst {
            sign_worst = rhs;
            sign_t = rs[i].t;
        }
    }
    vec![
        CheckReport::from_worst("hminus_identity", worst, t_worst, tol),
        CheckReport::from_worst(
            "hminus_rhs_nonpositive",
            sign_worst.max(0.0),
            sign_t,
            traj.config.tol("hminus_sign", 1e-12),
        ),
    ]
}

/// Small-data analyticity monitor: with the conservative width `nu(t)`,
/// `||f(t)||_{F^{0,1}_{nu(t)}}` may never exceed twice its initial value.
/// Skipped (hypothesis not met) unless `||f_0||_{F^{0,1}} <= 0.05 f_inf`.
pub fn check_analyticity(traj: &Trajectory) -> CheckReport {
    let r0 = &traj.records[0];
    let f_inf = 2.0 * PI / r0.l1_big_f;
    let w0 = r0.wiener01;
    if w0 > 0.05 * f_inf {
        return CheckReport::skipped(
            "analyticity",
            &format!("hypothesis not met: ||f_0|| = {w0:.4e} > 0.05 f_inf = {:.4e}", 0.05 * f_inf),
        );
    }
    let tol = traj.config.tol("analyticity", 1e-10) * w0.max(1e-30);
    let (worst, t_worst) = worst_over(&traj.records, |r| r.wiener01_nu - 2.0 * w0);
    CheckReport::from_worst("analyticity", worst.max(0.0), t_worst, tol)
}

/// Long-time convergence: `||f - f_inf||_L2` non-increasing on the tail
/// window, and the fitted exponential rate of the slowest mode equals
/// `f_inf` within 5%. The tail window is the second half of the run.
pub fn check_decay_to_equilibrium(traj: &Trajectory) -> Vec<CheckReport> {
    let r0 = &traj.records[0];
    let f_inf = 2.0 * PI / r0.l1_big_f;
    let t_end = traj.records.last().map(|r| r.t).unwrap_or(0.0);
    let window: Vec<&DiagRecord> = traj
        .records
        .iter()
        .filter(|r| r.t >= 0.5 * t_end)
        .collect();
    let mut out = Vec::new();
    if window.len() < 3 {
        out.push(CheckReport::skipped(
            "equilibrium_l2_monotone",
            "too few records in the tail window",
        ));
        out.push(CheckReport::skipped("equilibrium_rate", "too few records"));
        return out;
    }

    // ||f - c||_L2^2 = ||f||_L2^2 - 2 c ||f||_L1 + 2 pi c^2 for positive f.
    let dist = |r: &DiagRecord| {
        (r.l2_f.powi(2) - 2.0 * f_inf * r.l1_f + 2.0 * PI * f_inf * f_inf).max(0.0)
    };
    let mut worst = f64::NEG_INFINITY;
    let mut t_worst = 0.0;
    for w in window.windows(2) {
        let v = dist(w[1]) - dist(w[0]);
        if v > worst {
            worst = v;
            t_worst = w[1].t;
        }
    }
    // Slack relative to the initial departure from equilibrium; the tail
    // values themselves sit at rounding level once converged.
    let scale = dist(&traj.records[0]).max(1e-30);
    out.push(CheckReport::from_worst(
        "equilibrium_l2_monotone",
        worst.max(0.0),
        t_worst,
        traj.config.tol("equilibrium_monotone", 1e-10) * scale,
    ));

    // The slowest surviving mode decays like exp(-integral fbar) with
    // integral fbar -> f_inf * t; fit the log of the Wiener norm, which is
    // asymptotically twice that mode's modulus.
    let pts: Vec<(f64, f64)> = window
        .iter()
        .filter(|r| r.wiener01 > 1e-280)
        .map(|r| (r.t, r.wiener01.ln()))
        .collect();
    if pts.len() < 3 {
        out.push(CheckReport::skipped(
            "equilibrium_rate",
            "slow mode already below floor",
        ));
        return out;
    }
    let rate = -linear_fit_slope(&pts);
    let rel = (rate - f_inf).abs() / f_inf;
    let mut rep = CheckReport::from_worst("equilibrium_rate", rel, 0.0, 0.05);
    rep.note = format!("fitted {rate:.6}, f_inf {f_inf:.6}");
    out.push(rep);
    out
}

/// Short-time transport continuity: the fitted exponent of
/// `W_1(F_0, F(t))` against `t` on `[1e-4, 1e-2]` must clear the floor.
pub fn check_w1_continuity(traj: &Trajectory) -> CheckReport {
    let pts: Vec<(f64, f64)> = traj
        .records
        .iter()
        .filter(|r| r.t >= 1e-4 && r.t <= 1e-2 && r.w1_to_initial > 1e-300)
        .map(|r| (r.t.ln(), r.w1_to_initial.ln()))
        .collect();
    if pts.len() < 3 {
        return CheckReport::skipped(
            "w1_continuity_exponent",
            "no records inside [1e-4, 1e-2]; use a finer record cadence",
        );
    }
    let slope = linear_fit_slope(&pts);
    let floor = 0.15;
    let mut rep =
        CheckReport::from_worst("w1_continuity_exponent", (floor - slope).max(0.0), 0.0, 0.0);
    rep.note = format!("fitted exponent {slope:.4}, floor {floor}");
    rep
}

/// 1-Wasserstein distance between two non-negative densities on the circle
/// sampled on the same uniform grid, by the circular-CDF median rule:
/// `W_1 = min_c integral |U(x) - c| dx` with `U` the cumulative of
/// `mu - nu`, minimized at the median of `U`.
pub fn wasserstein1_circle(mu: &GridField, nu: &GridField) -> Result<f64> {
    if mu.len() != nu.len() {
        return Err(Error::HypothesisNotMet(format!(
            "grids differ in size: {} vs {}",
            mu.len(),
            nu.len()
        )));
    }
    if mu.min() < -1e-12 || nu.min() < -1e-12 {
        return Err(Error::HypothesisNotMet(
            "densities must be non-negative".into(),
        ));
    }
    let mass_mu = integral(mu);
    let mass_nu = integral(nu);
    let rel = (mass_mu - mass_nu).abs() / mass_mu.abs().max(1e-300);
    if rel > 1e-8 {
        return Err(Error::MassMismatch {
            mu: mass_mu,
            nu: mass_nu,
            rel,
        });
    }
    let h = mu.spacing();
    let mut cdf = Vec::with_capacity(mu.len());
    let mut acc = 0.0;
    for (a, b) in mu.samples().iter().zip(nu.samples()) {
        acc += (a - b) * h;
        cdf.push(acc);
    }
    let mut sorted = cdf.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    Ok(h * cdf.iter().map(|u| (u - median).abs()).sum::<f64>())
}

/// Closed form of the system restricted to modes `{0, +-1}`:
/// `a' = -4 b^2`, `b' = -a b`, first integral `a^2 - 4 b^2 = c^2`.
/// Returns `(fbar, |c_1|)` at time `t`.
pub fn two_mode_closed_form(a0: f64, b0: f64, t: f64) -> Result<(f64, f64)> {
    if !(b0 >= 0.0 && a0 > 2.0 * b0) {
        return Err(Error::HypothesisNotMet(format!(
            "need a0 > 2 b0 >= 0 for a positive field, got a0 = {a0}, b0 = {b0}"
        )));
    }
    if b0 == 0.0 {
        return Ok((a0, 0.0));
    }
    let c = (a0 * a0 - 4.0 * b0 * b0).sqrt();
    // phi0 = arccoth(a0/c), written to avoid cancellation for small b0.
    let phi0 = ((a0 + c) / (2.0 * b0)).ln();
    let u = c * t + phi0;
    let a = c / u.tanh();
    let b = c / (2.0 * u.sinh());
    Ok((a, b))
}

/// Discrete Holder semi-norm `sup |g(x) - g(y)| / d(x,y)^alpha` over grid
/// pairs (subsampled to at most 512 nodes); a lower bound on the true
/// semi-norm.
pub fn holder_seminorm(g: &GridField, alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 0.2, "exponent restricted to (0, 1/5)");
    let m = g.len();
    let stride = m.div_ceil(512);
    let idx: Vec<usize> = (0..m).step_by(stride).collect();
    let mut sup: f64 = 0.0;
    for (ii, &i) in idx.iter().enumerate() {
        let xi = g.node(i);
        let gi = g.samples()[i];
        for &j in &idx[ii + 1..] {
            let raw = (g.node(j) - xi).abs();
            let d = raw.min(2.0 * PI - raw);
            sup = sup.max((g.samples()[j] - gi).abs() / d.powf(alpha));
        }
    }
    sup
}

/// Run the whole suite against a trajectory, in a fixed order.
pub fn run_all_checks(traj: &Trajectory, constants: &Constants) -> Vec<CheckReport> {
    let mut out = vec![
        check_energy_identity(traj),
        check_conservation_big_f(traj),
    ];
    for q in MonotoneQuantity::ALL {
        out.push(check_monotone(traj, q, None));
    }
    out.push(check_entropy_production(traj));
    out.extend(check_explicit_bounds(traj, constants));
    for phi in [PhiGauge::Energy, PhiGauge::Entropy, PhiGauge::ClippedSquare] {
        out.push(check_dissipative_inequality(traj, phi));
    }
    out.extend(check_hminus_identity(traj));
    out.push(check_analyticity(traj));
    out.extend(check_decay_to_equilibrium(traj));
    out.push(check_w1_continuity(traj));
    out
}

fn worst_over(records: &[DiagRecord], f: impl Fn(&DiagRecord) -> f64) -> (f64, f64) {
    let mut worst = f64::NEG_INFINITY;
    let mut t = 0.0;
    for r in records {
        let v = f(r);
        if v > worst {
            worst = v;
            t = r.t;
        }
    }
    (worst, t)
}

/// Least-squares slope of `y` against `x`.
pub fn linear_fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate, InitialData, Preset};

    fn two_mode_run(mean: f64, amp: f64, t_end: f64) -> Trajectory {
        let cfg = RunConfig {
            initial: InitialData::Preset(Preset::TwoMode { mean, amp }),
            t_end,
            cfl: 0.5,
            record_dt: 0.05,
            ..RunConfig::default()
        };
        simulate(&cfg).unwrap()
    }
    use crate::dynamics::RunConfig;

    #[test]
    fn record_of_constant_field() {
        let cfg = RunConfig {
            initial: InitialData::Preset(Preset::Constant { value: 1.0 }),
            capacity: 4,
            t_end: 0.1,
            ..RunConfig::default()
        };
        let traj = simulate(&cfg).unwrap();
        let r = &traj.records[0];
        assert_eq!(r.fbar, 1.0);
        assert!(r.hhalf_f.abs() < 1e-14);
        assert!(r.entropy.abs() < 1e-12);
        assert_eq!(r.dissipation, 0.0);
        assert!(r.holder_alpha.abs() < 1e-14);
    }

    #[test]
    fn record_norms_of_two_mode_field() {
        let traj = two_mode_run(1.0, 0.3, 0.05);
        let r = &traj.records[0];
        // integral dx/(1 + 0.6 cos x) = 2 pi / 0.8
        assert!((r.l1_big_f - 2.0 * PI / 0.8).abs() < 1e-9, "{}", r.l1_big_f);
        assert!((r.l1_f - 2.0 * PI).abs() < 1e-12);
        assert!((r.hhalf_f - (0.36 * PI).sqrt()).abs() < 1e-12);
        // Extrema are grid maxima; the check grid is odd so no node hits
        // the exact peak.
        assert!((r.fmax - 1.6).abs() < 1e-3);
        assert!((r.fmin - 0.4).abs() < 1e-3);
    }

    #[test]
    fn closed_form_two_mode() {
        // Stationary when b0 = 0.
        assert_eq!(two_mode_closed_form(1.0, 0.0, 5.0).unwrap(), (1.0, 0.0));
        // c = 0.8 and a -> c as t -> infinity.
        let (a, _) = two_mode_closed_form(1.0, 0.3, 50.0).unwrap();
        assert!((a - 0.8).abs() < 1e-10);
        // First integral holds identically.
        for t in [0.0, 0.3, 1.7, 6.0] {
            let (a, b) = two_mode_closed_form(1.0, 0.3, t).unwrap();
            assert!((a * a - 4.0 * b * b - 0.64).abs() < 1e-12);
        }
        assert!(two_mode_closed_form(1.0, 0.6, 0.0).is_err());
    }

    #[test]
    fn closed_form_matches_independent_integrator() {
        // Tiny RK4 oracle on (a, b) with a very small step.
        let (mut a, mut b) = (1.0, 0.3);
        let dt = 1e-5;
        let f = |a: f64, b: f64| (-4.0 * b * b, -a * b);
        for _ in 0..100_000 {
            let (k1a, k1b) = f(a, b);
            let (k2a, k2b) = f(a + 0.5 * dt * k1a, b + 0.5 * dt * k1b);
            let (k3a, k3b) = f(a + 0.5 * dt * k2a, b + 0.5 * dt * k2b);
            let (k4a, k4b) = f(a + dt * k3a, b + dt * k3b);
            a += dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
            b += dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        }
        let (ac, bc) = two_mode_closed_form(1.0, 0.3, 1.0).unwrap();
        assert!((a - ac).abs() < 1e-10, "{a} vs {ac}");
        assert!((b - bc).abs() < 1e-10, "{b} vs {bc}");
    }

    #[test]
    fn wasserstein_basics() {
        let bump = |c: f64| {
            GridField::sample(64, move |x| {
                let d = (x - c + PI).rem_euclid(2.0 * PI) - PI;
                (-(d / 0.2).powi(2)).exp()
            })
        };
        let mu = normalize_density(&bump(0.0));
        let nu = normalize_density(&bump(0.3));
        assert_eq!(wasserstein1_circle(&mu, &mu).unwrap(), 0.0);
        let w = wasserstein1_circle(&mu, &nu).unwrap();
        assert!((w - 0.3).abs() < 1e-3, "{w}");

        // Mass mismatch is refused.
        let doubled = mu.map(|v| 2.0 * v);
        assert!(matches!(
            wasserstein1_circle(&mu, &doubled),
            Err(Error::MassMismatch { .. })
        ));
    }

    #[test]
    fn holder_seminorm_stability() {
        assert_eq!(holder_seminorm(&GridField::sample(64, |_| 2.0), 0.1), 0.0);
        let a = holder_seminorm(&GridField::sample(256, |x| x.cos()), 0.1);
        let b = holder_seminorm(&GridField::sample(512, |x| x.cos()), 0.1);
        assert!(a > 0.0);
        assert!((a - b).abs() / b < 0.02, "{a} vs {b}");
    }

    #[test]
    fn energy_and_conservation_on_short_run() {
        let traj = two_mode_run(1.0, 0.3, 1.0);
        assert!(check_energy_identity(&traj).passed());
        assert!(check_conservation_big_f(&traj).passed());
        for q in MonotoneQuantity::ALL {
            let rep = check_monotone(&traj, q, Some(1e-9));
            assert!(rep.passed(), "{}: worst {}", rep.name, rep.worst);
        }
    }

    #[test]
    fn dissipative_inequalities_hold() {
        let traj = two_mode_run(1.0, 0.3, 1.0);
        for phi in [PhiGauge::Energy, PhiGauge::Entropy, PhiGauge::ClippedSquare] {
            let rep = check_dissipative_inequality(&traj, phi);
            assert!(rep.passed(), "{}: worst {:e}", rep.name, rep.worst);
        }
    }

    #[test]
    fn explicit_bounds_hold_for_constant_data() {
        let cfg = RunConfig {
            initial: InitialData::Preset(Preset::Constant { value: 1.0 }),
            capacity: 0,
            t_end: 1.0,
            record_dt: 0.1,
            ..RunConfig::default()
        };
        let traj = simulate(&cfg).unwrap();
        for rep in check_explicit_bounds(&traj, &Constants::default()) {
            assert!(rep.passed(), "{}: {}", rep.name, rep.worst);
        }
    }

    #[test]
    fn linear_fit_recovers_slope() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        assert!((linear_fit_slope(&pts) + 2.0).abs() < 1e-12);
    }
}
