//! The closed mode-ODE system for band-limited solutions of
//! `df/dt = Hf * df/dx - f * (-Delta)^{1/2} f`, its time integration, and
//! the initialization pipeline.
//!
//! For a band-limited field the equation reduces exactly to the finite
//! system (`fbar = c_0`, `m = 0..=K`):
//!
//! ```text
//! dc_m/dt = -m * fbar * c_m - sum_{j>=1} 2*(m + 2j) * c_{m+j} * conj(c_j)
//! ```
//!
//! The nonlinearity cascades strictly downward, so modes above the initial
//! band limit are never excited; the integrator re-zeroes them after every
//! stage to turn that statement into a machine invariant. There is no
//! spatial discretization error at all; time stepping is the only error
//! source.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};
use crate::norms::random_field;
use crate::ops::{analyze, derivative, fejer, half_laplacian, hilbert, synthesize_grid};

/// Hard floor for the adaptive step.
pub const DT_FLOOR: f64 = 1e-12;
/// Allowed uphill drift of the mean per step before the step is rejected.
pub const MEAN_SLACK: f64 = 1e-10;
const MAX_RETRIES: u32 = 5;

/// Initial data: a named preset, an explicit coefficient list, or raw grid
/// samples that go through the clip + Fejer pipeline.
#[derive(Debug, Clone)]
pub enum InitialData {
    Preset(Preset),
    Coefficients(Vec<Complex64>),
    GridSamples(GridField),
}

/// Built-in smooth positive initial fields.
#[derive(Debug, Clone)]
pub enum Preset {
    /// `f = value`.
    Constant { value: f64 },
    /// `c_0 = mean`, `c_1 = amp` (real), i.e. `f = mean + 2*amp*cos x`.
    TwoMode { mean: f64, amp: f64 },
    /// `c_0 = mean`, `c_k = amp` (real): `f = mean + 2*amp*cos(kx)`.
    SingleMode { mode: usize, mean: f64, amp: f64 },
    /// Reproducible random positive field with the given band limit.
    Random { band_limit: usize, amp: f64, seed: u64 },
}

/// Everything needed to run one simulation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub initial: InitialData,
    /// Spectral capacity `K_cap`; coefficients are stored for `k = 0..=K_cap`.
    pub capacity: usize,
    /// Clip bound `M > 1`: grid initial data is clipped into `[1/M, M]`.
    pub clip_bound: f64,
    /// Fejer smoothing order for grid initial data; `0` disables smoothing.
    pub fejer_order: usize,
    pub cfl: f64,
    pub dt_max: f64,
    pub t_end: f64,
    /// Diagnostic record cadence.
    pub record_dt: f64,
    /// Times at which full coefficient snapshots are kept.
    pub snapshot_times: Vec<f64>,
    /// Named slack overrides used by the checks.
    pub tolerances: BTreeMap<String, f64>,
    /// Holder exponent for the time-integrability diagnostic, in (0, 1/5).
    pub alpha: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            initial: InitialData::Preset(Preset::Constant { value: 1.0 }),
            capacity: 64,
            clip_bound: 1e6,
            fejer_order: 0,
            cfl: 1.0,
            dt_max: 0.05,
            t_end: 1.0,
            record_dt: 0.01,
            snapshot_times: Vec::new(),
            tolerances: BTreeMap::new(),
            alpha: 0.1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0) {
            return Err(Error::Config("t_end must be positive".into()));
        }
        if !(self.cfl > 0.0 && self.cfl <= 2.0) {
            return Err(Error::Config(format!("cfl must be in (0, 2], got {}", self.cfl)));
        }
        if !(self.clip_bound > 1.0) {
            return Err(Error::Config("clip bound must exceed 1".into()));
        }
        if self.fejer_order > self.capacity + 1 {
            return Err(Error::Config(format!(
                "fejer order {} exceeds capacity + 1 = {}",
                self.fejer_order,
                self.capacity + 1
            )));
        }
        if !(self.record_dt > 0.0) {
            return Err(Error::Config("record_dt must be positive".into()));
        }
        if !(self.dt_max > 0.0) {
            return Err(Error::Config("dt_max must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 0.2) {
            return Err(Error::Config(format!(
                "holder exponent must lie in (0, 1/5), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Named tolerance with fallback.
    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// One time slice of the integration, plus the running dissipation
/// integrals used by the exact-identity monitors.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub field: SpectralField,
    pub step_count: u64,
    pub dt_last: f64,
    /// `integral_0^t integral f * Lambda f dx dtau`.
    pub diss_integral: f64,
    /// `integral_0^t integral (1/f) * Lambda f dx dtau`.
    pub entropy_flux_integral: f64,
    /// `integral_0^t integral psi(1/f) * Lambda f dx dtau` for the clipped
    /// convex gauge (see [`DissipationGauges`]).
    pub clip_flux_integral: f64,
    /// Grid extrema of the current field on the check grid.
    pub fmin: f64,
    pub fmax: f64,
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    PositivityFailure,
    StepUnderflow,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::PositivityFailure => "positivity_failure",
            Termination::StepUnderflow => "step_underflow",
        }
    }
}

/// Output of a run: diagnostic records, coefficient snapshots, the resolved
/// configuration and how the run terminated.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<crate::diagnostics::DiagRecord>,
    pub snapshots: Vec<(f64, SpectralField)>,
    pub config: RunConfig,
    pub termination: Termination,
}

/// Parameters of the clipped convex gauge from the range-containment
/// monitor: `a = 1/max f_0`, `b = 1/min f_0`.
#[derive(Debug, Clone, Copy)]
pub struct DissipationGauges {
    pub clip_lo: f64,
    pub clip_hi: f64,
    pub grid_size: usize,
}

impl DissipationGauges {
    pub fn new(initial: &SpectralField) -> Self {
        let m = check_grid_size(initial.capacity());
        let g = synthesize_grid(initial, m);
        Self {
            clip_lo: 1.0 / g.max(),
            clip_hi: 1.0 / g.min(),
            grid_size: m,
        }
    }
}

/// Grid used for positivity checks and diagnostic quadrature: fine enough
/// to hold quadratic products of the field without aliasing.
pub fn check_grid_size(capacity: usize) -> usize {
    (4 * capacity + 1).max(33)
}

/// Build the initial spectral field. Presets and coefficient lists are taken
/// verbatim; grid samples are clipped into `[1/clip, clip]`, analyzed to
/// capacity and Fejer-smoothed, which keeps them positive.
pub fn prepare_initial(cfg: &RunConfig) -> Result<SpectralField> {
    let f = match &cfg.initial {
        InitialData::Preset(p) => preset_field(p, cfg.capacity)?,
        InitialData::Coefficients(c) => {
            if c.len() > cfg.capacity + 1 {
                return Err(Error::Config(format!(
                    "coefficient list has {} entries but capacity is {}",
                    c.len(),
                    cfg.capacity
                )));
            }
            let mut full = c.clone();
            full.resize(cfg.capacity + 1, Complex64::new(0.0, 0.0));
            SpectralField::from_coeffs(full)?
        }
        InitialData::GridSamples(g) => {
            let lo = 1.0 / cfg.clip_bound;
            let hi = cfg.clip_bound;
            let clipped = g.map(|v| v.clamp(lo, hi));
            let analyzed = analyze(&clipped, cfg.capacity)?;
            if cfg.fejer_order >= 1 {
                fejer(&analyzed, cfg.fejer_order)
            } else {
                analyzed
            }
        }
    };
    let probe = synthesize_grid(&f, check_grid_size(cfg.capacity).max(512));
    if !probe.is_positive() {
        return Err(Error::PositivityLoss {
            t: 0.0,
            min: probe.min(),
        });
    }
    Ok(f)
}

fn preset_field(p: &Preset, capacity: usize) -> Result<SpectralField> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); capacity + 1];
    match *p {
        Preset::Constant { value } => {
            coeffs[0] = Complex64::new(value, 0.0);
        }
        Preset::TwoMode { mean, amp } => {
            if capacity < 1 {
                return Err(Error::Config("two_mode needs capacity >= 1".into()));
            }
            coeffs[0] = Complex64::new(mean, 0.0);
            coeffs[1] = Complex64::new(amp, 0.0);
        }
        Preset::SingleMode { mode, mean, amp } => {
            if capacity < mode || mode == 0 {
                return Err(Error::Config(format!(
                    "single_mode needs 1 <= mode <= capacity, got mode {mode}"
                )));
            }
            coeffs[0] = Complex64::new(mean, 0.0);
            coeffs[mode] = Complex64::new(amp, 0.0);
        }
        Preset::Random { band_limit, amp, seed } => {
            if capacity < band_limit {
                return Err(Error::Config("random band limit exceeds capacity".into()));
            }
            return Ok(random_field(band_limit, capacity, amp, seed));
        }
    }
    SpectralField::from_coeffs(coeffs)
}

/// Right-hand side of the mode system. The output band limit never exceeds
/// the input band limit.
pub fn galerkin_rhs(f: &SpectralField) -> SpectralField {
    let kb = f.band_limit();
    let fbar = f.mean();
    let c = f.coeffs();
    let mut out = vec![Complex64::new(0.0, 0.0); f.capacity() + 1];
    for (m, slot) in out.iter_mut().enumerate().take(kb + 1) {
        let mut acc = -(m as f64) * fbar * c[m];
        for j in 1..=(kb - m) {
            acc -= 2.0 * (m + 2 * j) as f64 * c[m + j] * c[j].conj();
        }
        *slot = acc;
    }
    out[0].im = 0.0;
    let mut rhs = SpectralField::from_coeffs(out).expect("rhs coefficients are finite");
    rhs.set_band_limit(kb);
    rhs
}

/// Pointwise grid evaluation of `Hf * f' - f * Lambda f` for cross-checking
/// the mode system; needs `M >= 4K + 1` so the quadratic products are
/// alias-free.
pub fn rhs_grid_oracle(f: &SpectralField, m: usize) -> Result<GridField> {
    let k = f.band_limit();
    if m < 4 * k + 1 {
        return Err(Error::GridTooCoarse {
            band_limit: k,
            needed: 4 * k + 1,
            got: m,
        });
    }
    let fg = synthesize_grid(f, m);
    let hg = synthesize_grid(&hilbert(f), m);
    let dg = synthesize_grid(&derivative(f), m);
    let lg = synthesize_grid(&half_laplacian(f), m);
    let vals = (0..m)
        .map(|i| hg.samples()[i] * dg.samples()[i] - fg.samples()[i] * lg.samples()[i])
        .collect();
    GridField::new(vals)
}

/// CFL-style step cap: `dt = min(dt_max, cfl / (K_cap * f_max + guard))`.
/// The stiffest linear rate in the system is about `K_cap * f_max`, and the
/// real-axis stability interval of the classical four-stage scheme is ~2.78.
pub fn adaptive_dt(s: &SimState, cfl: f64, dt_max: f64) -> f64 {
    let guard = 1e-12;
    dt_max.min(cfl / (s.field.capacity() as f64 * s.fmax + guard))
}

fn axpy(a: &SpectralField, scale: f64, b: &SpectralField) -> SpectralField {
    let coeffs: Vec<Complex64> = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| x + scale * y)
        .collect();
    let mut f = SpectralField::from_coeffs(coeffs).expect("finite combination");
    f.set_band_limit(a.band_limit().max(b.band_limit()));
    f
}

/// Zero every coefficient above the band limit. Those modes are analytically
/// zero along the flow; re-zeroing suppresses any rounding drift.
fn enforce_band(f: &mut SpectralField, band: usize) {
    for c in f.coeffs_mut().iter_mut().skip(band + 1) {
        *c = Complex64::new(0.0, 0.0);
    }
    f.coeffs_mut()[0].im = 0.0;
    f.set_band_limit(band);
}

/// One classical four-stage step of the mode system. Fails if the advanced
/// field loses positivity on the check grid or its mean moves up beyond
/// slack; the true solution does neither, so either signals a step size
/// beyond the stability margin.
pub fn step_rk4(s: &SimState, dt: f64) -> Result<SimState> {
    assert!(dt > 0.0, "step size must be positive");
    let band = s.field.band_limit();
    let y = &s.field;

    let mut k1 = galerkin_rhs(y);
    enforce_band(&mut k1, band);
    let mut y2 = axpy(y, dt / 2.0, &k1);
    enforce_band(&mut y2, band);
    let mut k2 = galerkin_rhs(&y2);
    enforce_band(&mut k2, band);
    let mut y3 = axpy(y, dt / 2.0, &k2);
    enforce_band(&mut y3, band);
    let mut k3 = galerkin_rhs(&y3);
    enforce_band(&mut k3, band);
    let mut y4 = axpy(y, dt, &k3);
    enforce_band(&mut y4, band);
    let mut k4 = galerkin_rhs(&y4);
    enforce_band(&mut k4, band);

    let coeffs: Vec<Complex64> = y
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c + dt / 6.0
                * (k1.coeffs()[i] + 2.0 * k2.coeffs()[i] + 2.0 * k3.coeffs()[i] + k4.coeffs()[i])
        })
        .collect();
    let mut field = SpectralField::from_coeffs(coeffs)?;
    enforce_band(&mut field, band);

    let probe = synthesize_grid(&field, check_grid_size(field.capacity()));
    let (fmin, fmax) = (probe.min(), probe.max());
    if fmin <= 0.0 {
        return Err(Error::PositivityLoss {
            t: s.t + dt,
            min: fmin,
        });
    }
    if field.mean() > s.field.mean() + MEAN_SLACK {
        return Err(Error::PositivityLoss {
            t: s.t + dt,
            min: fmin,
        });
    }

    Ok(SimState {
        t: s.t + dt,
        field,
        step_count: s.step_count + 1,
        dt_last: dt,
        diss_integral: s.diss_integral,
        entropy_flux_integral: s.entropy_flux_integral,
        clip_flux_integral: s.clip_flux_integral,
        fmin,
        fmax,
    })
}

/// Instantaneous dissipation-type integrands on the check grid:
/// `(integral f*Lf, integral F*Lf, integral psi(F)*Lf)` with `F = 1/f` and
/// `psi` the clipped convex gauge.
pub fn dissipation_rates(f: &SpectralField, gauges: &DissipationGauges) -> [f64; 3] {
    let m = gauges.grid_size;
    let fg = synthesize_grid(f, m);
    let lg = synthesize_grid(&half_laplacian(f), m);
    let h = fg.spacing();
    let (mut e, mut ent, mut clip) = (0.0, 0.0, 0.0);
    for (&fv, &lv) in fg.samples().iter().zip(lg.samples()) {
        let fv_safe = fv.max(1e-300);
        let big_f = 1.0 / fv_safe;
        e += fv * lv;
        ent += big_f * lv;
        let psi = if big_f < gauges.clip_lo {
            gauges.clip_lo * gauges.clip_lo - big_f * big_f
        } else if big_f > gauges.clip_hi {
            gauges.clip_hi * gauges.clip_hi - big_f * big_f
        } else {
            0.0
        };
        clip += psi * lv;
    }
    [e * h, ent * h, clip * h]
}

/// Cubic-Hermite midpoint of a step, fourth-order accurate, used to carry
/// the dissipation integrals with Simpson weights at the same order as the
/// integrator itself.
fn hermite_midpoint(
    y0: &SpectralField,
    rhs0: &SpectralField,
    y1: &SpectralField,
    rhs1: &SpectralField,
    dt: f64,
) -> SpectralField {
    let coeffs: Vec<Complex64> = y0
        .coeffs()
        .iter()
        .zip(y1.coeffs())
        .zip(rhs0.coeffs().iter().zip(rhs1.coeffs()))
        .map(|((a, b), (ra, rb))| 0.5 * (a + b) + dt / 8.0 * (ra - rb))
        .collect();
    let mut f = SpectralField::from_coeffs(coeffs).expect("finite midpoint");
    f.set_band_limit(y0.band_limit());
    f
}

struct StopPlan {
    times: Vec<(f64, bool, bool)>, // (t, record?, snapshot?)
}

fn build_stops(cfg: &RunConfig) -> StopPlan {
    let mut times: Vec<(f64, bool, bool)> = Vec::new();
    let n_rec = (cfg.t_end / cfg.record_dt + 1e-9).floor() as u64;
    for k in 1..=n_rec {
        // Clamp the last cadence point onto t_end if rounding pushed it past.
        times.push(((k as f64 * cfg.record_dt).min(cfg.t_end), true, false));
    }
    if times.last().map(|s| s.0 < cfg.t_end - 1e-12).unwrap_or(true) {
        times.push((cfg.t_end, false, false));
    }
    let mut snaps: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t <= cfg.t_end + 1e-12)
        .collect();
    snaps.sort_by(f64::total_cmp);
    for t in snaps {
        match times.binary_search_by(|probe| probe.0.total_cmp(&t)) {
            Ok(i) => times[i].2 = true,
            Err(i) => {
                // Merge with an existing stop if they are essentially equal.
                if i < times.len() && (times[i].0 - t).abs() < 1e-12 {
                    times[i].2 = true;
                } else if i > 0 && (times[i - 1].0 - t).abs() < 1e-12 {
                    times[i - 1].2 = true;
                } else {
                    times.insert(i, (t, false, true));
                }
            }
        }
    }
    StopPlan { times }
}

/// Integrate the configured initial data to `t_end`, emitting diagnostic
/// records at the configured cadence and snapshots at the requested times.
/// Numerical failures terminate the run early; the partial trajectory is
/// returned with the corresponding termination tag.
pub fn simulate(cfg: &RunConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let f0 = prepare_initial(cfg)?;
    let gauges = DissipationGauges::new(&f0);
    let ctx = crate::diagnostics::DiagContext::new(&f0, cfg);

    let probe = synthesize_grid(&f0, check_grid_size(f0.capacity()));
    let mut state = SimState {
        t: 0.0,
        field: f0,
        step_count: 0,
        dt_last: 0.0,
        diss_integral: 0.0,
        entropy_flux_integral: 0.0,
        clip_flux_integral: 0.0,
        fmin: probe.min(),
        fmax: probe.max(),
    };

    let mut records = vec![crate::diagnostics::record(&state, &ctx)];
    let mut snapshots = Vec::new();
    if cfg
        .snapshot_times
        .iter()
        .any(|&t| t.abs() < 1e-12)
    {
        snapshots.push((0.0, state.field.clone()));
    }

    let mut rates = dissipation_rates(&state.field, &gauges);
    let mut rhs = galerkin_rhs(&state.field);
    let mut termination = Termination::Completed;

    let stops = build_stops(cfg);
    'march: for &(stop_t, is_record, is_snapshot) in &stops.times {
        while state.t < stop_t {
            let remaining = stop_t - state.t;
            let mut dt = adaptive_dt(&state, cfg.cfl, cfg.dt_max).min(remaining);
            if dt < DT_FLOOR {
                termination = Termination::StepUnderflow;
                break 'march;
            }
            let mut next = None;
            for _ in 0..=MAX_RETRIES {
                match step_rk4(&state, dt) {
                    Ok(s) => {
                        next = Some(s);
                        break;
                    }
                    Err(_) => {
                        dt /= 2.0;
                        if dt < DT_FLOOR {
                            break;
                        }
                    }
                }
            }
            let Some(mut new_state) = next else {
                termination = Termination::PositivityFailure;
                break 'march;
            };

            // Simpson accumulation of the dissipation integrals with a
            // Hermite midpoint; fourth order, matching the integrator.
            let rhs_new = galerkin_rhs(&new_state.field);
            let mid = hermite_midpoint(&state.field, &rhs, &new_state.field, &rhs_new, dt);
            let rates_mid = dissipation_rates(&mid, &gauges);
            let rates_new = dissipation_rates(&new_state.field, &gauges);
            new_state.diss_integral =
                state.diss_integral + dt / 6.0 * (rates[0] + 4.0 * rates_mid[0] + rates_new[0]);
            new_state.entropy_flux_integral = state.entropy_flux_integral
                + dt / 6.0 * (rates[1] + 4.0 * rates_mid[1] + rates_new[1]);
            new_state.clip_flux_integral =
                state.clip_flux_integral + dt / 6.0 * (rates[2] + 4.0 * rates_mid[2] + rates_new[2]);

            if new_state.t >= stop_t - 1e-12 {
                new_state.t = stop_t;
            }
            state = new_state;
            rates = rates_new;
            rhs = rhs_new;
        }
        if is_record {
            records.push(crate::diagnostics::record(&state, &ctx));
        }
        if is_snapshot {
            snapshots.push((state.t, state.field.clone()));
        }
    }

    Ok(Trajectory {
        records,
        snapshots,
        config: cfg.clone(),
        termination,
    })
}
