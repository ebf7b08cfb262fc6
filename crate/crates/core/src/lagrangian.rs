//! Lagrangian view of the flow: string configurations `X(s, t)`, the
//! particle flow map, and the consistency checks tying them back to the
//! Eulerian stretch field.
//!
//! # Time units and the factor 4
//!
//! In the string's natural time the marker at `x` moves with velocity
//! `-(1/4) H f~(x, t)`, where `f~` solves `df/dt = (1/4)(Hf df/dx - f Lf)`.
//! The solver integrates the unit-coefficient equation instead, i.e. it uses
//! the rescaled time `t = (natural time)/4`, under which `f~(x, t) =
//! f(x, t/4)`. Chain rule: `dPsi/d(natural t) = (1/4) dPsi/dt`, so
//!
//! ```text
//! dPsi/dt = 4 * (-(1/4) H f~(Psi, natural t)) = -H f(Psi, t).
//! ```
//!
//! The two factors of four cancel exactly: **in solver time the marker
//! velocity is `-Hf`, not `-(1/4) Hf`**. All functions here use solver time.
//!
//! With that velocity, `j(x, t) = dPsi_t(x)/dx` and `f(Psi_t(x), t)` satisfy
//! the same linear ODE along a path, so `f(Psi_t(x), t) = f_0(x) j(x, t)`;
//! parameterizing by labels `s` with `X_0'(s) = f_0(X_0(s))` turns this into
//! the stretch identity `f(X(s,t), t) = X'(s, t)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::diagnostics::{lower_bound_explicit, CheckReport, CheckStatus};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};
use crate::ops::{analyze, eval, hilbert, synthesize_grid};

/// A string configuration: labels `s` (one full label period, wrap point
/// included) and positions `X(s)`, both strictly increasing, with
/// `X(s + L) = X(s) + 2*pi` where `L` is the label period. Configurations
/// normalized as in the classical hypothesis have `L = 2*pi`; configurations
/// built from a general stretch field carry `L = ||1/f||_L1`.
#[derive(Debug, Clone)]
pub struct StringConfig {
    s: Vec<f64>,
    x: Vec<f64>,
}

impl StringConfig {
    /// Build from parallel label/position arrays (wrap point included).
    pub fn new(s: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if s.len() != x.len() || s.len() < 3 {
            return Err(Error::Parse {
                context: "string configuration".into(),
                detail: "need equal-length label/position arrays with at least 3 points".into(),
            });
        }
        for (i, w) in s.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NotMonotone {
                    context: "string labels",
                    index: i + 1,
                });
            }
        }
        for (i, w) in x.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NotMonotone {
                    context: "string positions",
                    index: i + 1,
                });
            }
        }
        let span = x[x.len() - 1] - x[0];
        if (span - 2.0 * PI).abs() > 1e-8 {
            return Err(Error::Parse {
                context: "string configuration".into(),
                detail: format!("positions must span one spatial period, got {span}"),
            });
        }
        Ok(Self { s, x })
    }

    /// Sample `X(s) = shape(s)` at `n` uniform labels on `[-pi, pi]`,
    /// wrap point included. `shape` must satisfy `shape(s + 2pi) =
    /// shape(s) + 2pi` and be strictly increasing.
    pub fn from_shape(n: usize, shape: impl Fn(f64) -> f64) -> Result<Self> {
        let s: Vec<f64> = (0..=n).map(|i| -PI + 2.0 * PI * i as f64 / n as f64).collect();
        let x: Vec<f64> = s.iter().map(|&v| shape(v)).collect();
        Self::new(s, x)
    }

    pub fn labels(&self) -> &[f64] {
        &self.s
    }

    pub fn positions(&self) -> &[f64] {
        &self.x
    }

    /// Number of intervals (points minus the wrap duplicate).
    pub fn segments(&self) -> usize {
        self.s.len() - 1
    }

    /// Label period.
    pub fn period(&self) -> f64 {
        self.s[self.s.len() - 1] - self.s[0]
    }

    /// `||X||_{Hdot^1}` over one label period by centered finite
    /// differences: `(integral |X'(s)|^2 ds)^{1/2}`.
    pub fn h1_norm(&self) -> f64 {
        let n = self.segments();
        let period = self.period();
        let ds = period / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            // Periodic extension: X(s + L) = X(s) + 2 pi.
            let prev = if i == 0 { self.x[n - 1] - 2.0 * PI } else { self.x[i - 1] };
            let next = self.x[i + 1];
            let d = (next - prev) / (2.0 * ds);
            acc += d * d * ds;
        }
        acc.sqrt()
    }

    /// Maximum of `|X(s) - s - c|` over nodes, minimized over the shift `c`
    /// (distance to a pure translation).
    pub fn distance_to_translation(&self) -> f64 {
        let n = self.segments();
        let devs: Vec<f64> = (0..n).map(|i| self.x[i] - self.s[i]).collect();
        let lo = devs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = devs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / 2.0
    }
}

/// Recover the label density and stretch field of a classical configuration
/// (`L = 2*pi`): invert `X_0` by monotone piecewise-linear interpolation
/// onto the uniform grid, differentiate the inverse to get `F_0`, and return
/// `f_0 = 1/F_0`.
pub fn f0_from_configuration(x0: &StringConfig, m: usize) -> Result<GridField> {
    if (x0.period() - 2.0 * PI).abs() > 1e-8 {
        return Err(Error::HypothesisNotMet(format!(
            "label period must be 2*pi for a classical configuration, got {}",
            x0.period()
        )));
    }
    // G_0(x): piecewise-linear inverse of X_0 on the uniform grid.
    let g0: Vec<f64> = crate::field::grid_nodes(m)
        .map(|x| invert_monotone(&x0.x, &x0.s, 2.0 * PI, x0.period(), x))
        .collect();
    let h = 2.0 * PI / m as f64;
    let samples: Vec<f64> = (0..m)
        .map(|j| {
            let prev = if j == 0 { g0[m - 1] - x0.period() } else { g0[j - 1] };
            let next = if j + 1 == m { g0[0] + x0.period() } else { g0[j + 1] };
            let f0_density = (next - prev) / (2.0 * h);
            1.0 / f0_density
        })
        .collect();
    GridField::new(samples)
}

/// Invert a strictly increasing piecewise-linear map given by knots
/// `(xs, ys)` with pseudo-periodicity `x + px -> y + py`.
fn invert_monotone(xs: &[f64], ys: &[f64], px: f64, py: f64, x: f64) -> f64 {
    // Shift x into the covered window.
    let mut shift = 0.0;
    let mut xv = x;
    while xv < xs[0] {
        xv += px;
        shift -= py;
    }
    while xv > xs[xs.len() - 1] {
        xv -= px;
        shift += py;
    }
    let i = match xs.binary_search_by(|p| p.total_cmp(&xv)) {
        Ok(i) => return ys[i] + shift,
        Err(i) => i.clamp(1, xs.len() - 1),
    };
    let w = (xv - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + w * (ys[i] - ys[i - 1]) + shift
}

/// Natural labels of a stretch field: `s = G(x) = integral_(-pi)^x (1/f)`,
/// so that `X_0'(s) = f_0(X_0(s))` holds exactly. The label period is
/// `||1/f||_L1`. Positions are found by Newton iteration on `G`.
pub fn labels_for_field(f: &SpectralField, n: usize) -> Result<StringConfig> {
    let m = (4 * f.capacity() + 1).max(257);
    let fg = synthesize_grid(f, m);
    if !fg.is_positive() {
        return Err(Error::PositivityLoss { t: 0.0, min: fg.min() });
    }
    let big_f = fg.map(|v| 1.0 / v);
    // Spectral antiderivative of F - Fbar plus the linear part.
    let bigf_hat = analyze(&big_f, (m - 1) / 2)?;
    let fbar = bigf_hat.mean();
    let anti = bigf_hat.map_modes(|k| {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0 / k as f64) // 1/(ik)
        }
    });
    let g = |x: f64| fbar * (x + PI) + eval(&anti, x) - eval(&anti, -PI);
    let density = |x: f64| 1.0 / eval(f, x).max(1e-300);
    let period = g(PI);

    let mut s = Vec::with_capacity(n + 1);
    let mut x = Vec::with_capacity(n + 1);
    let mut xi = -PI;
    for i in 0..=n {
        let si = -period / 2.0 + period * i as f64 / n as f64;
        let target = si + period / 2.0; // G ranges over [0, period]
        // Newton with bisection fallback; G' = F > 0.
        let mut lo = -PI;
        let mut hi = PI;
        let mut xv = xi.clamp(lo, hi);
        for _ in 0..60 {
            let gv = g(xv) - target;
            if gv > 0.0 {
                hi = xv;
            } else {
                lo = xv;
            }
            let step = gv / density(xv);
            if step.abs() < 1e-15 * (1.0 + xv.abs()) {
                break;
            }
            let next = xv - step;
            xv = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if (hi - lo) < 1e-15 {
                break;
            }
        }
        if i == 0 {
            xv = -PI;
        }
        if i == n {
            xv = PI; // exact wrap point
        }
        s.push(si);
        x.push(xv);
        xi = xv;
    }
    StringConfig::new(s, x)
}

/// Lagrangian particle positions over time. Positions are kept unwrapped so
/// order preservation is meaningful.
#[derive(Debug, Clone)]
pub struct FlowMap {
    pub seeds: Vec<f64>,
    pub times: Vec<f64>,
    /// `positions[m][i]` = position of particle `i` at `times[m]`.
    pub positions: Vec<Vec<f64>>,
}

/// Advect particles by `dPsi/dt = -Hf(Psi, t)` (solver time; see the module
/// docs for why there is no factor 1/4), with classical four-stage steps
/// across each snapshot interval and linear-in-time interpolation of the
/// coefficients between snapshots. Requires at least two snapshots.
/// Positions are checked for order preservation at every output time.
pub fn advect_flow(traj: &Trajectory, seeds: &[f64]) -> Result<FlowMap> {
    advect_flow_substeps(traj, seeds, 1)
}

/// Same as [`advect_flow`] with `substeps` integration steps per snapshot
/// interval, for convergence studies.
pub fn advect_flow_substeps(traj: &Trajectory, seeds: &[f64], substeps: usize) -> Result<FlowMap> {
    if traj.snapshots.len() < 2 {
        return Err(Error::HypothesisNotMet(
            "flow advection needs at least two snapshots; set snapshot times".into(),
        ));
    }
    for (i, w) in seeds.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::NotMonotone {
                context: "flow seeds",
                index: i + 1,
            });
        }
    }
    let velocities: Vec<(f64, SpectralField)> = traj
        .snapshots
        .iter()
        .map(|(t, f)| (*t, hilbert(f)))
        .collect();

    let mut positions = vec![seeds.to_vec()];
    let mut times = vec![velocities[0].0];
    let mut cur = seeds.to_vec();

    for w in velocities.windows(2) {
        let (t0, hf0) = &w[0];
        let (t1, hf1) = &w[1];
        let dt = (t1 - t0) / substeps as f64;
        for step in 0..substeps {
            let ta = t0 + step as f64 * dt;
            // Velocity field at intermediate times by linear interpolation
            // of Fourier coefficients.
            let vel = |x: f64, tau: f64| -> f64 {
                let w1 = ((tau - t0) / (t1 - t0)).clamp(0.0, 1.0);
                -((1.0 - w1) * eval(hf0, x) + w1 * eval(hf1, x))
            };
            for p in cur.iter_mut() {
                let x = *p;
                let k1 = vel(x, ta);
                let k2 = vel(x + 0.5 * dt * k1, ta + 0.5 * dt);
                let k3 = vel(x + 0.5 * dt * k2, ta + 0.5 * dt);
                let k4 = vel(x + dt * k3, ta + dt);
                *p = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        for (i, win) in cur.windows(2).enumerate() {
            if win[1] <= win[0] {
                return Err(Error::NotMonotone {
                    context: "flow positions (step size too large)",
                    index: i + 1,
                });
            }
        }
        times.push(*t1);
        positions.push(cur.clone());
    }
    Ok(FlowMap {
        seeds: seeds.to_vec(),
        times,
        positions,
    })
}

/// Compose the flow with an initial configuration:
/// `X(s_i, t) = Psi_t(X_0(s_i))`, requiring the flow to have been seeded at
/// the configuration's positions (the flow starts from the identity).
pub fn reconstruct_string(flow: &FlowMap, x0: &StringConfig) -> Result<Vec<(f64, StringConfig)>> {
    let n = x0.segments();
    if flow.seeds.len() != n + 1 {
        return Err(Error::SeedMismatch { index: 0 });
    }
    for (i, (a, b)) in flow.seeds.iter().zip(x0.positions()).enumerate() {
        if (a - b).abs() > 1e-9 {
            return Err(Error::SeedMismatch { index: i });
        }
    }
    flow.times
        .iter()
        .zip(&flow.positions)
        .map(|(&t, pos)| Ok((t, StringConfig::new(x0.labels().to_vec(), pos.clone())?)))
        .collect()
}

/// Stretch-identity check: `(X(s_{i+1}) - X(s_i)) / ds` against the field
/// evaluated at the segment midpoint image, at every reconstructed time.
pub fn check_stretch_consistency(
    strings: &[(f64, StringConfig)],
    traj: &Trajectory,
    tol: f64,
) -> CheckReport {
    let mut worst = 0.0_f64;
    let mut t_worst = 0.0;
    for (t, cfg) in strings {
        let Some(field) = snapshot_at(traj, *t) else {
            continue;
        };
        let n = cfg.segments();
        let ds = cfg.period() / n as f64;
        for i in 0..n {
            let stretch = (cfg.positions()[i + 1] - cfg.positions()[i]) / ds;
            let mid = 0.5 * (cfg.positions()[i + 1] + cfg.positions()[i]);
            let f_mid = eval(field, mid);
            let rel = (stretch - f_mid).abs() / f_mid.abs().max(1e-30);
            if rel > worst {
                worst = rel;
                t_worst = *t;
            }
        }
    }
    CheckReport {
        name: "stretch_identity".into(),
        status: if worst <= tol {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        worst,
        t_worst,
        tolerance: tol,
        note: String::new(),
    }
}

/// Pushforward check: for test functions `phi`, the quadrature
/// `sum phi(Psi_t(x_i)) F_0(x_i) dx` must reproduce
/// `integral phi F(.,t) dx` within `tol * ||F_0||_L1`.
pub fn check_pushforward(flow: &FlowMap, traj: &Trajectory, tol: f64) -> CheckReport {
    check_pushforward_with(flow, traj, tol, None)
}

/// Variant taking explicit initial-density samples at the seeds (used by the
/// convergence study built on a reconstructed configuration).
pub fn check_pushforward_with(
    flow: &FlowMap,
    traj: &Trajectory,
    tol: f64,
    big_f0_at_seeds: Option<&[f64]>,
) -> CheckReport {
    let phis: [(&str, fn(f64) -> f64); 4] = [
        ("1", |_| 1.0),
        ("cos", f64::cos),
        ("sin", f64::sin),
        ("cos2", |x| (2.0 * x).cos()),
    ];
    let f0 = &traj.snapshots[0].1;
    // Seeds are assumed uniform over one spatial period (wrap duplicate
    // allowed); weight each interior seed by the uniform spacing.
    let n = flow.seeds.len();
    let wrap = (flow.seeds[n - 1] - flow.seeds[0] - 2.0 * PI).abs() < 1e-9;
    let count = if wrap { n - 1 } else { n };
    let dx = 2.0 * PI / count as f64;
    let own_f0: Vec<f64>;
    let big_f0: &[f64] = match big_f0_at_seeds {
        Some(v) => v,
        None => {
            own_f0 = flow.seeds[..count]
                .iter()
                .map(|&x| 1.0 / eval(f0, x))
                .collect();
            &own_f0
        }
    };
    let mass: f64 = big_f0.iter().take(count).map(|v| v * dx).sum();

    let m_quad = (4 * f0.capacity() + 1).max(257);
    let mut worst = 0.0_f64;
    let mut t_worst = 0.0;
    let mut note = String::new();
    for (mi, &t) in flow.times.iter().enumerate() {
        let Some(field) = snapshot_at(traj, t) else {
            continue;
        };
        let fg = synthesize_grid(field, m_quad);
        let h = fg.spacing();
        for (name, phi) in phis {
            let lhs: f64 = (0..m_quad)
                .map(|j| phi(fg.node(j)) / fg.samples()[j] * h)
                .sum();
            let rhs: f64 = (0..count)
                .map(|i| phi(flow.positions[mi][i]) * big_f0[i] * dx)
                .sum();
            let rel = (lhs - rhs).abs() / mass;
            if rel > worst {
                worst = rel;
                t_worst = t;
                note = format!("worst test function: {name}");
            }
        }
    }
    CheckReport {
        name: "pushforward".into(),
        status: if worst <= tol {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        worst,
        t_worst,
        tolerance: tol,
        note,
    }
}

/// The well-stretched constant at time `t` is `lambda(t) = min f(., t)`;
/// it must clear the explicit coth lower bound.
pub fn well_stretched_constant(traj: &Trajectory, t: f64) -> Option<(f64, f64)> {
    let r = traj
        .records
        .iter()
        .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))?;
    let bound = lower_bound_explicit(traj.records[0].l1_big_f, r.t);
    Some((r.fmin, bound))
}

fn snapshot_at(traj: &Trajectory, t: f64) -> Option<&SpectralField> {
    traj.snapshots
        .iter()
        .find(|(st, _)| (st - t).abs() < 1e-9)
        .map(|(_, f)| f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate, InitialData, Preset, RunConfig};
    use crate::norms::integral;

    #[test]
    fn identity_configuration_gives_unit_field() {
        let x0 = StringConfig::from_shape(128, |s| s).unwrap();
        let f0 = f0_from_configuration(&x0, 64).unwrap();
        for &v in f0.samples() {
            assert!((v - 1.0).abs() < 1e-10);
        }
        assert!((integral(&f0.map(|v| 1.0 / v)) - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn sinusoidal_configuration_matches_chain_rule() {
        // X0(s) = s + 0.3 sin s: f0(X0(s)) = X0'(s) = 1 + 0.3 cos s.
        let x0 = StringConfig::from_shape(2048, |s| s + 0.3 * s.sin()).unwrap();
        let f0 = f0_from_configuration(&x0, 512).unwrap();
        // Spot value at x = X0(0) = 0: f0 = 1.3.
        let j = 256; // node at x = 0
        assert!((f0.node(j)).abs() < 1e-12);
        assert!((f0.samples()[j] - 1.3).abs() < 1e-4, "{}", f0.samples()[j]);
        // The label mass over one period is forced by the hypothesis.
        assert!((integral(&f0.map(|v| 1.0 / v)) - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn rejects_non_monotone_configuration() {
        assert!(StringConfig::from_shape(64, |s| s + 1.2 * s.sin()).is_err());
    }

    #[test]
    fn natural_labels_satisfy_stretch_relation() {
        let cfg = RunConfig {
            initial: InitialData::Preset(Preset::TwoMode { mean: 1.0, amp: 0.3 }),
            ..RunConfig::default()
        };
        let f = crate::dynamics::prepare_initial(&cfg).unwrap();
        let labels = labels_for_field(&f, 512).unwrap();
        // Period equals ||F||_L1 = 2 pi / 0.8.
        assert!((labels.period() - 2.0 * PI / 0.8).abs() < 1e-8);
        // X0'(s) = f(X0(s)) by construction.
        let s = labels.labels();
        let x = labels.positions();
        let ds = labels.period() / labels.segments() as f64;
        for i in 0..labels.segments() {
            let stretch = (x[i + 1] - x[i]) / ds;
            let mid = 0.5 * (x[i] + x[i + 1]);
            let want = eval(&f, mid);
            assert!(
                (stretch - want).abs() / want < 1e-4,
                "segment {i}: {stretch} vs {want}"
            );
        }
        let _ = s;
    }

    fn flow_run(t_end: f64, snap_dt: f64) -> Trajectory {
        let snaps: Vec<f64> = (0..=((t_end / snap_dt).round() as usize))
            .map(|i| i as f64 * snap_dt)
            .collect();
        let cfg = RunConfig {
            initial: InitialData::Preset(Preset::TwoMode { mean: 1.0, amp: 0.3 }),
            t_end,
            cfl: 0.5,
            record_dt: snap_dt.max(0.01),
            snapshot_times: snaps,
            ..RunConfig::default()
        };
        simulate(&cfg).unwrap()
    }

    #[test]
    fn constant_field_flow_is_identity() {
        let cfg = RunConfig {
            initial: InitialData::Preset(Preset::Constant { value: 1.0 }),
            capacity: 0,
            t_end: 0.5,
            record_dt: 0.1,
            snapshot_times: vec![0.0, 0.25, 0.5],
            ..RunConfig::default()
        };
        let traj = simulate(&cfg).unwrap();
        let seeds: Vec<f64> = (0..16).map(|i| -PI + 2.0 * PI * i as f64 / 16.0).collect();
        let flow = advect_flow(&traj, &seeds).unwrap();
        for pos in &flow.positions {
            for (p, s) in pos.iter().zip(&seeds) {
                assert!((p - s).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn initial_velocity_of_two_mode_flow() {
        // Hf = 0.6 sin x for f = 1 + 0.6 cos x, so the particle at x = 0
        // stands still initially and the one at pi/2 moves at -0.6.
        let traj = flow_run(0.01, 0.001);
        let seeds = vec![-PI, -PI / 2.0, 0.0, PI / 2.0];
        let flow = advect_flow(&traj, &seeds).unwrap();
        let dt = flow.times[1] - flow.times[0];
        let v_at = |i: usize| (flow.positions[1][i] - flow.positions[0][i]) / dt;
        assert!(v_at(2).abs() < 1e-4, "{}", v_at(2));
        assert!((v_at(3) + 0.6).abs() < 2e-3, "{}", v_at(3));
    }

    #[test]
    fn flow_preserves_order_and_periodicity() {
        let traj = flow_run(0.5, 0.01);
        let mut seeds: Vec<f64> = (0..256).map(|i| -PI + 2.0 * PI * i as f64 / 256.0).collect();
        seeds.push(seeds[0] + 2.0 * PI); // wrapped duplicate of the first
        let flow = advect_flow(&traj, &seeds).unwrap();
        for pos in &flow.positions {
            assert!(pos.windows(2).all(|w| w[1] > w[0]));
            let gap = pos[pos.len() - 1] - pos[0];
            assert!((gap - 2.0 * PI).abs() < 1e-10, "{gap}");
        }
    }

    #[test]
    fn flow_composition_is_consistent() {
        // Advecting 0 -> t1 -> t2 equals advecting 0 -> t2 directly.
        let traj = flow_run(0.2, 0.002);
        let seeds: Vec<f64> = (0..64).map(|i| -PI + 2.0 * PI * i as f64 / 64.0).collect();
        let one = advect_flow(&traj, &seeds).unwrap();
        let first_leg = one.positions[one.positions.len() / 2].clone();
        // Restart from the midpoint snapshot.
        let mid_idx = one.positions.len() / 2;
        let tail = Trajectory {
            records: traj.records.clone(),
            snapshots: traj.snapshots[mid_idx..].to_vec(),
            config: traj.config.clone(),
            termination: traj.termination,
        };
        let two = advect_flow(&tail, &first_leg).unwrap();
        let direct = one.positions.last().unwrap();
        let composed = two.positions.last().unwrap();
        for (a, b) in direct.iter().zip(composed) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn reconstruct_requires_matching_seeds() {
        let traj = flow_run(0.05, 0.005);
        let x0 = StringConfig::from_shape(32, |s| s).unwrap();
        let wrong: Vec<f64> = (0..33).map(|i| -PI + 0.1 + i as f64 * 0.19).collect();
        let flow = advect_flow(&traj, &wrong).unwrap();
        assert!(matches!(
            reconstruct_string(&flow, &x0),
            Err(Error::SeedMismatch { .. })
        ));
    }
}
