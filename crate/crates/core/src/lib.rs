//! Spectral simulator and invariant-verification suite for the tangential
//! Peskin equation on the torus,
//!
//! ```text
//! df/dt = Hf * df/dx - f * (-Delta)^{1/2} f,        x in [-pi, pi),
//! ```
//!
//! the scalar drift-diffusion law governing how an infinite straight elastic
//! string immersed in a planar Stokes flow stretches tangentially. `f` is
//! the local stretch factor, `F = 1/f` the density of material labels, `H`
//! the Hilbert transform on the torus.
//!
//! For band-limited data the equation closes into a finite ODE system for
//! the Fourier coefficients, with no upward cascade; the solver integrates
//! that system exactly in space and verifies the flow's conservation law,
//! energy balance, maximum principles, entropy and dissipation inequalities,
//! explicit positivity bounds, analyticity growth and transport continuity
//! against the trajectory. A Lagrangian module reconstructs the underlying
//! string configuration and its flow map.

pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod io;
pub mod lagrangian;
pub mod norms;
pub mod ops;
pub mod pv;

pub use diagnostics::{CheckReport, CheckStatus, Constants, DiagContext, DiagRecord};
pub use dynamics::{
    simulate, InitialData, Preset, RunConfig, SimState, Termination, Trajectory,
};
pub use error::{Error, Result};
pub use field::{GridField, SpectralField};
