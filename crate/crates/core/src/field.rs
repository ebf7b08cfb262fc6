//! Field representations on the torus `T = [-pi, pi)`.
//!
//! A real periodic function is stored either as Fourier coefficients for
//! non-negative modes (`SpectralField`, with the Hermitian extension
//! `c_{-k} = conj(c_k)` implied) or as uniform real-space samples
//! (`GridField`). The coefficient convention is
//! `c_k = (1/2pi) * integral of f(x) exp(-ikx) dx`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Band-limited real periodic function stored as Fourier coefficients
/// for `k = 0..=capacity`.
///
/// Invariants: `c_0` is real, and `c_k = 0` for every `k > band_limit`.
/// No operator in this crate raises the band limit.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    coeffs: Vec<Complex64>,
    band_limit: usize,
}

impl SpectralField {
    /// Zero field with the given capacity.
    pub fn zeros(capacity: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); capacity + 1],
            band_limit: 0,
        }
    }

    /// Constant field `f(x) = value` with the given capacity.
    pub fn constant(value: f64, capacity: usize) -> Self {
        let mut f = Self::zeros(capacity);
        f.coeffs[0] = Complex64::new(value, 0.0);
        f
    }

    /// Build from coefficients `c_k`, `k = 0..=K_cap`. The band limit is the
    /// highest nonzero mode. `c_0` must be real and everything finite.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse {
                context: "spectral field".into(),
                detail: "empty coefficient list".into(),
            });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "spectral coefficients",
            });
        }
        let scale = coeffs[0].re.abs().max(1.0);
        if coeffs[0].im.abs() > 1e-12 * scale {
            return Err(Error::Parse {
                context: "spectral field".into(),
                detail: format!("c_0 must be real, got imaginary part {:e}", coeffs[0].im),
            });
        }
        let mut coeffs = coeffs;
        coeffs[0].im = 0.0;
        let band_limit = coeffs
            .iter()
            .rposition(|c| c.norm_sqr() > 0.0)
            .unwrap_or(0);
        Ok(Self { coeffs, band_limit })
    }

    /// Coefficient of mode `k >= 0`; zero beyond capacity.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// All stored coefficients, `k = 0..=capacity`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Highest representable mode.
    pub fn capacity(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest mode allowed to be nonzero.
    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    /// Mean value `f_bar = c_0`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Apply a real multiplier `m(k)` to every mode. Multipliers never raise
    /// the band limit, so it is preserved.
    pub(crate) fn map_modes(&self, m: impl Fn(usize) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * m(k))
            .collect();
        Self {
            coeffs,
            band_limit: self.band_limit,
        }
    }

    /// Declare a (lower) band limit, zeroing everything above it.
    pub(crate) fn truncated(mut self, band_limit: usize) -> Self {
        let band_limit = band_limit.min(self.capacity());
        for c in self.coeffs.iter_mut().skip(band_limit + 1) {
            *c = Complex64::new(0.0, 0.0);
        }
        self.band_limit = band_limit;
        self
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub(crate) fn set_band_limit(&mut self, band_limit: usize) {
        self.band_limit = band_limit.min(self.capacity());
    }
}

/// Uniform real-space samples at `x_j = -pi + 2*pi*j/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    samples: Vec<f64>,
}

impl GridField {
    /// Wrap existing samples. Requires `M >= 2` and finite values.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Parse {
                context: "grid field".into(),
                detail: format!("need at least 2 samples, got {}", samples.len()),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "grid samples",
            });
        }
        Ok(Self { samples })
    }

    /// Sample a function at the `M` grid nodes.
    pub fn sample(m: usize, f: impl Fn(f64) -> f64) -> Self {
        assert!(m >= 2, "grid needs at least 2 nodes");
        Self {
            samples: grid_nodes(m).map(f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Node position of sample `j`.
    pub fn node(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.samples.len() as f64
    }

    /// Grid spacing `2*pi/M`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.samples.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True if every sample is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.min() > 0.0
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// The `M` uniform nodes of `[-pi, pi)`.
pub fn grid_nodes(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| -PI + 2.0 * PI * j as f64 / m as f64)
}
