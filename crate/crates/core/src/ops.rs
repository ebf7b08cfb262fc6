//! Exact spectral operators on the torus.
//!
//! The Hilbert transform acts as the multiplier `-i*sgn(k)`, the
//! half-Laplacian `(-Delta)^{1/2}` as `|k|`, and the derivative as `ik`;
//! the identity `(-Delta)^{1/2} = H d/dx` holds coefficientwise. The Fejer
//! smoother applies the multiplier `(1 - |k|/N)_+` of the order-`N` Fejer
//! kernel, which is non-negative and therefore preserves positivity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};

/// Discrete Fourier analysis: `c_k = (1/M) * sum_j g(x_j) exp(-ik x_j)` for
/// `k = 0..=band_limit`. Exact for trigonometric polynomials of degree at
/// most `band_limit` whenever `M >= 2*band_limit + 1`.
pub fn analyze(g: &GridField, band_limit: usize) -> Result<SpectralField> {
    let m = g.len();
    if m < 2 * band_limit + 1 {
        return Err(Error::GridTooCoarse {
            band_limit,
            needed: 2 * band_limit + 1,
            got: m,
        });
    }
    let samples = g.samples();
    let mut coeffs = Vec::with_capacity(band_limit + 1);
    for k in 0..=band_limit {
        // Walk exp(-ik x_j) incrementally along the grid.
        let x0 = g.node(0);
        let step = Complex64::from_polar(1.0, -(k as f64) * g.spacing());
        let mut phase = Complex64::from_polar(1.0, -(k as f64) * x0);
        let mut acc = Complex64::new(0.0, 0.0);
        for &s in samples {
            acc += s * phase;
            phase *= step;
        }
        coeffs.push(acc / m as f64);
    }
    // The k = 0 sum of real samples is real up to representation.
    coeffs[0].im = 0.0;
    let mut f = SpectralField::from_coeffs(coeffs)?;
    f.set_band_limit(band_limit);
    Ok(f)
}

/// Evaluate the represented trig polynomial at one point:
/// `c_0 + 2 * sum_{k>=1} Re(c_k exp(ikx))`.
pub fn eval(f: &SpectralField, x: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, x);
    let mut phase = rot;
    let mut acc = 0.0;
    for k in 1..=f.band_limit() {
        acc += (f.coeff(k) * phase).re;
        phase *= rot;
    }
    f.mean() + 2.0 * acc
}

/// Evaluate at arbitrary points (periodic extension; any real input works).
pub fn synthesize(f: &SpectralField, points: &[f64]) -> Vec<f64> {
    points.iter().map(|&x| eval(f, x)).collect()
}

/// Sample the field on the uniform `M`-point grid.
pub fn synthesize_grid(f: &SpectralField, m: usize) -> GridField {
    GridField::sample(m, |x| eval(f, x))
}

/// Hilbert transform on the torus: `c_k -> -i c_k` for `k >= 1`, mean to zero.
pub fn hilbert(f: &SpectralField) -> SpectralField {
    f.map_modes(|k| {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0)
        }
    })
}

/// Half-Laplacian `(-Delta)^{1/2}`: `c_k -> |k| c_k`.
pub fn half_laplacian(f: &SpectralField) -> SpectralField {
    f.map_modes(|k| Complex64::new(k as f64, 0.0))
}

/// Spatial derivative: `c_k -> ik c_k`.
pub fn derivative(f: &SpectralField) -> SpectralField {
    f.map_modes(|k| Complex64::new(0.0, k as f64))
}

/// Fejer smoothing of order `n >= 1`: multiplier `(1 - |k|/n)` for `|k| < n`,
/// zero beyond. The band limit drops to `min(K, n - 1)`.
pub fn fejer(f: &SpectralField, n: usize) -> SpectralField {
    assert!(n >= 1, "Fejer order must be at least 1");
    let out = f.map_modes(|k| {
        if k < n {
            Complex64::new(1.0 - k as f64 / n as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let band = f.band_limit().min(n - 1);
    out.truncated(band)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn analyze_constant() {
        let g = GridField::sample(16, |_| 1.0);
        let f = analyze(&g, 4).unwrap();
        assert!(close(f.coeff(0).re, 1.0, 1e-15));
        for k in 1..=4 {
            assert!(f.coeff(k).norm() < 1e-14);
        }
        // K = 0 works on the minimal two-point grid.
        let tiny = GridField::sample(2, |_| 3.5);
        assert_eq!(analyze(&tiny, 0).unwrap().mean(), 3.5);
    }

    #[test]
    fn analyze_single_mode() {
        let g = GridField::sample(16, |x| (3.0 * x).cos());
        let f = analyze(&g, 4).unwrap();
        assert!(close(f.coeff(3).re, 0.5, 1e-14));
        assert!(f.coeff(3).im.abs() < 1e-14);
        for k in [0usize, 1, 2, 4] {
            assert!(f.coeff(k).norm() < 1e-14, "mode {k} should vanish");
        }
    }

    #[test]
    fn analyze_exp_cos_matches_bessel() {
        // Modes of exp(cos x) are modified Bessel values I_k(1).
        let g = GridField::sample(64, |x| x.cos().exp());
        let f = analyze(&g, 20).unwrap();
        assert!(close(f.coeff(1).re, 0.565159103992485, 1e-12));
        assert!(close(f.coeff(0).re, 1.266065877752008, 1e-12));
    }

    #[test]
    fn analyze_rejects_coarse_grid() {
        let g = GridField::sample(8, |x| x.cos());
        assert!(matches!(
            analyze(&g, 4),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn synthesize_constant_and_cos() {
        let f = SpectralField::constant(1.0, 4);
        assert_eq!(eval(&f, 0.3), 1.0);

        let mut c = vec![Complex64::new(0.0, 0.0); 3];
        c[1] = Complex64::new(0.5, 0.0); // cos x
        let f = SpectralField::from_coeffs(c).unwrap();
        assert!(close(eval(&f, 0.0), 1.0, 1e-15));
        assert!(close(eval(&f, PI / 2.0), 0.0, 1e-15));
    }

    #[test]
    fn analyze_synthesize_roundtrip() {
        let g = GridField::sample(32, |x| 1.0 + 0.4 * x.cos() - 0.2 * (5.0 * x).sin());
        let f = analyze(&g, 8).unwrap();
        let back = synthesize_grid(&f, 32);
        for (a, b) in g.samples().iter().zip(back.samples()) {
            assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn hilbert_cos_is_sin() {
        let g = GridField::sample(16, |x| x.cos());
        let hf = hilbert(&analyze(&g, 4).unwrap());
        assert!(close(hf.coeff(1).im, -0.5, 1e-14));
        assert!(hf.coeff(1).re.abs() < 1e-14);
        let vals = synthesize_grid(&hf, 16);
        let expect = GridField::sample(16, |x| x.sin());
        for (a, b) in vals.samples().iter().zip(expect.samples()) {
            assert!(close(*a, *b, 1e-13));
        }
    }

    #[test]
    fn hilbert_annihilates_constants() {
        let f = SpectralField::constant(3.0, 2);
        assert_eq!(hilbert(&f).coeff(0).norm(), 0.0);
    }

    #[test]
    fn hilbert_squared_is_minus_identity_on_mean_zero() {
        let g = GridField::sample(32, |x| 0.3 * (2.0 * x).cos() + 0.1 * (5.0 * x).sin());
        let f = analyze(&g, 8).unwrap();
        let hh = hilbert(&hilbert(&f));
        for k in 1..=8 {
            assert!((hh.coeff(k) + f.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn half_laplacian_scales_modes() {
        let g = GridField::sample(16, |x| (3.0 * x).cos());
        let lf = half_laplacian(&analyze(&g, 4).unwrap());
        assert!(close(lf.coeff(3).re, 1.5, 1e-14)); // 3 * 1/2
        assert_eq!(half_laplacian(&SpectralField::constant(2.0, 3)).mean(), 0.0);
    }

    #[test]
    fn half_laplacian_equals_hilbert_of_derivative() {
        let g = GridField::sample(64, |x| x.cos().exp());
        let f = analyze(&g, 20).unwrap();
        let a = half_laplacian(&f);
        let b = hilbert(&derivative(&f));
        for k in 0..=20 {
            assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_of_sin_is_cos() {
        let mut c = vec![Complex64::new(0.0, 0.0); 2];
        c[1] = Complex64::new(0.0, -0.5); // sin x
        let f = SpectralField::from_coeffs(c).unwrap();
        let df = derivative(&f);
        assert!(close(df.coeff(1).re, 0.5, 1e-15));
        assert!(df.coeff(1).im.abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let g = GridField::sample(256, |x| x.cos().exp());
        let f = analyze(&g, 40).unwrap();
        let df = synthesize_grid(&derivative(&f), 256);
        let h = 1e-5;
        for (j, &v) in df.samples().iter().enumerate() {
            let x = df.node(j);
            let fd = ((x + h).cos().exp() - (x - h).cos().exp()) / (2.0 * h);
            assert!(close(v, fd, 1e-8), "node {j}: {v} vs {fd}");
        }
    }

    #[test]
    fn fejer_multiplier_and_band() {
        let mut c = vec![Complex64::new(0.0, 0.0); 5];
        c[2] = Complex64::new(1.0, 0.0);
        let f = SpectralField::from_coeffs(c).unwrap();
        let s = fejer(&f, 4);
        assert!(close(s.coeff(2).re, 0.5, 1e-15));
        assert_eq!(s.band_limit(), 2);

        // Order 1 keeps only the mean.
        let s1 = fejer(&f, 1);
        assert_eq!(s1.band_limit(), 0);
        for k in 1..=4 {
            assert_eq!(s1.coeff(k).norm(), 0.0);
        }
    }

    #[test]
    fn fejer_preserves_positivity_of_clipped_field() {
        // f(x) = 0.1 + cos^4 x, clipped then smoothed, stays positive.
        let g = GridField::sample(128, |x| (0.1 + x.cos().powi(4)).clamp(0.5, 2.0));
        let f = analyze(&g, 32).unwrap();
        let smooth = fejer(&f, 8);
        let fine = synthesize_grid(&smooth, 1024);
        assert!(fine.min() > 0.0, "min {}", fine.min());
    }
}
