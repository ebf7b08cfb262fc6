//! Norms, semi-norms and algebraic residuals used by the monitors.
//!
//! Sobolev semi-norms follow the integral normalization
//! `||f||_{Hdot^s}^2 = 2*pi * sum_{k != 0} |k|^{2s} |c_k|^2` (both signs of
//! `k` folded into the stored non-negative modes), which is the convention
//! for which `||f||_{Hdot^{1/2}}^2 = integral of f * (-Delta)^{1/2} f dx`
//! holds exactly and the energy balance of the flow closes at machine
//! precision. The pure-coefficient convention without the `2*pi` differs by
//! that constant factor only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};
use crate::ops::{analyze, hilbert, synthesize_grid};

/// `L^p` norm of grid samples by uniform quadrature; `p = infinity` is the
/// max norm. Requires `p >= 1`.
pub fn norm_lp(g: &GridField, p: f64) -> f64 {
    assert!(p >= 1.0, "L^p norms need p >= 1");
    if p.is_infinite() {
        return g
            .samples()
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    }
    let h = g.spacing();
    let sum: f64 = g.samples().iter().map(|v| v.abs().powf(p)).sum();
    (h * sum).powf(1.0 / p)
}

/// Quadrature of `integral g dx` (signed).
pub fn integral(g: &GridField) -> f64 {
    g.spacing() * g.samples().iter().sum::<f64>()
}

/// Homogeneous Sobolev semi-norm of order `s`. For `s < 0` the field must be
/// mean-zero, since the multiplier is singular at `k = 0`.
pub fn norm_sobolev(f: &SpectralField, s: f64) -> Result<f64> {
    if s < 0.0 && f.mean().abs() > 1e-13 {
        return Err(Error::MeanZeroRequired { mean: f.mean() });
    }
    let mut sum = 0.0;
    for k in 1..=f.band_limit() {
        sum += (k as f64).powf(2.0 * s) * 2.0 * f.coeff(k).norm_sqr();
    }
    Ok((2.0 * std::f64::consts::PI * sum).sqrt())
}

/// Wiener-type semi-norm `sum_{k != 0} e^{nu |k|} |k|^m |c_k|`.
pub fn norm_wiener(f: &SpectralField, m: u32, nu: f64) -> f64 {
    assert!(nu >= 0.0, "analyticity width must be non-negative");
    let mut sum = 0.0;
    for k in 1..=f.band_limit() {
        let kf = k as f64;
        let modulus = f.coeff(k).norm();
        // Work in logs once the weight alone would overflow.
        let term = if nu * kf > 300.0 {
            if modulus > 0.0 {
                (nu * kf + modulus.ln() + (m as f64) * kf.ln()).exp()
            } else {
                0.0
            }
        } else {
            (nu * kf).exp() * kf.powi(m as i32) * modulus
        };
        sum += 2.0 * term;
    }
    sum
}

/// Max-norm residual of the generalized Cotlar identity
/// `(Hu)^2 - u^2 + ubar^2 = 2 H(u * Hu)`, evaluated on a grid fine enough
/// (`>= 4K + 1`) to hold the squared terms without aliasing.
pub fn cotlar_residual(u: &SpectralField) -> f64 {
    let k = u.band_limit();
    let m = (4 * k + 1).max(8);
    let hu = hilbert(u);
    let u_grid = synthesize_grid(u, m);
    let hu_grid = synthesize_grid(&hu, m);
    let ubar = u.mean();

    // u * Hu has band limit 2K; analyze is exact on the 4K+1 grid.
    let prod: Vec<f64> = u_grid
        .samples()
        .iter()
        .zip(hu_grid.samples())
        .map(|(a, b)| a * b)
        .collect();
    let prod = GridField::new(prod).expect("finite product");
    let prod_hat = analyze(&prod, 2 * k).expect("grid sized for the product");
    let rhs = synthesize_grid(&hilbert(&prod_hat), m);

    let mut worst = 0.0_f64;
    for i in 0..m {
        let lhs = hu_grid.samples()[i].powi(2) - u_grid.samples()[i].powi(2) + ubar * ubar;
        worst = worst.max((lhs - 2.0 * rhs.samples()[i]).abs());
    }
    worst
}

/// Convenience: random band-limited field with positive mean, reproducible
/// from the seed. Mode `k` gets modulus `amp / k^2` and a random phase.
pub fn random_field(band_limit: usize, capacity: usize, amp: f64, seed: u64) -> SpectralField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); capacity + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (k, c) in coeffs
        .iter_mut()
        .enumerate()
        .take(band_limit + 1)
        .skip(1)
    {
        let r: f64 = rng.gen_range(0.5..1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        *c = Complex64::from_polar(amp * r / (k * k) as f64, phi);
    }
    SpectralField::from_coeffs(coeffs).expect("finite coefficients")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SpectralField;
    use crate::ops::half_laplacian;
    use std::f64::consts::PI;

    fn cos_field(k: usize, amp: f64, capacity: usize) -> SpectralField {
        let mut c = vec![Complex64::new(0.0, 0.0); capacity + 1];
        c[0] = Complex64::new(0.0, 0.0);
        c[k] = Complex64::new(amp / 2.0, 0.0);
        SpectralField::from_coeffs(c).unwrap()
    }

    #[test]
    fn lp_norms_of_simple_fields() {
        let one = GridField::sample(64, |_| 1.0);
        assert!((norm_lp(&one, 1.0) - 2.0 * PI).abs() < 1e-12);

        let cosx = GridField::sample(256, |x| x.cos());
        assert!((norm_lp(&cosx, 2.0) - PI.sqrt()).abs() < 1e-12);

        // Positive field: the L1 norm is just the mean times 2*pi.
        let pos = GridField::sample(256, |x| 1.0 + 0.6 * x.cos());
        assert!((norm_lp(&pos, 1.0) - 2.0 * PI).abs() < 1e-12);
        assert!((norm_lp(&pos, f64::INFINITY) - 1.6).abs() < 1e-12);
    }

    #[test]
    fn sobolev_half_matches_dissipation_quadrature() {
        let f = cos_field(1, 1.0, 4);
        let n = norm_sobolev(&f, 0.5).unwrap();
        assert!((n - PI.sqrt()).abs() < 1e-12);

        // Cross-check against the quadrature of integral f * Lambda f dx.
        let m = 64;
        let fg = synthesize_grid(&f, m);
        let lg = synthesize_grid(&half_laplacian(&f), m);
        let quad: f64 = fg
            .samples()
            .iter()
            .zip(lg.samples())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * fg.spacing();
        assert!((n * n - quad).abs() < 1e-10 * quad.abs().max(1.0));
    }

    #[test]
    fn sobolev_one_of_cos_2x() {
        let f = cos_field(2, 1.0, 4);
        let n = norm_sobolev(&f, 1.0).unwrap();
        assert!((n - (4.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sobolev_of_constant_vanishes() {
        let f = SpectralField::constant(3.0, 4);
        assert_eq!(norm_sobolev(&f, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn negative_order_requires_mean_zero() {
        let f = SpectralField::constant(1.0, 2);
        assert!(matches!(
            norm_sobolev(&f, -0.5),
            Err(Error::MeanZeroRequired { .. })
        ));
    }

    #[test]
    fn wiener_norm_hand_sum() {
        // 0.2 cos x + 0.05 cos 3x, m = 1, nu = ln 2 -> 0.4 + 1.2 = 1.6.
        let mut c = vec![Complex64::new(0.0, 0.0); 4];
        c[1] = Complex64::new(0.1, 0.0);
        c[3] = Complex64::new(0.025, 0.0);
        let f = SpectralField::from_coeffs(c).unwrap();
        let n = norm_wiener(&f, 1, 2.0_f64.ln());
        assert!((n - 1.6).abs() < 1e-12, "{n}");

        let one = cos_field(1, 1.0, 2);
        assert!((norm_wiener(&one, 0, 0.0) - 1.0).abs() < 1e-14);
        assert_eq!(norm_wiener(&SpectralField::constant(2.0, 2), 0, 0.0), 0.0);
    }

    #[test]
    fn cotlar_identity_holds() {
        assert!(cotlar_residual(&cos_field(1, 1.0, 2)) <= 1e-13);
        assert_eq!(cotlar_residual(&SpectralField::constant(2.0, 3)), 0.0);
        for seed in 0..5 {
            let u = random_field(16, 16, 0.4, seed);
            assert!(cotlar_residual(&u) <= 1e-12);
        }
    }
}
