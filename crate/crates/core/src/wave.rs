//! Wave quantities for normal-incidence propagation.
//!
//! Conventions used throughout the crate: time dependence `e^{+j w t}`,
//! forward propagation `e^{-j k z}`, complex permittivity
//! `eps = eps'(1 - j tan_delta)`, and propagation constant
//! `gamma = j k sqrt(eps)` with the square-root branch chosen so that
//! `Re(gamma) >= 0` (decay along +z) and, for lossless media,
//! `Im(gamma) > 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::material::Material;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wavenumber `k = 2 pi f / c`, rad/m. Requires `f > 0`, finite.
pub fn wavenumber(f_hz: f64) -> Result<f64> {
    if !f_hz.is_finite() || f_hz <= 0.0 {
        return Err(Error::invalid(format!(
            "frequency must be finite and > 0 Hz, got {f_hz}"
        )));
    }
    Ok(2.0 * std::f64::consts::PI * f_hz / SPEED_OF_LIGHT)
}

/// `gamma = j k sqrt(eps)` with the decaying branch.
pub(crate) fn gamma_from_eps(eps: Complex64, k: f64) -> Complex64 {
    let mut g = Complex64::new(0.0, k) * eps.sqrt();
    // principal sqrt already lands here for passive eps; the flip guards
    // degenerate inputs so the forward wave never grows along +z
    if g.re < 0.0 || (g.re == 0.0 && g.im < 0.0) {
        g = -g;
    }
    g
}

/// Permittivities accepted by the solvers: finite with `Re(eps) > 0`.
pub(crate) fn validate_eps(eps: Complex64, what: &str) -> Result<()> {
    if !eps.re.is_finite() || !eps.im.is_finite() || eps.re <= 0.0 {
        return Err(Error::invalid(format!(
            "{what} must be finite with a positive real part, got {eps}"
        )));
    }
    Ok(())
}

/// Propagation constant of a material at frequency `f_hz`.
///
/// Errors for a perfect conductor, which supports no interior field.
pub fn propagation_constant(material: &Material, f_hz: f64) -> Result<Complex64> {
    let eps = material.permittivity().ok_or(Error::ConductorPropagation)?;
    let k = wavenumber(f_hz)?;
    Ok(gamma_from_eps(eps, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    // 2 pi f / c evaluated independently (numpy) and frozen
    const K_30_GHZ: f64 = 628.753506585505;
    const K_26P5_GHZ: f64 = 555.398930817196;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn wavenumber_matches_hand_values() {
        assert!(rel_err(wavenumber(30e9).unwrap(), K_30_GHZ) < 1e-12);
        assert!(rel_err(wavenumber(26.5e9).unwrap(), K_26P5_GHZ) < 1e-12);
    }

    #[test]
    fn wavenumber_is_one_at_c_over_two_pi() {
        let f = SPEED_OF_LIGHT / (2.0 * std::f64::consts::PI);
        assert!((wavenumber(f).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wavenumber_scales_linearly() {
        let k1 = wavenumber(27.0e9).unwrap();
        let k2 = wavenumber(54.0e9).unwrap();
        assert!(rel_err(k2, 2.0 * k1) < 1e-15);
    }

    #[test]
    fn wavenumber_rejects_bad_frequencies() {
        assert!(wavenumber(0.0).is_err());
        assert!(wavenumber(-1e9).is_err());
        assert!(wavenumber(f64::NAN).is_err());
        assert!(wavenumber(f64::INFINITY).is_err());
    }

    #[test]
    fn air_gamma_is_jk() {
        let air = Material::lossless(1.0).unwrap();
        let g = propagation_constant(&air, 30e9).unwrap();
        let k = wavenumber(30e9).unwrap();
        assert_eq!(g.re, 0.0);
        assert!(rel_err(g.im, k) < 1e-15);
    }

    #[test]
    fn lossless_dielectric_gamma_is_imaginary() {
        // sqrt(12.4) = 3.521363372332, frozen from an independent evaluation
        let m = Material::lossless(12.4).unwrap();
        let g = propagation_constant(&m, 30e9).unwrap();
        assert_eq!(g.re, 0.0);
        assert!(rel_err(g.im, K_30_GHZ * 3.521363372332) < 1e-12);
    }

    #[test]
    fn small_loss_gives_decay_near_half_loss_tangent() {
        let m = Material::dielectric(12.4, 0.003).unwrap();
        let g = propagation_constant(&m, 30e9).unwrap();
        assert!(g.re > 0.0, "lossy media must attenuate: {g}");
        assert!(g.im > 0.0);
        // Re(gamma)/|gamma| ~ tan_delta/2 to first order
        let ratio = g.re / g.norm();
        assert!(
            (ratio - 0.0015).abs() < 1e-8,
            "attenuation ratio {ratio} not near tan_delta/2"
        );
    }

    #[test]
    fn conductor_has_no_propagation_constant() {
        let pec = Material::perfect_conductor();
        assert!(matches!(
            propagation_constant(&pec, 30e9),
            Err(Error::ConductorPropagation)
        ));
    }

    #[cfg(test)]
    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gamma_decays_for_passive_media(
                eps_real in 0.1f64..100.0,
                tan_d in 0.0f64..1.0,
                f_ghz in 26.5f64..40.0,
            ) {
                let m = Material::dielectric(eps_real, tan_d).unwrap();
                let g = propagation_constant(&m, f_ghz * 1e9).unwrap();
                prop_assert!(g.re >= 0.0);
                prop_assert!(g.im > 0.0);
            }
        }
    }
}
