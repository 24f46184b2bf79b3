//! Closed-form reflection from a single homogeneous slab in air.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wave::{gamma_from_eps, validate_eps, wavenumber};

/// Normal-incidence reflection coefficient of a slab of relative
/// permittivity `eps` and thickness `t` (meters), referenced at the front
/// face.
///
/// `r = r01 (1 - E) / (1 - r01^2 E)` with `r01 = (1 - sqrt(eps)) / (1 + sqrt(eps))`
/// and `E = e^{-j 2 k_w t}`, `k_w = k sqrt(eps)`.
///
/// A zero thickness returns `r = 0` exactly (the slab vanishes).
pub fn slab_reflection(eps: Complex64, thickness_m: f64, f_hz: f64) -> Result<Complex64> {
    validate_eps(eps, "slab permittivity")?;
    if !thickness_m.is_finite() || thickness_m < 0.0 {
        return Err(Error::invalid(format!(
            "slab thickness must be finite and >= 0 m, got {thickness_m}"
        )));
    }
    let k = wavenumber(f_hz)?;
    let s = eps.sqrt();
    let r01 = (1.0 - s) / (1.0 + s);
    // e^{-j 2 k_w t} written through gamma so the branch matches the solvers
    let e = (-2.0 * gamma_from_eps(eps, k) * thickness_m).exp();
    Ok(r01 * (1.0 - e) / (1.0 - r01 * r01 * e))
}
