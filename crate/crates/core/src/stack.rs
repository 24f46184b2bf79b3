//! Recursive layer-by-layer reflection for arbitrary stacks.
//!
//! Works in layer-local coordinates, so only decaying exponentials
//! `e^{-2 gamma d}` ever appear; arbitrarily lossy or thick stacks cannot
//! overflow. For the wall/object/wall case this agrees with the literal
//! global-coordinate solve in [`crate::sandwich`]; the two routes cross-check
//! each other.
//!
//! Recursion (front medium 0 = air, layers 1..=N, back half-space air unless
//! the stack ends in a perfect conductor): the interface Fresnel coefficient
//! between media `a` and `b` is `rho_ab = (g_a - g_b) / (g_a + g_b)`; the
//! local reflection ratio at the left face of each layer follows from the
//! ratio at its right face via `G_left = G_right e^{-2 g d}`, and crossing
//! an interface applies `G_a = (rho_ab + G_b) / (1 + rho_ab G_b)`. A
//! conductor face pins `G = -1`. Transmission chains the forward amplitude
//! with total-field continuity, `F_b = F_a (1 + G_a) / (1 + G_b)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::material::Stack;
use crate::spectrum::{ComplexSpectrum, FrequencyGrid};
use crate::wave::{gamma_from_eps, wavenumber};

/// `(r, t)` of a layer stack in air at a single frequency.
///
/// `r` is referenced at the front face; `t` is referenced front face to
/// back face, so an all-air stack gives `r = 0` and
/// `t = e^{-jk * total thickness}`. A conductor-terminated stack gives
/// `t = 0` identically.
pub fn stack_reflection_at(stack: &Stack, f_hz: f64) -> Result<(Complex64, Complex64)> {
    let k = wavenumber(f_hz)?;
    let jk = Complex64::new(0.0, k);
    let one = Complex64::new(1.0, 0.0);

    let conductor_backed = stack.terminates_in_conductor();
    let layers = if conductor_backed {
        &stack.layers()[..stack.layers().len() - 1]
    } else {
        stack.layers()
    };

    let gammas: Vec<Complex64> = layers
        .iter()
        .map(|l| gamma_from_eps(l.material().permittivity().expect("dielectric"), k))
        .collect();
    let n = layers.len();

    // backward pass: ratio at the right face of each layer, then at its
    // left face after the e^{-2 g d} slide
    let mut right = vec![Complex64::ZERO; n]; // G at right face of layer i
    let mut left = vec![Complex64::ZERO; n]; // G at left face of layer i
    let mut behind = if conductor_backed {
        -one // field null at the conductor face
    } else {
        Complex64::ZERO // no returning wave in the back half-space
    };
    for i in (0..n).rev() {
        let g_behind = if i + 1 < n { gammas[i + 1] } else { jk };
        let g_here = gammas[i];
        right[i] = if conductor_backed && i + 1 == n {
            behind
        } else {
            let rho = (g_here - g_behind) / (g_here + g_behind);
            (rho + behind) / (one + rho * behind)
        };
        left[i] = right[i] * (-2.0 * g_here * layers[i].thickness_m()).exp();
        behind = left[i];
    }

    // front interface air | layer 1 (or air | conductor for a bare plate)
    let r = if n == 0 {
        debug_assert!(conductor_backed);
        -one
    } else {
        let rho = (jk - gammas[0]) / (jk + gammas[0]);
        (rho + left[0]) / (one + rho * left[0])
    };

    if conductor_backed {
        return Ok((r, Complex64::ZERO));
    }

    // forward pass: chain the forward amplitude through each interface and
    // layer; ends as the transmitted amplitude at the back face
    let mut f_amp = one;
    let mut g_here = r; // ratio in the current medium at the current plane
    for i in 0..n {
        f_amp *= (one + g_here) / (one + left[i]);
        f_amp *= (-gammas[i] * layers[i].thickness_m()).exp();
        g_here = right[i];
    }
    f_amp *= one + g_here; // into the back half-space, where G = 0
    Ok((r, f_amp))
}

/// [`stack_reflection_at`] evaluated over a whole grid.
pub fn stack_reflection(
    stack: &Stack,
    grid: &FrequencyGrid,
) -> Result<(ComplexSpectrum, ComplexSpectrum)> {
    let mut r = Vec::with_capacity(grid.len());
    let mut t = Vec::with_capacity(grid.len());
    for f in grid.frequencies() {
        let (ri, ti) = stack_reflection_at(stack, f)?;
        r.push(ri);
        t.push(ti);
    }
    Ok((
        ComplexSpectrum::new(*grid, r)?,
        ComplexSpectrum::new(*grid, t)?,
    ))
}
