//! Global-coordinate boundary matching for the wall / object / wall stack.
//!
//! Five regions along +z: air (z < 0), wall (0..t_w), object
//! (t_w..t_w+t_o), wall again (t_w+t_o..2t_w+t_o), air (beyond). A unit
//! wave `e^{-jkz}` arrives from the left. With global-coordinate field
//! amplitudes
//!
//! ```text
//! E1 = e^{-jkz} + r e^{+jkz}                E5 = t e^{-jkz}
//! E2 = alpha e^{-g_w z} + beta  e^{+g_w z}
//! E3 = theta e^{-g_o z} + rho   e^{+g_o z}
//! E4 = chi   e^{-g_w z} + xi    e^{+g_w z}
//! ```
//!
//! continuity of E and of its derivative (H, all media non-magnetic) at the
//! four interfaces yields eight linear equations in the eight unknowns
//! `(r, alpha, beta, theta, rho, chi, xi, t)`. This module assembles that
//! system literally and solves it by dense elimination. The growing
//! exponentials `e^{+g z}` at global coordinates make the system stiff for
//! lossy media; the recursive formulation in [`crate::stack`] is the
//! numerically robust route, and the pair is kept as a deliberate
//! cross-check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::solve_in_place;
use crate::wave::{gamma_from_eps, validate_eps, wavenumber};

/// Condition estimates above this raise [`Error::IllConditioned`].
pub const CONDITION_LIMIT: f64 = 1e12;

/// Back-substitution residual allowed after a solve, relative.
pub const RESIDUAL_LIMIT: f64 = 1e-9;

/// The eight boundary-matching amplitudes plus the inputs they solve.
///
/// `t` is the raw coefficient of `e^{-jkz}` behind the stack in global
/// coordinates; the physical front-face-to-back-face transmission is
/// [`SandwichSolution::transmission`]. All eight amplitudes satisfy the
/// assembled equations to [`RESIDUAL_LIMIT`] when substituted back.
#[derive(Debug, Clone, Copy)]
pub struct SandwichSolution {
    pub r: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub theta: Complex64,
    pub rho: Complex64,
    pub chi: Complex64,
    pub xi: Complex64,
    pub t: Complex64,
    eps_w: Complex64,
    eps_o: Complex64,
    wall_thickness_m: f64,
    object_thickness_m: f64,
    f_hz: f64,
}

impl SandwichSolution {
    /// Transmission referenced front face to back face: for an all-air
    /// stack this reduces to the pure propagation phase
    /// `e^{-jk(2 t_w + t_o)}`.
    pub fn transmission(&self) -> Complex64 {
        let k = 2.0 * std::f64::consts::PI * self.f_hz / crate::wave::SPEED_OF_LIGHT;
        let z_back = 2.0 * self.wall_thickness_m + self.object_thickness_m;
        self.t * Complex64::new(0.0, -k * z_back).exp()
    }

    /// Largest relative residual of the eight boundary equations when the
    /// solved amplitudes are substituted back.
    pub fn max_relative_residual(&self) -> Result<f64> {
        let (m, b) = assemble_sandwich_system(
            self.eps_w,
            self.eps_o,
            self.wall_thickness_m,
            self.object_thickness_m,
            self.f_hz,
        )?;
        let u = self.amplitudes();
        let mut worst = 0.0f64;
        for i in 0..8 {
            let mut acc = -b[i];
            let mut scale = b[i].norm();
            for j in 0..8 {
                acc += m[i][j] * u[j];
                scale += m[i][j].norm() * u[j].norm();
            }
            worst = worst.max(acc.norm() / scale.max(f64::MIN_POSITIVE));
        }
        Ok(worst)
    }

    /// `(r, alpha, beta, theta, rho, chi, xi, t)` in solve order.
    pub fn amplitudes(&self) -> [Complex64; 8] {
        [
            self.r, self.alpha, self.beta, self.theta, self.rho, self.chi, self.xi, self.t,
        ]
    }
}

fn validate_geometry(wall_thickness_m: f64, object_thickness_m: f64) -> Result<()> {
    if !wall_thickness_m.is_finite() || wall_thickness_m <= 0.0 {
        return Err(Error::invalid(format!(
            "wall thickness must be finite and > 0 m, got {wall_thickness_m}"
        )));
    }
    if !object_thickness_m.is_finite() || object_thickness_m <= 0.0 {
        return Err(Error::invalid(format!(
            "object thickness must be finite and > 0 m, got {object_thickness_m}"
        )));
    }
    Ok(())
}

/// Assembles the 8x8 boundary system `M u = b` for the five-region stack,
/// unknowns ordered `(r, alpha, beta, theta, rho, chi, xi, t)`.
///
/// Row pairs per interface: E-field continuity, then the derivative row
/// scaled by each medium's propagation constant (`jk` in air).
pub fn assemble_sandwich_system(
    eps_w: Complex64,
    eps_o: Complex64,
    wall_thickness_m: f64,
    object_thickness_m: f64,
    f_hz: f64,
) -> Result<([[Complex64; 8]; 8], [Complex64; 8])> {
    validate_eps(eps_w, "wall permittivity")?;
    validate_eps(eps_o, "object permittivity")?;
    validate_geometry(wall_thickness_m, object_thickness_m)?;
    let k = wavenumber(f_hz)?;

    let jk = Complex64::new(0.0, k);
    let gw = gamma_from_eps(eps_w, k);
    let go = gamma_from_eps(eps_o, k);
    let z1 = wall_thickness_m;
    let z2 = wall_thickness_m + object_thickness_m;
    let z3 = 2.0 * wall_thickness_m + object_thickness_m;

    let zero = Complex64::ZERO;
    let one = Complex64::new(1.0, 0.0);
    let ep = |g: Complex64, z: f64| (-g * z).exp(); // forward factor
    let em = |g: Complex64, z: f64| (g * z).exp(); // backward factor

    let mut m = [[zero; 8]; 8];
    let mut b = [zero; 8];

    // z = 0: 1 + r = alpha + beta
    m[0] = [-one, one, one, zero, zero, zero, zero, zero];
    b[0] = one;
    // z = 0: jk(1 - r) = gw(alpha - beta)
    m[1] = [jk, gw, -gw, zero, zero, zero, zero, zero];
    b[1] = jk;
    // z = t_w: wall field meets object field
    m[2] = [
        zero,
        ep(gw, z1),
        em(gw, z1),
        -ep(go, z1),
        -em(go, z1),
        zero,
        zero,
        zero,
    ];
    m[3] = [
        zero,
        gw * ep(gw, z1),
        -gw * em(gw, z1),
        -go * ep(go, z1),
        go * em(go, z1),
        zero,
        zero,
        zero,
    ];
    // z = t_w + t_o: object field meets second wall
    m[4] = [
        zero,
        zero,
        zero,
        ep(go, z2),
        em(go, z2),
        -ep(gw, z2),
        -em(gw, z2),
        zero,
    ];
    m[5] = [
        zero,
        zero,
        zero,
        go * ep(go, z2),
        -go * em(go, z2),
        -gw * ep(gw, z2),
        gw * em(gw, z2),
        zero,
    ];
    // z = 2 t_w + t_o: second wall meets the transmitted air wave
    m[6] = [
        zero,
        zero,
        zero,
        zero,
        zero,
        ep(gw, z3),
        em(gw, z3),
        -ep(jk, z3),
    ];
    m[7] = [
        zero,
        zero,
        zero,
        zero,
        zero,
        gw * ep(gw, z3),
        -gw * em(gw, z3),
        -jk * ep(jk, z3),
    ];

    Ok((m, b))
}

/// Solves the assembled system at one frequency.
///
/// Extreme loss overflows the growing global-coordinate exponentials; that
/// and genuinely singular systems surface as [`Error::IllConditioned`]
/// carrying the frequency at fault.
pub fn solve_sandwich(
    eps_w: Complex64,
    eps_o: Complex64,
    wall_thickness_m: f64,
    object_thickness_m: f64,
    f_hz: f64,
) -> Result<SandwichSolution> {
    let (m, b) =
        assemble_sandwich_system(eps_w, eps_o, wall_thickness_m, object_thickness_m, f_hz)?;

    let mut flat = [Complex64::ZERO; 64];
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::IllConditioned {
                    frequency_hz: f_hz,
                    condition_estimate: f64::INFINITY,
                });
            }
            flat[i * 8 + j] = *v;
        }
    }
    let mut rhs = b;

    let condition_estimate =
        solve_in_place(8, &mut flat, &mut rhs).map_err(|e| Error::IllConditioned {
            frequency_hz: f_hz,
            condition_estimate: e.condition_estimate,
        })?;
    if !(condition_estimate <= CONDITION_LIMIT) {
        return Err(Error::IllConditioned {
            frequency_hz: f_hz,
            condition_estimate,
        });
    }

    let solution = SandwichSolution {
        r: rhs[0],
        alpha: rhs[1],
        beta: rhs[2],
        theta: rhs[3],
        rho: rhs[4],
        chi: rhs[5],
        xi: rhs[6],
        t: rhs[7],
        eps_w,
        eps_o,
        wall_thickness_m,
        object_thickness_m,
        f_hz,
    };
    let residual = solution.max_relative_residual()?;
    if !(residual <= RESIDUAL_LIMIT) {
        return Err(Error::IllConditioned {
            frequency_hz: f_hz,
            condition_estimate,
        });
    }
    Ok(solution)
}
