//! Slab permittivity recovery from a measured reflection spectrum.
//!
//! Fits `(eps', tan_delta)` of a single slab of known thickness by
//! damped Gauss-Newton (Levenberg-Marquardt) least squares on the stacked
//! real and imaginary residuals of the closed-form slab model. The
//! objective is multimodal in `eps'` (thickness fringes), so the fit runs
//! from a grid of start points and keeps the lowest-residual minimum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::slab::slab_reflection;
use crate::spectrum::ComplexSpectrum;

/// Iteration cap per start point.
pub const MAX_ITERATIONS: usize = 200;

/// Converged when the accepted step is below this, relative to `|p|`.
pub const STEP_TOLERANCE: f64 = 1e-10;

/// Converged when the objective gradient infinity-norm is below this.
pub const GRADIENT_TOLERANCE: f64 = 1e-12;

/// `eps'` is clamped to stay above this (vacuum plus a margin).
pub const EPS_REAL_FLOOR: f64 = 1.0 + 1e-6;

/// Relative step for the central-difference Jacobian.
pub const FD_RELATIVE_STEP: f64 = 1e-6;

/// Feasible lower bounds for `(eps', tan_delta)`. Finite differences and
/// trial steps never evaluate the model below these.
const PARAM_LOWER_BOUNDS: [f64; 2] = [EPS_REAL_FLOOR, 0.0];

/// Fits need at least this many valid points.
pub const MIN_VALID_POINTS: usize = 8;

/// Outcome of a multi-start fit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitResult {
    pub eps_real: f64,
    pub loss_tangent: f64,
    /// Root-mean-square of `|r_model - r_meas|` over the valid points.
    pub residual_rms: f64,
    /// Iterations used by the winning start.
    pub iterations: usize,
    /// Whether the winning start met a convergence criterion (rather than
    /// the iteration cap).
    pub converged: bool,
    /// The start point the winning run began from.
    pub start_point_used: (f64, f64),
}

/// Default multi-start grid: coarse in `eps'`, decades in `tan_delta`.
pub fn default_fit_starts() -> Vec<(f64, f64)> {
    let mut starts = Vec::with_capacity(18);
    for &e in &[2.0, 4.0, 8.0, 12.0, 16.0, 25.0] {
        for &t in &[0.001, 0.01, 0.1] {
            starts.push((e, t));
        }
    }
    starts
}

/// Least-squares data: valid measurement points and the slab geometry.
struct Objective {
    freqs: Vec<f64>,
    meas: Vec<Complex64>,
    thickness_m: f64,
}

impl Objective {
    /// Stacked residuals `[re_0, im_0, re_1, im_1, ...]` and their
    /// half-free sum of squares (`sum |r_model - r_meas|^2`).
    fn residuals(&self, p: [f64; 2]) -> (Vec<f64>, f64) {
        let eps = Complex64::new(p[0], -p[0] * p[1]);
        let mut res = Vec::with_capacity(2 * self.freqs.len());
        let mut cost = 0.0;
        for (f, m) in self.freqs.iter().zip(&self.meas) {
            // inputs were validated up front, and every probe (trial step
            // or finite-difference node) stays inside the feasible box
            let model = slab_reflection(eps, self.thickness_m, *f).expect("validated inputs");
            let d = model - m;
            res.push(d.re);
            res.push(d.im);
            cost += d.norm_sqr();
        }
        (res, cost)
    }

    /// Finite-difference Jacobian columns, one per parameter: central
    /// differences in the interior, switching to a one-sided forward
    /// stencil of the same order against a lower bound. The model is never
    /// evaluated outside the feasible box — the propagation-constant
    /// branch convention makes it non-analytic across `tan_delta = 0`, so
    /// a centered probe straddling that bound would be meaningless.
    ///
    /// `base` is the residual vector already computed at `p`.
    fn jacobian(&self, p: [f64; 2], base: &[f64]) -> [Vec<f64>; 2] {
        let mut cols: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for j in 0..2 {
            let h = FD_RELATIVE_STEP * (p[j].abs() + 1e-2);
            let mut plus = p;
            plus[j] += h;
            let (rp, _) = self.residuals(plus);
            cols[j] = if p[j] - h >= PARAM_LOWER_BOUNDS[j] {
                let mut minus = p;
                minus[j] -= h;
                let (rm, _) = self.residuals(minus);
                rp.iter()
                    .zip(&rm)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect()
            } else {
                // second-order forward difference from the bound
                let mut plus2 = p;
                plus2[j] += 2.0 * h;
                let (rp2, _) = self.residuals(plus2);
                (0..rp.len())
                    .map(|i| (-3.0 * base[i] + 4.0 * rp[i] - rp2[i]) / (2.0 * h))
                    .collect()
            };
        }
        cols
    }
}

fn clamp(p: [f64; 2]) -> [f64; 2] {
    [p[0].max(EPS_REAL_FLOOR), p[1].max(0.0)]
}

struct LmOutcome {
    p: [f64; 2],
    cost: f64,
    iterations: usize,
    converged: bool,
    /// Objective after every accepted step (index 0 is the start value);
    /// read by the descent-monotonicity test.
    #[cfg_attr(not(test), allow(dead_code))]
    history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn levenberg_marquardt(obj: &Objective, start: [f64; 2], max_iterations: usize) -> LmOutcome {
    const LAMBDA_START: f64 = 1e-3;
    const LAMBDA_MIN: f64 = 1e-12;
    const LAMBDA_MAX: f64 = 1e14;

    let mut p = clamp(start);
    let (mut res, mut cost) = obj.residuals(p);
    let mut history = vec![cost];
    let mut lambda = LAMBDA_START;
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=max_iterations {
        let jac = obj.jacobian(p, &res);
        let g = [dot(&jac[0], &res), dot(&jac[1], &res)];
        if g[0].abs().max(g[1].abs()) < GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        let a00 = dot(&jac[0], &jac[0]);
        let a11 = dot(&jac[1], &jac[1]);
        let a01 = dot(&jac[0], &jac[1]);

        iterations = iter;
        let mut accepted = false;
        while lambda <= LAMBDA_MAX {
            let d00 = a00 * (1.0 + lambda);
            let d11 = a11 * (1.0 + lambda);
            let det = d00 * d11 - a01 * a01;
            if det.is_finite() && det.abs() > f64::MIN_POSITIVE {
                let dx = [
                    (-g[0] * d11 + g[1] * a01) / det,
                    (-g[1] * d00 + g[0] * a01) / det,
                ];
                let trial = clamp([p[0] + dx[0], p[1] + dx[1]]);
                let applied = [trial[0] - p[0], trial[1] - p[1]];
                let (res_t, cost_t) = obj.residuals(trial);
                if cost_t <= cost {
                    p = trial;
                    res = res_t;
                    cost = cost_t;
                    history.push(cost);
                    lambda = (lambda / 10.0).max(LAMBDA_MIN);
                    accepted = true;
                    let step = (applied[0] * applied[0] + applied[1] * applied[1]).sqrt();
                    let scale = (p[0] * p[0] + p[1] * p[1]).sqrt().max(f64::MIN_POSITIVE);
                    if step / scale < STEP_TOLERANCE {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !accepted || converged {
            // no descent direction left at maximum damping, or done
            break;
        }
    }

    LmOutcome {
        p,
        cost,
        iterations,
        converged,
        history,
    }
}

pub(crate) fn fit_with_iteration_cap(
    r_meas: &ComplexSpectrum,
    thickness_m: f64,
    starts: &[(f64, f64)],
    max_iterations: usize,
) -> Result<FitResult> {
    if !thickness_m.is_finite() || thickness_m <= 0.0 {
        return Err(Error::invalid(format!(
            "slab thickness must be finite and > 0 m, got {thickness_m}"
        )));
    }
    if starts.is_empty() {
        return Err(Error::invalid("at least one fit start point is required"));
    }
    for (e, t) in starts {
        if !e.is_finite() || *e <= 1.0 || !t.is_finite() || *t < 0.0 {
            return Err(Error::invalid(format!(
                "fit start points need eps_real > 1 and loss_tangent >= 0, got ({e}, {t})"
            )));
        }
    }

    let mut freqs = Vec::new();
    let mut meas = Vec::new();
    for (f, v, ok) in r_meas.points() {
        if ok {
            freqs.push(f);
            meas.push(v);
        }
    }
    if freqs.len() < MIN_VALID_POINTS {
        return Err(Error::InsufficientData {
            valid: freqs.len(),
            required: MIN_VALID_POINTS,
        });
    }
    let n_points = freqs.len();
    let obj = Objective {
        freqs,
        meas,
        thickness_m,
    };

    let mut best: Option<(LmOutcome, (f64, f64))> = None;
    let mut any_converged = false;
    for start in starts {
        let run = levenberg_marquardt(&obj, [start.0, start.1], max_iterations);
        any_converged |= run.converged;
        let better = match &best {
            None => true,
            Some((b, _)) => run.cost < b.cost,
        };
        if better {
            best = Some((run, *start));
        }
    }
    let (winner, start_point_used) = best.expect("at least one start");
    let residual_rms = (winner.cost / n_points as f64).sqrt();
    if !any_converged {
        return Err(Error::NonConvergence {
            best_residual: residual_rms,
        });
    }
    Ok(FitResult {
        eps_real: winner.p[0],
        loss_tangent: winner.p[1],
        residual_rms,
        iterations: winner.iterations,
        converged: winner.converged,
        start_point_used,
    })
}

/// Fits `(eps', tan_delta)` of a slab of known thickness to `r_meas`,
/// trying every start point and returning the lowest-residual result.
///
/// Requires at least [`MIN_VALID_POINTS`] valid points and at least one
/// start point with `eps_real > 1, loss_tangent >= 0`. Errors with
/// [`Error::NonConvergence`] if no start meets a convergence criterion
/// within [`MAX_ITERATIONS`].
pub fn fit_slab_permittivity(
    r_meas: &ComplexSpectrum,
    thickness_m: f64,
    starts: &[(f64, f64)],
) -> Result<FitResult> {
    fit_with_iteration_cap(r_meas, thickness_m, starts, MAX_ITERATIONS)
}
