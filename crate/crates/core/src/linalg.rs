//! Dense complex linear solve, sized for the 8x8 boundary-matching system.

use num_complex::Complex64;

/// The elimination hit a zero pivot or non-finite arithmetic.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SolveFailure {
    pub condition_estimate: f64,
}

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `n x n`; on success `b` holds the solution. Returns the
/// pivot-ratio condition estimate `max|pivot| / min|pivot|`. The caller
/// decides what estimate is tolerable.
pub(crate) fn solve_in_place(
    n: usize,
    a: &mut [Complex64],
    b: &mut [Complex64],
) -> Result<f64, SolveFailure> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);

    let mut max_pivot = 0.0f64;
    let mut min_pivot = f64::INFINITY;

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].norm();
        for row in col + 1..n {
            let mag = a[row * n + col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if !(pivot_mag > 0.0) || !pivot_mag.is_finite() {
            return Err(SolveFailure {
                condition_estimate: f64::INFINITY,
            });
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        max_pivot = max_pivot.max(pivot_mag);
        min_pivot = min_pivot.min(pivot_mag);

        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == Complex64::ZERO {
                continue;
            }
            a[row * n + col] = Complex64::ZERO;
            for k in col + 1..n {
                let sub = factor * a[col * n + k];
                a[row * n + k] -= sub;
            }
            b[row] -= factor * b[col];
        }
    }

    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
    }

    let estimate = max_pivot / min_pivot;
    if b.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(SolveFailure {
            condition_estimate: estimate,
        });
    }
    Ok(estimate)
}
