//! Frequency grids and complex-valued spectra.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// An evenly spaced, strictly increasing frequency grid in Hz, endpoints
/// included.
///
/// A single-point grid is the degenerate case `start == stop, count == 1`;
/// every other grid has `stop > start` and `count >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    start_hz: f64,
    stop_hz: f64,
    count: usize,
}

impl FrequencyGrid {
    pub fn new(start_hz: f64, stop_hz: f64, count: usize) -> Result<Self> {
        if !start_hz.is_finite() || start_hz <= 0.0 {
            return Err(Error::invalid(format!(
                "grid start must be finite and > 0 Hz, got {start_hz}"
            )));
        }
        if !stop_hz.is_finite() {
            return Err(Error::invalid(format!(
                "grid stop must be finite, got {stop_hz}"
            )));
        }
        match count {
            0 => return Err(Error::invalid("grid count must be >= 1")),
            1 if stop_hz != start_hz => {
                return Err(Error::invalid(
                    "a one-point grid requires stop == start".to_string(),
                ))
            }
            _ if count >= 2 && stop_hz <= start_hz => {
                return Err(Error::invalid(format!(
                    "grid stop must exceed start, got {start_hz}..{stop_hz}"
                )))
            }
            _ => {}
        }
        Ok(FrequencyGrid {
            start_hz,
            stop_hz,
            count,
        })
    }

    pub fn start_hz(&self) -> f64 {
        self.start_hz
    }

    pub fn stop_hz(&self) -> f64 {
        self.stop_hz
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing between adjacent points (zero for a one-point grid).
    pub fn step_hz(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.stop_hz - self.start_hz) / (self.count - 1) as f64
        }
    }

    /// The i-th grid point; `i` must be `< len()`.
    pub fn frequency_hz(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        if i + 1 == self.count {
            // last point lands exactly on the stop frequency
            self.stop_hz
        } else {
            self.start_hz + i as f64 * self.step_hz()
        }
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.frequency_hz(i))
    }
}

/// One complex value per grid point, with a per-point validity flag.
///
/// Invalid points keep their stored value but are skipped by numerical
/// consumers (fits, misfit norms) and flagged on output.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
    valid: Vec<bool>,
}

impl ComplexSpectrum {
    /// Spectrum with every point valid. `values.len()` must equal `grid.len()`.
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        let valid = vec![true; values.len()];
        ComplexSpectrum::with_validity(grid, values, valid)
    }

    pub fn with_validity(
        grid: FrequencyGrid,
        values: Vec<Complex64>,
        valid: Vec<bool>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "value count {} does not match grid point count {}",
                values.len(),
                grid.len()
            )));
        }
        if valid.len() != grid.len() {
            return Err(Error::invalid(format!(
                "validity flag count {} does not match grid point count {}",
                valid.len(),
                grid.len()
            )));
        }
        Ok(ComplexSpectrum {
            grid,
            values,
            valid,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn validity(&self) -> &[bool] {
        &self.valid
    }

    pub fn value(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn is_valid(&self, i: usize) -> bool {
        self.valid[i]
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Iterator of `(frequency_hz, value, valid)` triples.
    pub fn points(&self) -> impl Iterator<Item = (f64, Complex64, bool)> + '_ {
        (0..self.len()).map(move |i| (self.grid.frequency_hz(i), self.values[i], self.valid[i]))
    }
}
