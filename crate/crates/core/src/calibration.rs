//! Two-reference reflection calibration.
//!
//! A raw reflection trace mixes the wanted stack response `r` with the
//! instrument: `S11 = E_i (r_b + r) T`, where `E_i` is the incident
//! spectrum, `r_b` the background stray reflection, and `T` the two-way
//! transfer response. Two references remove all three: an empty-scene
//! background trace `S11_b = E_i r_b T` and a metal-plate trace
//! `S11_m = E_i (r_b - 1) T` (the plate reflects with `r = -1`). Then
//!
//! ```text
//! r = (S11 - S11_b) / (S11_b - S11_m)
//! ```
//!
//! exactly, independent of `E_i` and `T`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spectrum::ComplexSpectrum;

/// Divisor floor as a fraction of the band maximum of `|S11_b - S11_m|`.
pub const DEFAULT_DIVISOR_FLOOR: f64 = 1e-9;

/// A raw measurement plus its two reference traces, on one shared grid.
#[derive(Debug, Clone)]
pub struct CalibrationSet {
    raw: ComplexSpectrum,
    background: ComplexSpectrum,
    metal: ComplexSpectrum,
}

impl CalibrationSet {
    pub fn new(
        raw: ComplexSpectrum,
        background: ComplexSpectrum,
        metal: ComplexSpectrum,
    ) -> Result<Self> {
        if raw.grid() != background.grid() || raw.grid() != metal.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(CalibrationSet {
            raw,
            background,
            metal,
        })
    }

    pub fn raw(&self) -> &ComplexSpectrum {
        &self.raw
    }

    pub fn background(&self) -> &ComplexSpectrum {
        &self.background
    }

    pub fn metal(&self) -> &ComplexSpectrum {
        &self.metal
    }
}

/// Instrument response used to synthesize measurement triples.
///
/// All three spectra share one grid; `noise_level` is the standard
/// deviation of additive Gaussian noise applied independently to the real
/// and imaginary parts of every synthesized point.
#[derive(Debug, Clone)]
pub struct InstrumentModel {
    incident: ComplexSpectrum,
    background_reflection: ComplexSpectrum,
    transfer: ComplexSpectrum,
    noise_level: f64,
}

impl InstrumentModel {
    pub fn new(
        incident: ComplexSpectrum,
        background_reflection: ComplexSpectrum,
        transfer: ComplexSpectrum,
        noise_level: f64,
    ) -> Result<Self> {
        if incident.grid() != background_reflection.grid() || incident.grid() != transfer.grid() {
            return Err(Error::GridMismatch);
        }
        if !noise_level.is_finite() || noise_level < 0.0 {
            return Err(Error::invalid(format!(
                "noise_level must be finite and >= 0, got {noise_level}"
            )));
        }
        Ok(InstrumentModel {
            incident,
            background_reflection,
            transfer,
            noise_level,
        })
    }

    pub fn incident(&self) -> &ComplexSpectrum {
        &self.incident
    }

    pub fn background_reflection(&self) -> &ComplexSpectrum {
        &self.background_reflection
    }

    pub fn transfer(&self) -> &ComplexSpectrum {
        &self.transfer
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }
}

/// Recovers `r` from a measurement triple with the default divisor floor.
pub fn apply_calibration(set: &CalibrationSet) -> Result<ComplexSpectrum> {
    apply_calibration_with_floor(set, DEFAULT_DIVISOR_FLOOR)
}

/// Recovers `r = (S11 - S11_b) / (S11_b - S11_m)` pointwise.
///
/// Points where `|S11_b - S11_m|` falls below `floor` times its band
/// maximum (or where any input point is invalid) are flagged invalid
/// rather than divided. Errors with [`Error::DegenerateCalibration`] when
/// no point survives.
pub fn apply_calibration_with_floor(set: &CalibrationSet, floor: f64) -> Result<ComplexSpectrum> {
    if !floor.is_finite() || floor < 0.0 {
        return Err(Error::invalid(format!(
            "divisor floor must be finite and >= 0, got {floor}"
        )));
    }
    let n = set.raw.len();
    let inputs_valid: Vec<bool> = (0..n)
        .map(|i| set.raw.is_valid(i) && set.background.is_valid(i) && set.metal.is_valid(i))
        .collect();

    let mut divisor_max = 0.0f64;
    for i in 0..n {
        if inputs_valid[i] {
            divisor_max = divisor_max.max((set.background.value(i) - set.metal.value(i)).norm());
        }
    }
    if divisor_max <= 0.0 {
        return Err(Error::DegenerateCalibration);
    }
    let cutoff = floor * divisor_max;

    let mut values = vec![Complex64::ZERO; n];
    let mut valid = vec![false; n];
    let mut any = false;
    for i in 0..n {
        let divisor = set.background.value(i) - set.metal.value(i);
        if inputs_valid[i] && divisor.norm() >= cutoff && divisor.norm() > 0.0 {
            values[i] = (set.raw.value(i) - set.background.value(i)) / divisor;
            valid[i] = true;
            any = true;
        }
    }
    if !any {
        return Err(Error::DegenerateCalibration);
    }
    ComplexSpectrum::with_validity(*set.raw.grid(), values, valid)
}

/// Synthesizes the raw/background/metal triple an instrument would record
/// for a scene with true reflection `r_true`.
///
/// Noise draws come from a ChaCha stream seeded with `seed`, so equal
/// inputs and seeds reproduce the triple bit for bit. Draw order: raw,
/// background, metal; within each spectrum ascending frequency, real part
/// then imaginary part.
pub fn synthesize_measurement(
    r_true: &ComplexSpectrum,
    model: &InstrumentModel,
    seed: u64,
) -> Result<CalibrationSet> {
    if r_true.grid() != model.incident.grid() {
        return Err(Error::GridMismatch);
    }
    let n = r_true.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = model.noise_level;
    let mut noisy = |values: Vec<Complex64>| -> Vec<Complex64> {
        values
            .into_iter()
            .map(|v| {
                let dre: f64 = StandardNormal.sample(&mut rng);
                let dim: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(v.re + sigma * dre, v.im + sigma * dim)
            })
            .collect()
    };

    let mut raw = Vec::with_capacity(n);
    let mut background = Vec::with_capacity(n);
    let mut metal = Vec::with_capacity(n);
    for i in 0..n {
        let ei = model.incident.value(i);
        let rb = model.background_reflection.value(i);
        let t = model.transfer.value(i);
        raw.push(ei * (rb + r_true.value(i)) * t);
        background.push(ei * rb * t);
        metal.push(ei * (rb - 1.0) * t);
    }
    let raw = noisy(raw);
    let background = noisy(background);
    let metal = noisy(metal);

    let grid = *r_true.grid();
    CalibrationSet::new(
        ComplexSpectrum::with_validity(grid, raw, r_true.validity().to_vec())?,
        ComplexSpectrum::new(grid, background)?,
        ComplexSpectrum::new(grid, metal)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::FrequencyGrid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::new(26.5e9, 40e9, n).unwrap()
    }

    /// Smooth, structured instrument response used across the tests:
    /// constant-magnitude traces with linear phase (a pure delay).
    fn smooth_model(n: usize, noise: f64) -> InstrumentModel {
        let g = grid(n);
        let trace = |mag: f64, phase0: f64, delay_s: f64| {
            let values = g
                .frequencies()
                .map(|f| {
                    Complex64::from_polar(mag, phase0 - 2.0 * std::f64::consts::PI * f * delay_s)
                })
                .collect();
            ComplexSpectrum::new(g, values).unwrap()
        };
        InstrumentModel::new(
            trace(1.1, 0.2, 0.0),
            trace(0.08, 1.0, 1.2e-9),
            trace(0.9, -0.5, 5.0e-9),
            noise,
        )
        .unwrap()
    }

    fn ramp_reflection(n: usize) -> ComplexSpectrum {
        let g = grid(n);
        let values = (0..n)
            .map(|i| {
                let x = i as f64 / (n - 1) as f64;
                Complex64::from_polar(0.7 * x + 0.05, 3.0 * x - 1.0)
            })
            .collect();
        ComplexSpectrum::new(g, values).unwrap()
    }

    #[test]
    fn raw_equal_to_background_gives_zero() {
        let model = smooth_model(11, 0.0);
        let r0 = ComplexSpectrum::new(grid(11), vec![Complex64::ZERO; 11]).unwrap();
        let set = synthesize_measurement(&r0, &model, 0).unwrap();
        // with r = 0 the raw trace IS the background trace
        for i in 0..11 {
            assert_eq!(set.raw().value(i), set.background().value(i));
        }
        let r = apply_calibration(&set).unwrap();
        for i in 0..11 {
            assert_eq!(r.value(i), Complex64::ZERO);
        }
    }

    #[test]
    fn raw_equal_to_metal_gives_minus_one() {
        let model = smooth_model(7, 0.0);
        let g = grid(7);
        let rm = ComplexSpectrum::new(g, vec![c(-1.0, 0.0); 7]).unwrap();
        let set = synthesize_measurement(&rm, &model, 0).unwrap();
        let r = apply_calibration(&set).unwrap();
        for i in 0..7 {
            assert!(
                (r.value(i) - c(-1.0, 0.0)).norm() < 1e-13,
                "got {}",
                r.value(i)
            );
        }
    }

    #[test]
    fn noiseless_round_trip_is_exact() {
        let r_true = ramp_reflection(101);
        let model = smooth_model(101, 0.0);
        let set = synthesize_measurement(&r_true, &model, 42).unwrap();
        let r = apply_calibration(&set).unwrap();
        for i in 0..101 {
            assert!(
                (r.value(i) - r_true.value(i)).norm() <= 1e-12,
                "point {i}: {} vs {}",
                r.value(i),
                r_true.value(i)
            );
        }
    }

    #[test]
    fn same_seed_reproduces_bit_for_bit() {
        let r_true = ramp_reflection(33);
        let model = smooth_model(33, 1e-3);
        let a = synthesize_measurement(&r_true, &model, 7).unwrap();
        let b = synthesize_measurement(&r_true, &model, 7).unwrap();
        assert_eq!(a.raw().values(), b.raw().values());
        assert_eq!(a.background().values(), b.background().values());
        assert_eq!(a.metal().values(), b.metal().values());

        let other = synthesize_measurement(&r_true, &model, 8).unwrap();
        assert_ne!(a.raw().values(), other.raw().values());
    }

    #[test]
    fn grids_must_match() {
        let model = smooth_model(11, 0.0);
        let r_other = ramp_reflection(12);
        assert!(matches!(
            synthesize_measurement(&r_other, &model, 0),
            Err(Error::GridMismatch)
        ));

        let g11 = grid(11);
        let g12 = grid(12);
        let s11 = ComplexSpectrum::new(g11, vec![Complex64::ZERO; 11]).unwrap();
        let s12 = ComplexSpectrum::new(g12, vec![Complex64::ZERO; 12]).unwrap();
        assert!(matches!(
            CalibrationSet::new(s11.clone(), s11.clone(), s12),
            Err(Error::GridMismatch)
        ));
        let _ = CalibrationSet::new(s11.clone(), s11.clone(), s11).unwrap();
    }

    #[test]
    fn near_zero_divisor_points_are_flagged_invalid() {
        let g = grid(5);
        let raw = ComplexSpectrum::new(g, vec![c(0.3, 0.1); 5]).unwrap();
        let mut bg = vec![c(1.0, 0.0); 5];
        let metal = vec![c(0.0, 0.0); 5];
        bg[2] = c(1e-15, 0.0); // divisor collapses at one point
        let set = CalibrationSet::new(
            raw,
            ComplexSpectrum::new(g, bg).unwrap(),
            ComplexSpectrum::new(g, metal).unwrap(),
        )
        .unwrap();
        let r = apply_calibration(&set).unwrap();
        assert!(!r.is_valid(2));
        assert_eq!(r.value(2), Complex64::ZERO);
        assert_eq!(r.valid_count(), 4);
    }

    #[test]
    fn coincident_references_are_degenerate() {
        let g = grid(5);
        let s = ComplexSpectrum::new(g, vec![c(0.5, 0.5); 5]).unwrap();
        let set = CalibrationSet::new(s.clone(), s.clone(), s).unwrap();
        assert!(matches!(
            apply_calibration(&set),
            Err(Error::DegenerateCalibration)
        ));
    }

    #[test]
    fn noise_error_scales_linearly() {
        let r_true = ramp_reflection(801);
        let rms = |sigma: f64| -> f64 {
            let model = smooth_model(801, sigma);
            let set = synthesize_measurement(&r_true, &model, 11).unwrap();
            let r = apply_calibration(&set).unwrap();
            let sum: f64 = (0..801)
                .map(|i| (r.value(i) - r_true.value(i)).norm_sqr())
                .sum();
            (sum / 801.0).sqrt()
        };
        let e1 = rms(1e-4);
        let e2 = rms(1e-3);
        let ratio = e2 / e1;
        assert!(
            (ratio - 10.0).abs() <= 2.0,
            "error should scale ~linearly with noise, ratio {ratio}"
        );
    }

    #[cfg(test)]
    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_recovers_r(
                seed in 0u64..1000,
                mag in 0.05f64..0.95,
                phase in -3.0f64..3.0,
            ) {
                let n = 41;
                let g = grid(n);
                let values = (0..n)
                    .map(|i| Complex64::from_polar(mag, phase + 0.1 * i as f64))
                    .collect();
                let r_true = ComplexSpectrum::new(g, values).unwrap();
                let model = smooth_model(n, 0.0);
                let set = synthesize_measurement(&r_true, &model, seed).unwrap();
                let r = apply_calibration(&set).unwrap();
                for i in 0..n {
                    prop_assert!((r.value(i) - r_true.value(i)).norm() <= 1e-12);
                }
            }

            #[test]
            fn transfer_rescaling_cancels(scale_re in 0.2f64..3.0, scale_im in -1.0f64..1.0) {
                // r is invariant when T picks up any common complex factor
                let n = 21;
                let r_true = ramp_reflection(n);
                let base = smooth_model(n, 0.0);
                let factor = Complex64::new(scale_re, scale_im);
                let scaled_t = ComplexSpectrum::new(
                    *base.transfer().grid(),
                    base.transfer().values().iter().map(|v| v * factor).collect(),
                ).unwrap();
                let scaled = InstrumentModel::new(
                    base.incident().clone(),
                    base.background_reflection().clone(),
                    scaled_t,
                    0.0,
                ).unwrap();
                let r_a = apply_calibration(&synthesize_measurement(&r_true, &base, 0).unwrap()).unwrap();
                let r_b = apply_calibration(&synthesize_measurement(&r_true, &scaled, 0).unwrap()).unwrap();
                for i in 0..n {
                    prop_assert!((r_a.value(i) - r_b.value(i)).norm() <= 1e-12);
                }
            }
        }
    }
}
