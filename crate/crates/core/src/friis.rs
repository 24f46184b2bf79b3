//! Friis one-way range budget for an active illuminator.

use crate::error::{Error, Result};

/// Link-budget inputs: all strictly positive and finite. `gain` is linear
/// (identical transmit and receive antenna), `wavelength_m` in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeBudget {
    transmit_power_w: f64,
    min_detectable_power_w: f64,
    gain: f64,
    wavelength_m: f64,
}

impl RangeBudget {
    pub fn new(
        transmit_power_w: f64,
        min_detectable_power_w: f64,
        gain: f64,
        wavelength_m: f64,
    ) -> Result<Self> {
        for (value, what) in [
            (transmit_power_w, "transmit power"),
            (min_detectable_power_w, "minimum detectable power"),
            (gain, "antenna gain"),
            (wavelength_m, "wavelength"),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::invalid(format!(
                    "{what} must be finite and > 0, got {value}"
                )));
            }
        }
        Ok(RangeBudget {
            transmit_power_w,
            min_detectable_power_w,
            gain,
            wavelength_m,
        })
    }

    pub fn transmit_power_w(&self) -> f64 {
        self.transmit_power_w
    }

    pub fn min_detectable_power_w(&self) -> f64 {
        self.min_detectable_power_w
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }
}

/// Maximum operating range `R = (lambda G / 4 pi) sqrt(P_t / P_d)`, meters.
pub fn friis_range(budget: &RangeBudget) -> f64 {
    budget.wavelength_m * budget.gain / (4.0 * std::f64::consts::PI)
        * (budget.transmit_power_w / budget.min_detectable_power_w).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::SPEED_OF_LIGHT;

    fn budget(pt: f64, pd: f64, gain: f64, f_hz: f64) -> RangeBudget {
        RangeBudget::new(pt, pd, gain, SPEED_OF_LIGHT / f_hz).unwrap()
    }

    #[test]
    fn matches_hand_evaluated_budgets() {
        // frozen from independent evaluations of lambda G / 4pi sqrt(Pt/Pd)
        let cases = [
            (budget(1.0, 1e-6, 1e3, 29.98e9), 795.754696337049),
            (budget(0.1, 1e-9, 10f64.powf(2.5), 33e9), 2286.108819092049),
            (budget(4.0, 1e-6, 1e3, 29.98e9), 1591.509392674097),
        ];
        for (b, expected) in cases {
            let r = friis_range(&b);
            assert!(
                (r - expected).abs() / expected < 1e-12,
                "got {r}, expected {expected}"
            );
        }
    }

    #[test]
    fn unit_budget_collapses_to_lambda_over_4pi() {
        let b = RangeBudget::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let r = friis_range(&b);
        assert!((r - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn quadrupling_power_doubles_range() {
        let r1 = friis_range(&budget(1.0, 1e-6, 1e3, 29.98e9));
        let r4 = friis_range(&budget(4.0, 1e-6, 1e3, 29.98e9));
        assert!((r4 - 2.0 * r1).abs() / r1 < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(RangeBudget::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(RangeBudget::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(RangeBudget::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(RangeBudget::new(1.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(RangeBudget::new(f64::INFINITY, 1.0, 1.0, 1.0).is_err());
    }

    #[cfg(test)]
    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn range_is_homogeneous(
                pt in 1e-3f64..100.0,
                pd in 1e-12f64..1e-3,
                gain_db in 0.0f64..40.0,
                f_ghz in 26.5f64..40.0,
                scale in 0.1f64..10.0,
            ) {
                let gain = 10f64.powf(gain_db / 10.0);
                let base = budget(pt, pd, gain, f_ghz * 1e9);
                let r = friis_range(&base);

                // wavelength scales linearly
                let b2 = RangeBudget::new(pt, pd, gain, base.wavelength_m() * scale).unwrap();
                prop_assert!((friis_range(&b2) - scale * r).abs() <= 1e-9 * r.abs());

                // power ratio scales as a square root
                let b3 = RangeBudget::new(pt * scale * scale, pd, gain, base.wavelength_m()).unwrap();
                prop_assert!((friis_range(&b3) - scale * r).abs() <= 1e-9 * (scale * r));
            }
        }
    }
}
