//! Layer materials and layered stacks.
//!
//! A [`Material`] is either a lossy dielectric described by its relative
//! permittivity `eps = eps_real * (1 - j*loss_tangent)` (time convention
//! `e^{+j w t}`), or a perfect electric conductor that no field penetrates.
//! A [`Stack`] is an ordered list of layers met by a wave at normal
//! incidence, front to back, with air on both sides. All media are
//! non-magnetic.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One layer material at normal incidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    eps_real: f64,
    loss_tangent: f64,
    conductor: bool,
}

impl Material {
    /// Lossy dielectric with relative permittivity `eps_real * (1 - j*loss_tangent)`.
    ///
    /// Requires `eps_real > 0` and `loss_tangent >= 0`, both finite.
    pub fn dielectric(eps_real: f64, loss_tangent: f64) -> Result<Self> {
        if !eps_real.is_finite() || eps_real <= 0.0 {
            return Err(Error::invalid(format!(
                "eps_real must be finite and > 0, got {eps_real}"
            )));
        }
        if !loss_tangent.is_finite() || loss_tangent < 0.0 {
            return Err(Error::invalid(format!(
                "loss_tangent must be finite and >= 0, got {loss_tangent}"
            )));
        }
        Ok(Material {
            eps_real,
            loss_tangent,
            conductor: false,
        })
    }

    /// Dielectric with zero loss tangent.
    pub fn lossless(eps_real: f64) -> Result<Self> {
        Material::dielectric(eps_real, 0.0)
    }

    /// Perfect electric conductor.
    pub const fn perfect_conductor() -> Self {
        Material {
            eps_real: f64::INFINITY,
            loss_tangent: 0.0,
            conductor: true,
        }
    }

    pub fn is_conductor(&self) -> bool {
        self.conductor
    }

    /// Complex relative permittivity `eps_real * (1 - j*loss_tangent)`,
    /// or `None` for a perfect conductor.
    pub fn permittivity(&self) -> Option<Complex64> {
        if self.conductor {
            None
        } else {
            Some(Complex64::new(
                self.eps_real,
                -self.eps_real * self.loss_tangent,
            ))
        }
    }

    /// Real part of the relative permittivity (infinite for a conductor).
    pub fn eps_real(&self) -> f64 {
        self.eps_real
    }

    pub fn loss_tangent(&self) -> f64 {
        self.loss_tangent
    }
}

/// A material slab of finite thickness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    material: Material,
    thickness_m: f64,
}

impl Layer {
    /// Requires a finite thickness `> 0` in meters.
    pub fn new(material: Material, thickness_m: f64) -> Result<Self> {
        if !thickness_m.is_finite() || thickness_m <= 0.0 {
            return Err(Error::invalid(format!(
                "layer thickness must be finite and > 0 m, got {thickness_m}"
            )));
        }
        Ok(Layer {
            material,
            thickness_m,
        })
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    pub fn thickness_m(&self) -> f64 {
        self.thickness_m
    }
}

/// An ordered, non-empty list of layers, front to back.
///
/// A perfect conductor may only appear as the final layer: nothing
/// propagates past it, so any layer behind one would be unreachable.
#[derive(Debug, Clone, PartialEq)]
pub struct Stack {
    layers: Vec<Layer>,
}

impl Stack {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("a stack must contain at least one layer"));
        }
        for (i, layer) in layers.iter().enumerate() {
            if layer.material().is_conductor() && i + 1 != layers.len() {
                return Err(Error::invalid(format!(
                    "a perfect-conductor layer must be the last layer of the stack \
                     (found one at position {} of {})",
                    i + 1,
                    layers.len()
                )));
            }
        }
        Ok(Stack { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn terminates_in_conductor(&self) -> bool {
        self.layers
            .last()
            .map(|l| l.material().is_conductor())
            .unwrap_or(false)
    }

    /// Sum of all layer thicknesses.
    pub fn total_thickness_m(&self) -> f64 {
        self.layers.iter().map(Layer::thickness_m).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dielectric_permittivity_follows_loss_tangent_convention() {
        let m = Material::dielectric(12.4, 0.003).unwrap();
        let eps = m.permittivity().unwrap();
        assert_eq!(eps.re, 12.4);
        assert_eq!(eps.im, -12.4 * 0.003);
    }

    #[test]
    fn material_rejects_bad_values() {
        assert!(Material::dielectric(0.0, 0.0).is_err());
        assert!(Material::dielectric(-1.0, 0.0).is_err());
        assert!(Material::dielectric(f64::NAN, 0.0).is_err());
        assert!(Material::dielectric(f64::INFINITY, 0.0).is_err());
        assert!(Material::dielectric(2.0, -0.1).is_err());
        assert!(Material::dielectric(2.0, f64::NAN).is_err());
    }

    #[test]
    fn conductor_has_no_permittivity() {
        let m = Material::perfect_conductor();
        assert!(m.is_conductor());
        assert!(m.permittivity().is_none());
    }

    #[test]
    fn layer_rejects_nonpositive_thickness() {
        let m = Material::lossless(2.0).unwrap();
        assert!(Layer::new(m, 0.0).is_err());
        assert!(Layer::new(m, -0.01).is_err());
        assert!(Layer::new(m, f64::INFINITY).is_err());
    }

    #[test]
    fn stack_requires_conductor_last() {
        let wall = Layer::new(Material::lossless(12.4).unwrap(), 0.0356).unwrap();
        let pec = Layer::new(Material::perfect_conductor(), 0.01).unwrap();

        assert!(Stack::new(vec![wall, pec]).is_ok());
        assert!(Stack::new(vec![pec]).is_ok());

        let err = Stack::new(vec![pec, wall]).unwrap_err();
        assert!(
            err.to_string().contains("last layer"),
            "message should cite the placement constraint, got: {err}"
        );
        assert!(Stack::new(vec![wall, pec, pec]).is_err());
        assert!(Stack::new(vec![]).is_err());
    }

    #[test]
    fn stack_reports_totals() {
        let wall = Layer::new(Material::lossless(12.4).unwrap(), 0.0356).unwrap();
        let gap = Layer::new(Material::lossless(1.0).unwrap(), 0.1778).unwrap();
        let s = Stack::new(vec![wall, gap, wall]).unwrap();
        assert!(!s.terminates_in_conductor());
        assert!((s.total_thickness_m() - (2.0 * 0.0356 + 0.1778)).abs() < 1e-15);
        assert_eq!(s.layers().len(), 3);
    }
}
