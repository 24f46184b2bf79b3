//! Contrast spectra and candidate-material ranking.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::material::{Layer, Material, Stack};
use crate::spectrum::ComplexSpectrum;
use crate::stack::stack_reflection_at;

/// Pointwise difference `a - reference` on a shared grid.
///
/// A point is valid in the output only where both inputs are valid.
pub fn contrast_spectrum(
    a: &ComplexSpectrum,
    reference: &ComplexSpectrum,
) -> Result<ComplexSpectrum> {
    if a.grid() != reference.grid() {
        return Err(Error::GridMismatch);
    }
    let values = a
        .values()
        .iter()
        .zip(reference.values())
        .map(|(x, y)| x - y)
        .collect();
    let valid = a
        .validity()
        .iter()
        .zip(reference.validity())
        .map(|(x, y)| *x && *y)
        .collect();
    ComplexSpectrum::with_validity(*a.grid(), values, valid)
}

/// Wall-object-wall geometry a candidate material is dropped into.
#[derive(Debug, Clone, Copy)]
pub struct SandwichGeometry {
    wall: Material,
    wall_thickness_m: f64,
    object_thickness_m: f64,
}

impl SandwichGeometry {
    /// The wall must be a dielectric; thicknesses are in meters, `> 0`.
    pub fn new(wall: Material, wall_thickness_m: f64, object_thickness_m: f64) -> Result<Self> {
        if wall.is_conductor() {
            return Err(Error::invalid("the wall material cannot be a conductor"));
        }
        // Layer::new enforces the thickness domain
        Layer::new(wall, wall_thickness_m)?;
        Layer::new(wall, object_thickness_m)?;
        Ok(SandwichGeometry {
            wall,
            wall_thickness_m,
            object_thickness_m,
        })
    }

    pub fn wall(&self) -> &Material {
        &self.wall
    }

    pub fn wall_thickness_m(&self) -> f64 {
        self.wall_thickness_m
    }

    pub fn object_thickness_m(&self) -> f64 {
        self.object_thickness_m
    }

    /// The stack seen by the instrument when `candidate` fills the object
    /// slot. A conducting candidate terminates the stack (the far wall is
    /// unreachable behind it).
    pub fn stack_with(&self, candidate: &Material) -> Result<Stack> {
        let front = Layer::new(self.wall, self.wall_thickness_m)?;
        if candidate.is_conductor() {
            Stack::new(vec![
                front,
                Layer::new(*candidate, self.object_thickness_m)?,
            ])
        } else {
            Stack::new(vec![
                front,
                Layer::new(*candidate, self.object_thickness_m)?,
                Layer::new(self.wall, self.wall_thickness_m)?,
            ])
        }
    }
}

/// Scores each named candidate by the RMS misfit between its simulated
/// sandwich reflection and `r_meas`, best first.
///
/// The misfit runs over the valid points of `r_meas` only. Ties keep the
/// input order (the sort is stable).
pub fn rank_materials(
    r_meas: &ComplexSpectrum,
    candidates: &[(String, Material)],
    geometry: &SandwichGeometry,
) -> Result<Vec<(String, f64)>> {
    if candidates.is_empty() {
        return Err(Error::invalid(
            "at least one candidate material is required",
        ));
    }
    let valid_count = r_meas.valid_count();
    if valid_count == 0 {
        return Err(Error::InsufficientData {
            valid: 0,
            required: 1,
        });
    }

    let mut scored = Vec::with_capacity(candidates.len());
    for (name, candidate) in candidates {
        let stack = geometry.stack_with(candidate)?;
        let mut sum = 0.0;
        for (f, measured, ok) in r_meas.points() {
            if !ok {
                continue;
            }
            let (simulated, _) = stack_reflection_at(&stack, f)?;
            let d: Complex64 = simulated - measured;
            sum += d.norm_sqr();
        }
        scored.push((name.clone(), (sum / valid_count as f64).sqrt()));
    }
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(scored)
}
