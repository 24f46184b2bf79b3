//! Scenario files: the JSON configuration the CLI consumes.
//!
//! A scenario describes everything one simulation or synthesis run needs:
//! the frequency grid, the layer stack, an optional parametric instrument
//! model, an optional candidate-material library for ranking, and an
//! optional standoff range that adds a round-trip phase. Quantities may
//! be bare SI numbers (`0.03556`) or unit-tagged strings (`"1.4 in"`,
//! `"26.5 GHz"`). Unknown keys anywhere are rejected so a typo cannot
//! silently fall back to a default.
//!
//! Materials are either inline `{ "eps_real": ..., "loss_tangent": ... }`
//! objects or preset names:
//!
//! | preset   | permittivity            | status                       |
//! |----------|-------------------------|------------------------------|
//! | `air`    | 1.0, lossless           | exact                        |
//! | `cement` | 12.4, tan δ = 0.003     | measured wall value          |
//! | `water`  | 77, lossless            | Ka-band literature value     |
//! | `soil`   | 4.0, tan δ = 0.05       | **placeholder, not measured**|
//! | `rock`   | 6.0, tan δ = 0.01       | **placeholder, not measured**|
//! | `metal`  | perfect conductor       | idealization                 |
//!
//! The `soil` and `rock` presets are rough placeholders for dry ground
//! materials; replace them with inline values when real data exists.
//!
//! The instrument traces (`incident_field`, `background_reflection`,
//! `transfer_function`) are parametric: `mag · e^{j(phase_deg − 360·f·delay_ns)}`
//! evaluated on the scenario grid, with the delay in nanoseconds.
//! Omitted traces default to unit incident field, zero background, and
//! unit transfer. `noise_level` is the standard deviation of additive
//! complex Gaussian noise applied per point to the synthesized raw
//! traces (default 0; the matching receiver-noise figure is not a
//! published quantity, so it is a free parameter).

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::calibration::InstrumentModel;
use crate::error::{Error, Result};
use crate::material::{Layer, Material, Stack};
use crate::spectrum::{ComplexSpectrum, FrequencyGrid};
use crate::units::{parse_frequency_hz, parse_length_m};

/// A value that is bare SI or a unit-tagged string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Quantity {
    Number(f64),
    Tagged(String),
}

impl Quantity {
    fn length_m(&self, what: &str) -> Result<f64> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Tagged(s) => parse_length_m(s),
        }
        .map_err(|e| Error::invalid(format!("{what}: {e}")))
    }

    fn frequency_hz(&self, what: &str) -> Result<f64> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Tagged(s) => parse_frequency_hz(s),
        }
        .map_err(|e| Error::invalid(format!("{what}: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    grid: RawGrid,
    layers: Vec<RawLayer>,
    #[serde(default)]
    instrument: RawInstrument,
    #[serde(default)]
    candidates: BTreeMap<String, RawMaterial>,
    #[serde(default)]
    range_offset: Option<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    start: Quantity,
    stop: Quantity,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    material: RawMaterial,
    thickness: Quantity,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawMaterial {
    Preset(String),
    Custom(RawDielectric),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDielectric {
    eps_real: f64,
    #[serde(default)]
    loss_tangent: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstrument {
    #[serde(default)]
    incident_field: Option<RawTrace>,
    #[serde(default)]
    background_reflection: Option<RawTrace>,
    #[serde(default)]
    transfer_function: Option<RawTrace>,
    #[serde(default)]
    noise_level: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrace {
    mag: f64,
    #[serde(default)]
    phase_deg: f64,
    #[serde(default)]
    delay_ns: f64,
}

/// One parametric instrument trace: `mag · e^{j(phase − 2π f delay)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trace {
    pub mag: f64,
    pub phase_deg: f64,
    pub delay_ns: f64,
}

impl Trace {
    const UNIT: Trace = Trace {
        mag: 1.0,
        phase_deg: 0.0,
        delay_ns: 0.0,
    };
    const ZERO: Trace = Trace {
        mag: 0.0,
        phase_deg: 0.0,
        delay_ns: 0.0,
    };

    fn validate(&self, what: &str) -> Result<()> {
        for (v, field) in [
            (self.mag, "mag"),
            (self.phase_deg, "phase_deg"),
            (self.delay_ns, "delay_ns"),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!(
                    "instrument trace {what}.{field} must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Evaluates the trace at one frequency.
    pub fn value_at(&self, frequency_hz: f64) -> Complex64 {
        let phase = self.phase_deg.to_radians() - TAU * frequency_hz * self.delay_ns * 1e-9;
        Complex64::from_polar(self.mag, phase)
    }

    fn spectrum(&self, grid: &FrequencyGrid) -> ComplexSpectrum {
        let values = grid.frequencies().map(|f| self.value_at(f)).collect();
        ComplexSpectrum::new(*grid, values).expect("grid-sized value vector")
    }
}

/// A validated scenario, ready to drive simulation or synthesis.
#[derive(Debug, Clone)]
pub struct Scenario {
    grid: FrequencyGrid,
    stack: Stack,
    incident: Trace,
    background: Trace,
    transfer: Trace,
    noise_level: f64,
    candidates: Vec<(String, Material)>,
    range_offset_m: Option<f64>,
}

/// Resolves a preset name or inline definition to a material.
fn resolve_material(raw: &RawMaterial, what: &str) -> Result<Material> {
    match raw {
        RawMaterial::Preset(name) => match name.to_ascii_lowercase().as_str() {
            "air" => Material::lossless(1.0),
            "cement" => Material::dielectric(12.4, 0.003),
            "water" => Material::lossless(77.0),
            // placeholder values; no measured reference exists for these
            "soil" => Material::dielectric(4.0, 0.05),
            "rock" => Material::dielectric(6.0, 0.01),
            "metal" => Ok(Material::perfect_conductor()),
            other => Err(Error::invalid(format!(
                "{what}: unknown material preset {other:?} \
                 (known: air, cement, water, soil, rock, metal)"
            ))),
        },
        RawMaterial::Custom(d) => Material::dielectric(d.eps_real, d.loss_tangent),
    }
    .map_err(|e| Error::invalid(format!("{what}: {e}")))
}

impl Scenario {
    /// Loads and validates a scenario file.
    pub fn load(path: &Path) -> Result<Scenario> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Scenario::from_json(path, &text)
    }

    /// Parses scenario JSON; `path` tags error messages only.
    pub fn from_json(path: &Path, text: &str) -> Result<Scenario> {
        let raw: RawScenario = serde_json::from_str(text)
            .map_err(|e| Error::parse(path, e.line().max(1), e.to_string()))?;
        Scenario::validate(raw).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::invalid(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn validate(raw: RawScenario) -> Result<Scenario> {
        let start = raw.grid.start.frequency_hz("grid.start")?;
        let stop = raw.grid.stop.frequency_hz("grid.stop")?;
        let grid = FrequencyGrid::new(start, stop, raw.grid.count)?;

        let mut layers = Vec::with_capacity(raw.layers.len());
        for (i, layer) in raw.layers.iter().enumerate() {
            let what = format!("layers[{i}]");
            let material = resolve_material(&layer.material, &what)?;
            let thickness = layer.thickness.length_m(&format!("{what}.thickness"))?;
            layers.push(
                Layer::new(material, thickness)
                    .map_err(|e| Error::invalid(format!("{what}: {e}")))?,
            );
        }
        let stack = Stack::new(layers)?;

        let incident = raw
            .instrument
            .incident_field
            .map_or(Trace::UNIT, |t| Trace {
                mag: t.mag,
                phase_deg: t.phase_deg,
                delay_ns: t.delay_ns,
            });
        let background = raw
            .instrument
            .background_reflection
            .map_or(Trace::ZERO, |t| Trace {
                mag: t.mag,
                phase_deg: t.phase_deg,
                delay_ns: t.delay_ns,
            });
        let transfer = raw
            .instrument
            .transfer_function
            .map_or(Trace::UNIT, |t| Trace {
                mag: t.mag,
                phase_deg: t.phase_deg,
                delay_ns: t.delay_ns,
            });
        incident.validate("incident_field")?;
        background.validate("background_reflection")?;
        transfer.validate("transfer_function")?;
        let noise_level = raw.instrument.noise_level;
        if !noise_level.is_finite() || noise_level < 0.0 {
            return Err(Error::invalid(format!(
                "instrument.noise_level must be finite and >= 0, got {noise_level}"
            )));
        }

        let mut candidates = Vec::with_capacity(raw.candidates.len());
        for (name, material) in &raw.candidates {
            let resolved = resolve_material(material, &format!("candidates[{name:?}]"))?;
            candidates.push((name.clone(), resolved));
        }

        let range_offset_m = match &raw.range_offset {
            None => None,
            Some(q) => {
                let r = q.length_m("range_offset")?;
                if !r.is_finite() || r < 0.0 {
                    return Err(Error::invalid(format!(
                        "range_offset must be finite and >= 0 m, got {r}"
                    )));
                }
                Some(r)
            }
        };

        Ok(Scenario {
            grid,
            stack,
            incident,
            background,
            transfer,
            noise_level,
            candidates,
            range_offset_m,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn stack(&self) -> &Stack {
        &self.stack
    }

    pub fn incident_field(&self) -> &Trace {
        &self.incident
    }

    pub fn background_reflection(&self) -> &Trace {
        &self.background
    }

    pub fn transfer_function(&self) -> &Trace {
        &self.transfer
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    /// Named candidate materials in deterministic (name-sorted) order.
    pub fn candidates(&self) -> &[(String, Material)] {
        &self.candidates
    }

    /// Standoff range for the optional round-trip phase `e^{-j2kR}`.
    pub fn range_offset_m(&self) -> Option<f64> {
        self.range_offset_m
    }

    /// Instantiates the instrument traces on the scenario grid.
    pub fn instrument_model(&self) -> Result<InstrumentModel> {
        InstrumentModel::new(
            self.incident.spectrum(&self.grid),
            self.background.spectrum(&self.grid),
            self.transfer.spectrum(&self.grid),
            self.noise_level,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::METERS_PER_INCH;
    use std::path::PathBuf;

    fn parse(text: &str) -> Result<Scenario> {
        Scenario::from_json(&PathBuf::from("test.json"), text)
    }

    const MINIMAL: &str = r#"{
        "grid": { "start": "26.5 GHz", "stop": "40 GHz", "count": 11 },
        "layers": [ { "material": "cement", "thickness": "1.4 in" } ]
    }"#;

    #[test]
    fn minimal_scenario_gets_all_defaults() {
        let s = parse(MINIMAL).unwrap();
        assert_eq!(s.grid().start_hz(), 26.5e9);
        assert_eq!(s.grid().stop_hz(), 40e9);
        assert_eq!(s.grid().len(), 11);
        assert_eq!(s.stack().layers().len(), 1);
        let layer = &s.stack().layers()[0];
        assert_eq!(layer.thickness_m(), 1.4 * METERS_PER_INCH);
        assert_eq!(layer.material().eps_real(), 12.4);
        assert_eq!(layer.material().loss_tangent(), 0.003);
        assert_eq!(*s.incident_field(), Trace::UNIT);
        assert_eq!(*s.background_reflection(), Trace::ZERO);
        assert_eq!(*s.transfer_function(), Trace::UNIT);
        assert_eq!(s.noise_level(), 0.0);
        assert!(s.candidates().is_empty());
        assert_eq!(s.range_offset_m(), None);
    }

    #[test]
    fn full_scenario_parses_every_section() {
        let s = parse(
            r#"{
            "grid": { "start": 26.5e9, "stop": 40e9, "count": 1601 },
            "layers": [
                { "material": "cement", "thickness": "1.4 in" },
                { "material": { "eps_real": 77.0 }, "thickness": 0.1778 },
                { "material": "cement", "thickness": "1.4 in" }
            ],
            "instrument": {
                "incident_field": { "mag": 1.0 },
                "background_reflection": { "mag": 0.08, "phase_deg": 140.0, "delay_ns": 0.35 },
                "transfer_function": { "mag": 0.92, "phase_deg": -25.0, "delay_ns": 1.2 },
                "noise_level": 1e-3
            },
            "candidates": {
                "water": "water",
                "metal": "metal",
                "air gap": { "eps_real": 1.0, "loss_tangent": 0.0 }
            },
            "range_offset": "30 in"
        }"#,
        )
        .unwrap();
        assert_eq!(s.stack().layers().len(), 3);
        assert_eq!(s.stack().layers()[1].material().eps_real(), 77.0);
        assert_eq!(s.noise_level(), 1e-3);
        assert_eq!(s.range_offset_m(), Some(30.0 * METERS_PER_INCH));
        // BTreeMap ordering: "air gap" < "metal" < "water"
        let names: Vec<&str> = s.candidates().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["air gap", "metal", "water"]);
        assert!(s.candidates()[1].1.is_conductor());
    }

    #[test]
    fn unknown_keys_are_rejected_everywhere() {
        for text in [
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ],
                 "surprise": 1 }"#,
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2, "step": 1 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ] }"#,
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0, "color": "red" } ] }"#,
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ],
                 "instrument": { "gain": 3 } }"#,
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ],
                 "instrument": { "transfer_function": { "mag": 1, "delay_ps": 2 } } }"#,
        ] {
            assert!(parse(text).is_err(), "should reject: {text}");
        }
    }

    #[test]
    fn conductor_must_be_the_last_layer() {
        let err = parse(
            r#"{
            "grid": { "start": 26.5e9, "stop": 40e9, "count": 3 },
            "layers": [
                { "material": "metal", "thickness": 0.01 },
                { "material": "cement", "thickness": 0.01 }
            ]
        }"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("last"), "{err}");
    }

    #[test]
    fn unknown_preset_is_named_in_the_error() {
        let err = parse(
            r#"{
            "grid": { "start": 26.5e9, "stop": 40e9, "count": 3 },
            "layers": [ { "material": "adamantium", "thickness": 0.01 } ]
        }"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("adamantium"), "{err}");
        assert!(err.contains("cement"), "{err}");
    }

    #[test]
    fn presets_resolve_to_documented_values() {
        let s = parse(
            r#"{
            "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
            "layers": [ { "material": "air", "thickness": 1.0 } ],
            "candidates": {
                "a": "air", "c": "cement", "w": "water",
                "s": "soil", "r": "rock", "m": "metal"
            }
        }"#,
        )
        .unwrap();
        let by_name: std::collections::BTreeMap<&str, &Material> = s
            .candidates()
            .iter()
            .map(|(n, m)| (n.as_str(), m))
            .collect();
        assert_eq!(by_name["a"].eps_real(), 1.0);
        assert_eq!(by_name["c"].eps_real(), 12.4);
        assert_eq!(by_name["c"].loss_tangent(), 0.003);
        assert_eq!(by_name["w"].eps_real(), 77.0);
        assert_eq!(by_name["w"].loss_tangent(), 0.0);
        assert_eq!(by_name["s"].eps_real(), 4.0);
        assert_eq!(by_name["r"].eps_real(), 6.0);
        assert!(by_name["m"].is_conductor());
    }

    #[test]
    fn instrument_model_evaluates_traces_on_the_grid() {
        let s = parse(
            r#"{
            "grid": { "start": 30e9, "stop": 31e9, "count": 2 },
            "layers": [ { "material": "air", "thickness": 1.0 } ],
            "instrument": {
                "transfer_function": { "mag": 0.5, "phase_deg": 90.0, "delay_ns": 0.1 }
            }
        }"#,
        )
        .unwrap();
        let model = s.instrument_model().unwrap();
        for (i, f) in [30e9, 31e9].iter().enumerate() {
            let expected =
                Complex64::from_polar(0.5, std::f64::consts::FRAC_PI_2 - TAU * f * 0.1e-9);
            let got = model.transfer().value(i);
            assert!((got - expected).norm() < 1e-12, "{got} vs {expected}");
            assert_eq!(model.incident().value(i), Complex64::new(1.0, 0.0));
            assert_eq!(model.background_reflection().value(i), Complex64::ZERO);
        }
    }

    #[test]
    fn semantic_errors_are_rejected() {
        // negative noise
        assert!(parse(
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ],
                 "instrument": { "noise_level": -1.0 } }"#
        )
        .is_err());
        // zero-thickness layer
        assert!(parse(
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 0.0 } ] }"#
        )
        .is_err());
        // backwards grid
        assert!(parse(
            r#"{ "grid": { "start": 2e9, "stop": 1e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ] }"#
        )
        .is_err());
        // negative range offset
        assert!(parse(
            r#"{ "grid": { "start": 1e9, "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ],
                 "range_offset": -1.0 }"#
        )
        .is_err());
        // bad unit tag inside a quantity
        let err = parse(
            r#"{ "grid": { "start": "26.5 parsecs", "stop": 2e9, "count": 2 },
                 "layers": [ { "material": "air", "thickness": 1.0 } ] }"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("grid.start"), "{err}");
    }

    #[test]
    fn json_syntax_errors_carry_path_and_line() {
        let err = Scenario::from_json(
            &PathBuf::from("broken.json"),
            "{\n  \"grid\": { \"start\": 1e9,\n  <oops>\n}",
        )
        .unwrap_err();
        match err {
            Error::Parse { path, line, .. } => {
                assert_eq!(path, PathBuf::from("broken.json"));
                assert!(line >= 2, "line {line}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = Scenario::load(Path::new("/nonexistent/none.json"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("none.json"), "{err}");
    }
}
