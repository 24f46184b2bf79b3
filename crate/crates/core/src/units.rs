//! Boundary-layer unit parsing for CLI flags and scenario files.
//!
//! Everything inside the library is SI (meters, hertz, watts, linear
//! gain); these parsers accept a number with an optional unit tag and
//! convert once, at the point of entry. A bare number means the SI unit
//! unless the flag's own name promises otherwise (`--freq-ghz`,
//! `--gain-db`), in which case the dedicated `*_flag` parser applies that
//! default. Unit tags are matched ASCII case-insensitively.

use crate::error::{Error, Result};

/// One inch in meters, exact by definition.
pub const METERS_PER_INCH: f64 = 0.0254;

/// Splits `"1.4 in"` into `("1.4", "in")`: the unit is the trailing run
/// of ASCII letters, the number is everything before it.
fn split_unit(s: &str) -> (&str, &str) {
    let t = s.trim();
    let number = t.trim_end_matches(|c: char| c.is_ascii_alphabetic());
    let suffix = &t[number.len()..];
    (number.trim_end(), suffix)
}

fn parse_number(raw: &str, number: &str, expected: &str) -> Result<f64> {
    let v: f64 = number.parse().map_err(|_| {
        Error::invalid(format!(
            "cannot parse {raw:?}: expected a number with optional unit {expected}"
        ))
    })?;
    if !v.is_finite() {
        return Err(Error::invalid(format!(
            "cannot parse {raw:?}: value must be finite"
        )));
    }
    Ok(v)
}

/// Parses a length into meters. Accepted tags: `m`, `cm`, `mm`, `in`
/// (also `inch`/`inches`); a bare number is meters.
pub fn parse_length_m(s: &str) -> Result<f64> {
    let (number, unit) = split_unit(s);
    let v = parse_number(s, number, "m/cm/mm/in")?;
    let scale = match unit.to_ascii_lowercase().as_str() {
        "" | "m" => 1.0,
        "cm" => 1e-2,
        "mm" => 1e-3,
        "in" | "inch" | "inches" => METERS_PER_INCH,
        other => {
            return Err(Error::invalid(format!(
                "unknown length unit {other:?} in {s:?}: use m, cm, mm, or in"
            )))
        }
    };
    Ok(v * scale)
}

/// Parses a frequency into hertz. Accepted tags: `Hz`, `kHz`, `MHz`,
/// `GHz`; a bare number is hertz.
pub fn parse_frequency_hz(s: &str) -> Result<f64> {
    parse_frequency(s, 1.0)
}

/// Like [`parse_frequency_hz`], but a bare number is gigahertz — for
/// flags whose name already carries the unit (`--freq-ghz`).
pub fn parse_frequency_ghz_flag(s: &str) -> Result<f64> {
    parse_frequency(s, 1e9)
}

fn parse_frequency(s: &str, bare_scale: f64) -> Result<f64> {
    let (number, unit) = split_unit(s);
    let v = parse_number(s, number, "Hz/kHz/MHz/GHz")?;
    let scale = match unit.to_ascii_lowercase().as_str() {
        "" => bare_scale,
        "hz" => 1.0,
        "khz" => 1e3,
        "mhz" => 1e6,
        "ghz" => 1e9,
        other => {
            return Err(Error::invalid(format!(
                "unknown frequency unit {other:?} in {s:?}: use Hz, kHz, MHz, or GHz"
            )))
        }
    };
    Ok(v * scale)
}

/// Parses a power into watts. Accepted tags: `W`, `mW`, `dBm`; a bare
/// number is watts.
pub fn parse_power_w(s: &str) -> Result<f64> {
    let (number, unit) = split_unit(s);
    let v = parse_number(s, number, "W/mW/dBm")?;
    match unit.to_ascii_lowercase().as_str() {
        "" | "w" => Ok(v),
        "mw" => Ok(v * 1e-3),
        "dbm" => Ok(1e-3 * 10f64.powf(v / 10.0)),
        other => Err(Error::invalid(format!(
            "unknown power unit {other:?} in {s:?}: use W, mW, or dBm"
        ))),
    }
}

/// Parses an antenna gain into linear units. A bare number or a `dB` tag
/// is decibels (the flag is named `--gain-db`); the result is 10^(x/10).
pub fn parse_gain_linear_from_db_flag(s: &str) -> Result<f64> {
    let (number, unit) = split_unit(s);
    let v = parse_number(s, number, "dB")?;
    match unit.to_ascii_lowercase().as_str() {
        "" | "db" => Ok(10f64.powf(v / 10.0)),
        other => Err(Error::invalid(format!(
            "unknown gain unit {other:?} in {s:?}: use dB or a bare decibel value"
        ))),
    }
}
