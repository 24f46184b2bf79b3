//! Reading and writing reflection spectra on disk.
//!
//! Two formats are supported:
//!
//! * **CSV** — header `freq_hz,re,im`, one row per grid point, values
//!   printed with 17 significant digits so that re-ingesting a written
//!   file reproduces the in-memory spectrum bit for bit. Invalid points
//!   are written as `#`-flagged rows (values preserved) and re-ingested
//!   as invalid; any other `#` line is an ordinary comment.
//! * **Touchstone v1 `.s1p`** — option line `# HZ S RI R 50` (any of
//!   HZ/KHZ/MHZ/GHZ accepted on read), whitespace-separated
//!   `freq re im` rows, `!` comments. Touchstone has no invalid-point
//!   marker, so invalid points are omitted on write; a file with interior
//!   gaps no longer lies on a uniform grid and will be rejected on read.
//!
//! Frequencies must be strictly increasing and uniformly spaced (they
//! reconstruct a [`FrequencyGrid`]). All parse errors carry the file path
//! and 1-based line number. Writes go through a temporary sibling file
//! followed by an atomic rename, so readers never observe a half-written
//! spectrum.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{ComplexSpectrum, FrequencyGrid};

/// On-disk spectrum encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumFormat {
    /// `freq_hz,re,im` comma-separated values.
    Csv,
    /// Touchstone v1 one-port file (`.s1p`).
    Touchstone,
}

impl SpectrumFormat {
    /// Picks the format from the file extension: `.csv` or `.s1p`
    /// (case-insensitive).
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        match ext.as_str() {
            "csv" => Ok(SpectrumFormat::Csv),
            "s1p" => Ok(SpectrumFormat::Touchstone),
            _ => Err(Error::invalid(format!(
                "cannot infer spectrum format of {:?}: use a .csv or .s1p extension",
                path.display()
            ))),
        }
    }
}

const CSV_HEADER: &str = "freq_hz,re,im";
const MAGPHASE_HEADER: &str = "freq_hz,mag_db,phase_deg";

/// Reads a spectrum, picking the format from the file extension.
pub fn read_spectrum(path: &Path) -> Result<ComplexSpectrum> {
    read_spectrum_format(path, SpectrumFormat::from_path(path)?)
}

/// Reads a spectrum in an explicit format.
pub fn read_spectrum_format(path: &Path, format: SpectrumFormat) -> Result<ComplexSpectrum> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        SpectrumFormat::Csv => parse_csv(path, &text),
        SpectrumFormat::Touchstone => parse_touchstone(path, &text),
    }
}

/// Writes a spectrum, picking the format from the file extension.
pub fn write_spectrum(spectrum: &ComplexSpectrum, path: &Path) -> Result<()> {
    write_spectrum_format(spectrum, path, SpectrumFormat::from_path(path)?)
}

/// Writes a spectrum in an explicit format (atomic: temp file + rename).
pub fn write_spectrum_format(
    spectrum: &ComplexSpectrum,
    path: &Path,
    format: SpectrumFormat,
) -> Result<()> {
    let body = match format {
        SpectrumFormat::Csv => render_csv(spectrum),
        SpectrumFormat::Touchstone => render_touchstone(spectrum),
    };
    atomic_write(path, &body)
}

/// Writes the plot-ready companion: `freq_hz,mag_db,phase_deg` with
/// `mag_db = 20·log10|r|` and the phase in degrees. Invalid points are
/// `#`-flagged like the complex CSV.
pub fn write_magnitude_phase(spectrum: &ComplexSpectrum, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(32 * (spectrum.len() + 1));
    out.push_str(MAGPHASE_HEADER);
    out.push('\n');
    for (f, v, ok) in spectrum.points() {
        if !ok {
            out.push('#');
        }
        let mag_db = 20.0 * v.norm().log10();
        let phase_deg = v.arg().to_degrees();
        out.push_str(&format!("{f:.16e},{mag_db:.16e},{phase_deg:.16e}\n"));
    }
    atomic_write(path, &out)
}

fn render_csv(spectrum: &ComplexSpectrum) -> String {
    let mut out = String::with_capacity(64 * (spectrum.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (f, v, ok) in spectrum.points() {
        if !ok {
            out.push('#');
        }
        out.push_str(&format!("{f:.16e},{:.16e},{:.16e}\n", v.re, v.im));
    }
    out
}

fn render_touchstone(spectrum: &ComplexSpectrum) -> String {
    let mut out = String::with_capacity(64 * (spectrum.len() + 2));
    out.push_str("! one-port reflection spectrum\n");
    out.push_str("# HZ S RI R 50\n");
    for (f, v, ok) in spectrum.points() {
        if ok {
            out.push_str(&format!("{f:.16e} {:.16e} {:.16e}\n", v.re, v.im));
        }
    }
    out
}

fn parse_csv(path: &Path, text: &str) -> Result<ComplexSpectrum> {
    let mut rows: Vec<(f64, Complex64, bool, usize)> = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if let Some(rest) = line.strip_prefix('#') {
                // comments may precede the header, data rows may not
                if parse_csv_fields(rest).is_some() {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("expected header {CSV_HEADER:?} before any data row"),
                    ));
                }
                continue;
            }
            if line != CSV_HEADER {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected header {CSV_HEADER:?}, found {line:?}"),
                ));
            }
            header_seen = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            // a #-flagged row that parses as data is an invalid point;
            // anything else after # is a comment
            if let Some((f, v)) = parse_csv_fields(rest) {
                rows.push((f, v, false, lineno));
            }
            continue;
        }
        match parse_csv_fields(line) {
            Some((f, v)) => rows.push((f, v, true, lineno)),
            None => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("malformed row {line:?}: expected freq_hz,re,im"),
                ))
            }
        }
    }
    if !header_seen {
        return Err(Error::parse(
            path,
            1,
            format!("empty file: expected header {CSV_HEADER:?}"),
        ));
    }
    build_spectrum(path, rows)
}

fn parse_csv_fields(line: &str) -> Option<(f64, Complex64)> {
    let mut it = line.split(',');
    let f: f64 = it.next()?.trim().parse().ok()?;
    let re: f64 = it.next()?.trim().parse().ok()?;
    let im: f64 = it.next()?.trim().parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((f, Complex64::new(re, im)))
}

fn parse_touchstone(path: &Path, text: &str) -> Result<ComplexSpectrum> {
    let mut rows: Vec<(f64, Complex64, bool, usize)> = Vec::new();
    let mut freq_scale: Option<f64> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('!') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if freq_scale.is_some() {
                return Err(Error::parse(
                    path,
                    lineno,
                    "multiple option lines: Touchstone v1 allows exactly one",
                ));
            }
            freq_scale = Some(parse_touchstone_options(path, lineno, rest)?);
            continue;
        }
        let Some(scale) = freq_scale else {
            return Err(Error::parse(
                path,
                lineno,
                "data before the option line: expected `# HZ S RI R 50` first",
            ));
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                path,
                lineno,
                format!("malformed row {line:?}: expected `freq re im`"),
            ));
        }
        let mut nums = [0.0f64; 3];
        for (slot, field) in nums.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("not a number: {field:?}")))?;
        }
        rows.push((
            nums[0] * scale,
            Complex64::new(nums[1], nums[2]),
            true,
            lineno,
        ));
    }
    if freq_scale.is_none() {
        return Err(Error::parse(
            path,
            1,
            "missing option line: expected `# HZ S RI R 50`",
        ));
    }
    build_spectrum(path, rows)
}

/// Parses the option-line tail after `#`, returning the frequency scale
/// in Hz per file unit. Only `S`-parameter `RI`-format files are
/// supported; the reference resistance is accepted but ignored.
fn parse_touchstone_options(path: &Path, lineno: usize, rest: &str) -> Result<f64> {
    let mut scale = 1e9; // Touchstone's default unit is GHz
    let mut tokens = rest.split_whitespace().peekable();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => scale = 1.0,
            "KHZ" => scale = 1e3,
            "MHZ" => scale = 1e6,
            "GHZ" => scale = 1e9,
            "S" => {}
            "RI" => {}
            "MA" | "DB" => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("unsupported Touchstone format {tok:?}: only RI is supported"),
                ))
            }
            "Y" | "Z" | "H" | "G" => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("unsupported Touchstone parameter {tok:?}: only S is supported"),
                ))
            }
            "R" => {
                let value = tokens.next().ok_or_else(|| {
                    Error::parse(path, lineno, "option `R` must be followed by a resistance")
                })?;
                value.parse::<f64>().map_err(|_| {
                    Error::parse(path, lineno, format!("not a resistance: {value:?}"))
                })?;
            }
            other => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("unsupported Touchstone option {other:?}"),
                ))
            }
        }
    }
    Ok(scale)
}

/// Validates monotonicity and uniformity, then assembles the spectrum.
fn build_spectrum(
    path: &Path,
    rows: Vec<(f64, Complex64, bool, usize)>,
) -> Result<ComplexSpectrum> {
    if rows.is_empty() {
        return Err(Error::parse(path, 1, "no data rows"));
    }
    for pair in rows.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(Error::parse(
                path,
                pair[1].3,
                format!(
                    "frequencies must be strictly increasing: {} Hz after {} Hz",
                    pair[1].0, pair[0].0
                ),
            ));
        }
    }
    let first = rows[0];
    let last = rows[rows.len() - 1];
    let grid = FrequencyGrid::new(first.0, last.0, rows.len())
        .map_err(|e| Error::parse(path, first.3, format!("cannot form a frequency grid: {e}")))?;
    let tolerance = 1e-6 * grid.step_hz() + 1e-3;
    for (i, row) in rows.iter().enumerate() {
        let expected = grid.frequency_hz(i);
        if (row.0 - expected).abs() > tolerance {
            return Err(Error::parse(
                path,
                row.3,
                format!(
                    "non-uniform frequency grid: row {} at {} Hz, expected {} Hz",
                    i + 1,
                    row.0,
                    expected
                ),
            ));
        }
    }
    let values = rows.iter().map(|r| r.1).collect();
    let valid = rows.iter().map(|r| r.2).collect();
    ComplexSpectrum::with_validity(grid, values, valid)
}

/// Writes `body` to `path` via a same-directory temporary file and an
/// atomic rename.
pub(crate) fn atomic_write(path: &Path, body: &str) -> Result<()> {
    let mut tmp: PathBuf = path.to_path_buf();
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::invalid(format!("not a writable file path: {:?}", path.display())))?;
    tmp.set_file_name(format!("{name}.{}.tmp", std::process::id()));
    let write = |p: &Path| -> std::io::Result<()> {
        let mut file = fs::File::create(p)?;
        file.write_all(body.as_bytes())?;
        file.flush()
    };
    write(&tmp).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}
