//! The `twsense` command-line interface.
//!
//! Six workflows over spectrum files and scenario JSON:
//!
//! * `simulate <scenario> -o out` — reflection spectrum of the scenario
//!   stack (plus a `.magphase.csv` companion next to every spectrum
//!   output).
//! * `synth <scenario> --r-true file --seed N -o dir` — raw/background/
//!   metal measurement triple manufactured through the scenario's
//!   instrument model.
//! * `calibrate --raw --background --metal -o out` — recover the true
//!   reflection coefficient from a measurement triple.
//! * `fit --spectrum --thickness --out` — slab permittivity fit; writes
//!   a JSON result and prints a summary.
//! * `contrast --a --ref -o out` — pointwise difference of two spectra.
//! * `range --pt --pdmin --gain-db --freq-ghz` — Friis range budget.
//!
//! Exit codes: 0 success, 2 usage error (bad flags/units, reported by the
//! parser), 1 computation or file error. Numeric flags accept bare SI
//! values or unit-tagged strings (`"1.4 in"`, `"29.98 GHz"`, `"0 dBm"`).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::analysis::contrast_spectrum;
use crate::calibration::{apply_calibration, synthesize_measurement, CalibrationSet};
use crate::error::{Error, Result};
use crate::fit::{default_fit_starts, fit_slab_permittivity};
use crate::friis::{friis_range, RangeBudget};
use crate::io::{atomic_write, read_spectrum, write_magnitude_phase, write_spectrum};
use crate::scenario::Scenario;
use crate::spectrum::ComplexSpectrum;
use crate::stack::stack_reflection;
use crate::units;
use crate::wave::{wavenumber, SPEED_OF_LIGHT};

#[derive(Debug, Parser)]
#[command(
    name = "twsense",
    version,
    about = "Layered-wall reflection simulation, calibration, and inversion"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate the reflection spectrum of a scenario's layer stack
    Simulate {
        /// Scenario file (JSON)
        scenario: PathBuf,
        /// Output spectrum (.csv or .s1p); a .magphase.csv companion is
        /// written next to it
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Synthesize a raw/background/metal measurement triple
    Synth {
        /// Scenario file (JSON) providing the grid and instrument model
        scenario: PathBuf,
        /// True reflection spectrum to embed (.csv or .s1p)
        #[arg(long = "r-true")]
        r_true: PathBuf,
        /// Noise generator seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for raw.csv, background.csv, metal.csv
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Recover the true reflection coefficient from a measurement triple
    Calibrate {
        /// Raw measurement with the structure in place
        #[arg(long)]
        raw: PathBuf,
        /// Background (empty-scene) measurement
        #[arg(long)]
        background: PathBuf,
        /// Metal-plate reference measurement
        #[arg(long)]
        metal: PathBuf,
        /// Output spectrum (.csv or .s1p)
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fit slab permittivity to a reflection spectrum
    Fit {
        /// Measured reflection spectrum (.csv or .s1p)
        #[arg(long)]
        spectrum: PathBuf,
        /// Slab thickness (meters, or tagged: "1.4 in", "3.5 cm")
        #[arg(long, value_parser = units::parse_length_m)]
        thickness: f64,
        /// JSON output path for the fit result
        #[arg(long)]
        out: PathBuf,
    },
    /// Pointwise difference of two spectra (a minus reference)
    Contrast {
        /// Spectrum under test
        #[arg(long)]
        a: PathBuf,
        /// Reference spectrum to subtract
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Output spectrum (.csv or .s1p)
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Friis range budget: maximum range with a detectable return
    Range {
        /// Transmit power (watts, or tagged: "10 mW", "0 dBm")
        #[arg(long, value_parser = units::parse_power_w)]
        pt: f64,
        /// Minimum detectable power (watts, or tagged units)
        #[arg(long, value_parser = units::parse_power_w)]
        pdmin: f64,
        /// Antenna gain in dB
        #[arg(long = "gain-db", value_parser = units::parse_gain_linear_from_db_flag)]
        gain: f64,
        /// Operating frequency in GHz (or tagged: "29.98 GHz")
        #[arg(long = "freq-ghz", value_parser = units::parse_frequency_ghz_flag)]
        freq_hz: f64,
    },
}

/// Parses `argv` and runs; usage errors exit 2 via the parser, runtime
/// errors land on stderr with exit 1.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { scenario, output } => simulate(&scenario, &output),
        Command::Synth {
            scenario,
            r_true,
            seed,
            output,
        } => synth(&scenario, &r_true, seed, &output),
        Command::Calibrate {
            raw,
            background,
            metal,
            output,
        } => calibrate(&raw, &background, &metal, &output),
        Command::Fit {
            spectrum,
            thickness,
            out,
        } => fit(&spectrum, thickness, &out),
        Command::Contrast {
            a,
            reference,
            output,
        } => contrast(&a, &reference, &output),
        Command::Range {
            pt,
            pdmin,
            gain,
            freq_hz,
        } => range(pt, pdmin, gain, freq_hz),
    }
}

/// Writes the spectrum plus its `.magphase.csv` companion.
fn write_spectrum_outputs(spectrum: &ComplexSpectrum, path: &Path) -> Result<()> {
    write_spectrum(spectrum, path)?;
    write_magnitude_phase(spectrum, &path.with_extension("magphase.csv"))
}

fn simulate(scenario_path: &Path, output: &Path) -> Result<()> {
    let scenario = Scenario::load(scenario_path)?;
    let (r, _) = stack_reflection(scenario.stack(), scenario.grid())?;
    let r = match scenario.range_offset_m() {
        None => r,
        Some(range_m) => {
            // round-trip standoff phase e^{-j 2 k R}
            let values = r
                .points()
                .map(|(f, v, _)| {
                    Ok(v * Complex64::from_polar(1.0, -2.0 * wavenumber(f)? * range_m))
                })
                .collect::<Result<Vec<_>>>()?;
            ComplexSpectrum::with_validity(*r.grid(), values, r.validity().to_vec())?
        }
    };
    write_spectrum_outputs(&r, output)?;
    println!(
        "wrote {} points ({:.6e} Hz to {:.6e} Hz) to {}",
        r.len(),
        r.grid().start_hz(),
        r.grid().stop_hz(),
        output.display()
    );
    Ok(())
}

fn synth(scenario_path: &Path, r_true_path: &Path, seed: u64, out_dir: &Path) -> Result<()> {
    let scenario = Scenario::load(scenario_path)?;
    let r_true = read_spectrum(r_true_path)?;
    if r_true.grid() != scenario.grid() {
        return Err(Error::invalid(format!(
            "--r-true {}: frequency grid does not match the scenario grid \
             ({} points, {:.6e} Hz to {:.6e} Hz)",
            r_true_path.display(),
            scenario.grid().len(),
            scenario.grid().start_hz(),
            scenario.grid().stop_hz(),
        )));
    }
    let model = scenario.instrument_model()?;
    let set = synthesize_measurement(&r_true, &model, seed)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    for (spectrum, name) in [
        (set.raw(), "raw.csv"),
        (set.background(), "background.csv"),
        (set.metal(), "metal.csv"),
    ] {
        write_spectrum_outputs(spectrum, &out_dir.join(name))?;
    }
    println!(
        "wrote raw.csv, background.csv, metal.csv ({} points each, seed {}) to {}",
        r_true.len(),
        seed,
        out_dir.display()
    );
    Ok(())
}

fn calibrate(raw: &Path, background: &Path, metal: &Path, output: &Path) -> Result<()> {
    let set = CalibrationSet::new(
        read_spectrum(raw)?,
        read_spectrum(background)?,
        read_spectrum(metal)?,
    )
    .map_err(|e| match e {
        Error::GridMismatch => Error::invalid(format!(
            "frequency grids of {}, {} and {} do not match",
            raw.display(),
            background.display(),
            metal.display()
        )),
        other => other,
    })?;
    let r = apply_calibration(&set)?;
    write_spectrum_outputs(&r, output)?;
    println!(
        "wrote {} calibrated points ({} valid) to {}",
        r.len(),
        r.valid_count(),
        output.display()
    );
    Ok(())
}

fn fit(spectrum_path: &Path, thickness_m: f64, out: &Path) -> Result<()> {
    let spectrum = read_spectrum(spectrum_path)?;
    let result = fit_slab_permittivity(&spectrum, thickness_m, &default_fit_starts())?;
    let mut json = serde_json::to_string_pretty(&result)
        .map_err(|e| Error::invalid(format!("cannot serialize fit result: {e}")))?;
    json.push('\n');
    atomic_write(out, &json)?;
    println!("eps_real = {}", result.eps_real);
    println!("loss_tangent = {}", result.loss_tangent);
    println!("residual_rms = {:e}", result.residual_rms);
    println!(
        "converged after {} iterations from start ({}, {})",
        result.iterations, result.start_point_used.0, result.start_point_used.1
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn contrast(a: &Path, reference: &Path, output: &Path) -> Result<()> {
    let sa = read_spectrum(a)?;
    let sr = read_spectrum(reference)?;
    let diff = contrast_spectrum(&sa, &sr).map_err(|e| match e {
        Error::GridMismatch => Error::invalid(format!(
            "frequency grids of {} and {} do not match",
            a.display(),
            reference.display()
        )),
        other => other,
    })?;
    write_spectrum_outputs(&diff, output)?;
    let rms = (diff
        .points()
        .filter(|(_, _, ok)| *ok)
        .map(|(_, v, _)| v.norm_sqr())
        .sum::<f64>()
        / diff.valid_count().max(1) as f64)
        .sqrt();
    println!(
        "wrote {} contrast points to {} (rms contrast {:e})",
        diff.len(),
        output.display(),
        rms
    );
    Ok(())
}

fn range(pt_w: f64, pdmin_w: f64, gain: f64, freq_hz: f64) -> Result<()> {
    if !(freq_hz.is_finite() && freq_hz > 0.0) {
        return Err(Error::invalid(format!(
            "--freq-ghz must be finite and > 0, got {freq_hz} Hz"
        )));
    }
    let wavelength_m = SPEED_OF_LIGHT / freq_hz;
    let budget = RangeBudget::new(pt_w, pdmin_w, gain, wavelength_m)?;
    let r = friis_range(&budget);
    println!("R = {r} m");
    Ok(())
}
