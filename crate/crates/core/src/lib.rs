//! Desk-scale toolkit for Ka-band through-wall sensing studies.
//!
//! The crate simulates normal-incidence reflection from layered walls
//! (global boundary matching and an overflow-free recursive route),
//! recovers reflection coefficients from raw/background/metal measurement
//! triples, fits slab permittivity to reflection spectra, ranks candidate
//! materials hidden between walls, and evaluates Friis range budgets. A
//! command-line binary (`twsense`) wraps the file-level workflows.
//!
//! ```
//! use num_complex::Complex64;
//! use twsense::slab::slab_reflection;
//!
//! let eps = Complex64::new(12.4, -12.4 * 0.003);
//! let r = slab_reflection(eps, 1.4 * 0.0254, 30e9).unwrap();
//! assert!(r.norm() <= 1.0);
//! ```

pub mod error;
pub mod material;
pub mod spectrum;
pub mod wave;

mod linalg;

pub mod analysis;
pub mod calibration;
pub mod cli;
pub mod fit;
pub mod friis;
pub mod io;
pub mod sandwich;
pub mod scenario;
pub mod slab;
pub mod stack;
pub mod units;

pub use error::{Error, Result};
pub use material::{Layer, Material, Stack};
pub use spectrum::{ComplexSpectrum, FrequencyGrid};
