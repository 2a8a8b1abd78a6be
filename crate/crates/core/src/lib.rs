//! Fowler-Nordheim plot analysis with Extended Murphy-Good field emission
//! theory.
//!
//! The crate takes measured current-voltage data from a field electron
//! emitter, fits the Fowler-Nordheim plot, and extracts the voltage-to-field
//! conversion factor, formal emission area, local current density, decay
//! width and practical brightness under the Schottky-Nordheim barrier. It
//! also predicts total-energy distributions and does the FIM/FEM
//! magnification arithmetic used to compare extracted areas with imaged
//! source areas.
//!
//! Units throughout are eV, V, nm and A. Areas are in nm², current densities
//! in A/nm².
//!
//! ```
//! use emgfe::{extract, fnfit::FnFitResult};
//!
//! let fit = FnFitResult::from_parameters(-19.38, -3329.0, 362.0, 390.0).unwrap();
//! let cfg = extract::ExtractionConfig::new(2.5);
//! let r = extract::definitive(&fit, None, &cfg).unwrap();
//! assert!((r.point.beta - 7.26e-3).abs() < 1e-4);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod emission;
pub mod error;
pub mod extract;
pub mod fimfem;
pub mod fnfit;
pub mod report;
pub mod smf;
pub mod ted;

pub use error::{Error, Result};
pub use extract::{ExtractionConfig, ExtractionResult};
pub use fnfit::{FnFitResult, IvDataset, IvPoint};
pub use report::AnalysisReport;
pub use smf::SmfVariant;
