//! Minkowski geometry with a conventional signal speed.
//!
//! - [`minkowski`]: inner product, interval and causal classes for any `c`.
//! - [`boost`]: affine Lorentz maps `r ↦ αLr + a`, the x-axis boost and the
//!   conformal split `M = αL`.
//! - [`cone`]: lines and planes of each causal class rebuilt from null cones.
//! - [`fit`]: hypothesis checks on sampled maps and recovery of `(α, L, a)`.
//! - [`radar`]: light-clock radar coordinates and the boost they imply.
//! - [`generate`], [`io`], [`cli`]: sample files and the command-line tool.

pub mod boost;
pub mod cli;
pub mod cone;
pub mod error;
pub mod fit;
pub mod generate;
pub mod io;
pub mod minkowski;
pub mod radar;

pub use boost::{boost_x, AffineLorentzMap, BoostParams};
pub use error::{Error, Result};
pub use fit::{recover_lorentz, FitConfig, FitReport, SampleSet};
pub use minkowski::{CausalClass, Event, Metric};
