//! Batch front end for the pseudo-Hermitian network simulator: strict JSON
//! experiment configs, figure-reproduction presets, CSV tables, and SVG
//! plots.

pub mod config;
pub mod error;
pub mod run;
pub mod svg;
pub mod table;

pub use error::{CliError, Result};

/// Counter-propagating packet preset (packets on opposite rungs with
/// opposite momenta; constant total norm).
pub const FIG2A_JSON: &str = include_str!("../presets/fig2a.json");
/// Co-located packet preset (equal rungs and momenta; breathing norm).
pub const FIG2B_JSON: &str = include_str!("../presets/fig2b.json");
/// Ladder model preset for the dispersion table.
pub const SPECTRUM_JSON: &str = include_str!("../presets/spectrum.json");
/// Ladder model preset for the commutator (Gram) table.
pub const GRAM_JSON: &str = include_str!("../presets/gram.json");
