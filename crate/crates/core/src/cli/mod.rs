//! Configuration, output files and the self-test used by the `sipmm` binary.

pub mod check;
pub mod config;
pub mod csv;
pub mod manifest;
pub mod plot;

pub use config::{parse_config, ConfigEntries, Origin, ParsedConfig, Preset};
pub use csv::{emit_csv, render_csv};
pub use manifest::RunManifest;
pub use plot::{emit_plot, render_svg};
