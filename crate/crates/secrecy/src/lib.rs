//! Experiment harness around `secrecy-core`: configuration files, parameter
//! sweeps, Monte Carlo validation, figure presets and CSV/JSON/SVG output.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod figures;
pub mod output;
pub mod plot;

pub use config::{RawConfig, Settings};
pub use experiment::{Point, Row};
