//! Command-line frontend: single-state reports, family and XXZ sweeps as
//! CSV, verification runs as JSON, and SVG plots of CSV columns.

pub mod app;
pub mod config;
pub mod numfmt;
pub mod svg;
pub mod table;

pub use app::{exit, run};
