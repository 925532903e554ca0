//! Sweep, convergence, and figure-dataset drivers behind the `nvrotor`
//! command-line tool. Everything writes deterministic CSV: fixed column
//! order, fixed 12-significant-digit float formatting, grid-order rows.

pub mod config;
pub mod converge;
pub mod csv;
pub mod figures;
pub mod sweep;

pub use config::{ConvergeConfig, FigureTag, GridSpec, SweepConfig};
