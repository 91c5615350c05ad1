//! Exact symbolic engine for twist deformations of universal enveloping
//! algebras, their classical limits and dual-group coordinates.

pub mod bialgebra;
pub mod commands;
pub mod config;
pub mod dual_coords;
pub mod expr;
pub mod lie;
pub mod limit;
pub mod presets;
pub mod linalg;
pub mod render;
pub mod rep;
pub mod report;
pub mod scalar;
pub mod tables;
pub mod twist;
pub mod uea;
