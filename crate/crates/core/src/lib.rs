//! Quasi-eigenvalues, counting asymptotics and finite-element checks for
//! the sloshing problem on triangular prisms whose wall angles are
//! `pi/(2q)` and `pi/(2r)`.

// tests compare against printed table values
#![cfg_attr(test, allow(clippy::approx_constant))]

pub mod config;
pub mod counting;
pub mod edge;
pub mod equidist;
pub mod error;
pub mod exact;
pub mod fem;
pub mod numerics;
pub mod spectrum;
pub mod surface;

pub use config::{mode_wavenumber, validate_config, Corner, DerivedConstants, PrismConfig};
pub use error::{Error, Result};
