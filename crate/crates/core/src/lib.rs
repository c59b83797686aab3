//! Standing charge/current waves on the unit ring.
//!
//! * [`spectral`]: periodic wave-equation solutions, their induced current
//!   and the four standing-wave charge/current pairs.
//! * [`flow`]: continuity-preserving extension of ring sources into a thin
//!   annular shell, planar circular flows and radial flow reconstruction.
//! * [`fields`], [`farfield`], [`wallis`]: retarded (Jefimenko) fields by
//!   direct quadrature, the far-field basis integrals and trigonometric
//!   moment tables.
//! * [`radiation`], [`thermal`]: Poynting flux through spheres, per-cycle
//!   radiated energy, and the current/charge ratio used as a temperature.
//!
//! Units are rescaled so that `eps0 = mu0 = 1` and the ring has radius 1.

pub mod error;
pub mod farfield;
pub mod fields;
pub mod flow;
pub mod quadrature;
pub mod radiation;
pub mod source;
pub mod spectral;
pub mod thermal;
pub mod wallis;

pub use error::{Error, Result};
pub use source::RingSource;

pub type Vec3 = nalgebra::Vector3<f64>;

/// Default signal speed in rescaled units.
pub const DEFAULT_C: f64 = 10.0;

/// Crate version, recorded in machine-readable outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
