//! Central discontinuous Galerkin solver for the Euler equations with static gravity.

pub mod basis;
pub mod cdg1d;
pub mod cdg2d;
pub mod config;
pub mod driver;
pub mod error;
pub mod euler;
pub mod field;
pub mod limiters;
pub mod mesh;
pub mod problems;
pub mod projection;
pub mod quadrature;
pub mod scheme;
pub mod stepper;

pub use error::{CdgError, Result};
