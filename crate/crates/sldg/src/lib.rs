//! Positivity-preserving semi-Lagrangian discontinuous Galerkin solver
//! for the 1+1 Vlasov-Poisson system.
//!
//! The library is organized around a 1D shift-and-project advection
//! kernel ([`advect1d`]) applied in Strang or fourth-order split sweeps
//! ([`sl2d`], [`splitting`]), a local DG Poisson solve ([`poisson`]),
//! high-order electric-field time averaging ([`moments`]), and a
//! rescaling limiter that keeps cell averages of the distribution
//! function nonnegative ([`limiter`]).

pub mod advect1d;
pub mod basis;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod gauss;
pub mod limiter;
pub mod mesh;
pub mod moments;
pub mod output;
pub mod poisson;
pub mod scenario;
pub mod sl2d;
pub mod splitting;

pub use error::{Error, Result};
