//! Wave-packet collapse and revival dynamics.
//!
//! Two families of experiments live here:
//!
//! * Rydberg wave packets in hydrogen ([`rydberg`]): Gaussian-weighted
//!   superpositions of circular states, their autocorrelation and the
//!   classical / revival / superrevival hierarchy of time scales.
//! * A spin-1/2 particle in a spherical harmonic oscillator with a constant
//!   `l·σ` coupling ([`basis`], [`states`], [`evolution`], [`observables`],
//!   [`density`]). The propagator factorizes into an oscillator part and a
//!   closed-form spin-orbit part, which drives the spin-orbit pendulum for
//!   circular packets and the vortex-ring spreading of linear ones.
//!
//! [`experiments`] wires these into runnable experiments that write CSV and
//! raster files.
//!
//! Units: oscillator units (`ħ = M = ω = 1`) for the spinor problem, atomic
//! units for the Rydberg problem.

pub mod basis;
pub mod density;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod io;
pub mod observables;
pub mod quadrature;
pub mod rydberg;
pub mod states;

pub use num_complex::Complex64 as C64;

pub use basis::{BasisIndex, LsBlock, Spin, Truncation};
pub use density::{DensityGrid, GridSpec, TorusMetrics};
pub use error::{Error, Result};
pub use evolution::{EvolutionParams, LsCoefficients};
pub use observables::SpinObservables;
pub use rydberg::{RydbergPacket, TimeScales};
pub use states::{SpinDirection, SpinorState};
