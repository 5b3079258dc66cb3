//! Relativistic electron scattering at a space-time modulated potential step.
//!
//! A single interface between two uniform four-potential regions moves at a
//! subluminal velocity `v_m`. An incident positive-energy Dirac electron that
//! overtakes the front scatters into a reflected channel and (at most) one
//! admissible transmitted channel. All channel kinematics, amplitudes, fluxes
//! and Klein-gap thresholds are closed forms; the [`oracle`] module carries
//! independent geometric and root-finding verifiers for every one of them.
//!
//! Units are natural (`hbar = c = 1`) with the electron mass `m = 1`, so
//! energies and momenta are in units of `m` and velocities in units of `c`.
//! Potentials always enter as the products `qV` and `qA`.
//!
//! The crate is `no_std`-compatible: disable default features and enable
//! `libm` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

pub mod boost;
pub mod error;
pub mod kinematics;
pub mod numeric;
pub mod oracle;
pub mod regime;
pub mod scattering;
pub mod thresholds;

pub use error::Error;
pub use kinematics::{
    Branch, ChannelSolution, ChannelStatus, IncidentState, Region, StepProblem,
    TransitionGeometry,
};
pub use regime::{CriticalVelocities, Regime, RegimeLabel};
pub use scattering::{ScatterResult, SpinorRatio};
pub use thresholds::{GapSpec, ThresholdPoint};

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
