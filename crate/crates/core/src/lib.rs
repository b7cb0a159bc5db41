//! Simulation and verification of superradiant decoherence for collective
//! spin states.
//!
//! A register of N two-level atoms coupled to a damped cavity mode behaves,
//! after adiabatic elimination of the mode, as a single spin j = N/2 damped
//! by the collective lowering operator. This crate provides:
//!
//! - [`spinalg`]: Dicke-basis angular-momentum algebra, coherent states,
//!   rotations;
//! - [`dynamics`]: the dissipative propagator (band-structured adaptive
//!   Runge–Kutta with a dense superoperator-exponential cross-check) and the
//!   dispersive nonlinear phase evolution;
//! - [`cats`]: two-component cat states and the three-step preparation of the
//!   long-lived symmetric ones;
//! - [`observables`]: coherence norms, Bloch vectors, decay-rate fits;
//! - [`analytics`]: closed-form decay laws used as independent oracles;
//! - [`cli`]: the batch runner behind the `spincat` binary.

pub mod analytics;
pub mod cats;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod observables;
pub mod spinalg;

pub use error::{Error, Result};
