//! Solvers for the quantum Rabi model `H = ω a†a + (Ω/2) σx + g σz (a + a†)`.
//!
//! The crate carries a photon-number dependent variational method for the
//! ground state and the low excited states, the closed-form baselines it is
//! compared against (RWA, AA, GRWA, GVM), and a truncated Fock-basis exact
//! diagonalization used as the reference.
//!
//! Everything here is `no_std` with `alloc`; IO, CSV and the command line
//! live in the `rabi-cli` crate.

#![no_std]

extern crate alloc;

pub mod approx;
pub mod exact;
pub mod linalg;
pub mod model;
pub mod optimize;
pub mod specfun;
pub mod states;
pub mod varexcited;
pub mod varground;

mod error;
pub(crate) mod math;

pub use error::Error;
pub use model::{DetuningClass, ModelParams, Parity, Sign, SpinAxis, SpinFockLabel};
