//! Raising and lowering (shift) operators for the periodic spin-1/2 XXX
//! Heisenberg and Haldane-Shastry chains.
//!
//! The crate builds both Hamiltonians sector by sector, constructs their
//! eigenstates from analytic amplitude families (plane waves, Bethe
//! permutation sums, the Jastrow product), solves the Bethe equations for
//! real roots, and checks every closed-form energy against a dense
//! exact-diagonalization oracle. A small driven multi-level integrator
//! covers magnetic-resonance transitions between ladder states.
//!
//! Sites are numbered `1..=N`; site `m` lives in bit `m - 1` of a mask and a
//! set bit means the spin is down.

pub mod basis;
pub mod bethe;
mod error;
pub mod hsm;
pub mod models;
pub mod oracle;
pub mod par;
pub mod resonance;
pub mod shift;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use par::Exec;
