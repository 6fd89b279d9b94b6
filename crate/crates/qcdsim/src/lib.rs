// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulation toolkit for a qubit coupled to a harmonic oscillator through a
//! qubit-controlled-displacement interaction, in contact with a thermal
//! Markovian environment.
//!
//! The joint state is tracked at the level of its C-Matrix: the 2x2
//! qubit-operator-valued characteristic function chi(beta) = Tr_osc[rho D(beta)].
//! The crate provides
//!
//! - [`model`]: physical parameters, coupling profiles, derived decoherence
//!   rates and experimental platform presets;
//! - [`closed_dynamics`]: the unitary limit, U(t) = D(sigma3 alpha(t));
//! - [`phase_space`]: the open-system C-Matrix solver (analytic off-diagonals,
//!   closed-form / ODE / perturbative diagonals);
//! - [`fock_oracle`]: an independent brute-force reference that integrates the
//!   master equation on a truncated Fock space;
//! - [`observables`]: entanglement witness, projection probabilities, Wigner
//!   transform and the non-classicality metric, plus parameter scans.
//!
//! All quantities are expressed in natural units (hbar = k_B = 1) with rates
//! in units of a user-chosen reference rate.

pub mod closed_dynamics;
pub mod error;
mod exec;
pub mod fmt;
pub mod fock_oracle;
pub mod model;
pub mod observables;
mod ode;
pub mod phase_space;
mod quad;

pub use error::{Error, Result};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;

#[cfg(feature = "parallel")]
/// Configure the size of the global worker pool used for grid solves and
/// parameter scans. Returns an error if a pool was already installed.
pub fn configure_threads(n: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
/// Sequential build: thread configuration is accepted and ignored.
pub fn configure_threads(_n: usize) -> std::result::Result<(), String> {
    Ok(())
}
