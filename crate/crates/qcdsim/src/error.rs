// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Crate-wide error type.

use crate::C64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid coupling profile: {0}")]
    InvalidProfile(String),

    #[error("unknown platform preset `{0}`")]
    UnknownPlatform(String),

    #[error("preset data line {line}: {msg}")]
    PresetData { line: usize, msg: String },

    #[error("Fock cutoff {cutoff} too small: truncated tail weight {tail:.3e}")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    #[error("truncation breach at cutoff {cutoff}: top-level population {tail:.3e} exceeds {limit:.3e}")]
    TruncationBreach { cutoff: usize, tail: f64, limit: f64 },

    #[error("ODE step size underflow at t = {t}{}", beta.map(|b| format!(", beta = {b}")).unwrap_or_default())]
    StepSizeUnderflow { t: f64, beta: Option<C64> },

    #[error("quadrature did not converge: residual error {err:.3e} after {evals} evaluations")]
    QuadratureNoConverge { err: f64, evals: usize },

    #[error("characteristic function does not decay within probe radius {radius}")]
    NonDecaying { radius: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
