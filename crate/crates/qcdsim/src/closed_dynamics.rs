// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-system (unitary) evolution. The time evolution operator is a
//! qubit-controlled displacement U(t) = D(sigma3 alpha(t)) with
//! alpha(t) = -i int_0^t g(s) e^{i nu s} ds, so the C-Matrix of a product
//! initial state follows from displacement algebra alone. The global
//! time-ordering phase is not tracked; it cancels in every density-matrix
//! quantity.
//!
//! This module anchors the open-system solver: its output is the exact
//! kappa = Gamma_1 = Gamma_2 = 0 limit of `phase_space`.

use crate::error::{Error, Result};
use crate::model::CouplingProfile;
use crate::phase_space::{CMatrixField, CMatrixInit, GridSpec, Provenance};
use crate::C64;
use std::sync::Arc;

/// Oscillator characteristic function chi_a(beta).
pub type CharFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// alpha(t) = -i int_0^t g(s) e^{i nu s} ds.
///
/// Closed antiderivatives for constant and piecewise profiles; adaptive
/// quadrature (absolute tolerance 1e-10) for sampled ones.
pub fn displacement_amplitude(profile: &CouplingProfile, t: f64) -> Result<C64> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    Ok(-C64::i() * profile.exp_integral(C64::new(0.0, profile.nu()), t)?)
}

/// Closed evolution of a product state (2x2 qubit density matrix times an
/// oscillator characteristic function), evaluable at any phase-space point.
pub struct ClosedEvolution {
    qubit: [[C64; 2]; 2],
    osc: CharFn,
    alpha: C64,
}

/// Validate a 2x2 density matrix: unit trace, Hermitian, positive.
fn check_qubit_state(q: &[[C64; 2]; 2]) -> Result<()> {
    let tr = q[0][0] + q[1][1];
    if (tr - 1.0).norm() > 1e-10 {
        return Err(Error::InvalidParameter(format!("qubit state trace {} != 1", tr)));
    }
    if (q[0][1] - q[1][0].conj()).norm() > 1e-10 || q[0][0].im.abs() > 1e-12 || q[1][1].im.abs() > 1e-12 {
        return Err(Error::InvalidParameter("qubit state is not Hermitian".into()));
    }
    let det = (q[0][0] * q[1][1] - q[0][1] * q[1][0]).re;
    if q[0][0].re < -1e-12 || q[1][1].re < -1e-12 || det < -1e-10 {
        return Err(Error::InvalidParameter("qubit state is not positive".into()));
    }
    Ok(())
}

/// Evolve `qubit (x) osc` for time `t` under the qubit-controlled
/// displacement generated by `profile`.
///
/// Index convention: 0 = e, 1 = g, so `qubit[0][1]` is rho_eg(0).
pub fn evolve_closed(
    qubit: [[C64; 2]; 2],
    osc_charfn: CharFn,
    profile: &CouplingProfile,
    t: f64,
) -> Result<ClosedEvolution> {
    check_qubit_state(&qubit)?;
    if (osc_charfn(C64::new(0.0, 0.0)) - 1.0).norm() > 1e-10 {
        return Err(Error::InvalidParameter("oscillator characteristic function must be 1 at the origin".into()));
    }
    let alpha = displacement_amplitude(profile, t)?;
    Ok(ClosedEvolution { qubit, osc: osc_charfn, alpha })
}

impl ClosedEvolution {
    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    /// The four C-Matrix components [ee, gg, eg, ge] at `beta`.
    ///
    /// Conjugating chi_a by D(+-alpha) displaces diagonal components in phase
    /// only and off-diagonal components in argument:
    ///   chi_ee(b) = q_ee chi_a(b) e^{a* b - a b*}
    ///   chi_gg(b) = q_gg chi_a(b) e^{a b* - a* b}
    ///   chi_eg(b) = q_eg chi_a(b + 2a)
    ///   chi_ge(b) = q_ge chi_a(b - 2a)
    pub fn eval(&self, beta: C64) -> [C64; 4] {
        let a = self.alpha;
        let phase = a * beta.conj() - a.conj() * beta; // purely imaginary
        let ee = self.qubit[0][0] * (self.osc)(beta) * (-phase).exp();
        let gg = self.qubit[1][1] * (self.osc)(beta) * phase.exp();
        let eg = self.qubit[0][1] * (self.osc)(beta + 2.0 * a);
        let ge = self.qubit[1][0] * (self.osc)(beta - 2.0 * a);
        [ee, gg, eg, ge]
    }

    /// Sample onto a grid.
    pub fn sample(&self, grid: &GridSpec, t: f64) -> Result<CMatrixField> {
        let points = grid.points()?;
        let values = points.iter().map(|&b| self.eval(b)).collect();
        Ok(CMatrixField { grid: grid.clone(), t, values, provenance: Provenance::Analytic })
    }
}

/// Thermal characteristic function e^{-(N_a + 1/2)|beta|^2} as a [`CharFn`].
pub fn thermal_charfn(na: f64) -> CharFn {
    let delta = na + 0.5;
    Arc::new(move |b: C64| C64::new((-delta * b.norm_sqr()).exp(), 0.0))
}

/// |+><+| qubit matrix.
pub fn plus_state() -> [[C64; 2]; 2] {
    let h = C64::new(0.5, 0.0);
    [[h, h], [h, h]]
}

/// Shorthand: closed evolution from |+><+| (x) thermal.
pub fn plus_thermal_closed(na: f64, profile: &CouplingProfile, t: f64) -> Result<ClosedEvolution> {
    evolve_closed(plus_state(), thermal_charfn(na), profile, t)
}

/// Initial-condition view of an evolved closed state, for feeding the
/// open-system solver snapshots of unitary evolutions.
pub fn as_cmatrix_init(ev: &ClosedEvolution) -> CMatrixInit {
    let q = ev.qubit;
    let a = ev.alpha;
    let osc = ev.osc.clone();
    let o1 = osc.clone();
    let o2 = osc.clone();
    let o3 = osc.clone();
    CMatrixInit::from_components(
        Arc::new(move |b: C64| q[0][0] * o1(b) * (-(a * b.conj() - a.conj() * b)).exp()),
        Arc::new(move |b: C64| q[1][1] * o2(b) * (a * b.conj() - a.conj() * b).exp()),
        Arc::new(move |b: C64| q[0][1] * o3(b + 2.0 * a)),
        Arc::new(move |b: C64| q[1][0] * osc(b - 2.0 * a)),
    )
}
