// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Cross-validation of the analytic/ODE phase-space solver against the
//! brute-force truncated-Fock master-equation integration, across coupling
//! profiles, decoherence modes and initial states.

use qcdsim::closed_dynamics;
use qcdsim::fock_oracle::{self, JointFockState};
use qcdsim::model::{CouplingProfile, RateInputs, RateMode, Segment, SystemConfig};
use qcdsim::phase_space::{solve_cmatrix_at, CMatrixInit, SolveMethod};
use qcdsim::C64;

fn beta_samples() -> Vec<C64> {
    let mut pts = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let x = -2.0 + i as f64;
            let y = -2.0 + j as f64;
            pts.push(C64::new(x, y));
        }
    }
    pts
}

fn max_solver_oracle_diff(
    config: &SystemConfig,
    init: &CMatrixInit,
    state: &JointFockState,
    t: f64,
    betas: &[C64],
) -> f64 {
    let mut worst: f64 = 0.0;
    for &b in betas {
        let solved = solve_cmatrix_at(config, init, t, b, SolveMethod::Auto).unwrap();
        let extracted = fock_oracle::cmatrix_extract(state, b);
        for k in 0..4 {
            worst = worst.max((solved[k] - extracted[k]).norm());
        }
    }
    worst
}

#[test]
fn dephasing_scenario_matches_oracle() {
    // Constant coupling, pure dephasing (the worked-scenario rates).
    let profile = CouplingProfile::constant(1.0, 0.0);
    let rates = RateInputs { kappa: 0.01, gamma1: 0.0, gamma2: 0.01, na: 1.0, nq: 0.0, mode: RateMode::Standard };
    let config = SystemConfig::new(profile, rates).unwrap();
    let init = CMatrixInit::plus_thermal(1.0);
    let cutoff = fock_oracle::suggest_cutoff(1.0, 1.0);
    let state0 = JointFockState::plus_thermal(1.0, cutoff).unwrap();
    let state = fock_oracle::integrate(&state0, &config, 1.0).unwrap();
    assert!((state.trace() - 1.0).norm() < 1e-9, "trace drift {}", state.trace());
    assert!(state.hermiticity_defect() < 1e-9);
    assert!(state.min_eigenvalue() > -1e-9, "positivity drift {}", state.min_eigenvalue());
    let diff = max_solver_oracle_diff(&config, &init, &state, 1.0, &beta_samples());
    assert!(diff < 1e-6, "max deviation {diff:.3e}");
}

#[test]
fn coupled_diagonals_with_heating_match_oracle() {
    // N_q > 0 drives both heating and cooling: the diagonal ODE path.
    let profile = CouplingProfile::constant(1.0, 0.0);
    let rates = RateInputs { kappa: 0.01, gamma1: 0.05, gamma2: 0.0, na: 1.0, nq: 0.3, mode: RateMode::Standard };
    let config = SystemConfig::new(profile.clone(), rates).unwrap();
    let init = CMatrixInit::plus_thermal(1.0);
    let cutoff = fock_oracle::suggest_cutoff_for(&config, 1.0);
    let state0 = JointFockState::plus_thermal(1.0, cutoff).unwrap();
    let state = fock_oracle::integrate(&state0, &config, 1.0).unwrap();
    let diff = max_solver_oracle_diff(&config, &init, &state, 1.0, &beta_samples());
    assert!(diff < 1e-6, "max deviation {diff:.3e}");
}

#[test]
fn excited_initial_state_with_heating_matches_oracle() {
    // chi_gg(., 0) = 0: the unnormalized diagonal formulation must cope with
    // vanishing initial data.
    let profile = CouplingProfile::constant(0.8, 0.0);
    let rates = RateInputs { kappa: 0.02, gamma1: 0.08, gamma2: 0.01, na: 0.5, nq: 0.2, mode: RateMode::Standard };
    let config = SystemConfig::new(profile, rates).unwrap();
    let init = CMatrixInit::excited_thermal(0.5);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let cutoff = fock_oracle::suggest_cutoff_for(&config, 1.2);
    let osc = fock_oracle::thermal_state(0.5, cutoff).unwrap();
    let state0 = JointFockState::product([[one, zero], [zero, zero]], &osc);
    let state = fock_oracle::integrate(&state0, &config, 1.2).unwrap();
    let diff = max_solver_oracle_diff(&config, &init, &state, 1.2, &beta_samples());
    assert!(diff < 1e-6, "max deviation {diff:.3e}");
}

#[test]
fn exchanged_qed_mode_matches_oracle() {
    // The swapped decay/dephasing structure of the driven cavity platforms.
    let profile = CouplingProfile::constant(1.0, 0.0);
    let rates = RateInputs { kappa: 0.01, gamma1: 0.02, gamma2: 0.005, na: 0.8, nq: 0.15, mode: RateMode::ExchangedQed };
    let config = SystemConfig::new(profile, rates).unwrap();
    let init = CMatrixInit::plus_thermal(0.8);
    let cutoff = fock_oracle::suggest_cutoff_for(&config, 1.0);
    let state0 = JointFockState::plus_thermal(0.8, cutoff).unwrap();
    let state = fock_oracle::integrate(&state0, &config, 1.0).unwrap();
    let diff = max_solver_oracle_diff(&config, &init, &state, 1.0, &beta_samples());
    assert!(diff < 1e-6, "max deviation {diff:.3e}");
}

#[test]
fn modulated_coupling_matches_oracle() {
    // nu != 0 exercises the oscillatory kernel integrals end to end.
    let profile = CouplingProfile::constant(1.0, 2.0);
    let rates = RateInputs { kappa: 0.02, gamma1: 0.0, gamma2: 0.01, na: 0.5, nq: 0.0, mode: RateMode::Standard };
    let config = SystemConfig::new(profile, rates).unwrap();
    let init = CMatrixInit::plus_thermal(0.5);
    let cutoff = fock_oracle::suggest_cutoff_for(&config, 1.0);
    let state0 = JointFockState::plus_thermal(0.5, cutoff).unwrap();
    let state = fock_oracle::integrate(&state0, &config, 1.0).unwrap();
    let diff = max_solver_oracle_diff(&config, &init, &state, 1.0, &beta_samples());
    assert!(diff < 1e-6, "max deviation {diff:.3e}");
}

#[test]
fn piecewise_profile_open_system_matches_oracle() {
    let profile = CouplingProfile::piecewise(
        vec![
            Segment { start: 0.0, end: 0.5, amplitude: 1.0 },
            Segment { start: 0.7, end: 1.2, amplitude: -0.6 },
        ],
        0.5,
    )
    .unwrap();
    let rates = RateInputs { kappa: 0.03, gamma1: 0.04, gamma2: 0.0, na: 0.5, nq: 0.0, mode: RateMode::Standard };
    let config = SystemConfig::new(profile, rates).unwrap();
    let init = CMatrixInit::plus_thermal(0.5);
    let cutoff = fock_oracle::suggest_cutoff_for(&config, 1.2).max(40);
    let state0 = JointFockState::plus_thermal(0.5, cutoff).unwrap();
    let state = fock_oracle::integrate(&state0, &config, 1.2).unwrap();
    let diff = max_solver_oracle_diff(&config, &init, &state, 1.2, &beta_samples());
    assert!(diff < 1e-6, "max deviation {diff:.3e}");
}

#[test]
fn closed_system_oracle_matches_unitary_algebra() {
    // With all rates zero the Lindblad integration must reduce to the
    // controlled-displacement conjugation.
    let profile = CouplingProfile::constant(1.0, 0.0);
    let rates = RateInputs { kappa: 0.0, gamma1: 0.0, gamma2: 0.0, na: 0.0, nq: 0.0, mode: RateMode::Standard };
    let config = SystemConfig::new(profile.clone(), rates).unwrap();
    let cutoff = fock_oracle::suggest_cutoff_for(&config, 0.5);
    let state0 = JointFockState::plus_thermal(0.0, cutoff).unwrap();
    let state = fock_oracle::integrate(&state0, &config, 0.5).unwrap();
    let alpha = closed_dynamics::displacement_amplitude(&profile, 0.5).unwrap();
    let displaced = fock_oracle::apply_controlled_displacement(&state0, alpha);
    for &b in &beta_samples() {
        let a = fock_oracle::cmatrix_extract(&state, b);
        let d = fock_oracle::cmatrix_extract(&displaced, b);
        for k in 0..4 {
            assert!((a[k] - d[k]).norm() < 1e-8);
        }
    }
}

#[test]
fn scenario_state_builder_matches_lindblad_evolution() {
    // The displaced-thermal closed-form state equals the integrated state.
    let kappa = 0.01;
    let gamma = 0.01;
    let na = 1.0;
    let t = 1.0;
    let profile = CouplingProfile::constant(1.0, 0.0);
    let rates = RateInputs { kappa, gamma1: 0.0, gamma2: gamma, na, nq: 0.0, mode: RateMode::Standard };
    let config = SystemConfig::new(profile, rates).unwrap();
    let cutoff = fock_oracle::suggest_cutoff_for(&config, t);
    let state0 = JointFockState::plus_thermal(na, cutoff).unwrap();
    let evolved = fock_oracle::integrate(&state0, &config, t).unwrap();
    let pt = qcdsim::observables::scenario(1.0, kappa, gamma, na, t);
    let built = fock_oracle::scenario_state(pt.alpha0, pt.w, na, cutoff).unwrap();
    for &b in &beta_samples() {
        let a = fock_oracle::cmatrix_extract(&evolved, b);
        let d = fock_oracle::cmatrix_extract(&built, b);
        for k in 0..4 {
            assert!((a[k] - d[k]).norm() < 1e-6, "beta {b} component {k}: {:.3e}", (a[k] - d[k]).norm());
        }
    }
}

#[test]
fn perturbative_method_tracks_oracle_at_small_rates() {
    let profile = CouplingProfile::constant(1.0, 0.0);
    let rates = RateInputs { kappa: 0.01, gamma1: 0.05, gamma2: 0.0, na: 0.5, nq: 0.1, mode: RateMode::Standard };
    let config = SystemConfig::new(profile, rates).unwrap();
    let init = CMatrixInit::plus_thermal(0.5);
    let t = 1.0; // Gamma_c t = 0.055: well inside the validity window
    let cutoff = fock_oracle::suggest_cutoff_for(&config, t);
    let state0 = JointFockState::plus_thermal(0.5, cutoff).unwrap();
    let state = fock_oracle::integrate(&state0, &config, t).unwrap();
    let mut worst: f64 = 0.0;
    for &b in &beta_samples() {
        let solved = solve_cmatrix_at(&config, &init, t, b, SolveMethod::Perturbative).unwrap();
        let extracted = fock_oracle::cmatrix_extract(&state, b);
        for k in 0..4 {
            worst = worst.max((solved[k] - extracted[k]).norm());
        }
    }
    // First-order error O((Gamma t)^2) ~ 3e-3 dominates the budget here.
    assert!(worst < 5e-3, "max deviation {worst:.3e}");
}
