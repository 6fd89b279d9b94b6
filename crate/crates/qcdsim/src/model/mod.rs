// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters: coupling profiles, bath rates, derived decoherence
//! rates, thermal occupations and experimental platform presets.
//!
//! Natural units (hbar = k_B = 1) throughout; every rate is expressed in
//! units of a user-chosen reference rate.

mod presets;
mod profile;

pub use presets::{platform_preset, DimensionlessQuote, PlatformPreset, RawParam, PRESET_NAMES};
pub use profile::{CouplingProfile, Segment};

use crate::error::{Error, Result};
use crate::C64;

/// Decoherence structure of the master equation.
///
/// `Standard` is the bare thermal model; `ExchangedQed` is the structure left
/// after the strong-driving frame reductions of the cavity/circuit platforms,
/// where the roles of decay and dephasing rates are swapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMode {
    Standard,
    ExchangedQed,
}

/// Raw bath couplings and thermal occupations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInputs {
    /// Oscillator-bath coupling kappa.
    pub kappa: f64,
    /// Qubit excitation-exchange rate Gamma_1.
    pub gamma1: f64,
    /// Qubit pure-dephasing rate Gamma_2.
    pub gamma2: f64,
    /// Oscillator thermal occupation N_a.
    pub na: f64,
    /// Qubit thermal occupation N_q.
    pub nq: f64,
    pub mode: RateMode,
}

impl RateInputs {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa", self.kappa),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("Na", self.na),
            ("Nq", self.nq),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Rates appearing in the decomposed C-Matrix equations, always recomputed
/// from [`RateInputs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRates {
    /// Total qubit dephasing rate gamma.
    pub gamma: f64,
    /// Cooling rate Gamma_c.
    pub gamma_c: f64,
    /// Heating rate Gamma_h.
    pub gamma_h: f64,
    /// Delta = N_a + 1/2.
    pub delta: f64,
    /// Transformed rate gamma_1 (exchanged-qed mode only).
    pub gamma1_eff: Option<f64>,
    /// Transformed rate gamma_2 (exchanged-qed mode only).
    pub gamma2_eff: Option<f64>,
}

/// Map raw rates onto the dephasing / cooling / heating rates of the
/// C-Matrix equations.
///
/// Standard mode: gamma = Gamma_1 (N_q + 1/2) + Gamma_2,
/// Gamma_c = Gamma_1 (N_q + 1), Gamma_h = Gamma_1 N_q.
/// Exchanged-qed mode: gamma_1 = Gamma_1 (N_q + 1/2),
/// gamma_2 = Gamma_1/2 (N_q + 1/2) + Gamma_2, gamma = gamma_1 + gamma_2 and
/// Gamma_c = Gamma_h = gamma_2.
pub fn derive_rates(rates: &RateInputs) -> Result<DerivedRates> {
    rates.validate()?;
    let delta = rates.na + 0.5;
    match rates.mode {
        RateMode::Standard => Ok(DerivedRates {
            gamma: rates.gamma1 * (rates.nq + 0.5) + rates.gamma2,
            gamma_c: rates.gamma1 * (rates.nq + 1.0),
            gamma_h: rates.gamma1 * rates.nq,
            delta,
            gamma1_eff: None,
            gamma2_eff: None,
        }),
        RateMode::ExchangedQed => {
            let g1 = rates.gamma1 * (rates.nq + 0.5);
            let g2 = 0.5 * rates.gamma1 * (rates.nq + 0.5) + rates.gamma2;
            Ok(DerivedRates {
                gamma: g1 + g2,
                gamma_c: g2,
                gamma_h: g2,
                delta,
                gamma1_eff: Some(g1),
                gamma2_eff: Some(g2),
            })
        }
    }
}

/// Full physical description of a run: coupling profile, bath rates and the
/// derived rates, kept consistent by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub profile: CouplingProfile,
    pub rates: RateInputs,
    pub derived: DerivedRates,
}

impl SystemConfig {
    pub fn new(profile: CouplingProfile, rates: RateInputs) -> Result<Self> {
        let derived = derive_rates(&rates)?;
        Ok(SystemConfig { profile, rates, derived })
    }
}

/// Bose-Einstein occupation 1/(e^{omega/T} - 1) for omega/T > 0.
pub fn bose_einstein(omega_over_t: f64) -> Result<f64> {
    if !(omega_over_t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bose_einstein requires omega/T > 0, got {omega_over_t}"
        )));
    }
    Ok(1.0 / omega_over_t.exp_m1())
}

/// Reduced Planck and Boltzmann constants (SI), for converting raw preset
/// values; the solver itself never sees absolute units.
pub const HBAR: f64 = 1.054_571_817e-34;
pub const KB: f64 = 1.380_649e-23;

/// Bose-Einstein occupation from an angular frequency in rad/s and a
/// temperature in kelvin.
pub fn bose_einstein_si(omega_rad_per_s: f64, temp_kelvin: f64) -> Result<f64> {
    if !(temp_kelvin > 0.0) {
        return Err(Error::InvalidParameter(format!("temperature must be > 0, got {temp_kelvin}")));
    }
    bose_einstein(HBAR * omega_rad_per_s / (KB * temp_kelvin))
}

/// Equilibrium phase-space centre alpha_0 = -Omega e^{i phi} / (delta - i kappa/2)
/// of a strongly driven cavity.
pub fn cavity_equilibrium_displacement(omega_drive: f64, phi: f64, delta: f64, kappa: f64) -> Result<C64> {
    if omega_drive < 0.0 || kappa < 0.0 {
        return Err(Error::InvalidParameter("Omega and kappa must be >= 0".into()));
    }
    if omega_drive > 0.0 && delta == 0.0 && kappa == 0.0 {
        return Err(Error::InvalidParameter(
            "equilibrium displacement diverges for delta = kappa = 0 with Omega > 0".into(),
        ));
    }
    if omega_drive == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let num = -omega_drive * C64::cis(phi);
    let den = C64::new(delta, -0.5 * kappa);
    Ok(num / den)
}

/// The driving phase that makes the equilibrium displacement real and
/// positive for the given detuning and cavity decay.
pub fn phase_for_positive_displacement(delta: f64, kappa: f64) -> f64 {
    std::f64::consts::PI - (0.5 * kappa).atan2(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn derive_rates_standard_flux_values() {
        // Gamma_1 = Gamma_2 = 2.5 /us, N_q = 0.
        let r = RateInputs { kappa: 0.3, gamma1: 2.5, gamma2: 2.5, na: 20.0, nq: 0.0, mode: RateMode::Standard };
        let d = derive_rates(&r).unwrap();
        assert!((d.gamma - 3.75).abs() < 1e-12);
        assert!((d.gamma_c - 2.5).abs() < 1e-12);
        assert_eq!(d.gamma_h, 0.0);
        assert!((d.delta - 20.5).abs() < 1e-12);
        assert!(d.gamma1_eff.is_none());
    }

    #[test]
    fn derive_rates_no_decoherence() {
        let r = RateInputs { kappa: 0.0, gamma1: 0.0, gamma2: 0.0, na: 0.0, nq: 0.0, mode: RateMode::Standard };
        let d = derive_rates(&r).unwrap();
        assert_eq!(d.gamma, 0.0);
        assert_eq!(d.gamma_c, 0.0);
        assert_eq!(d.gamma_h, 0.0);
        assert_eq!(d.delta, 0.5);
    }

    #[test]
    fn derive_rates_exchanged_qed_values() {
        // Gamma_1 = 0.03 /ms, Gamma_2 = 0, N_q = 0.15.
        let r = RateInputs { kappa: 1.0, gamma1: 0.03, gamma2: 0.0, na: 0.8, nq: 0.15, mode: RateMode::ExchangedQed };
        let d = derive_rates(&r).unwrap();
        let g1 = d.gamma1_eff.unwrap();
        let g2 = d.gamma2_eff.unwrap();
        assert!((g1 - 0.0195).abs() < 1e-15);
        assert!((g2 - 0.00975).abs() < 1e-15);
        assert!((g1 - 2.0 * g2).abs() < 1e-15);
        assert!((d.gamma - 0.02925).abs() < 1e-15);
        assert!((d.gamma_c - g2).abs() < 1e-15);
        assert_eq!(d.gamma_c, d.gamma_h);
    }

    #[test]
    fn derive_rates_rejects_negative() {
        let r = RateInputs { kappa: -0.1, gamma1: 0.0, gamma2: 0.0, na: 0.0, nq: 0.0, mode: RateMode::Standard };
        assert!(derive_rates(&r).is_err());
    }

    #[test]
    fn bose_einstein_values() {
        assert!(bose_einstein(50.0).unwrap() < 2e-22);
        assert!((bose_einstein(2.0).unwrap() - 1.0 / (2.0f64.exp() - 1.0)).abs() < 1e-15);
        assert!((bose_einstein(2.0).unwrap() - 0.156_518).abs() < 1e-6);
        // omega = 2pi x 10 MHz at T = 300 K
        let n = bose_einstein_si(2.0 * std::f64::consts::PI * 1.0e7, 300.0).unwrap();
        assert!((n - 6.0e5).abs() / 6.0e5 < 0.10, "N_a = {n}");
        assert!(bose_einstein(0.0).is_err());
        assert!(bose_einstein(-1.0).is_err());
    }

    #[test]
    fn cavity_displacement_values() {
        assert_eq!(cavity_equilibrium_displacement(0.0, 0.3, 0.0, 0.0).unwrap(), C64::new(0.0, 0.0));
        let a = cavity_equilibrium_displacement(1.0, 0.0, 1.0, 0.0).unwrap();
        assert!((a - C64::new(-1.0, 0.0)).norm() < 1e-15);
        let a = cavity_equilibrium_displacement(1.0, 0.0, 0.0, 2.0).unwrap();
        assert!((a - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(cavity_equilibrium_displacement(1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn positive_phase_helper() {
        for &(delta, kappa) in &[(1.0, 0.5), (0.0, 2.0), (-0.7, 0.3), (2.0, 0.0)] {
            let phi = phase_for_positive_displacement(delta, kappa);
            let a = cavity_equilibrium_displacement(1.3, phi, delta, kappa).unwrap();
            assert!(a.im.abs() < 1e-12 && a.re > 0.0, "alpha0 = {a}");
        }
    }

    proptest! {
        #[test]
        fn bose_einstein_inverse_identity(x in 1e-6f64..50.0) {
            let n = bose_einstein(x).unwrap();
            // n * (e^x - 1) = 1 to machine precision
            prop_assert!((n * x.exp_m1() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn displacement_modulus(omega in 0.0f64..10.0, phi in -3.2f64..3.2,
                                delta in -5.0f64..5.0, kappa in 0.0f64..5.0) {
            prop_assume!(delta.abs() > 1e-12 || kappa > 1e-12);
            let a = cavity_equilibrium_displacement(omega, phi, delta, kappa).unwrap();
            let expect = omega / (delta * delta + 0.25 * kappa * kappa).sqrt();
            prop_assert!((a.norm() - expect).abs() <= 1e-12 * expect.max(1.0));
        }

        #[test]
        fn derive_rates_pure_and_bounded(g1 in 0.0f64..5.0, g2 in 0.0f64..5.0, nq in 0.0f64..3.0) {
            let r = RateInputs { kappa: 0.1, gamma1: g1, gamma2: g2, na: 1.0, nq, mode: RateMode::Standard };
            let d1 = derive_rates(&r).unwrap();
            let d2 = derive_rates(&r).unwrap();
            prop_assert_eq!(d1, d2);
            prop_assert!(d1.gamma_c >= d1.gamma_h);
            if g1 > 0.0 {
                prop_assert!(d1.gamma >= g1 / 2.0);
            }
        }
    }
}
