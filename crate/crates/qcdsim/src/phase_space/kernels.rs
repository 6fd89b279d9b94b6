// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! The four time-integral kernels driving every analytic C-Matrix solution:
//!
//!   xi(t)     = 2i int_0^t g(s) e^{i nu s - kappa s/2} ds
//!   mu(t)     = 2i / sinh(kappa t/2) int_0^t g(s) e^{i nu s} sinh(kappa s/2) ds
//!   tau(t)    = gamma t + kappa Delta int_0^t |mu(s)|^2 ds
//!   lambda(t) = i int_0^t g(s) e^{i nu s - kappa (t-s)/2} ds
//!
//! All reduce to exponentially weighted integrals of g, which the profile
//! evaluates in closed form for constant/piecewise shapes and by adaptive
//! quadrature for sampled ones.

use crate::error::Result;
use crate::model::{CouplingProfile, DerivedRates, RateInputs};
use crate::{quad, C64};

/// Kernel values at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSet {
    pub xi: C64,
    pub mu: C64,
    pub tau: f64,
    pub lambda: C64,
    pub t: f64,
}

/// Below this value of kappa*t the sinh-ratio form of mu is replaced by its
/// second-order series: the exponential difference cancels to O(kappa) there
/// and would leave ~1e-9 floating-point noise in |mu|^2.
const MU_SERIES_THRESHOLD: f64 = 1e-3;

pub(crate) fn mu_kernel(profile: &CouplingProfile, kappa: f64, t: f64) -> Result<C64> {
    if t <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let i = C64::i();
    let nu = profile.nu();
    if kappa * t < MU_SERIES_THRESHOLD {
        // mu = (2i/t) [M1 (1 - (kappa t)^2/24) + (kappa^2/24) M3] + O((kappa t)^4)
        // with M1 = int s g e^{i nu s}, M3 = int s^3 g e^{i nu s}.
        let m1 = profile.exp_moment_integral(i * nu, t)?;
        let correction = if kappa > 0.0 {
            let m3 = profile.exp_cubed_moment_integral(i * nu, t)?;
            let k2 = kappa * kappa / 24.0;
            -m1 * (k2 * t * t) + m3 * k2
        } else {
            C64::new(0.0, 0.0)
        };
        Ok(2.0 * i / t * (m1 + correction))
    } else {
        let plus = profile.exp_integral(C64::new(0.5 * kappa, nu), t)?;
        let minus = profile.exp_integral(C64::new(-0.5 * kappa, nu), t)?;
        Ok(i * (plus - minus) / (0.5 * kappa * t).sinh())
    }
}

pub(crate) fn lambda_kernel(profile: &CouplingProfile, kappa: f64, t: f64) -> Result<C64> {
    if t <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let plus = profile.exp_integral(C64::new(0.5 * kappa, profile.nu()), t)?;
    Ok(C64::i() * (-0.5 * kappa * t).exp() * plus)
}

/// e^{kappa t/2} lambda(t) = i int_0^t g e^{i nu s + kappa s/2} ds, the
/// combination entering the diagonal ODE driving phase. Evaluating it
/// directly avoids the cancel-and-regrow of the two exponentials.
pub(crate) fn lambda_growing(profile: &CouplingProfile, kappa: f64, t: f64) -> Result<C64> {
    if t <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(C64::i() * profile.exp_integral(C64::new(0.5 * kappa, profile.nu()), t)?)
}

/// Evaluate all four kernels at time `t` to absolute tolerance 1e-10.
pub fn kernels(profile: &CouplingProfile, rates: &RateInputs, derived: &DerivedRates, t: f64) -> Result<KernelSet> {
    rates.validate()?;
    if t <= 0.0 {
        return Ok(KernelSet { xi: C64::new(0.0, 0.0), mu: C64::new(0.0, 0.0), tau: 0.0, lambda: C64::new(0.0, 0.0), t: 0.0 });
    }
    let kappa = rates.kappa;
    let nu = profile.nu();
    let xi = 2.0 * C64::i() * profile.exp_integral(C64::new(-0.5 * kappa, nu), t)?;
    let mu = mu_kernel(profile, kappa, t)?;
    let lambda = lambda_kernel(profile, kappa, t)?;
    let tau = derived.gamma * t
        + if kappa * derived.delta > 0.0 {
            kappa
                * derived.delta
                * quad::integrate_real(
                    |s| mu_kernel(profile, kappa, s).map(|m| m.norm_sqr()).unwrap_or(f64::NAN),
                    0.0,
                    t,
                    1e-10,
                )?
        } else {
            0.0
        };
    Ok(KernelSet { xi, mu, tau, lambda, t })
}
