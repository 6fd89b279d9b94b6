// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Constant-coupling scenario closed forms and the derived observables:
//! the negativity witness B_N built from displaced-thermal test states, the
//! qubit projection probabilities, the Wigner transform and the
//! non-classicality metric, plus the (N_a, g0 t) parameter scan.
//!
//! Fast paths (the displaced-thermal population closed form and the W(0)
//! closed form) are validated against the truncated-Fock matrix route and
//! the quadrature route by the test suite before anything relies on them.

use crate::error::{Error, Result};
use crate::exec::map_cells;
use crate::fmt::fmt_sig12;
use crate::fock_oracle;
use crate::{quad, C64};
use std::io::Write;

/// Constant-coupling (nu = 0) pure-dephasing scenario at one time:
/// alpha0 = -i (2 g0/kappa)(1 - e^{-kappa t/2}) and coherence exponent
/// w = gamma t + 16 Delta (g0/kappa)^2 (kappa t - 3 + 4 e^{-kappa t/2} - e^{-kappa t}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioPoint {
    pub g0: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub na: f64,
    pub t: f64,
    pub alpha0: C64,
    pub w: f64,
}

impl ScenarioPoint {
    pub fn delta(&self) -> f64 {
        self.na + 0.5
    }

    /// Point with explicit (alpha0, w), for anchor values stated directly in
    /// terms of the displaced amplitude.
    pub fn synthetic(alpha0: C64, w: f64, na: f64) -> Self {
        ScenarioPoint { g0: f64::NAN, kappa: f64::NAN, gamma: f64::NAN, na, t: f64::NAN, alpha0, w }
    }
}

/// The exponent bracket kappa t - 3 + 4 e^{-x/2} - e^{-x} cancels to O(x^3);
/// below this x the series through x^7 is used instead.
const BRACKET_SERIES_SWITCH: f64 = 0.05;

fn w_bracket(x: f64) -> f64 {
    if x < BRACKET_SERIES_SWITCH {
        let x3 = x * x * x;
        x3 * (1.0 / 12.0 + x * (-1.0 / 32.0 + x * (7.0 / 960.0 + x * (-1.0 / 768.0 + x * (31.0 / 161_280.0)))))
    } else {
        x - 3.0 + 4.0 * (-0.5 * x).exp() - (-x).exp()
    }
}

/// Evaluate the scenario closed forms; numerically stable down to and
/// including kappa = 0.
pub fn scenario(g0: f64, kappa: f64, gamma: f64, na: f64, t: f64) -> ScenarioPoint {
    let delta = na + 0.5;
    let (alpha0, w) = if kappa == 0.0 {
        (C64::new(0.0, -g0 * t), gamma * t)
    } else {
        let x = kappa * t;
        let alpha0 = C64::new(0.0, -2.0 * g0 / kappa * (-(-0.5 * x).exp_m1()));
        let ratio = g0 / kappa;
        let w = gamma * t + 16.0 * delta * ratio * ratio * w_bracket(x);
        (alpha0, w)
    };
    ScenarioPoint { g0, kappa, gamma, na, t, alpha0, w }
}

/// The four C-Matrix components [ee, gg, eg, ge] of the scenario state.
pub fn scenario_cmatrix(pt: &ScenarioPoint, beta: C64) -> [C64; 4] {
    let d = pt.delta();
    let a = pt.alpha0;
    let drift = a * beta.conj() - a.conj() * beta; // purely imaginary
    let ee = 0.5 * (-d * beta.norm_sqr()).exp() * (-drift).exp();
    let gg = 0.5 * (-d * beta.norm_sqr()).exp() * drift.exp();
    let eg = C64::new(0.5 * (-d * (beta + 2.0 * a).norm_sqr() - pt.w).exp(), 0.0);
    let ge = C64::new(0.5 * (-d * (beta - 2.0 * a).norm_sqr() - pt.w).exp(), 0.0);
    [ee, gg, eg, ge]
}

/// Laguerre polynomial L_m(x) by the three-term recurrence.
pub fn laguerre(m: usize, x: f64) -> f64 {
    match m {
        0 => 1.0,
        1 => 1.0 - x,
        _ => {
            let mut lkm1 = 1.0;
            let mut lk = 1.0 - x;
            for k in 1..m {
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0 - x) * lk - kf * lkm1) / (kf + 1.0);
                lkm1 = lk;
                lk = next;
            }
            lk
        }
    }
}

/// Thermal population p_m = N^m / (N+1)^{m+1}.
pub fn thermal_population(m: usize, na: f64) -> f64 {
    if na == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    ((m as f64) * na.ln() - (m as f64 + 1.0) * (na + 1.0).ln()).exp()
}

/// Populations of a displaced thermal state, evaluated through the
/// log-sum-exp form of the Laguerre series (every term is non-negative, so
/// no cancellation occurs and arbitrary m stays in range).
struct DisplacedThermal {
    z: f64, // |zeta|^2
    na: f64,
    ln_fact: Vec<f64>,
}

impl DisplacedThermal {
    fn new(zeta: C64, na: f64) -> Self {
        DisplacedThermal { z: zeta.norm_sqr(), na, ln_fact: vec![0.0] }
    }

    fn ln_fact(&mut self, n: usize) -> f64 {
        while self.ln_fact.len() <= n {
            let k = self.ln_fact.len();
            let prev = self.ln_fact[k - 1];
            self.ln_fact.push(prev + (k as f64).ln());
        }
        self.ln_fact[n]
    }

    fn population(&mut self, m: usize) -> f64 {
        let z = self.z;
        let na = self.na;
        if na < 1e-12 {
            // Poisson photon statistics of a coherent state.
            if z == 0.0 {
                return if m == 0 { 1.0 } else { 0.0 };
            }
            let ln = -z + m as f64 * z.ln() - self.ln_fact(m);
            return ln.exp();
        }
        if z == 0.0 {
            return thermal_population(m, na);
        }
        let ln_na = na.ln();
        let ln_na1 = (na + 1.0).ln();
        let ln_z = z.ln();
        let lf_m = self.ln_fact(m);
        let mut max_ln = f64::NEG_INFINITY;
        let mut lns = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let ln = lf_m - 2.0 * self.ln_fact(k) - self.ln_fact(m - k) + k as f64 * ln_z
                + (m - k) as f64 * ln_na
                - (m + k + 1) as f64 * ln_na1
                - z / (na + 1.0);
            max_ln = max_ln.max(ln);
            lns.push(ln);
        }
        let sum: f64 = lns.iter().map(|&l| (l - max_ln).exp()).sum();
        max_ln.exp() * sum
    }
}

/// P_m(zeta, N_a) = <m| D(zeta) rho_th D(zeta)^dag |m> via the closed form.
pub fn displaced_thermal_population(m: usize, zeta: C64, na: f64) -> f64 {
    DisplacedThermal::new(zeta, na).population(m)
}

/// The same population through explicit truncated-Fock matrix algebra:
/// sum_k |D(zeta)[m,k]|^2 p_k. This is the defining route the closed form is
/// validated against.
pub fn displaced_thermal_population_matrix(m: usize, zeta: C64, na: f64, cutoff: usize) -> Result<f64> {
    let th = fock_oracle::thermal_state(na, cutoff)?;
    let d = fock_oracle::displacement_matrix(zeta, cutoff);
    let mut acc = 0.0;
    for k in 0..=cutoff {
        acc += d.get(m, k).norm_sqr() * th.get(k, k).re;
    }
    Ok(acc)
}

/// Test-state expectation q_m = (1/2)[P_m(2 alpha0, N_a) - p_m e^{-w}].
pub fn q_m(m: usize, pt: &ScenarioPoint) -> f64 {
    0.5 * (displaced_thermal_population(m, 2.0 * pt.alpha0, pt.na) - thermal_population(m, pt.na) * (-pt.w).exp())
}

fn default_m_max(pt: &ScenarioPoint) -> usize {
    (8.0 * pt.alpha0.norm_sqr() + 8.0 * pt.na + 20.0).ceil() as usize
}

/// Negativity lower bound B_N = 2 sum_{q_m < 0} |q_m|. Terms beyond the
/// default truncation are provably positive (bare Poisson/thermal tails), so
/// the bound only tightens with m_max.
pub fn witness_bn(pt: &ScenarioPoint, m_max: Option<usize>) -> f64 {
    let m_max = m_max.unwrap_or_else(|| default_m_max(pt));
    let mut dt = DisplacedThermal::new(2.0 * pt.alpha0, pt.na);
    let decay = (-pt.w).exp();
    let mut bn = 0.0;
    for m in 0..=m_max {
        let q = 0.5 * (dt.population(m) - thermal_population(m, pt.na) * decay);
        if q < 0.0 {
            bn -= 2.0 * q;
        }
    }
    bn
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Probability of projecting the qubit onto |+-> after the interaction:
/// P_- = (1 - e^{-4 Delta |alpha0|^2 - w})/2.
pub fn projection_probability(pt: &ScenarioPoint, sign: Sign) -> f64 {
    let p_minus = 0.5 * (1.0 - (-4.0 * pt.delta() * pt.alpha0.norm_sqr() - pt.w).exp());
    match sign {
        Sign::Minus => p_minus,
        Sign::Plus => 1.0 - p_minus,
    }
}

/// Quadrature control for the Wigner transform.
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    /// Integration half-width; probed from the envelope when absent.
    pub extent: Option<f64>,
    pub tol: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { extent: None, tol: 1e-8 }
    }
}

fn probe_extent<F: Fn(C64) -> C64>(charfn: &F) -> Result<f64> {
    let max_radius = 20.0;
    let mut r = 2.0;
    while r <= max_radius {
        let mut worst: f64 = 0.0;
        for k in 0..8 {
            let th = std::f64::consts::PI * k as f64 / 4.0;
            worst = worst.max(charfn(C64::from_polar(r, th)).norm());
        }
        if worst < 1e-10 {
            return Ok(r + 1.0);
        }
        r += 2.0;
    }
    Err(Error::NonDecaying { radius: max_radius })
}

/// Wigner transform W(alpha) = pi^{-2} int d^2 beta chi(beta) e^{alpha beta* - alpha* beta}
/// by iterated adaptive quadrature. Returns the real part; the imaginary
/// residual beyond 1e-7 is rejected as an invalid characteristic function.
pub fn wigner<F: Fn(C64) -> C64>(charfn: F, alpha: C64, spec: &QuadSpec) -> Result<f64> {
    let extent = match spec.extent {
        Some(r) => r,
        None => probe_extent(&charfn)?,
    };
    let inner_tol = spec.tol / (4.0 * extent);
    let outer = quad::integrate(
        |x| {
            quad::integrate(
                |y| {
                    let b = C64::new(x, y);
                    let phase = 2.0 * (alpha.im * x - alpha.re * y);
                    charfn(b) * C64::cis(phase)
                },
                -extent,
                extent,
                inner_tol,
            )
            .unwrap_or(C64::new(f64::NAN, f64::NAN))
        },
        -extent,
        extent,
        spec.tol,
    )?;
    let w = outer / (std::f64::consts::PI * std::f64::consts::PI);
    if !w.re.is_finite() || w.im.abs() > 1e-7 {
        return Err(Error::InvalidParameter(format!("Wigner transform residual imaginary part {}", w.im)));
    }
    Ok(w.re)
}

/// Characteristic function of the |-> projected oscillator state,
/// chi_- = [chi_ee + chi_gg - chi_eg - chi_ge] / (2 P_-).
pub fn minus_state_charfn(pt: &ScenarioPoint) -> impl Fn(C64) -> C64 + '_ {
    let p_minus = projection_probability(pt, Sign::Minus);
    move |beta| {
        let c = scenario_cmatrix(pt, beta);
        (c[0] + c[1] - c[2] - c[3]) / (2.0 * p_minus)
    }
}

/// W(0) of the projected state, closed form
/// (e^{-|alpha0|^2/Delta} - e^{-w}) / (2 pi Delta P_-).
/// None when P_- = 0 (no projection ever happens at t = 0).
pub fn wigner_origin_minus(pt: &ScenarioPoint) -> Option<f64> {
    let p_minus = projection_probability(pt, Sign::Minus);
    if p_minus <= 0.0 {
        return None;
    }
    let d = pt.delta();
    Some(((-pt.alpha0.norm_sqr() / d).exp() - (-pt.w).exp()) / (2.0 * std::f64::consts::PI * d * p_minus))
}

/// Non-classicality metric: the closed-form fast path
/// max(0, e^{-w} - e^{-|alpha0|^2/Delta}) / (2 Delta). The upper bound 1 is a
/// property of the state family, asserted by the tests, never clamped.
pub fn nonclassicality_w(pt: &ScenarioPoint) -> f64 {
    let d = pt.delta();
    ((-pt.w).exp() - (-pt.alpha0.norm_sqr() / d).exp()).max(0.0) / (2.0 * d)
}

/// The metric through the defining route: assemble chi_- and run the Wigner
/// quadrature at the origin.
pub fn nonclassicality_w_quadrature(pt: &ScenarioPoint, spec: &QuadSpec) -> Result<f64> {
    let p_minus = projection_probability(pt, Sign::Minus);
    if p_minus <= 0.0 {
        return Ok(0.0);
    }
    let w0 = wigner(minus_state_charfn(pt), C64::new(0.0, 0.0), spec)?;
    Ok(std::f64::consts::PI * p_minus * (-w0).max(0.0))
}

/// Oracle column policy for scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleColumn {
    Off,
    /// Exact negativity only for cells with N_a at or below the bound.
    UpToNa(f64),
    All,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub na_values: Vec<f64>,
    pub g0t_values: Vec<f64>,
    /// kappa in units of g0.
    pub kappa: f64,
    /// gamma in units of g0.
    pub gamma: f64,
    pub oracle: OracleColumn,
}

#[derive(Debug, Clone)]
pub struct ScanCell {
    pub na: f64,
    pub g0t: f64,
    pub alpha0_im: f64,
    pub w: f64,
    pub bn: f64,
    pub w_metric: f64,
    pub p_minus: f64,
    pub negativity: Option<f64>,
}

/// One scan cell; g0 = 1 sets the time unit, so t = g0 t.
pub fn scan_cell(kappa: f64, gamma: f64, na: f64, g0t: f64, with_oracle: bool) -> Result<ScanCell> {
    let pt = scenario(1.0, kappa, gamma, na, g0t);
    let negativity = if with_oracle {
        let cutoff = fock_oracle::suggest_cutoff(na, pt.alpha0.norm());
        let state = fock_oracle::scenario_state_auto(pt.alpha0, pt.w, na, cutoff)?;
        Some(fock_oracle::negativity(&state))
    } else {
        None
    };
    Ok(ScanCell {
        na,
        g0t,
        alpha0_im: pt.alpha0.im,
        w: pt.w,
        bn: witness_bn(&pt, None),
        w_metric: nonclassicality_w(&pt),
        p_minus: projection_probability(&pt, Sign::Minus),
        negativity,
    })
}

#[derive(Debug, Clone)]
pub struct ScanTable {
    pub na_values: Vec<f64>,
    pub g0t_values: Vec<f64>,
    /// Row-major: N_a outer, g0 t inner.
    pub cells: Vec<ScanCell>,
}

/// Scan the (N_a, g0 t) box; cells are independent and the row order is
/// deterministic whatever the parallelism.
pub fn scan(cfg: &ScanConfig) -> Result<ScanTable> {
    if cfg.na_values.is_empty() || cfg.g0t_values.is_empty() {
        return Err(Error::InvalidParameter("scan grids must be non-empty".into()));
    }
    let nt = cfg.g0t_values.len();
    let total = cfg.na_values.len() * nt;
    let cells: Result<Vec<ScanCell>> = map_cells(total, |idx| {
        let na = cfg.na_values[idx / nt];
        let g0t = cfg.g0t_values[idx % nt];
        let with_oracle = match cfg.oracle {
            OracleColumn::Off => false,
            OracleColumn::UpToNa(bound) => na <= bound,
            OracleColumn::All => true,
        };
        scan_cell(cfg.kappa, cfg.gamma, na, g0t, with_oracle)
    })
    .into_iter()
    .collect();
    Ok(ScanTable { na_values: cfg.na_values.clone(), g0t_values: cfg.g0t_values.clone(), cells: cells? })
}

impl ScanTable {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "Na,g0t,alpha0_im,w,BN,W_metric,P_minus,negativity_oracle")?;
        for c in &self.cells {
            let neg = c.negativity.map(fmt_sig12).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                fmt_sig12(c.na),
                fmt_sig12(c.g0t),
                fmt_sig12(c.alpha0_im),
                fmt_sig12(c.w),
                fmt_sig12(c.bn),
                fmt_sig12(c.w_metric),
                fmt_sig12(c.p_minus),
                neg
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::{expectation, partial_transpose, scenario_state, test_state};

    const REF_KAPPA: f64 = 0.01;
    const REF_GAMMA: f64 = 0.01;

    fn reference_point() -> ScenarioPoint {
        scenario(1.0, REF_KAPPA, REF_GAMMA, 0.0, 1.0)
    }

    #[test]
    fn scenario_at_zero_and_frozen_values() {
        let p0 = scenario(1.0, 0.01, 0.01, 0.0, 0.0);
        assert_eq!(p0.alpha0, C64::new(0.0, 0.0));
        assert_eq!(p0.w, 0.0);

        let p = reference_point();
        assert!((p.alpha0 - C64::new(0.0, -0.997_504_161_463_538)).norm() < 1e-12);
        assert!((p.w - 0.016_641_724_895_8).abs() < 1e-11, "w = {}", p.w);
    }

    #[test]
    fn scenario_series_seam_and_kappa_zero_limit() {
        // Series branch vs direct bracket across the switch; the direct form
        // itself carries ~1e-15 absolute rounding from the cancellation.
        for &x in &[0.04f64, 0.049, 0.051, 0.08] {
            let exact = x - 3.0 + 4.0 * (-0.5 * x).exp() - (-x).exp();
            assert!((w_bracket(x) - exact).abs() < 1e-14, "x = {x}");
        }
        // kappa -> 0: w approaches gamma t + (4/3) Delta g0^2 kappa t^3 with
        // a relative correction of order kappa t.
        let kappa = 1e-5;
        let p = scenario(1.0, kappa, 0.0, 0.0, 1.0);
        let leading = 4.0 / 3.0 * 0.5 * kappa;
        assert!((p.w - leading).abs() < 1e-5 * leading, "w = {}", p.w);
        let p = scenario(1.0, 0.0, 0.0, 3.0, 2.0);
        assert_eq!(p.w, 0.0);
        assert!((p.alpha0 - C64::new(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        let explicit = |x: f64| (-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0;
        for &x in &[0.0, 0.5, 1.0, 2.5] {
            assert!((laguerre(3, x) - explicit(x)).abs() < 1e-12, "x = {x}");
        }
        assert!((laguerre(3, 1.0) + 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn displaced_thermal_reduces_to_thermal_and_poisson() {
        for m in 0..6 {
            let p = displaced_thermal_population(m, C64::new(0.0, 0.0), 1.0);
            assert!((p - thermal_population(m, 1.0)).abs() < 1e-14);
        }
        let z = C64::new(1.2, -0.4);
        let zsq = z.norm_sqr();
        let mut fact = 1.0;
        for m in 0..8 {
            if m > 0 {
                fact *= m as f64;
            }
            let poisson = (-zsq).exp() * zsq.powi(m as i32) / fact;
            let p = displaced_thermal_population(m, z, 0.0);
            assert!((p - poisson).abs() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn displaced_thermal_sums_to_one() {
        let z = C64::new(1.0, 1.0);
        let total: f64 = (0..140).map(|m| displaced_thermal_population(m, z, 2.0)).sum();
        assert!((total - 1.0).abs() < 1e-10, "sum = {total}");
    }

    #[test]
    fn closed_form_matches_matrix_route() {
        // The fast path must agree with the defining Fock route to 1e-9.
        for &(na, zr, zi) in &[(0.0, 1.0, 0.5), (0.7, 2.0, -1.0), (2.5, 0.3, 0.0), (1.0, 3.5, 1.5)] {
            let zeta = C64::new(zr, zi);
            let cutoff = fock_oracle::suggest_cutoff(na, 0.5 * zeta.norm()).max(140);
            for m in [0usize, 1, 3, 7, 15] {
                let fast = displaced_thermal_population(m, zeta, na);
                let exact = displaced_thermal_population_matrix(m, zeta, na, cutoff).unwrap();
                assert!((fast - exact).abs() < 1e-9, "na={na} zeta={zeta} m={m}: {fast} vs {exact}");
            }
        }
    }

    #[test]
    fn qm_values_and_oracle_route() {
        // t = 0: separable, q_m = 0.
        let p0 = scenario(1.0, REF_KAPPA, REF_GAMMA, 1.0, 0.0);
        for m in 0..4 {
            assert!(q_m(m, &p0).abs() < 1e-14);
        }
        // Lossless anchor: q_0 = (e^{-4} - 1)/2.
        let anchor = ScenarioPoint::synthetic(C64::new(0.0, -1.0), 0.0, 0.0);
        assert!((q_m(0, &anchor) - 0.5 * ((-4.0f64).exp() - 1.0)).abs() < 1e-12);
        assert!((q_m(0, &anchor) + 0.490_842_180_555).abs() < 1e-9);

        // Explicit test-state route through the Fock machinery.
        for &(na, t) in &[(0.0, 1.0), (1.0, 0.7)] {
            let pt = scenario(1.0, REF_KAPPA, REF_GAMMA, na, t);
            let cutoff = fock_oracle::suggest_cutoff(na, pt.alpha0.norm()).max(60);
            let rho = scenario_state(pt.alpha0, pt.w, na, cutoff).unwrap();
            let pt_rho = partial_transpose(&rho);
            for m in 0..6 {
                let psi = test_state(pt.alpha0, m, cutoff);
                let oracle = expectation(&pt_rho, &psi);
                assert!(oracle.im.abs() < 1e-10);
                let fast = q_m(m, &pt);
                assert!((fast - oracle.re).abs() < 1e-8, "na={na} t={t} m={m}: {fast} vs {}", oracle.re);
            }
        }
    }

    #[test]
    fn reference_qm_frozen() {
        let q0 = q_m(0, &reference_point());
        assert!((q0 + 0.482_405_7).abs() < 1e-6, "q_0 = {q0}");
    }

    #[test]
    fn witness_anchors() {
        let p0 = scenario(1.0, REF_KAPPA, REF_GAMMA, 2.0, 0.0);
        assert_eq!(witness_bn(&p0, None), 0.0);

        let anchor = ScenarioPoint::synthetic(C64::new(0.0, -1.0), 0.0, 0.0);
        let bn = witness_bn(&anchor, None);
        assert!((bn - (1.0 - (-4.0f64).exp())).abs() < 1e-9, "B_N = {bn}");
        assert!((bn - 0.981_684_361_111).abs() < 1e-9);

        let refval = witness_bn(&reference_point(), None);
        assert!((refval - 0.9648).abs() < 1e-3, "B_N = {refval}");
        // Bounded by the exact negativity of the same state.
        let pt = reference_point();
        let cutoff = fock_oracle::suggest_cutoff(0.0, pt.alpha0.norm());
        let rho = scenario_state(pt.alpha0, pt.w, 0.0, cutoff).unwrap();
        let neg = fock_oracle::negativity(&rho);
        assert!(refval <= neg + 1e-9, "B_N = {refval} > N = {neg}");
    }

    #[test]
    fn witness_monotone_degradation_in_w() {
        let base = ScenarioPoint::synthetic(C64::new(0.0, -1.2), 0.0, 0.5);
        let mut prev_bn = f64::INFINITY;
        let mut prev_wm = f64::INFINITY;
        for &w in &[0.0, 0.05, 0.2, 0.6, 1.5] {
            let pt = ScenarioPoint::synthetic(base.alpha0, w, base.na);
            let bn = witness_bn(&pt, None);
            let wm = nonclassicality_w(&pt);
            assert!(bn <= prev_bn + 1e-12, "B_N increased at w = {w}");
            assert!(wm <= prev_wm + 1e-12, "W increased at w = {w}");
            prev_bn = bn;
            prev_wm = wm;
        }
    }

    #[test]
    fn projection_probability_values() {
        let p0 = scenario(1.0, REF_KAPPA, REF_GAMMA, 0.0, 0.0);
        assert_eq!(projection_probability(&p0, Sign::Minus), 0.0);
        assert_eq!(projection_probability(&p0, Sign::Plus), 1.0);

        let far = ScenarioPoint::synthetic(C64::new(0.0, -40.0), 0.1, 0.0);
        assert!((projection_probability(&far, Sign::Minus) - 0.5).abs() < 1e-12);

        let refval = projection_probability(&reference_point(), Sign::Minus);
        assert!((refval - 0.432_782_2).abs() < 1e-6, "P_- = {refval}");
    }

    #[test]
    fn wigner_gaussian_anchors() {
        let spec = QuadSpec::default();
        let vac = |b: C64| C64::new((-0.5 * b.norm_sqr()).exp(), 0.0);
        let w0 = wigner(vac, C64::new(0.0, 0.0), &spec).unwrap();
        assert!((w0 - 2.0 / std::f64::consts::PI).abs() < 5e-8, "W(0) = {w0}");

        let delta = 1.5;
        let th = move |b: C64| C64::new((-delta * b.norm_sqr()).exp(), 0.0);
        let w0 = wigner(th, C64::new(0.0, 0.0), &spec).unwrap();
        assert!((w0 - 1.0 / (std::f64::consts::PI * delta)).abs() < 5e-8);

        // Displaced vacuum D(d)|0>: chi(beta) = e^{-|beta|^2/2} e^{beta d* - beta* d},
        // so W peaks at the displacement and is Gaussian-suppressed at 0.
        let disp = C64::new(0.8, -0.3);
        let displaced = move |b: C64| {
            let drift = b * disp.conj() - b.conj() * disp;
            C64::new((-0.5 * b.norm_sqr()).exp(), 0.0) * drift.exp()
        };
        let peak = wigner(&displaced, disp, &spec).unwrap();
        assert!((peak - 2.0 / std::f64::consts::PI).abs() < 5e-8);
        let origin = wigner(&displaced, C64::new(0.0, 0.0), &spec).unwrap();
        let expect = 2.0 / std::f64::consts::PI * (-2.0 * disp.norm_sqr()).exp();
        assert!((origin - expect).abs() < 5e-8);
    }

    #[test]
    fn wigner_normalization_radial() {
        // int W d^2 alpha = 2 pi int_0^R W(r) r dr = 1 for the thermal state.
        let delta = 0.9;
        let th = move |b: C64| C64::new((-delta * b.norm_sqr()).exp(), 0.0);
        let spec = QuadSpec { extent: Some(8.0), tol: 1e-9 };
        let radial = quad::integrate_real(
            |r| r * wigner(th, C64::new(r, 0.0), &spec).unwrap(),
            0.0,
            7.0,
            1e-8,
        )
        .unwrap();
        let total = 2.0 * std::f64::consts::PI * radial;
        assert!((total - 1.0).abs() < 1e-6, "norm = {total}");
    }

    #[test]
    fn wigner_rejects_nondecaying_input() {
        let flat = |_b: C64| C64::new(1.0, 0.0);
        assert!(matches!(wigner(flat, C64::new(0.0, 0.0), &QuadSpec::default()), Err(Error::NonDecaying { .. })));
    }

    #[test]
    fn nonclassicality_anchors() {
        let p0 = scenario(1.0, REF_KAPPA, REF_GAMMA, 0.0, 0.0);
        assert_eq!(nonclassicality_w(&p0), 0.0);
        assert_eq!(nonclassicality_w_quadrature(&p0, &QuadSpec::default()).unwrap(), 0.0);

        // Lossless odd-cat limit: W = 1 - e^{-8}.
        let cat = ScenarioPoint::synthetic(C64::new(0.0, -2.0), 0.0, 0.0);
        let wm = nonclassicality_w(&cat);
        assert!((wm - (1.0 - (-8.0f64).exp())).abs() < 1e-12);
        let wq = nonclassicality_w_quadrature(&cat, &QuadSpec::default()).unwrap();
        assert!((wm - wq).abs() < 1e-6, "closed {wm} vs quadrature {wq}");
        // W(0) of the projected state is exactly -2/pi in this limit.
        let w0 = wigner_origin_minus(&cat).unwrap();
        assert!((w0 + 2.0 / std::f64::consts::PI).abs() < 1e-12, "W(0) = {w0}");

        // Fig. 3 point: closed form, quadrature and Fock parity sum agree.
        let pt = reference_point();
        let wm = nonclassicality_w(&pt);
        assert!((wm - 0.8468).abs() < 1e-3, "W = {wm}");
        let wq = nonclassicality_w_quadrature(&pt, &QuadSpec::default()).unwrap();
        assert!((wm - wq).abs() < 1e-6);
        let cutoff = fock_oracle::suggest_cutoff(0.0, pt.alpha0.norm());
        let rho = scenario_state(pt.alpha0, pt.w, 0.0, cutoff).unwrap();
        let (p_minus, rho_minus) = rho.project_minus();
        assert!((p_minus - projection_probability(&pt, Sign::Minus)).abs() < 1e-9);
        let w0_parity = fock_oracle::wigner_origin_parity(&rho_minus);
        let wm_oracle = std::f64::consts::PI * p_minus * (-w0_parity).max(0.0);
        assert!((wm - wm_oracle).abs() < 1e-6, "closed {wm} vs oracle {wm_oracle}");
    }

    #[test]
    fn qm_sum_rule() {
        // sum_m 2 q_m = 1 - e^{-w}.
        for &(na, t) in &[(0.0, 1.0), (1.0, 0.5), (3.0, 2.0)] {
            let pt = scenario(1.0, REF_KAPPA, REF_GAMMA, na, t);
            // The displaced-thermal tail decays thermally with an e^{2 sqrt(zm)}
            // Laguerre factor; the sum rule needs a deeper truncation than the
            // witness (whose tail terms are all positive).
            let m_max = default_m_max(&pt) + 150;
            let total: f64 = (0..=m_max).map(|m| 2.0 * q_m(m, &pt)).sum();
            let expect = 1.0 - (-pt.w).exp();
            assert!((total - expect).abs() < 1e-8, "na={na} t={t}: {total} vs {expect}");
        }
    }

    #[test]
    fn scan_shapes_and_zero_time() {
        let cfg = ScanConfig {
            na_values: vec![0.0],
            g0t_values: vec![0.0],
            kappa: REF_KAPPA,
            gamma: REF_GAMMA,
            oracle: OracleColumn::Off,
        };
        let table = scan(&cfg).unwrap();
        assert_eq!(table.cells.len(), 1);
        let c = &table.cells[0];
        assert_eq!(c.bn, 0.0);
        assert_eq!(c.w_metric, 0.0);
        assert_eq!(c.p_minus, 0.0);
        assert!(c.negativity.is_none());
    }

    #[test]
    fn scan_na_zero_row_rises_above_09() {
        let g0t: Vec<f64> = (1..=30).map(|k| 0.1 * k as f64).collect();
        let cfg = ScanConfig {
            na_values: vec![0.0],
            g0t_values: g0t,
            kappa: REF_KAPPA,
            gamma: REF_GAMMA,
            oracle: OracleColumn::Off,
        };
        let table = scan(&cfg).unwrap();
        let bn: Vec<f64> = table.cells.iter().map(|c| c.bn).collect();
        let peak = bn.iter().cloned().fold(0.0, f64::max);
        assert!(peak > 0.9, "peak B_N = {peak}");
        assert!(bn[0] < 0.5, "B_N starts near zero");
        // Rises before it slowly degrades with w.
        let peak_idx = bn.iter().position(|&b| b == peak).unwrap();
        assert!(peak_idx > 2);
        assert!(bn[bn.len() - 1] <= peak);
    }

    #[test]
    fn scan_oracle_column_bounds_witness() {
        let cfg = ScanConfig {
            na_values: vec![0.0, 1.0, 2.5],
            g0t_values: vec![0.4, 1.0, 1.8],
            kappa: REF_KAPPA,
            gamma: REF_GAMMA,
            oracle: OracleColumn::UpToNa(1.5),
        };
        let table = scan(&cfg).unwrap();
        for c in &table.cells {
            assert!(c.w_metric >= -1e-12 && c.w_metric <= 1.0 + 1e-9);
            match c.negativity {
                Some(neg) => {
                    assert!(c.na <= 1.5);
                    assert!(c.bn <= neg + 1e-9, "Na={} g0t={}: BN={} > N={neg}", c.na, c.g0t, c.bn);
                }
                None => assert!(c.na > 1.5),
            }
        }
    }

    #[test]
    fn scan_csv_deterministic() {
        let cfg = ScanConfig {
            na_values: vec![0.0, 1.0],
            g0t_values: vec![0.5, 1.0],
            kappa: REF_KAPPA,
            gamma: REF_GAMMA,
            oracle: OracleColumn::Off,
        };
        let t1 = scan(&cfg).unwrap();
        let t2 = scan(&cfg).unwrap();
        let mut b1 = Vec::new();
        let mut b2 = Vec::new();
        t1.write_csv(&mut b1).unwrap();
        t2.write_csv(&mut b2).unwrap();
        assert_eq!(b1, b2);
        let text = String::from_utf8(b1).unwrap();
        assert!(text.starts_with("Na,g0t,alpha0_im,w,BN,W_metric,P_minus,negativity_oracle\n"));
        assert_eq!(text.lines().count(), 5);
        // Blank oracle column when off.
        assert!(text.lines().nth(1).unwrap().ends_with(','));
    }
}
