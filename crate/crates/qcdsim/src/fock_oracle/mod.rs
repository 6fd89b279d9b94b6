// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference on a truncated Fock space.
//!
//! The joint density matrix is stored dense in the (qubit (x) oscillator)
//! basis ordered {e, g} (x) {0..N_c}, and the master equation
//!
//!   rho' = -i[H(t), rho] + L rho + Q rho,
//!   L = kappa/2 (N_a+1) D[a] + kappa/2 N_a D[a^dag],
//!   Q = Gamma_1/2 (N_q+1) D[sigma-] + Gamma_1/2 N_q D[sigma+] + Gamma_2/4 D[sigma3],
//!
//! with D[A]rho = 2 A rho A^dag - A^dag A rho - rho A^dag A, is integrated by
//! adaptive explicit stepping on the vectorized matrix. The exchanged-qed
//! mode replaces Q by equal sigma+/sigma- rates gamma_2/2 plus gamma_1/4 of
//! sigma3 dephasing. Deliberately simple and slow; no superoperator
//! diagonalization.

mod matrix;

pub use matrix::{displacement_matrix, OscMatrix};

use crate::error::{Error, Result};
use crate::fmt::fmt_sig12;
use crate::model::{CouplingProfile, RateInputs, RateMode, SystemConfig};
use crate::{ode, C64};
use std::io::{BufRead, Write};

/// Top-two-level population above which a run is flagged as truncated.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Joint qubit-oscillator density matrix on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct JointFockState {
    /// Highest retained Fock level N_c; oscillator dimension is N_c + 1.
    pub cutoff: usize,
    /// Row-major 2(N_c+1) x 2(N_c+1) matrix, index (q, m) -> q (N_c+1) + m.
    pub data: Vec<C64>,
}

impl JointFockState {
    pub fn dim(&self) -> usize {
        2 * (self.cutoff + 1)
    }

    fn osc_dim(&self) -> usize {
        self.cutoff + 1
    }

    #[inline]
    pub fn get(&self, q: usize, m: usize, p: usize, n: usize) -> C64 {
        let d = self.dim();
        let nn = self.osc_dim();
        self.data[(q * nn + m) * d + p * nn + n]
    }

    #[inline]
    pub fn set(&mut self, q: usize, m: usize, p: usize, n: usize, v: C64) {
        let d = self.dim();
        let nn = self.osc_dim();
        self.data[(q * nn + m) * d + p * nn + n] = v;
    }

    /// Assemble from the four oscillator-space blocks.
    pub fn from_blocks(ee: &OscMatrix, gg: &OscMatrix, eg: &OscMatrix, ge: &OscMatrix) -> Self {
        let nn = ee.n;
        let cutoff = nn - 1;
        let mut s = JointFockState { cutoff, data: vec![C64::new(0.0, 0.0); 4 * nn * nn] };
        for m in 0..nn {
            for n in 0..nn {
                s.set(0, m, 0, n, ee.get(m, n));
                s.set(1, m, 1, n, gg.get(m, n));
                s.set(0, m, 1, n, eg.get(m, n));
                s.set(1, m, 0, n, ge.get(m, n));
            }
        }
        s
    }

    pub fn block(&self, q: usize, p: usize) -> OscMatrix {
        let nn = self.osc_dim();
        let mut b = OscMatrix::zeros(nn);
        for m in 0..nn {
            for n in 0..nn {
                b.set(m, n, self.get(q, m, p, n));
            }
        }
        b
    }

    /// Product state qubit (x) oscillator.
    pub fn product(qubit: [[C64; 2]; 2], osc: &OscMatrix) -> Self {
        let scaled = |w: C64| osc.scale(w);
        Self::from_blocks(&scaled(qubit[0][0]), &scaled(qubit[1][1]), &scaled(qubit[0][1]), &scaled(qubit[1][0]))
    }

    /// |+><+| (x) thermal(N_a).
    pub fn plus_thermal(na: f64, cutoff: usize) -> Result<Self> {
        let th = thermal_state(na, cutoff)?;
        Ok(Self::product(crate::closed_dynamics::plus_state(), &th))
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Population of the top two Fock levels summed over both qubit branches.
    pub fn tail_estimate(&self) -> f64 {
        let nn = self.osc_dim();
        if nn < 2 {
            return self.get(0, 0, 0, 0).re + self.get(1, 0, 1, 0).re;
        }
        let mut tail = 0.0;
        for q in 0..2 {
            tail += self.get(q, nn - 1, q, nn - 1).re + self.get(q, nn - 2, q, nn - 2).re;
        }
        tail
    }

    /// Mean oscillator occupation Tr[n rho].
    pub fn mean_occupation(&self) -> f64 {
        let nn = self.osc_dim();
        let mut acc = 0.0;
        for q in 0..2 {
            for m in 0..nn {
                acc += m as f64 * self.get(q, m, q, m).re;
            }
        }
        acc
    }

    /// Reduced qubit density matrix.
    pub fn qubit_reduced(&self) -> [[C64; 2]; 2] {
        let nn = self.osc_dim();
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for q in 0..2 {
            for p in 0..2 {
                out[q][p] = (0..nn).map(|m| self.get(q, m, p, m)).sum();
            }
        }
        out
    }

    /// Smallest eigenvalue of the (Hermitized) state; monitors positivity drift.
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = hermitian_eigenvalues(&self.data, self.dim());
        eig.into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Oscillator state after projecting the qubit on |-> = (|e> - |g>)/sqrt(2);
    /// returns (probability, normalized oscillator matrix).
    pub fn project_minus(&self) -> (f64, OscMatrix) {
        let nn = self.osc_dim();
        let mut m = OscMatrix::zeros(nn);
        for i in 0..nn {
            for j in 0..nn {
                let v = 0.5
                    * (self.get(0, i, 0, j) + self.get(1, i, 1, j) - self.get(0, i, 1, j) - self.get(1, i, 0, j));
                m.set(i, j, v);
            }
        }
        let p = m.trace().re;
        if p > 0.0 {
            m = m.scale(C64::new(1.0 / p, 0.0));
        }
        (p, m)
    }

    /// Columnar text serialization with a header recording cutoff and basis
    /// ordering.
    pub fn write_state<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# qcdsim fock state")?;
        writeln!(w, "# cutoff = {}", self.cutoff)?;
        writeln!(w, "# basis = qubit(e,g) x fock(0..cutoff), index = q*(cutoff+1)+n")?;
        writeln!(w, "row col re im")?;
        let d = self.dim();
        for r in 0..d {
            for c in 0..d {
                let v = self.data[r * d + c];
                if v != C64::new(0.0, 0.0) {
                    writeln!(w, "{r} {c} {} {}", fmt_sig12(v.re), fmt_sig12(v.im))?;
                }
            }
        }
        Ok(())
    }

    pub fn read_state<R: BufRead>(r: R) -> Result<Self> {
        let mut cutoff: Option<usize> = None;
        let mut entries: Vec<(usize, usize, C64)> = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| Error::InvalidParameter(format!("state read: {e}")))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with("row") {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("cutoff =") {
                    cutoff = v.trim().parse().ok();
                }
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::InvalidParameter(format!("expected 4 columns, got {}", f.len())));
            }
            let parse_err = |s: &str| Error::InvalidParameter(format!("bad number `{s}`"));
            let row: usize = f[0].parse().map_err(|_| parse_err(f[0]))?;
            let col: usize = f[1].parse().map_err(|_| parse_err(f[1]))?;
            let re: f64 = f[2].parse().map_err(|_| parse_err(f[2]))?;
            let im: f64 = f[3].parse().map_err(|_| parse_err(f[3]))?;
            entries.push((row, col, C64::new(re, im)));
        }
        let cutoff = cutoff.ok_or_else(|| Error::InvalidParameter("missing cutoff header".into()))?;
        let d = 2 * (cutoff + 1);
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for (r, c, v) in entries {
            if r >= d || c >= d {
                return Err(Error::InvalidParameter(format!("index ({r},{c}) outside dim {d}")));
            }
            data[r * d + c] = v;
        }
        Ok(JointFockState { cutoff, data })
    }
}

/// Thermal oscillator state: geometric populations renormalized on the
/// truncated space. Fails when the truncated tail weight reaches 1e-10.
pub fn thermal_state(na: f64, cutoff: usize) -> Result<OscMatrix> {
    if na < 0.0 {
        return Err(Error::InvalidParameter(format!("N_a must be >= 0, got {na}")));
    }
    let nn = cutoff + 1;
    if na == 0.0 {
        let mut v = vec![0.0; nn];
        v[0] = 1.0;
        return Ok(OscMatrix::diagonal(&v));
    }
    let q = na / (na + 1.0);
    let tail = q.powi(nn as i32);
    if tail >= 1e-10 {
        return Err(Error::CutoffTooSmall { cutoff, tail });
    }
    let mut p = Vec::with_capacity(nn);
    let mut pk = 1.0 / (na + 1.0);
    let mut sum = 0.0;
    for _ in 0..nn {
        p.push(pk);
        sum += pk;
        pk *= q;
    }
    for v in &mut p {
        *v /= sum;
    }
    Ok(OscMatrix::diagonal(&p))
}

/// Cutoff heuristic: displaced thermal states need support ~ |2 alpha|^2 + N_a
/// with Gaussian tails.
pub fn suggest_cutoff(na: f64, alpha_max: f64) -> usize {
    (4.0 * (na + 1.0) + 4.0 * (2.0 * alpha_max) * (2.0 * alpha_max) + 20.0).ceil() as usize
}

/// Cutoff suggestion for integrating `config` out to time `t`.
pub fn suggest_cutoff_for(config: &SystemConfig, t: f64) -> usize {
    suggest_cutoff(config.rates.na, config.profile.abs_integral(t))
}

/// Dissipator prefactors (r_minus, r_plus, r_z) multiplying D[sigma-],
/// D[sigma+] and D[sigma3] in the printed conventions of each mode.
fn qubit_dissipator_rates(rates: &RateInputs) -> (f64, f64, f64) {
    match rates.mode {
        RateMode::Standard => (
            0.5 * rates.gamma1 * (rates.nq + 1.0),
            0.5 * rates.gamma1 * rates.nq,
            0.25 * rates.gamma2,
        ),
        RateMode::ExchangedQed => {
            let g1 = rates.gamma1 * (rates.nq + 0.5);
            let g2 = 0.5 * rates.gamma1 * (rates.nq + 0.5) + rates.gamma2;
            (0.5 * g2, 0.5 * g2, 0.25 * g1)
        }
    }
}

/// Right-hand side of the master equation, written block-wise. `out` must be
/// distinct from `rho`.
#[allow(clippy::too_many_arguments)]
fn master_rhs(
    t: f64,
    rho: &[C64],
    out: &mut [C64],
    nn: usize,
    profile: &CouplingProfile,
    kappa: f64,
    na: f64,
    r_minus: f64,
    r_plus: f64,
    r_z: f64,
) {
    let dim = 2 * nn;
    let g = profile.amplitude(t);
    let nu = profile.nu();
    let e_minus = C64::cis(-nu * t); // multiplies a
    let e_plus = C64::cis(nu * t); // multiplies a^dag
    let c_down = 0.5 * kappa * (na + 1.0);
    let c_up = 0.5 * kappa * na;
    let zero = C64::new(0.0, 0.0);
    let at = |q: usize, m: isize, p: usize, n: isize| -> C64 {
        if m < 0 || n < 0 || m as usize >= nn || n as usize >= nn {
            zero
        } else {
            rho[(q * nn + m as usize) * dim + p * nn + n as usize]
        }
    };
    let sign = [1.0f64, -1.0];

    for q in 0..2 {
        for p in 0..2 {
            for m in 0..nn {
                let mf = m as f64;
                for n in 0..nn {
                    let nf = n as f64;
                    let mi = m as isize;
                    let ni = n as isize;
                    let here = at(q, mi, p, ni);
                    let mut acc = zero;

                    // -i g(t) (s_q X rho - s_p rho X)
                    if g != 0.0 {
                        let xrho = e_minus * (mf + 1.0).sqrt() * at(q, mi + 1, p, ni)
                            + e_plus * mf.sqrt() * at(q, mi - 1, p, ni);
                        let rhox = e_minus * nf.sqrt() * at(q, mi, p, ni - 1)
                            + e_plus * (nf + 1.0).sqrt() * at(q, mi, p, ni + 1);
                        acc += -C64::i() * g * (sign[q] * xrho - sign[p] * rhox);
                    }

                    // Oscillator bath.
                    if kappa > 0.0 {
                        acc += c_down
                            * (2.0 * ((mf + 1.0) * (nf + 1.0)).sqrt() * at(q, mi + 1, p, ni + 1)
                                - (mf + nf) * here);
                        acc += c_up
                            * (2.0 * (mf * nf).sqrt() * at(q, mi - 1, p, ni - 1) - (mf + nf + 2.0) * here);
                    }

                    // Qubit bath: D[sigma-], D[sigma+], D[sigma3] block action.
                    if q == p {
                        let other = at(1 - q, mi, 1 - p, ni);
                        if q == 0 {
                            acc += -2.0 * r_minus * here + 2.0 * r_plus * other;
                        } else {
                            acc += 2.0 * r_minus * other - 2.0 * r_plus * here;
                        }
                    } else {
                        acc += -(r_minus + r_plus + 4.0 * r_z) * here;
                    }

                    out[(q * nn + m) * dim + p * nn + n] = acc;
                }
            }
        }
    }
}

/// Integrate the master equation from `initial` for time `t`.
///
/// Trace is preserved to ~1e-9 by the stepper tolerance and positivity is
/// monitored, not corrected. A final top-level population above
/// [`TAIL_LIMIT`] reports a truncation breach.
pub fn integrate(initial: &JointFockState, config: &SystemConfig, t: f64) -> Result<JointFockState> {
    integrate_between(initial, config, 0.0, t)
}

/// Continue a trajectory from absolute time `t0` to `t1`; the coupling
/// profile and modulation phase are evaluated at absolute time.
pub fn integrate_between(
    initial: &JointFockState,
    config: &SystemConfig,
    t0: f64,
    t1: f64,
) -> Result<JointFockState> {
    let nn = initial.osc_dim();
    let kappa = config.rates.kappa;
    let na = config.rates.na;
    let (r_minus, r_plus, r_z) = qubit_dissipator_rates(&config.rates);
    let profile = config.profile.clone();
    let opts = ode::OdeOptions { rtol: 1e-9, atol: 1e-13, ..Default::default() };
    let data = ode::integrate(
        |s, y, dy| master_rhs(s, y, dy, nn, &profile, kappa, na, r_minus, r_plus, r_z),
        t0,
        t1,
        &initial.data,
        &opts,
    )?;
    let state = JointFockState { cutoff: initial.cutoff, data };
    let tail = state.tail_estimate();
    if tail > TAIL_LIMIT {
        return Err(Error::TruncationBreach { cutoff: state.cutoff, tail, limit: TAIL_LIMIT });
    }
    Ok(state)
}

/// C-Matrix extraction chi_jk(beta) = Tr_osc[rho_jk D(beta)], returned in
/// component order [ee, gg, eg, ge].
pub fn cmatrix_extract(state: &JointFockState, beta: C64) -> [C64; 4] {
    let d = displacement_matrix(beta, state.cutoff);
    let nn = state.osc_dim();
    let mut out = [C64::new(0.0, 0.0); 4];
    for (slot, &(q, p)) in [(0usize, 0usize), (1, 1), (0, 1), (1, 0)].iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..nn {
            for k in 0..nn {
                acc += state.get(q, m, p, k) * d.get(k, m);
            }
        }
        out[slot] = acc;
    }
    out
}

/// Truncation-support indicator for extraction at `beta`: the worst
/// displacement column-norm defect over the Fock levels a state actually
/// occupies (columns at the cutoff edge always lose mass; what matters is
/// whether the loss reaches into the occupied support).
pub fn extraction_defect(beta: C64, cutoff: usize, support: usize) -> f64 {
    let d = displacement_matrix(beta, cutoff);
    let n = cutoff + 1;
    let mut worst: f64 = 0.0;
    for j in 0..=support.min(cutoff) {
        let norm_sq: f64 = (0..n).map(|i| d.get(i, j).norm_sqr()).sum();
        worst = worst.max((norm_sq.sqrt() - 1.0).abs());
    }
    worst
}

/// Conjugate the e-block by D(alpha) and the g-block by D(-alpha).
pub fn apply_controlled_displacement(state: &JointFockState, alpha: C64) -> JointFockState {
    let dp = displacement_matrix(alpha, state.cutoff);
    let dm = displacement_matrix(-alpha, state.cutoff);
    let ee = dp.mul(&state.block(0, 0)).mul(&dp.adjoint());
    let gg = dm.mul(&state.block(1, 1)).mul(&dm.adjoint());
    let eg = dp.mul(&state.block(0, 1)).mul(&dm.adjoint());
    let ge = dm.mul(&state.block(1, 0)).mul(&dp.adjoint());
    JointFockState::from_blocks(&ee, &gg, &eg, &ge)
}

fn hermitian_eigenvalues(data: &[C64], dim: usize) -> Vec<f64> {
    let m = nalgebra::DMatrix::from_fn(dim, dim, |r, c| data[r * dim + c]);
    // Hermitize against integrator drift before the eigensolve.
    let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// Partial transpose over the qubit index: the off-diagonal blocks swap.
pub fn partial_transpose(state: &JointFockState) -> JointFockState {
    JointFockState::from_blocks(
        &state.block(0, 0),
        &state.block(1, 1),
        &state.block(1, 0),
        &state.block(0, 1),
    )
}

/// Negativity N(rho) = ||rho^{T_q}||_1 - 1 = 2 sum |negative eigenvalues|.
pub fn negativity(state: &JointFockState) -> f64 {
    let pt = partial_transpose(state);
    let eig = hermitian_eigenvalues(&pt.data, pt.dim());
    2.0 * eig.into_iter().filter(|&l| l < 0.0).map(|l| -l).sum::<f64>()
}

/// [`scenario_state`] with the cutoff doubled until the thermal tail check
/// passes (at most three doublings).
pub fn scenario_state_auto(alpha0: C64, w: f64, na: f64, start_cutoff: usize) -> Result<JointFockState> {
    let mut cutoff = start_cutoff;
    for _ in 0..3 {
        match scenario_state(alpha0, w, na, cutoff) {
            Err(Error::CutoffTooSmall { .. }) => cutoff *= 2,
            other => return other,
        }
    }
    scenario_state(alpha0, w, na, cutoff)
}

/// The worked-scenario joint state: displaced thermal blocks with coherence
/// weight e^{-w}.
pub fn scenario_state(alpha0: C64, w: f64, na: f64, cutoff: usize) -> Result<JointFockState> {
    let th = thermal_state(na, cutoff)?;
    let dp = displacement_matrix(alpha0, cutoff);
    let dm = displacement_matrix(-alpha0, cutoff);
    let half = C64::new(0.5, 0.0);
    let coh = C64::new(0.5 * (-w).exp(), 0.0);
    let ee = dp.mul(&th).mul(&dp.adjoint()).scale(half);
    let gg = dm.mul(&th).mul(&dm.adjoint()).scale(half);
    let eg = dp.mul(&th).mul(&dp).scale(coh);
    let ge = dm.mul(&th).mul(&dm).scale(coh);
    Ok(JointFockState::from_blocks(&ee, &gg, &eg, &ge))
}

/// Test vector |psi_m> = (|e> D(-alpha0)|m> - |g> D(alpha0)|m>)/sqrt(2).
pub fn test_state(alpha0: C64, m: usize, cutoff: usize) -> Vec<C64> {
    let nn = cutoff + 1;
    let dp = displacement_matrix(alpha0, cutoff);
    let dm = displacement_matrix(-alpha0, cutoff);
    let mut v = vec![C64::new(0.0, 0.0); 2 * nn];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..nn {
        v[i] = s * dm.get(i, m);
        v[nn + i] = -s * dp.get(i, m);
    }
    v
}

/// <psi| M |psi> for a joint-space matrix.
pub fn expectation(state: &JointFockState, psi: &[C64]) -> C64 {
    let d = state.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..d {
            row += state.data[i * d + j] * psi[j];
        }
        acc += psi[i].conj() * row;
    }
    acc
}

/// Wigner function of an oscillator state at the origin through the parity
/// sum W(0) = (2/pi) sum_n (-1)^n rho_nn.
pub fn wigner_origin_parity(osc: &OscMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..osc.n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * osc.get(i, i).re;
    }
    2.0 / std::f64::consts::PI * acc
}
