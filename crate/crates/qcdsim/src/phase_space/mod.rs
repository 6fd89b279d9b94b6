// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Open-system C-Matrix solver.
//!
//! The four components of chi(beta, t) obey decoupled drift equations for the
//! off-diagonals (solved exactly by the kernel substitution) and a pair of
//! diagonal equations coupled by the qubit heating and cooling rates. The
//! diagonal pair reduces, per phase-space point, to a 2-dimensional ODE in
//! time; closed forms exist for vanishing heating rate and at first
//! perturbative order.
//!
//! Instead of the literal Phi ansatz (which divides by the initial data),
//! the diagonal integrators track y_g = e^{-Gamma_h t} Phi_gg chi_gg(.,0) and
//! y_e = e^{-Gamma_c t} Phi_ee chi_ee(.,0):
//!
//!   y_g' = -Gamma_h y_g + Gamma_c e^{+i theta(t)} y_e
//!   y_e' = -Gamma_c y_e + Gamma_h e^{-i theta(t)} y_g
//!
//! with theta(t) = 4 Im[e^{kappa t/2} lambda(t) conj(beta')] real, so the
//! system has unit-modulus driving and bounded coefficients for all t, and
//! initial qubit states |e> or |g> need no special casing.

mod kernels;

pub use kernels::{kernels, KernelSet};

use crate::error::{Error, Result};
use crate::exec::map_cells;
use crate::fmt::fmt_sig12;
use crate::model::SystemConfig;
use crate::closed_dynamics::CharFn;
use crate::{ode, quad, C64};
use std::io::{BufRead, Write};
use std::sync::Arc;

/// Component order used across fields, tables and comparisons.
pub const COMPONENT_NAMES: [&str; 4] = ["chi_ee", "chi_gg", "chi_eg", "chi_ge"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridPattern {
    Cartesian,
    Polar,
}

/// Sampling grid over the complex beta plane.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub pattern: GridPattern,
    /// Maximum |beta|.
    pub extent: f64,
    /// Points per axis.
    pub counts: usize,
}

impl GridSpec {
    pub fn cartesian(extent: f64, counts: usize) -> Self {
        GridSpec { pattern: GridPattern::Cartesian, extent, counts }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.extent > 0.0) {
            return Err(Error::InvalidParameter(format!("grid extent must be > 0, got {}", self.extent)));
        }
        if self.counts < 2 {
            return Err(Error::InvalidParameter(format!("grid needs >= 2 points per axis, got {}", self.counts)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.counts * self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.counts == 0
    }

    /// Grid points in row-major order.
    pub fn points(&self) -> Result<Vec<C64>> {
        self.validate()?;
        let n = self.counts;
        let mut pts = Vec::with_capacity(n * n);
        match self.pattern {
            GridPattern::Cartesian => {
                for ix in 0..n {
                    let x = -self.extent + 2.0 * self.extent * ix as f64 / (n - 1) as f64;
                    for iy in 0..n {
                        let y = -self.extent + 2.0 * self.extent * iy as f64 / (n - 1) as f64;
                        pts.push(C64::new(x, y));
                    }
                }
            }
            GridPattern::Polar => {
                for ir in 0..n {
                    let r = self.extent * (ir + 1) as f64 / n as f64;
                    for ia in 0..n {
                        let th = 2.0 * std::f64::consts::PI * ia as f64 / n as f64;
                        pts.push(C64::from_polar(r, th));
                    }
                }
            }
        }
        Ok(pts)
    }

    /// Cartesian 101x101 grid sized so the damping envelope
    /// e^{-Delta (1-e^{-kappa t}) extent^2} drops below 1e-12, widened by the
    /// off-diagonal bump position and floored to cover the initial Gaussian
    /// when kappa t is small.
    pub fn default_for(config: &SystemConfig, t: f64) -> Result<Self> {
        let delta = config.derived.delta;
        let damp = (1.0 - (-config.rates.kappa * t).exp()).clamp(0.1, 1.0);
        let ks = kernels(&config.profile, &config.rates, &config.derived, t)?;
        let shift = ks.xi.norm() * (0.5 * config.rates.kappa * t).exp();
        let extent = ((27.631 / (delta * damp)).sqrt() + shift).min(50.0);
        Ok(GridSpec { pattern: GridPattern::Cartesian, extent, counts: 101 })
    }
}

/// How a sampled field was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Ode,
    Perturbative,
    Oracle,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Ode => "ode",
            Provenance::Perturbative => "perturbative",
            Provenance::Oracle => "oracle",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "analytic" => Some(Provenance::Analytic),
            "ode" => Some(Provenance::Ode),
            "perturbative" => Some(Provenance::Perturbative),
            "oracle" => Some(Provenance::Oracle),
            _ => None,
        }
    }
}

/// Initial C-Matrix data as four beta-functions [ee, gg, eg, ge].
#[derive(Clone)]
pub struct CMatrixInit {
    components: [CharFn; 4],
}

impl CMatrixInit {
    pub fn from_components(ee: CharFn, gg: CharFn, eg: CharFn, ge: CharFn) -> Self {
        CMatrixInit { components: [ee, gg, eg, ge] }
    }

    /// Product of a qubit density matrix (index 0 = e, 1 = g) with an
    /// oscillator characteristic function.
    pub fn from_product(qubit: [[C64; 2]; 2], osc: CharFn) -> Self {
        let mk = |w: C64| -> CharFn {
            let osc = osc.clone();
            Arc::new(move |b| w * osc(b))
        };
        CMatrixInit { components: [mk(qubit[0][0]), mk(qubit[1][1]), mk(qubit[0][1]), mk(qubit[1][0])] }
    }

    /// |+><+| (x) thermal: all four components (1/2) e^{-Delta |beta|^2}.
    pub fn plus_thermal(na: f64) -> Self {
        Self::from_product(crate::closed_dynamics::plus_state(), crate::closed_dynamics::thermal_charfn(na))
    }

    pub fn excited_thermal(na: f64) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self::from_product([[one, zero], [zero, zero]], crate::closed_dynamics::thermal_charfn(na))
    }

    pub fn ground_thermal(na: f64) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self::from_product([[zero, zero], [zero, one]], crate::closed_dynamics::thermal_charfn(na))
    }

    /// Initial data interpolated from a stored table (cartesian grids only).
    pub fn from_field(field: CMatrixField) -> Result<Self> {
        field.grid.validate()?;
        if field.grid.pattern != GridPattern::Cartesian {
            return Err(Error::InvalidParameter("custom initial data needs a cartesian grid".into()));
        }
        let shared = Arc::new(field);
        let mk = |comp: usize| -> CharFn {
            let f = shared.clone();
            Arc::new(move |b| f.interpolate(comp, b).unwrap_or(C64::new(0.0, 0.0)))
        };
        Ok(CMatrixInit { components: [mk(0), mk(1), mk(2), mk(3)] })
    }

    pub fn ee(&self, b: C64) -> C64 {
        (self.components[0])(b)
    }
    pub fn gg(&self, b: C64) -> C64 {
        (self.components[1])(b)
    }
    pub fn eg(&self, b: C64) -> C64 {
        (self.components[2])(b)
    }
    pub fn ge(&self, b: C64) -> C64 {
        (self.components[3])(b)
    }

    /// Probe the trace and Hermiticity invariants at a few sample points.
    pub fn validate(&self) -> Result<()> {
        let zero = C64::new(0.0, 0.0);
        let tr = self.ee(zero) + self.gg(zero);
        if (tr - 1.0).norm() > 1e-9 {
            return Err(Error::InvalidParameter(format!("initial C-Matrix trace {tr} != 1")));
        }
        for &b in &[C64::new(0.31, -0.17), C64::new(-0.82, 0.55)] {
            if (self.ge(b) - self.eg(-b).conj()).norm() > 1e-9 {
                return Err(Error::InvalidParameter("initial C-Matrix violates Hermiticity".into()));
            }
        }
        Ok(())
    }
}

/// Sampled C-Matrix on a grid, row-major, components ordered [ee, gg, eg, ge].
#[derive(Debug, Clone)]
pub struct CMatrixField {
    pub grid: GridSpec,
    pub t: f64,
    pub values: Vec<[C64; 4]>,
    pub provenance: Provenance,
}

impl CMatrixField {
    /// Largest absolute component difference against another field on the
    /// same grid.
    pub fn max_abs_diff(&self, other: &CMatrixField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| (0..4).map(move |k| (a[k] - b[k]).norm()))
            .fold(0.0, f64::max)
    }

    /// chi_ee(0) + chi_gg(0) - 1, when the grid contains the origin.
    pub fn trace_defect(&self) -> Option<f64> {
        let pts = self.grid.points().ok()?;
        let idx = pts.iter().position(|p| p.norm() < 1e-12)?;
        Some((self.values[idx][0] + self.values[idx][1] - 1.0).norm())
    }

    /// Bilinear interpolation of one component on a cartesian grid; zero
    /// outside the stored extent (sampled fields are Gaussian-class).
    pub fn interpolate(&self, comp: usize, beta: C64) -> Result<C64> {
        if self.grid.pattern != GridPattern::Cartesian {
            return Err(Error::InvalidParameter("interpolation needs a cartesian grid".into()));
        }
        let n = self.grid.counts;
        let ext = self.grid.extent;
        let step = 2.0 * ext / (n - 1) as f64;
        let fx = (beta.re + ext) / step;
        let fy = (beta.im + ext) / step;
        if fx < 0.0 || fy < 0.0 || fx > (n - 1) as f64 || fy > (n - 1) as f64 {
            return Ok(C64::new(0.0, 0.0));
        }
        let ix = (fx.floor() as usize).min(n - 2);
        let iy = (fy.floor() as usize).min(n - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let v = |i: usize, j: usize| self.values[i * n + j][comp];
        Ok(v(ix, iy) * ((1.0 - tx) * (1.0 - ty))
            + v(ix + 1, iy) * (tx * (1.0 - ty))
            + v(ix, iy + 1) * ((1.0 - tx) * ty)
            + v(ix + 1, iy + 1) * (tx * ty))
    }

    /// Columnar text table; one row per grid point in row-major order.
    pub fn write_table<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# qcdsim cmatrix table")?;
        writeln!(w, "# t = {}", fmt_sig12(self.t))?;
        writeln!(w, "# provenance = {}", self.provenance.as_str())?;
        let pattern = match self.grid.pattern {
            GridPattern::Cartesian => "cartesian",
            GridPattern::Polar => "polar",
        };
        writeln!(w, "# grid = {pattern} extent={} counts={}", fmt_sig12(self.grid.extent), self.grid.counts)?;
        writeln!(
            w,
            "re_beta im_beta re_chi_ee im_chi_ee re_chi_gg im_chi_gg re_chi_eg im_chi_eg re_chi_ge im_chi_ge"
        )?;
        let pts = self.grid.points().map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))?;
        for (p, v) in pts.iter().zip(&self.values) {
            let mut row = vec![fmt_sig12(p.re), fmt_sig12(p.im)];
            for comp in v {
                row.push(fmt_sig12(comp.re));
                row.push(fmt_sig12(comp.im));
            }
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    /// Parse a table produced by [`CMatrixField::write_table`].
    pub fn read_table<R: BufRead>(r: R) -> Result<CMatrixField> {
        let mut t = 0.0;
        let mut provenance = Provenance::Analytic;
        let mut grid: Option<GridSpec> = None;
        let mut values = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| Error::InvalidParameter(format!("table read: {e}")))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("t =") {
                    t = v.trim().parse().map_err(|_| Error::InvalidParameter("bad t header".into()))?;
                } else if let Some(v) = rest.strip_prefix("provenance =") {
                    provenance = Provenance::parse(v.trim())
                        .ok_or_else(|| Error::InvalidParameter("bad provenance header".into()))?;
                } else if let Some(v) = rest.strip_prefix("grid =") {
                    let mut pattern = GridPattern::Cartesian;
                    let mut extent = 0.0;
                    let mut counts = 0;
                    for tok in v.split_whitespace() {
                        if tok == "polar" {
                            pattern = GridPattern::Polar;
                        } else if let Some(x) = tok.strip_prefix("extent=") {
                            extent = x.parse().map_err(|_| Error::InvalidParameter("bad extent".into()))?;
                        } else if let Some(x) = tok.strip_prefix("counts=") {
                            counts = x.parse().map_err(|_| Error::InvalidParameter("bad counts".into()))?;
                        }
                    }
                    grid = Some(GridSpec { pattern, extent, counts });
                }
                continue;
            }
            if line.starts_with("re_beta") {
                continue;
            }
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| Error::InvalidParameter(format!("bad number `{s}`"))))
                .collect::<Result<_>>()?;
            if nums.len() != 10 {
                return Err(Error::InvalidParameter(format!("expected 10 columns, got {}", nums.len())));
            }
            values.push([
                C64::new(nums[2], nums[3]),
                C64::new(nums[4], nums[5]),
                C64::new(nums[6], nums[7]),
                C64::new(nums[8], nums[9]),
            ]);
        }
        let grid = grid.ok_or_else(|| Error::InvalidParameter("missing grid header".into()))?;
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "row count {} does not match grid {}x{}",
                values.len(),
                grid.counts,
                grid.counts
            )));
        }
        Ok(CMatrixField { grid, t, values, provenance })
    }
}

/// Exact off-diagonal solutions at one phase-space point: the initial data
/// shifted by the kernels, under the thermal Gaussian envelope and the
/// dephasing factor e^{-tau}.
pub fn offdiag_solution(init: &CMatrixInit, ks: &KernelSet, kappa: f64, delta: f64, beta: C64) -> (C64, C64) {
    let decay = (-0.5 * kappa * ks.t).exp();
    let damp = delta * (1.0 - (-kappa * ks.t).exp());
    let eg = init.eg(beta * decay - ks.xi) * (-damp * (beta - ks.mu).norm_sqr() - ks.tau).exp();
    let ge = init.ge(beta * decay + ks.xi) * (-damp * (beta + ks.mu).norm_sqr() - ks.tau).exp();
    (eg, ge)
}

/// Phase factor exp(+- [lambda beta* - lambda* beta]) as a unit-modulus
/// complex number; the bracket is purely imaginary.
fn drift_phase(lambda: C64, beta: C64) -> C64 {
    C64::cis(2.0 * (lambda * beta.conj()).im)
}

/// Uncoupled diagonal solutions (heating of the other component ignored):
/// pure damping envelope, coherent drift phase and population decay.
#[allow(clippy::too_many_arguments)]
pub fn diag_uncoupled(
    init: &CMatrixInit,
    lambda: C64,
    kappa: f64,
    delta: f64,
    gamma_c: f64,
    gamma_h: f64,
    beta: C64,
    t: f64,
) -> (C64, C64) {
    let shrunk = beta * (-0.5 * kappa * t).exp();
    let damp = (-delta * (1.0 - (-kappa * t).exp()) * beta.norm_sqr()).exp();
    let phase = drift_phase(lambda, beta);
    let ee = init.ee(shrunk) * damp * phase * (-gamma_c * t).exp();
    let gg = init.gg(shrunk) * damp * phase.conj() * (-gamma_h * t).exp();
    (ee, gg)
}

/// Driving phase theta(s) of the diagonal pair at fixed ODE argument
/// beta_prime; e^{kappa s/2} lambda(s) is evaluated in its non-cancelling
/// closed form.
fn driving_theta(config: &SystemConfig, s: f64, beta_prime: C64) -> Result<f64> {
    let z = kernels::lambda_growing(&config.profile, config.rates.kappa, s)?;
    Ok(4.0 * (z * beta_prime.conj()).im)
}

fn diag_envelopes(config: &SystemConfig, lambda: C64, beta: C64, t: f64) -> (C64, C64) {
    let delta = config.derived.delta;
    let kappa = config.rates.kappa;
    let damp = (-delta * (1.0 - (-kappa * t).exp()) * beta.norm_sqr()).exp();
    let phase = drift_phase(lambda, beta);
    (damp * phase, damp * phase.conj()) // (ee envelope, gg envelope)
}

/// Closed-form diagonals for vanishing heating rate; exact for the
/// N_q = 0 standard-mode case. Returns (chi_ee, chi_gg).
pub fn diag_zero_heating(init: &CMatrixInit, config: &SystemConfig, t: f64, beta: C64) -> Result<(C64, C64)> {
    let d = &config.derived;
    if d.gamma_h != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "diag_zero_heating requires Gamma_h = 0, got {}",
            d.gamma_h
        )));
    }
    let kappa = config.rates.kappa;
    let beta_prime = beta * (-0.5 * kappa * t).exp();
    let integral = if d.gamma_c > 0.0 {
        quad::integrate(
            |s| {
                let th = driving_theta(config, s, beta_prime).unwrap_or(f64::NAN);
                (-d.gamma_c * s).exp() * C64::cis(th)
            },
            0.0,
            t,
            1e-10,
        )?
    } else {
        C64::new(0.0, 0.0)
    };
    let y_g = init.gg(beta_prime) + d.gamma_c * init.ee(beta_prime) * integral;
    let y_e = init.ee(beta_prime) * (-d.gamma_c * t).exp();
    let ks = kernels(&config.profile, &config.rates, d, t)?;
    let (env_ee, env_gg) = diag_envelopes(config, ks.lambda, beta, t);
    Ok((env_ee * y_e, env_gg * y_g))
}

/// Whether first-order perturbation theory is inside its stated validity
/// window at this time.
pub fn perturbative_in_range(config: &SystemConfig, t: f64) -> bool {
    config.derived.gamma_c * t <= 0.2 && config.derived.gamma_h * t <= 0.2
}

/// First-order diagonals, O((Gamma t)^2) error. The boolean is false when
/// the Gamma t <= 0.2 validity bound is exceeded.
pub fn diag_perturbative(
    init: &CMatrixInit,
    config: &SystemConfig,
    t: f64,
    beta: C64,
) -> Result<((C64, C64), bool)> {
    let d = &config.derived;
    let kappa = config.rates.kappa;
    let beta_prime = beta * (-0.5 * kappa * t).exp();
    let j = quad::integrate(
        |s| {
            let th = driving_theta(config, s, beta_prime).unwrap_or(f64::NAN);
            C64::cis(th)
        },
        0.0,
        t,
        1e-10,
    )?;
    let y_g = (-d.gamma_h * t).exp() * (init.gg(beta_prime) + d.gamma_c * init.ee(beta_prime) * j);
    let y_e = (-d.gamma_c * t).exp() * (init.ee(beta_prime) + d.gamma_h * init.gg(beta_prime) * j.conj());
    let ks = kernels(&config.profile, &config.rates, d, t)?;
    let (env_ee, env_gg) = diag_envelopes(config, ks.lambda, beta, t);
    Ok(((env_ee * y_e, env_gg * y_g), perturbative_in_range(config, t)))
}

/// Coupled diagonal pair integrated to time `t` at a single point.
/// Adaptive stepping, relative tolerance 1e-9.
pub fn diag_ode_at(init: &CMatrixInit, config: &SystemConfig, t: f64, beta: C64) -> Result<(C64, C64)> {
    let d = config.derived;
    let kappa = config.rates.kappa;
    let beta_prime = beta * (-0.5 * kappa * t).exp();
    let y0 = [init.gg(beta_prime), init.ee(beta_prime)];
    let opts = ode::OdeOptions { rtol: 1e-9, atol: 1e-13, ..Default::default() };
    let rhs = |s: f64, y: &[C64], dy: &mut [C64]| {
        let th = driving_theta(config, s, beta_prime).unwrap_or(f64::NAN);
        let drive = C64::cis(th);
        dy[0] = -d.gamma_h * y[0] + d.gamma_c * drive * y[1];
        dy[1] = -d.gamma_c * y[1] + d.gamma_h * drive.conj() * y[0];
    };
    let y = ode::integrate(rhs, 0.0, t, &y0, &opts).map_err(|e| match e {
        Error::StepSizeUnderflow { t, .. } => Error::StepSizeUnderflow { t, beta: Some(beta) },
        other => other,
    })?;
    let ks = kernels(&config.profile, &config.rates, &d, t)?;
    let (env_ee, env_gg) = diag_envelopes(config, ks.lambda, beta, t);
    Ok((env_ee * y[1], env_gg * y[0]))
}

/// Coupled diagonals on a grid; points are independent tasks and the result
/// order is the grid's row-major order regardless of parallelism.
pub fn diag_ode_solve(init: &CMatrixInit, config: &SystemConfig, t: f64, grid: &GridSpec) -> Result<Vec<(C64, C64)>> {
    let points = grid.points()?;
    map_cells(points.len(), |i| diag_ode_at(init, config, t, points[i])).into_iter().collect()
}

/// Solver method selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMethod {
    /// Closed forms wherever they exist, ODE otherwise.
    #[default]
    Auto,
    Ode,
    Perturbative,
}

/// Solve the full C-Matrix at time `t` on a grid. Off-diagonals are always
/// analytic; the diagonal path depends on the rates and the method.
pub fn solve_cmatrix(
    config: &SystemConfig,
    init: &CMatrixInit,
    t: f64,
    grid: &GridSpec,
    method: SolveMethod,
) -> Result<CMatrixField> {
    init.validate()?;
    grid.validate()?;
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    let d = config.derived;
    let ks = kernels(&config.profile, &config.rates, &d, t)?;
    let kappa = config.rates.kappa;
    let points = grid.points()?;

    enum DiagPath {
        Uncoupled,
        ZeroHeating,
        Ode,
        Perturbative,
    }
    let path = match method {
        SolveMethod::Auto => {
            if d.gamma_c == 0.0 && d.gamma_h == 0.0 {
                DiagPath::Uncoupled
            } else if d.gamma_h == 0.0 {
                DiagPath::ZeroHeating
            } else {
                DiagPath::Ode
            }
        }
        SolveMethod::Ode => DiagPath::Ode,
        SolveMethod::Perturbative => DiagPath::Perturbative,
    };

    let values: Result<Vec<[C64; 4]>> = map_cells(points.len(), |i| {
        let b = points[i];
        let (eg, ge) = offdiag_solution(init, &ks, kappa, d.delta, b);
        let (ee, gg) = match path {
            DiagPath::Uncoupled => diag_uncoupled(init, ks.lambda, kappa, d.delta, d.gamma_c, d.gamma_h, b, t),
            DiagPath::ZeroHeating => diag_zero_heating(init, config, t, b)?,
            DiagPath::Ode => diag_ode_at(init, config, t, b)?,
            DiagPath::Perturbative => diag_perturbative(init, config, t, b)?.0,
        };
        Ok([ee, gg, eg, ge])
    })
    .into_iter()
    .collect();

    let provenance = match path {
        DiagPath::Uncoupled | DiagPath::ZeroHeating => Provenance::Analytic,
        DiagPath::Ode => Provenance::Ode,
        DiagPath::Perturbative => Provenance::Perturbative,
    };
    Ok(CMatrixField { grid: grid.clone(), t, values: values?, provenance })
}

/// Evaluate the dispatched solution at a single point (same path selection
/// as [`solve_cmatrix`]).
pub fn solve_cmatrix_at(
    config: &SystemConfig,
    init: &CMatrixInit,
    t: f64,
    beta: C64,
    method: SolveMethod,
) -> Result<[C64; 4]> {
    let d = config.derived;
    let ks = kernels(&config.profile, &config.rates, &d, t)?;
    let (eg, ge) = offdiag_solution(init, &ks, config.rates.kappa, d.delta, beta);
    let (ee, gg) = match method {
        SolveMethod::Auto if d.gamma_c == 0.0 && d.gamma_h == 0.0 => {
            diag_uncoupled(init, ks.lambda, config.rates.kappa, d.delta, d.gamma_c, d.gamma_h, beta, t)
        }
        SolveMethod::Auto if d.gamma_h == 0.0 => diag_zero_heating(init, config, t, beta)?,
        SolveMethod::Auto | SolveMethod::Ode => diag_ode_at(init, config, t, beta)?,
        SolveMethod::Perturbative => diag_perturbative(init, config, t, beta)?.0,
    };
    Ok([ee, gg, eg, ge])
}
