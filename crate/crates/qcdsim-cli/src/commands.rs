// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Subcommand implementations. All file output is byte-deterministic for a
//! fixed configuration and version: values go through the shortest-roundtrip
//! 12-digit formatter and rows follow grid/index order.

use crate::config::{InitialKind, OracleMode, RunConfig};
use crate::CliError;
use qcdsim::fmt::fmt_sig12;
use qcdsim::fock_oracle::{self, JointFockState, OscMatrix};
use qcdsim::model::{platform_preset, RateMode};
use qcdsim::observables::{self, OracleColumn, QuadSpec, ScanConfig};
use qcdsim::phase_space::{solve_cmatrix, solve_cmatrix_at, CMatrixField, SolveMethod, COMPONENT_NAMES};
use qcdsim::{Error, C64};
use std::fs;
use std::io::{BufReader, BufWriter, Read};
use std::path::{Path, PathBuf};

/// Fixed probe set for `--oracle check`: five points spread over |beta| < 2.
const CHECK_BETAS: [(f64, f64); 5] = [(0.0, 0.0), (0.8, 0.4), (-1.2, 0.6), (1.5, -1.1), (-0.3, -1.7)];

fn numerical(e: Error) -> CliError {
    match e {
        Error::TruncationBreach { .. } => CliError { code: 1, msg: format!("TRUNCATION-BREACH: {e}") },
        other => CliError::numerical(other),
    }
}

fn out_path(base: &Path, idx: usize, count: usize) -> PathBuf {
    if count == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = base.extension().and_then(|s| s.to_str());
    let name = match ext {
        Some(ext) => format!("{stem}_{idx:03}.{ext}"),
        None => format!("{stem}_{idx:03}"),
    };
    base.with_file_name(name)
}

fn oracle_initial(cfg: &RunConfig, cutoff: usize) -> Result<JointFockState, CliError> {
    let na = cfg.system.rates.na;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let osc = fock_oracle::thermal_state(na, cutoff).map_err(numerical)?;
    let qubit = match cfg.initial {
        InitialKind::PlusThermal => qcdsim::closed_dynamics::plus_state(),
        InitialKind::ExcitedThermal => [[one, zero], [zero, zero]],
        InitialKind::GroundThermal => [[zero, zero], [zero, one]],
        InitialKind::CustomFile(_) => {
            return Err(CliError::config(
                "oracle comparison supports the built-in product initial states only",
            ))
        }
    };
    Ok(JointFockState::product(qubit, &osc))
}

pub fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let init = cfg.build_initial()?;
    let t_max = cfg.times.last().copied().unwrap_or(0.0);
    let grid = cfg.resolve_grid(t_max)?;
    let out_base = cfg
        .output
        .clone()
        .ok_or_else(|| CliError::config("simulate needs output.path or --out"))?;

    let mut fields: Vec<(f64, CMatrixField)> = Vec::new();
    for (idx, &t) in cfg.times.iter().enumerate() {
        let field = solve_cmatrix(&cfg.system, &init, t, &grid, cfg.method).map_err(numerical)?;
        let path = out_path(&out_base, idx, cfg.times.len());
        let file = fs::File::create(&path)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
        field
            .write_table(BufWriter::new(file))
            .map_err(|e| CliError::numerical(format!("writing {}: {e}", path.display())))?;
        println!("wrote {} (t = {}, provenance {})", path.display(), fmt_sig12(t), field.provenance.as_str());
        fields.push((t, field));
    }

    if cfg.method == SolveMethod::Perturbative
        && !qcdsim::phase_space::perturbative_in_range(&cfg.system, t_max)
    {
        eprintln!("warning: Gamma t exceeds 0.2; first-order results are outside their validity window");
    }

    match cfg.oracle {
        OracleMode::Off => Ok(()),
        mode => {
            let cutoff = cfg
                .oracle_cutoff
                .unwrap_or_else(|| fock_oracle::suggest_cutoff_for(&cfg.system, t_max));
            let tol = cfg.oracle_tol.unwrap_or(1e-6);
            let mut state = oracle_initial(cfg, cutoff)?;
            let mut t_now = 0.0;
            let mut worst: f64 = 0.0;
            for (t, field) in &fields {
                state = fock_oracle::integrate_between(&state, &cfg.system, t_now, *t).map_err(numerical)?;
                t_now = *t;
                match mode {
                    OracleMode::Check => {
                        for &(re, im) in &CHECK_BETAS {
                            let b = C64::new(re, im);
                            let solved =
                                solve_cmatrix_at(&cfg.system, &init, *t, b, cfg.method).map_err(numerical)?;
                            let extracted = fock_oracle::cmatrix_extract(&state, b);
                            for k in 0..4 {
                                worst = worst.max((solved[k] - extracted[k]).norm());
                            }
                        }
                    }
                    OracleMode::Full => {
                        let points = field.grid.points().map_err(numerical)?;
                        for (i, &b) in points.iter().enumerate() {
                            let extracted = fock_oracle::cmatrix_extract(&state, b);
                            for k in 0..4 {
                                worst = worst.max((field.values[i][k] - extracted[k]).norm());
                            }
                        }
                    }
                    OracleMode::Off => unreachable!(),
                }
            }
            println!("oracle max |solver - oracle| = {}", fmt_sig12(worst));
            if worst > tol {
                return Err(CliError::numerical(format!(
                    "oracle deviation {} exceeds tolerance {}",
                    fmt_sig12(worst),
                    fmt_sig12(tol)
                )));
            }
            Ok(())
        }
    }
}

pub fn scan(cfg: &RunConfig) -> Result<(), CliError> {
    let na_values = cfg
        .scan_na
        .clone()
        .ok_or_else(|| CliError::config("scan needs scan.na"))?;
    let g0t_values = cfg
        .scan_g0t
        .clone()
        .ok_or_else(|| CliError::config("scan needs scan.g0t"))?;
    let oracle = match cfg.oracle {
        OracleMode::Off => OracleColumn::Off,
        OracleMode::Check => OracleColumn::UpToNa(cfg.scan_oracle_max_na),
        OracleMode::Full => OracleColumn::All,
    };
    let scan_cfg = ScanConfig { na_values, g0t_values, kappa: cfg.scan_kappa, gamma: cfg.scan_gamma, oracle };
    let table = observables::scan(&scan_cfg).map_err(numerical)?;
    let out = cfg
        .output
        .clone()
        .ok_or_else(|| CliError::config("scan needs output.path or --out"))?;
    let file =
        fs::File::create(&out).map_err(|e| CliError::config(format!("cannot write {}: {e}", out.display())))?;
    table
        .write_csv(BufWriter::new(file))
        .map_err(|e| CliError::numerical(format!("writing {}: {e}", out.display())))?;
    println!("wrote {} ({} cells)", out.display(), table.cells.len());
    Ok(())
}

pub fn platform(name: &str) -> Result<(), CliError> {
    let preset = platform_preset(name).map_err(|e| CliError::config(e.to_string()))?;
    let (ref_name, ref_si) = preset.reference;
    println!("platform {} (reference {ref_name} = {} 1/s)", preset.name, fmt_sig12(ref_si));
    println!("mode = {}", match preset.config.rates.mode {
        RateMode::Standard => "standard",
        RateMode::ExchangedQed => "exchanged-qed",
    });
    println!("raw parameters:");
    for p in &preset.raw {
        println!("  {} = {} {}", p.key, fmt_sig12(p.value), p.unit);
    }
    println!("normalized (units of {ref_name}):");
    let c = &preset.config;
    println!("  g_max = {}", fmt_sig12(c.profile.amplitude(0.0)));
    println!("  kappa = {}", fmt_sig12(c.rates.kappa));
    println!("  kappa_Na = {}", fmt_sig12(c.rates.kappa * c.rates.na));
    println!("  Gamma1 = {}", fmt_sig12(c.rates.gamma1));
    println!("  Gamma2 = {}", fmt_sig12(c.rates.gamma2));
    println!("  N_a = {}", fmt_sig12(c.rates.na));
    println!("  N_q = {}", fmt_sig12(c.rates.nq));
    println!("  gamma = {}", fmt_sig12(c.derived.gamma));
    println!("  Gamma_c = {}", fmt_sig12(c.derived.gamma_c));
    println!("  Gamma_h = {}", fmt_sig12(c.derived.gamma_h));
    if let (Some(g1), Some(g2)) = (c.derived.gamma1_eff, c.derived.gamma2_eff) {
        println!("  gamma1 = {}", fmt_sig12(g1));
        println!("  gamma2 = {}", fmt_sig12(g2));
    }
    println!("published dimensionless quotes:");
    for q in &preset.quotes {
        println!("  {} = {} {}", q.name, fmt_sig12(q.value), q.per);
    }
    Ok(())
}

pub fn oracle_check(cfg: &RunConfig) -> Result<(), CliError> {
    let init = cfg.build_initial()?;
    let t_max = cfg.times.last().copied().unwrap_or(1.0);
    let cutoff = cfg
        .oracle_cutoff
        .unwrap_or_else(|| fock_oracle::suggest_cutoff_for(&cfg.system, t_max));
    // Closed-system runs compare two exact routes; open-system runs carry the
    // Fock truncation budget.
    let closed = cfg.system.rates.kappa == 0.0
        && cfg.system.rates.gamma1 == 0.0
        && cfg.system.rates.gamma2 == 0.0;
    let tol = cfg.oracle_tol.unwrap_or(if closed { 1e-8 } else { 1e-6 });

    let mut betas = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            betas.push(C64::new(-2.0 + i as f64, -2.0 + j as f64));
        }
    }

    // Extraction error is controlled by the state tail (guarded during
    // integration); a near-unit column defect inside the occupied support
    // means the probe beta itself is unrepresentable at this cutoff.
    let max_beta = betas.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let defect = fock_oracle::extraction_defect(C64::new(max_beta, 0.0), cutoff, cutoff / 2);
    if defect > 0.9 {
        eprintln!(
            "warning: displacement support defect {} at |beta| = {} for cutoff {cutoff}",
            fmt_sig12(defect),
            fmt_sig12(max_beta)
        );
    }

    let mut state = oracle_initial(cfg, cutoff)?;
    let mut t_now = 0.0;
    let mut per_element = [0.0f64; 4];
    for &t in &cfg.times {
        state = fock_oracle::integrate_between(&state, &cfg.system, t_now, t).map_err(numerical)?;
        t_now = t;
        for &b in &betas {
            let solved = solve_cmatrix_at(&cfg.system, &init, t, b, cfg.method).map_err(numerical)?;
            let extracted = fock_oracle::cmatrix_extract(&state, b);
            for k in 0..4 {
                per_element[k] = per_element[k].max((solved[k] - extracted[k]).norm());
            }
        }
    }
    let mut worst: f64 = 0.0;
    for k in 0..4 {
        println!("max_abs_deviation {} = {}", COMPONENT_NAMES[k], fmt_sig12(per_element[k]));
        worst = worst.max(per_element[k]);
    }
    println!("cutoff = {cutoff}");
    println!("tolerance = {}", fmt_sig12(tol));
    if worst > tol {
        println!("result = FAIL");
        return Err(CliError::numerical(format!(
            "max deviation {} exceeds tolerance {}",
            fmt_sig12(worst),
            fmt_sig12(tol)
        )));
    }
    println!("result = PASS");
    Ok(())
}

pub enum Which {
    Reduced,
    Minus,
    Plus,
}

pub fn wigner_point(
    path: &Path,
    alpha: C64,
    which: Which,
    extent: Option<f64>,
    tol: f64,
) -> Result<(), CliError> {
    let mut text = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;

    let (w, label) = if text.starts_with("# qcdsim fock state") {
        let state = JointFockState::read_state(BufReader::new(text.as_bytes()))
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let (osc, label): (OscMatrix, &str) = match which {
            Which::Reduced => {
                let nn = state.cutoff + 1;
                let mut m = OscMatrix::zeros(nn);
                for i in 0..nn {
                    for j in 0..nn {
                        m.set(i, j, state.get(0, i, 0, j) + state.get(1, i, 1, j));
                    }
                }
                (m, "reduced")
            }
            Which::Minus => {
                let (p, m) = state.project_minus();
                println!("P_minus = {}", fmt_sig12(p));
                (m, "minus")
            }
            Which::Plus => {
                let nn = state.cutoff + 1;
                let mut m = OscMatrix::zeros(nn);
                for i in 0..nn {
                    for j in 0..nn {
                        let v = 0.5
                            * (state.get(0, i, 0, j)
                                + state.get(1, i, 1, j)
                                + state.get(0, i, 1, j)
                                + state.get(1, i, 0, j));
                        m.set(i, j, v);
                    }
                }
                let p = m.trace().re;
                println!("P_plus = {}", fmt_sig12(p));
                (m.scale(C64::new(1.0 / p, 0.0)), "plus")
            }
        };
        let charfn = move |b: C64| {
            let d = fock_oracle::displacement_matrix(b, osc.n - 1);
            osc.trace_mul(&d)
        };
        let spec = QuadSpec { extent, tol };
        (observables::wigner(charfn, alpha, &spec).map_err(numerical)?, label)
    } else {
        let field = CMatrixField::read_table(BufReader::new(text.as_bytes()))
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let origin = [
            field.interpolate(0, C64::new(0.0, 0.0)).map_err(numerical)?,
            field.interpolate(1, C64::new(0.0, 0.0)).map_err(numerical)?,
            field.interpolate(2, C64::new(0.0, 0.0)).map_err(numerical)?,
            field.interpolate(3, C64::new(0.0, 0.0)).map_err(numerical)?,
        ];
        let grid_extent = field.grid.extent;
        let (weights, norm, label): ([f64; 4], f64, &str) = match which {
            Which::Reduced => ([1.0, 1.0, 0.0, 0.0], 1.0, "reduced"),
            Which::Minus => {
                let p = 0.5 * (origin[0] + origin[1] - origin[2] - origin[3]).re;
                println!("P_minus = {}", fmt_sig12(p));
                ([1.0, 1.0, -1.0, -1.0], 2.0 * p, "minus")
            }
            Which::Plus => {
                let p = 0.5 * (origin[0] + origin[1] + origin[2] + origin[3]).re;
                println!("P_plus = {}", fmt_sig12(p));
                ([1.0, 1.0, 1.0, 1.0], 2.0 * p, "plus")
            }
        };
        let charfn = move |b: C64| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..4 {
                if weights[k] != 0.0 {
                    acc += weights[k] * field.interpolate(k, b).unwrap_or(C64::new(0.0, 0.0));
                }
            }
            acc / norm
        };
        let spec = QuadSpec { extent: Some(extent.unwrap_or(grid_extent)), tol };
        (observables::wigner(charfn, alpha, &spec).map_err(numerical)?, label)
    };
    println!("W[{label}]({}, {}) = {}", fmt_sig12(alpha.re), fmt_sig12(alpha.im), fmt_sig12(w));
    Ok(())
}
