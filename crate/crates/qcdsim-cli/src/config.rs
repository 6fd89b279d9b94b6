// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: flat key = value text with dotted sections, resolved
//! on top of an optional platform preset. Parse errors name the offending
//! key and line.

use crate::CliError;
use qcdsim::model::{platform_preset, CouplingProfile, RateInputs, RateMode, Segment, SystemConfig};
use qcdsim::phase_space::{CMatrixField, CMatrixInit, GridPattern, GridSpec, SolveMethod};
use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Off,
    Check,
    Full,
}

#[derive(Debug, Clone)]
pub enum InitialKind {
    PlusThermal,
    ExcitedThermal,
    GroundThermal,
    CustomFile(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub initial: InitialKind,
    pub times: Vec<f64>,
    pub grid: Option<GridSpec>,
    pub method: SolveMethod,
    pub oracle: OracleMode,
    pub oracle_cutoff: Option<usize>,
    pub oracle_tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub scan_na: Option<Vec<f64>>,
    pub scan_g0t: Option<Vec<f64>>,
    pub scan_kappa: f64,
    pub scan_gamma: f64,
    pub scan_oracle_max_na: f64,
}

fn bad(line: usize, key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::config(format!("config line {line}, key `{key}`: {msg}"))
}

struct Entry {
    value: String,
    line: usize,
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, Entry>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("config line {}: missing `=` in `{line}`", i + 1)))?;
        map.insert(key.trim().to_string(), Entry { value: value.trim().to_string(), line: i + 1 });
    }
    Ok(map)
}

fn parse_f64(e: &Entry, key: &str) -> Result<f64, CliError> {
    e.value.parse().map_err(|_| bad(e.line, key, format!("not a number: `{}`", e.value)))
}

/// `a, b, c` or `start:step:end` (end inclusive within half a step).
fn parse_list(e: &Entry, key: &str) -> Result<Vec<f64>, CliError> {
    let v = &e.value;
    if v.contains(':') && !v.contains(',') {
        let parts: Vec<&str> = v.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(e.line, key, "range needs start:step:end"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad(e.line, key, "bad range start"))?;
        let step: f64 = parts[1].trim().parse().map_err(|_| bad(e.line, key, "bad range step"))?;
        let end: f64 = parts[2].trim().parse().map_err(|_| bad(e.line, key, "bad range end"))?;
        if step <= 0.0 || end < start {
            return Err(bad(e.line, key, "range needs step > 0 and end >= start"));
        }
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let x = start + step * k as f64;
            if x > end + 0.5 * step {
                break;
            }
            out.push(x.min(end));
            k += 1;
        }
        Ok(out)
    } else {
        v.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad(e.line, key, format!("bad list item `{}`", s.trim()))))
            .collect()
    }
}

/// `start:end:amplitude; start:end:amplitude; ...`
fn parse_segments(e: &Entry, key: &str) -> Result<Vec<Segment>, CliError> {
    e.value
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(bad(e.line, key, format!("segment `{}` needs start:end:amplitude", s.trim())));
            }
            let nums: Result<Vec<f64>, CliError> = parts
                .iter()
                .map(|p| p.trim().parse().map_err(|_| bad(e.line, key, format!("bad segment number `{}`", p.trim()))))
                .collect();
            let nums = nums?;
            Ok(Segment { start: nums[0], end: nums[1], amplitude: nums[2] })
        })
        .collect()
}

/// `t:amplitude, t:amplitude, ...`
fn parse_samples(e: &Entry, key: &str) -> Result<Vec<(f64, f64)>, CliError> {
    e.value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (t, a) = s
                .split_once(':')
                .ok_or_else(|| bad(e.line, key, format!("sample `{}` needs t:amplitude", s.trim())))?;
            let t: f64 = t.trim().parse().map_err(|_| bad(e.line, key, "bad sample time"))?;
            let a: f64 = a.trim().parse().map_err(|_| bad(e.line, key, "bad sample amplitude"))?;
            Ok((t, a))
        })
        .collect()
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    resolve(&text)
}

pub fn resolve(text: &str) -> Result<RunConfig, CliError> {
    let map = parse_entries(text)?;
    let get = |key: &str| map.get(key);

    // Start from the platform preset when named, then apply overrides.
    let preset = match get("platform") {
        Some(e) => Some(
            platform_preset(&e.value).map_err(|err| bad(e.line, "platform", err))?,
        ),
        None => None,
    };

    let mut mode = preset.as_ref().map(|p| p.config.rates.mode).unwrap_or(RateMode::Standard);
    if let Some(e) = get("mode") {
        mode = match e.value.as_str() {
            "standard" => RateMode::Standard,
            "exchanged-qed" => RateMode::ExchangedQed,
            other => return Err(bad(e.line, "mode", format!("unknown mode `{other}`"))),
        };
    }

    let base_rates = preset.as_ref().map(|p| p.config.rates);
    let rate_of = |key: &str, dflt: f64| -> Result<f64, CliError> {
        match get(key) {
            Some(e) => parse_f64(e, key),
            None => Ok(dflt),
        }
    };
    let rates = RateInputs {
        kappa: rate_of("rates.kappa", base_rates.map(|r| r.kappa).unwrap_or(0.0))?,
        gamma1: rate_of("rates.gamma1", base_rates.map(|r| r.gamma1).unwrap_or(0.0))?,
        gamma2: rate_of("rates.gamma2", base_rates.map(|r| r.gamma2).unwrap_or(0.0))?,
        na: rate_of("rates.Na", base_rates.map(|r| r.na).unwrap_or(0.0))?,
        nq: rate_of("rates.Nq", base_rates.map(|r| r.nq).unwrap_or(0.0))?,
        mode,
    };

    let nu = rate_of("profile.nu", preset.as_ref().map(|p| p.config.profile.nu()).unwrap_or(0.0))?;
    let kind = get("profile.kind").map(|e| e.value.as_str()).unwrap_or("constant");
    let profile = match kind {
        "constant" => {
            let g0 = rate_of(
                "profile.g0",
                preset.as_ref().map(|p| p.config.profile.amplitude(0.0)).unwrap_or(1.0),
            )?;
            CouplingProfile::constant(g0, nu)
        }
        "piecewise" => {
            let e = get("profile.segments")
                .ok_or_else(|| CliError::config("profile.kind = piecewise needs profile.segments"))?;
            let segments = parse_segments(e, "profile.segments")?;
            CouplingProfile::piecewise(segments, nu).map_err(|err| bad(e.line, "profile.segments", err))?
        }
        "sampled" => {
            let e = get("profile.samples")
                .ok_or_else(|| CliError::config("profile.kind = sampled needs profile.samples"))?;
            let samples = parse_samples(e, "profile.samples")?;
            CouplingProfile::sampled(samples, nu).map_err(|err| bad(e.line, "profile.samples", err))?
        }
        other => {
            let e = get("profile.kind").unwrap();
            return Err(bad(e.line, "profile.kind", format!("unknown kind `{other}`")));
        }
    };

    let system = SystemConfig::new(profile, rates)
        .map_err(|err| CliError::config(format!("invalid configuration: {err}")))?;

    let initial = match get("initial").map(|e| e.value.as_str()).unwrap_or("plus-thermal") {
        "plus-thermal" => InitialKind::PlusThermal,
        "excited-thermal" => InitialKind::ExcitedThermal,
        "ground-thermal" => InitialKind::GroundThermal,
        "custom-cmatrix-file" => {
            let e = get("initial.file")
                .ok_or_else(|| CliError::config("initial = custom-cmatrix-file needs initial.file"))?;
            InitialKind::CustomFile(PathBuf::from(&e.value))
        }
        other => {
            let e = get("initial").unwrap();
            return Err(bad(e.line, "initial", format!("unknown initial state `{other}`")));
        }
    };

    let times = match get("times") {
        Some(e) => {
            let times = parse_list(e, "times")?;
            if times.windows(2).any(|w| w[1] < w[0]) {
                return Err(bad(e.line, "times", "times must be nondecreasing"));
            }
            times
        }
        None => vec![1.0],
    };

    let grid = match (get("grid.extent"), get("grid.counts")) {
        (None, None) => None,
        (ext, cnt) => {
            let pattern = match get("grid.pattern").map(|e| e.value.as_str()) {
                None | Some("cartesian") => GridPattern::Cartesian,
                Some("polar") => GridPattern::Polar,
                Some(other) => {
                    let e = get("grid.pattern").unwrap();
                    return Err(bad(e.line, "grid.pattern", format!("unknown pattern `{other}`")));
                }
            };
            let extent = match ext {
                Some(e) => parse_f64(e, "grid.extent")?,
                None => return Err(CliError::config("grid.counts given without grid.extent")),
            };
            let counts = match cnt {
                Some(e) => parse_f64(e, "grid.counts")? as usize,
                None => 101,
            };
            Some(GridSpec { pattern, extent, counts })
        }
    };

    let method = match get("method").map(|e| e.value.as_str()).unwrap_or("auto") {
        "auto" => SolveMethod::Auto,
        "ode" => SolveMethod::Ode,
        "perturbative" => SolveMethod::Perturbative,
        other => {
            let e = get("method").unwrap();
            return Err(bad(e.line, "method", format!("unknown method `{other}`")));
        }
    };

    let oracle = match get("oracle").map(|e| e.value.as_str()).unwrap_or("off") {
        "off" => OracleMode::Off,
        "check" => OracleMode::Check,
        "full" => OracleMode::Full,
        other => {
            let e = get("oracle").unwrap();
            return Err(bad(e.line, "oracle", format!("unknown oracle mode `{other}`")));
        }
    };

    let oracle_cutoff = match get("oracle.cutoff") {
        Some(e) => Some(parse_f64(e, "oracle.cutoff")? as usize),
        None => None,
    };
    let oracle_tol = match get("oracle.tol") {
        Some(e) => Some(parse_f64(e, "oracle.tol")?),
        None => None,
    };
    let threads = match get("threads") {
        Some(e) => Some(parse_f64(e, "threads")? as usize),
        None => None,
    };

    let scan_na = get("scan.na").map(|e| parse_list(e, "scan.na")).transpose()?;
    let scan_g0t = get("scan.g0t").map(|e| parse_list(e, "scan.g0t")).transpose()?;

    Ok(RunConfig {
        system,
        initial,
        times,
        grid,
        method,
        oracle,
        oracle_cutoff,
        oracle_tol,
        output: get("output.path").map(|e| PathBuf::from(&e.value)),
        threads,
        scan_na,
        scan_g0t,
        scan_kappa: rate_of("scan.kappa", 0.01)?,
        scan_gamma: rate_of("scan.gamma", 0.01)?,
        scan_oracle_max_na: rate_of("scan.oracle_max_na", 3.0)?,
    })
}

impl RunConfig {
    pub fn build_initial(&self) -> Result<CMatrixInit, CliError> {
        let na = self.system.rates.na;
        match &self.initial {
            InitialKind::PlusThermal => Ok(CMatrixInit::plus_thermal(na)),
            InitialKind::ExcitedThermal => Ok(CMatrixInit::excited_thermal(na)),
            InitialKind::GroundThermal => Ok(CMatrixInit::ground_thermal(na)),
            InitialKind::CustomFile(path) => {
                let file = fs::File::open(path)
                    .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
                let field = CMatrixField::read_table(BufReader::new(file))
                    .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
                CMatrixInit::from_field(field).map_err(|e| CliError::config(e.to_string()))
            }
        }
    }

    pub fn resolve_grid(&self, t_max: f64) -> Result<GridSpec, CliError> {
        match &self.grid {
            Some(g) => Ok(g.clone()),
            None => GridSpec::default_for(&self.system, t_max).map_err(CliError::numerical),
        }
    }
}
