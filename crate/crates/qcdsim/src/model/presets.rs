// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Experimental platform presets. Raw hardware values ship as embedded
//! structured-text data (key = magnitude + unit string); the normalized
//! configuration is rebuilt from them at load time.

use super::{CouplingProfile, RateInputs, RateMode, SystemConfig};
use crate::error::{Error, Result};

const FLUX_NANOMECH: &str = include_str!("../../presets/flux_nanomech.txt");
const TRAPPED_ION: &str = include_str!("../../presets/trapped_ion.txt");
const CAVITY_QED: &str = include_str!("../../presets/cavity_qed.txt");
const CIRCUIT_QED: &str = include_str!("../../presets/circuit_qed.txt");

/// One raw hardware parameter as stated in the data file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawParam {
    pub key: String,
    pub value: f64,
    pub unit: String,
}

impl RawParam {
    /// Value in SI rate units (1/s), when the unit denotes a rate. Angular
    /// frequencies count as rates; `omega`/`g` units are already relative to
    /// the reference and are scaled by it.
    fn rate_si(&self, reference_si: f64) -> Option<f64> {
        let scale = match self.unit.as_str() {
            "GHz*2pi" => 2.0 * std::f64::consts::PI * 1e9,
            "MHz*2pi" => 2.0 * std::f64::consts::PI * 1e6,
            "kHz*2pi" => 2.0 * std::f64::consts::PI * 1e3,
            "1/us" => 1e6,
            "1/ms" => 1e3,
            "1/s" => 1.0,
            "omega" | "g" => reference_si,
            _ => return None,
        };
        Some(self.value * scale)
    }
}

/// A published dimensionless value, kept alongside the preset for
/// reporting and for the consistency tests.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionlessQuote {
    pub name: &'static str,
    pub value: f64,
    /// Reference-rate symbol the quote is expressed against ("omega", "g",
    /// or an absolute unit like "1/us").
    pub per: &'static str,
    /// Whether the stored configuration is expected to reproduce the quote
    /// within the preset tolerance (the sources round to one significant
    /// figure, and a few of their quotes are mutually inconsistent).
    pub checked: bool,
}

/// Platform preset: raw values with unit annotations plus a normalized
/// [`SystemConfig`] in units of the platform's reference rate.
#[derive(Debug, Clone)]
pub struct PlatformPreset {
    pub name: &'static str,
    pub raw: Vec<RawParam>,
    /// Reference-rate symbol ("omega" or "g") and its SI value in rad/s.
    pub reference: (&'static str, f64),
    pub config: SystemConfig,
    pub quotes: Vec<DimensionlessQuote>,
}

impl PlatformPreset {
    pub fn raw_value(&self, key: &str) -> Option<&RawParam> {
        self.raw.iter().find(|p| p.key == key)
    }
}

fn parse_data(text: &str) -> Result<(RateMode, String, Vec<RawParam>)> {
    let mut mode = None;
    let mut reference = None;
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once('=')
            .ok_or_else(|| Error::PresetData { line: i + 1, msg: "missing `=`".into() })?;
        let key = key.trim().to_string();
        let rest = rest.trim();
        match key.as_str() {
            "mode" => {
                mode = Some(match rest {
                    "standard" => RateMode::Standard,
                    "exchanged-qed" => RateMode::ExchangedQed,
                    other => {
                        return Err(Error::PresetData { line: i + 1, msg: format!("unknown mode `{other}`") })
                    }
                });
            }
            "reference" => reference = Some(rest.to_string()),
            _ => {
                let mut parts = rest.split_whitespace();
                let value: f64 = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::PresetData { line: i + 1, msg: format!("bad value for {key}") })?;
                let unit = parts.next().unwrap_or("dimensionless").to_string();
                raw.push(RawParam { key, value, unit });
            }
        }
    }
    let mode = mode.ok_or_else(|| Error::PresetData { line: 0, msg: "missing mode".into() })?;
    let reference = reference.ok_or_else(|| Error::PresetData { line: 0, msg: "missing reference".into() })?;
    Ok((mode, reference, raw))
}

fn build(name: &'static str, text: &str, quotes: Vec<DimensionlessQuote>) -> Result<PlatformPreset> {
    let (mode, ref_key, raw) = parse_data(text)?;
    let find = |key: &str| raw.iter().find(|p| p.key == key);
    let ref_param = find(&ref_key)
        .ok_or_else(|| Error::PresetData { line: 0, msg: format!("reference `{ref_key}` not found") })?;
    let reference_si = ref_param
        .rate_si(0.0)
        .ok_or_else(|| Error::PresetData { line: 0, msg: format!("reference `{ref_key}` is not a rate") })?;

    let norm = |key: &str| -> Result<f64> {
        let p = find(key).ok_or_else(|| Error::PresetData { line: 0, msg: format!("missing key `{key}`") })?;
        let si = p
            .rate_si(reference_si)
            .ok_or_else(|| Error::PresetData { line: 0, msg: format!("`{key}` has non-rate unit {}", p.unit) })?;
        Ok(si / reference_si)
    };
    let plain = |key: &str| -> Result<f64> {
        find(key)
            .map(|p| p.value)
            .ok_or_else(|| Error::PresetData { line: 0, msg: format!("missing key `{key}`") })
    };

    let rates = RateInputs {
        kappa: norm("kappa")?,
        gamma1: norm("Gamma1")?,
        gamma2: norm("Gamma2")?,
        na: plain("N_a")?,
        nq: plain("N_q")?,
        mode,
    };
    let g_max = norm(if find("g_max").is_some() { "g_max" } else { "g" })?;
    let profile = CouplingProfile::constant(g_max, 0.0);
    let config = SystemConfig::new(profile, rates)?;

    let reference: (&'static str, f64) = (if ref_key == "omega" { "omega" } else { "g" }, reference_si);
    Ok(PlatformPreset { name, raw, reference, config, quotes })
}

/// Load one of the four platform presets by name.
pub fn platform_preset(name: &str) -> Result<PlatformPreset> {
    match name {
        "flux-nanomech" => build(
            "flux-nanomech",
            FLUX_NANOMECH,
            vec![
                DimensionlessQuote { name: "g_max", value: 0.08, per: "omega", checked: true },
                DimensionlessQuote { name: "Gamma1", value: 4e-3, per: "omega", checked: true },
                // Formula value is 6e-3 omega; the source rounds it to 0.01.
                DimensionlessQuote { name: "gamma", value: 0.01, per: "omega", checked: false },
                DimensionlessQuote { name: "kappa", value: 5e-4, per: "omega", checked: true },
                DimensionlessQuote { name: "kappa_Na", value: 0.01, per: "omega", checked: true },
            ],
        ),
        "trapped-ion" => build(
            "trapped-ion",
            TRAPPED_ION,
            vec![
                DimensionlessQuote { name: "kappa", value: 6e-9, per: "omega", checked: true },
                DimensionlessQuote { name: "kappa_Na", value: 2e-3, per: "omega", checked: true },
                DimensionlessQuote { name: "g_max", value: 0.05, per: "omega", checked: true },
            ],
        ),
        "cavity-qed" => build(
            "cavity-qed",
            CAVITY_QED,
            vec![
                DimensionlessQuote { name: "kappa", value: 6e-3, per: "g", checked: true },
                // The quoted heating rate and gamma family are inconsistent
                // with the quoted raw inputs; stored config follows the raws.
                DimensionlessQuote { name: "kappa_Na", value: 8e-3, per: "g", checked: false },
                DimensionlessQuote { name: "gamma1", value: 2e-4, per: "g", checked: false },
                DimensionlessQuote { name: "gamma", value: 3e-4, per: "g", checked: false },
                DimensionlessQuote { name: "N_a", value: 0.8, per: "1", checked: true },
                DimensionlessQuote { name: "N_q", value: 0.15, per: "1", checked: true },
            ],
        ),
        "circuit-qed" => build(
            "circuit-qed",
            CIRCUIT_QED,
            vec![
                DimensionlessQuote { name: "kappa", value: 7.5, per: "1/us", checked: true },
                DimensionlessQuote { name: "Gamma1", value: 0.6, per: "1/us", checked: true },
                DimensionlessQuote { name: "Gamma2", value: 0.5, per: "1/us", checked: true },
                DimensionlessQuote { name: "gamma1", value: 0.3, per: "1/us", checked: true },
                DimensionlessQuote { name: "gamma2", value: 0.65, per: "1/us", checked: true },
            ],
        ),
        other => Err(Error::UnknownPlatform(other.to_string())),
    }
}

/// Every preset name accepted by [`platform_preset`].
pub const PRESET_NAMES: [&str; 4] = ["flux-nanomech", "trapped-ion", "cavity-qed", "circuit-qed"];

#[cfg(test)]
mod tests {
    use super::super::derive_rates;
    use super::*;

    /// Published values are one-significant-figure; 20% absorbs the rounding.
    const QUOTE_TOL: f64 = 0.20;

    fn normalized_value(p: &PlatformPreset, name: &str) -> f64 {
        let c = &p.config;
        let d = &c.derived;
        match name {
            "kappa" => c.rates.kappa,
            "kappa_Na" => c.rates.kappa * c.rates.na,
            "Gamma1" => c.rates.gamma1,
            "Gamma2" => c.rates.gamma2,
            "gamma" => d.gamma,
            "gamma1" => d.gamma1_eff.unwrap_or(f64::NAN),
            "gamma2" => d.gamma2_eff.unwrap_or(f64::NAN),
            "N_a" => c.rates.na,
            "N_q" => c.rates.nq,
            "g_max" => p.config.profile.amplitude(0.0),
            other => panic!("no accessor for quote {other}"),
        }
    }

    #[test]
    fn all_presets_reproduce_checked_quotes() {
        for name in PRESET_NAMES {
            let p = platform_preset(name).unwrap();
            for q in &p.quotes {
                let mut got = normalized_value(&p, q.name);
                // Quotes in absolute units compare against the raw-scale rate.
                if q.per == "1/us" {
                    got = got * p.reference.1 / 1e6;
                }
                let rel = (got - q.value).abs() / q.value.abs();
                if q.checked {
                    assert!(rel <= QUOTE_TOL, "{name}: {} = {got} vs quote {} ({}%)", q.name, q.value, 100.0 * rel);
                } else {
                    // Documented discrepancies still agree within a factor 2.
                    assert!(rel <= 1.0, "{name}: {} = {got} vs quote {}", q.name, q.value);
                }
            }
        }
    }

    #[test]
    fn flux_nanomech_kappa_quote() {
        let p = platform_preset("flux-nanomech").unwrap();
        let rel = (p.config.rates.kappa - 5e-4).abs() / 5e-4;
        assert!(rel < QUOTE_TOL, "kappa = {} omega", p.config.rates.kappa);
    }

    #[test]
    fn circuit_qed_gamma2_quote() {
        let p = platform_preset("circuit-qed").unwrap();
        // gamma_2 ~ 0.65 /us in absolute units.
        let g2_si = p.config.derived.gamma2_eff.unwrap() * p.reference.1;
        assert!((g2_si / 1e6 - 0.65).abs() < 1e-9, "gamma2 = {} /us", g2_si / 1e6);
    }

    #[test]
    fn trapped_ion_has_no_qubit_decoherence() {
        let p = platform_preset("trapped-ion").unwrap();
        assert_eq!(p.config.rates.gamma1, 0.0);
        assert_eq!(p.config.rates.gamma2, 0.0);
        assert_eq!(p.config.derived.gamma, 0.0);
    }

    #[test]
    fn derive_roundtrip_consistency() {
        for name in PRESET_NAMES {
            let p = platform_preset(name).unwrap();
            let redo = derive_rates(&p.config.rates).unwrap();
            assert_eq!(redo, p.config.derived, "{name}");
        }
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(matches!(platform_preset("ring-trap"), Err(Error::UnknownPlatform(_))));
    }

    #[test]
    fn raw_tables_expose_annotations() {
        let p = platform_preset("trapped-ion").unwrap();
        assert!(p.raw_value("kappa_raw").is_some());
        assert!((p.raw_value("N_a_thermal").unwrap().value - 6.0e5).abs() < 1.0);
        let p = platform_preset("flux-nanomech").unwrap();
        assert_eq!(p.raw_value("B_max").unwrap().unit, "mT");
    }
}
