// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic numeric formatting for table and CSV output: shortest
//! round-trip representation, capped at 12 significant digits.

/// Format with the shortest representation that round-trips, truncated to at
/// most 12 significant digits. The output is canonical: formatting the value
/// it parses back to returns the identical string, so re-serialized tables
/// stay byte-identical.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let shortest = format!("{x}");
    if significant_digits(&shortest) <= 12 {
        return shortest;
    }
    // Round to 12 significant digits, then print the rounded value's own
    // shortest form (at most 12 digits by construction).
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float reparses");
    format!("{rounded}")
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits.trim_start_matches('0');
    // Trailing zeros in a decimal expansion are significant as printed, which
    // only ever overestimates; the cap stays conservative.
    trimmed.len()
}
