// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Time-dependent coupling profiles g(t) and the exponentially weighted
//! integrals of g that every kernel and displacement formula reduces to.

use crate::error::{Error, Result};
use crate::{quad, C64};

/// One piecewise-constant segment: amplitude on [start, end).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Constant { g0: f64 },
    Piecewise { segments: Vec<Segment> },
    Sampled { samples: Vec<(f64, f64)> },
}

/// Coupling profile g(t) together with the modulation frequency nu.
///
/// Evaluation outside the defined support returns 0. Piecewise and sampled
/// profiles locate their interval by binary search; sampled profiles
/// interpolate linearly between stamps.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    shape: Shape,
    nu: f64,
}

impl CouplingProfile {
    /// Constant coupling g(t) = g0 for t >= 0.
    pub fn constant(g0: f64, nu: f64) -> Self {
        CouplingProfile { shape: Shape::Constant { g0 }, nu }
    }

    /// Piecewise-constant coupling. Segments must be sorted, disjoint and of
    /// non-negative duration.
    pub fn piecewise(segments: Vec<Segment>, nu: f64) -> Result<Self> {
        let mut prev_end = f64::NEG_INFINITY;
        for (i, s) in segments.iter().enumerate() {
            if !(s.end >= s.start) {
                return Err(Error::InvalidProfile(format!(
                    "segment {i} has negative duration [{}, {}]",
                    s.start, s.end
                )));
            }
            if s.start < 0.0 {
                return Err(Error::InvalidProfile(format!("segment {i} starts before t = 0")));
            }
            if s.start < prev_end {
                return Err(Error::InvalidProfile(format!("segment {i} overlaps its predecessor")));
            }
            prev_end = s.end;
        }
        Ok(CouplingProfile { shape: Shape::Piecewise { segments }, nu })
    }

    /// Sampled coupling with strictly increasing time stamps.
    pub fn sampled(samples: Vec<(f64, f64)>, nu: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidProfile("sampled profile needs at least two stamps".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidProfile(format!(
                    "time stamps must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if samples[0].0 < 0.0 {
            return Err(Error::InvalidProfile("sampled profile starts before t = 0".into()));
        }
        Ok(CouplingProfile { shape: Shape::Sampled { samples }, nu })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// g(t); zero outside the profile's support.
    pub fn amplitude(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Constant { g0 } => *g0,
            Shape::Piecewise { segments } => {
                // First segment with start > t, then step back.
                let idx = segments.partition_point(|s| s.start <= t);
                if idx == 0 {
                    return 0.0;
                }
                let s = &segments[idx - 1];
                if t < s.end {
                    s.amplitude
                } else {
                    0.0
                }
            }
            Shape::Sampled { samples } => {
                let idx = samples.partition_point(|&(ts, _)| ts <= t);
                if idx == 0 || idx == samples.len() {
                    // Exactly the right endpoint still counts as inside.
                    if idx == samples.len() && t == samples[samples.len() - 1].0 {
                        return samples[samples.len() - 1].1;
                    }
                    return 0.0;
                }
                let (t0, g0) = samples[idx - 1];
                let (t1, g1) = samples[idx];
                g0 + (g1 - g0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// int_0^t |g(s)| ds; an upper bound on |alpha(t)| used for Fock cutoff
    /// estimates.
    pub fn abs_integral(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Constant { g0 } => g0.abs() * t,
            Shape::Piecewise { segments } => segments
                .iter()
                .map(|s| {
                    let lo = s.start.min(t);
                    let hi = s.end.min(t);
                    s.amplitude.abs() * (hi - lo).max(0.0)
                })
                .sum(),
            Shape::Sampled { .. } => {
                quad::integrate_real(|s| self.amplitude(s).abs(), 0.0, t, 1e-9).unwrap_or(0.0)
            }
        }
    }

    /// int_0^t g(s) e^{c s} ds for complex c. Closed form for constant and
    /// piecewise profiles; per-interval adaptive quadrature for sampled ones.
    pub fn exp_integral(&self, c: C64, t: f64) -> Result<C64> {
        if t <= 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        match &self.shape {
            Shape::Constant { g0 } => Ok(*g0 * exp_primitive(c, 0.0, t)),
            Shape::Piecewise { segments } => {
                let mut acc = C64::new(0.0, 0.0);
                for s in segments {
                    if s.start >= t {
                        break;
                    }
                    let hi = s.end.min(t);
                    if hi > s.start {
                        acc += s.amplitude * exp_primitive(c, s.start, hi);
                    }
                }
                Ok(acc)
            }
            Shape::Sampled { samples } => {
                let mut acc = C64::new(0.0, 0.0);
                let mut lo = 0.0f64;
                for w in samples.windows(2) {
                    let (a, b) = (w[0].0.max(lo), w[1].0.min(t));
                    if b > a {
                        acc += quad::integrate(|s| self.amplitude(s) * (c * s).exp(), a, b, 1e-11)?;
                    }
                    lo = b;
                    if w[1].0 >= t {
                        break;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// int_0^t s g(s) e^{c s} ds, needed by the small-kappa*t kernel series.
    pub fn exp_moment_integral(&self, c: C64, t: f64) -> Result<C64> {
        self.moment_integral(c, t, exp_moment_primitive, 1)
    }

    /// int_0^t s^3 g(s) e^{c s} ds, the next kernel series correction.
    pub fn exp_cubed_moment_integral(&self, c: C64, t: f64) -> Result<C64> {
        self.moment_integral(c, t, exp_cubed_moment_primitive, 3)
    }

    fn moment_integral(
        &self,
        c: C64,
        t: f64,
        primitive: fn(C64, f64, f64) -> C64,
        power: i32,
    ) -> Result<C64> {
        if t <= 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        match &self.shape {
            Shape::Constant { g0 } => Ok(*g0 * primitive(c, 0.0, t)),
            Shape::Piecewise { segments } => {
                let mut acc = C64::new(0.0, 0.0);
                for s in segments {
                    if s.start >= t {
                        break;
                    }
                    let hi = s.end.min(t);
                    if hi > s.start {
                        acc += s.amplitude * primitive(c, s.start, hi);
                    }
                }
                Ok(acc)
            }
            Shape::Sampled { .. } => {
                quad::integrate(|s| s.powi(power) * self.amplitude(s) * (c * s).exp(), 0.0, t, 1e-11)
            }
        }
    }
}

/// int_a^b e^{c s} ds.
fn exp_primitive(c: C64, a: f64, b: f64) -> C64 {
    let z = c * (b - a);
    if z.norm() < 1e-6 {
        // (e^{cb} - e^{ca})/c = e^{ca} (b-a) (1 + z/2 + z^2/6 + z^3/24)
        let poly = 1.0 + z * 0.5 + z * z / 6.0 + z * z * z / 24.0;
        (c * a).exp() * (b - a) * poly
    } else {
        ((c * b).exp() - (c * a).exp()) / c
    }
}

/// int_a^b s e^{c s} ds. The antiderivative e^{cs}(cs-1)/c^2 cancels
/// catastrophically for small |c|, so below |c| scale 0.5 the series
/// sum_{m>=2} c^{m-2} (b^m - a^m)(m-1)/m! is used instead.
fn exp_moment_primitive(c: C64, a: f64, b: f64) -> C64 {
    let scale = a.abs().max(b.abs());
    if c.norm() * scale < 0.5 {
        let mut acc = C64::new(0.0, 0.0);
        let mut c_pow = C64::new(1.0, 0.0); // c^{m-2}
        let mut a_pow = a * a;
        let mut b_pow = b * b;
        let mut m_fact = 2.0; // m!
        for m in 2..60 {
            let term = c_pow * ((b_pow - a_pow) * ((m - 1) as f64 / m_fact));
            acc += term;
            if term.norm() < 1e-18 * acc.norm().max(1e-30) {
                break;
            }
            c_pow *= c;
            a_pow *= a;
            b_pow *= b;
            m_fact *= (m + 1) as f64;
        }
        acc
    } else {
        let f = |s: f64| (c * s).exp() * (c * s - 1.0) / (c * c);
        f(b) - f(a)
    }
}

/// int_a^b s^3 e^{c s} ds, with the same series treatment of small |c|:
/// sum_{k>=0} c^k (b^{k+4} - a^{k+4}) / (k! (k+4)).
fn exp_cubed_moment_primitive(c: C64, a: f64, b: f64) -> C64 {
    let scale = a.abs().max(b.abs());
    if c.norm() * scale < 0.5 {
        let mut acc = C64::new(0.0, 0.0);
        let mut c_pow = C64::new(1.0, 0.0);
        let mut a_pow = a * a * a * a;
        let mut b_pow = b * b * b * b;
        let mut k_fact = 1.0;
        for k in 0..60 {
            let term = c_pow * ((b_pow - a_pow) / (k_fact * (k + 4) as f64));
            acc += term;
            if term.norm() < 1e-18 * acc.norm().max(1e-30) {
                break;
            }
            c_pow *= c;
            a_pow *= a;
            b_pow *= b;
            k_fact *= (k + 1) as f64;
        }
        acc
    } else {
        let f = |s: f64| {
            let z = c * s;
            (z * (z * (z - 3.0) + 6.0) - 6.0) * z.exp() / (c * c * c * c)
        };
        f(b) - f(a)
    }
}
