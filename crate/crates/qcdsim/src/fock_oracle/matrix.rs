// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices on the truncated oscillator space, plus the
//! displacement operator construction. Row-major storage, index [m, n].

use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct OscMatrix {
    pub n: usize,
    pub data: Vec<C64>,
}

impl OscMatrix {
    pub fn zeros(n: usize) -> Self {
        OscMatrix { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = C64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, m: usize, k: usize) -> C64 {
        self.data[m * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, m: usize, k: usize, v: C64) {
        self.data[m * self.n + k] = v;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &OscMatrix) -> Self {
        let n = self.n;
        assert_eq!(n, rhs.n);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    orow[j] += a * row[j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        OscMatrix { n: self.n, data: self.data.iter().map(|&v| s * v).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Tr[self * rhs] without forming the product.
    pub fn trace_mul(&self, rhs: &OscMatrix) -> C64 {
        let n = self.n;
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..n {
            for k in 0..n {
                acc += self.data[m * n + k] * rhs.data[k * n + m];
            }
        }
        acc
    }

    /// Largest |column norm - 1| over all columns; the truncation-unitarity
    /// defect of a nominally unitary matrix.
    pub fn column_norm_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let norm_sq: f64 = (0..n).map(|i| self.data[i * n + j].norm_sqr()).sum();
            worst = worst.max((norm_sq.sqrt() - 1.0).abs());
        }
        worst
    }

    /// Apply to a vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            out[i] = row.iter().zip(v).map(|(&a, &b)| a * b).sum();
        }
        out
    }
}

/// Displacement operator D(beta) on the truncated space, from the exact
/// matrix elements
///
///   <k+d| D |k> = sqrt(k!/(k+d)!) beta^d e^{-|beta|^2/2} L_k^{(d)}(|beta|^2)
///   <k| D |k+d> = sqrt(k!/(k+d)!) (-beta*)^d e^{-|beta|^2/2} L_k^{(d)}(|beta|^2)
///
/// with the prefactor evaluated in log space and the associated Laguerre
/// values by their three-term recurrence in k. Every entry of the untruncated
/// unitary is bounded by 1, so the construction cannot amplify truncation
/// garbage; columns near the cutoff carry only the genuine norm defect that
/// [`OscMatrix::column_norm_defect`] reports.
pub fn displacement_matrix(beta: C64, cutoff: usize) -> OscMatrix {
    let n = cutoff + 1;
    if beta == C64::new(0.0, 0.0) {
        return OscMatrix::identity(n);
    }
    let mut d = OscMatrix::zeros(n);
    let x = beta.norm_sqr();
    let ln_mod = beta.norm().ln();
    let mut ln_fact = Vec::with_capacity(n);
    ln_fact.push(0.0);
    for k in 1..n {
        ln_fact.push(ln_fact[k - 1] + (k as f64).ln());
    }
    let unit = beta / beta.norm();
    let mut up_phase = C64::new(1.0, 0.0); // (beta/|beta|)^diag
    let mut down_phase = C64::new(1.0, 0.0); // (-beta*/|beta|)^diag
    for diag in 0..n {
        let df = diag as f64;
        let mut lkm1 = 0.0;
        let mut lk = 1.0; // L_0^{(diag)}
        for k in 0..(n - diag) {
            if k > 0 {
                // (k) L_k = (2k + d - 1 - x) L_{k-1} - (k + d - 1) L_{k-2}
                let kf = k as f64;
                let next = ((2.0 * kf + df - 1.0 - x) * lk - (kf + df - 1.0) * lkm1) / kf;
                lkm1 = lk;
                lk = next;
            }
            let pref = (0.5 * (ln_fact[k] - ln_fact[k + diag]) + df * ln_mod - 0.5 * x).exp();
            let magnitude = pref * lk;
            d.set(k + diag, k, up_phase * magnitude);
            if diag > 0 {
                d.set(k, k + diag, down_phase * magnitude);
            }
        }
        up_phase *= unit;
        down_phase *= -unit.conj();
    }
    d
}
