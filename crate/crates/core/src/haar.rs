//! Haar system on unit cells, Haar–Fourier coefficients and projections `P_n`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, floor, powf, sqrt};
use crate::signals::Signal;

/// `h_{k,1} = χ_{[k,k+1)}`; for `j = 2^m + r`, `h_{k,j}(t) = 2^{m/2}·h(2^m(t−k) − r + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HaarIndex {
    pub k: i64,
    pub j: u32,
}

impl HaarIndex {
    pub fn new(k: i64, j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidArgument("Haar index j starts at 1"));
        }
        Ok(HaarIndex { k, j })
    }

    /// `(m, r)` with `j = 2^m + r`, `1 ≤ r ≤ 2^m`; `None` for `j = 1`.
    pub fn level(&self) -> Option<(u32, u32)> {
        if self.j < 2 {
            return None;
        }
        let m = 31 - (self.j - 1).leading_zeros();
        Some((m, self.j - (1 << m)))
    }

    /// `[start, mid, end]` of the support; `mid` separates the positive and negative halves.
    pub fn support(&self) -> (f64, f64, f64) {
        let k = self.k as f64;
        match self.level() {
            None => (k, k + 1.0, k + 1.0),
            Some((m, r)) => {
                let w = 1.0 / (1u64 << m) as f64;
                let start = k + (r - 1) as f64 * w;
                (start, start + 0.5 * w, start + w)
            }
        }
    }

    pub fn height(&self) -> f64 {
        self.level().map_or(1.0, |(m, _)| powf(2.0, 0.5 * m as f64))
    }
}

/// `∫ h_a·h_b`, computed from signed overlaps of the half supports. All
/// lengths are dyadic, so the result is exact.
pub fn inner_product(a: HaarIndex, b: HaarIndex) -> f64 {
    if a.k != b.k {
        return 0.0;
    }
    let halves = |i: HaarIndex| {
        let (s, m, e) = i.support();
        if i.j == 1 {
            [(s, e, 1.0), (e, e, 0.0)]
        } else {
            [(s, m, 1.0), (m, e, -1.0)]
        }
    };
    let mut overlap = 0.0;
    for (s1, e1, g1) in halves(a) {
        for (s2, e2, g2) in halves(b) {
            let len = e1.min(e2) - s1.max(s2);
            if len > 0.0 {
                overlap += g1 * g2 * len;
            }
        }
    }
    if overlap == 0.0 {
        return 0.0;
    }
    let m = a.level().map_or(0, |l| l.0) + b.level().map_or(0, |l| l.0);
    let scaled = libm::scalbn(overlap, (m / 2) as i32);
    if m % 2 == 1 {
        scaled * core::f64::consts::SQRT_2
    } else {
        scaled
    }
}

pub fn haar_fn(idx: HaarIndex, t: f64) -> f64 {
    let (a, m, b) = idx.support();
    if t < a || t >= b {
        0.0
    } else if idx.j == 1 || t < m {
        idx.height()
    } else {
        -idx.height()
    }
}

/// Coefficient table `a_{k,j}`, `k ∈ [k0, k1]`, `j ∈ [1, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarCoeffs {
    pub k0: i64,
    pub k1: i64,
    pub n: u32,
    /// `table[k − k0][j − 1]`.
    pub table: Vec<Vec<f64>>,
}

/// `a_{k,j}` for `j = 1..=n` on the single cell `k`.
pub fn cell_coefficients(f: &Signal, k: i64, n: u32, tol: f64) -> Result<Vec<f64>> {
    (1..=n)
        .map(|j| {
            let idx = HaarIndex { k, j };
            let (a, m, b) = idx.support();
            if j == 1 {
                return Ok(f.integrate(a, b, tol)?.value);
            }
            let pos = f.integrate(a, m, 0.5 * tol)?.value;
            let neg = f.integrate(m, b, 0.5 * tol)?.value;
            Ok(idx.height() * (pos - neg))
        })
        .collect()
}

pub fn coefficients(f: &Signal, k0: i64, k1: i64, n: u32, tol: f64) -> Result<HaarCoeffs> {
    if k0 > k1 || n == 0 {
        return Err(Error::InvalidArgument("need k0 <= k1 and n >= 1"));
    }
    let table = (k0..=k1).map(|k| cell_coefficients(f, k, n, tol)).collect::<Result<Vec<_>>>()?;
    Ok(HaarCoeffs { k0, k1, n, table })
}

impl HaarCoeffs {
    pub fn get(&self, k: i64, j: u32) -> Option<f64> {
        if k < self.k0 || k > self.k1 || j == 0 || j > self.n {
            return None;
        }
        Some(self.table[(k - self.k0) as usize][(j - 1) as usize])
    }

    /// `(P_n f)(t)`.
    pub fn project(&self, t: f64) -> Result<f64> {
        let k = floor(t) as i64;
        if !t.is_finite() || k < self.k0 || k > self.k1 {
            return Err(Error::OutOfWindow { t });
        }
        let row = &self.table[(k - self.k0) as usize];
        Ok(row.iter().enumerate().map(|(i, a)| a * haar_fn(HaarIndex { k, j: i as u32 + 1 }, t)).sum())
    }

    /// Dyadic resolution `2^L` on which `P_n f` is constant.
    pub fn resolution_level(&self) -> u32 {
        if self.n < 2 {
            0
        } else {
            HaarIndex { k: 0, j: self.n }.level().map_or(0, |(m, _)| m + 1)
        }
    }

    /// `P_n f` on the cells of the window as a step signal (zero outside).
    pub fn to_signal(&self) -> Signal {
        let per = 1usize << self.resolution_level();
        let w = 1.0 / per as f64;
        let mut edges = Vec::with_capacity(self.table.len() * per + 1);
        let mut values = Vec::with_capacity(self.table.len() * per);
        for k in self.k0..=self.k1 {
            for i in 0..per {
                let x = k as f64 + i as f64 * w;
                edges.push(x);
                values.push(self.project(x + 0.5 * w).unwrap_or(0.0));
            }
        }
        edges.push((self.k1 + 1) as f64);
        Signal::steps(edges, values).expect("dyadic edges are increasing")
    }
}

fn cell_lp(diff: &Signal, l: i64, p: f64, tol: f64) -> Result<f64> {
    let (a, b) = (l as f64, l as f64 + 1.0);
    let v = if p == 1.0 {
        diff.integrate_map(a, b, tol, &abs)?.value
    } else if p == 2.0 {
        diff.integrate_map(a, b, tol, &|v| v * v)?.value
    } else {
        diff.integrate_map(a, b, tol, &|v| powf(abs(v), p))?.value
    };
    let v = v.max(0.0);
    Ok(if p == 1.0 {
        v
    } else if p == 2.0 {
        sqrt(v)
    } else {
        powf(v, 1.0 / p)
    })
}

/// `max_l (∫_l^{l+1} |P_n f − f|^p)^{1/p}` over cells `k0..=k1`.
pub fn projection_error(f: &Signal, n: u32, p: f64, k0: i64, k1: i64, tol: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument("p must be at least 1"));
    }
    let coeffs = coefficients(f, k0, k1, n, tol)?;
    let diff = coeffs.to_signal().minus(f);
    (k0..=k1).try_fold(0.0, |acc: f64, l| Ok(acc.max(cell_lp(&diff, l, p, tol)?)))
}

/// Sample count for `h` in `(0, 1/n]`.
pub const MODULUS_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the projection error with `24·sup_{0<h≤1/n} max_l ‖f − f^h‖_{L^p[l,l+1]}`,
/// the supremum sampled at [`MODULUS_SAMPLES`] log-spaced `h`.
pub fn modulus_bound_check(f: &Signal, n: u32, p: f64, k0: i64, k1: i64, tol: f64) -> Result<ModulusCheck> {
    let lhs = projection_error(f, n, p, k0, k1, tol)?;
    let top = 1.0 / n as f64;
    let mut sup: f64 = 0.0;
    for i in 0..MODULUS_SAMPLES {
        // from top/1000 up to top
        let h = top * powf(1e-3, (MODULUS_SAMPLES - 1 - i) as f64 / (MODULUS_SAMPLES - 1) as f64);
        let diff = f.minus(&f.shift(h));
        for l in k0..=k1 {
            sup = sup.max(cell_lp(&diff, l, p, tol)?);
        }
    }
    let rhs = 24.0 * sup;
    Ok(ModulusCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}
