//! Closed-form building blocks for the series constructions.

use alloc::vec::Vec;

use crate::math::{exp, exp_geometric, exp_integral, exp_moment, floor};

/// `count` boxes of height `value` and length `width`, the `k`-th starting at
/// `origin + k·spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Comb {
    pub origin: f64,
    pub spacing: f64,
    pub width: f64,
    pub value: f64,
    pub count: u64,
}

/// Linear piece `v0 + slope·(t − x0)` on `[x0, x1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Ramp {
    pub x0: f64,
    pub x1: f64,
    pub v0: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Term {
    Comb(Comb),
    Ramp(Ramp),
}

impl Comb {
    fn start(&self, k: u64) -> f64 {
        self.origin + k as f64 * self.spacing
    }

    fn index_near(&self, t: f64) -> i64 {
        floor((t - self.origin) / self.spacing) as i64
    }

    fn clamp(&self, k: i64) -> u64 {
        k.clamp(0, self.count as i64 - 1) as u64
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = self.index_near(t);
        for k in [k - 1, k] {
            if k < 0 || k as u64 >= self.count {
                continue;
            }
            let p = self.start(k as u64);
            if t >= p && t - p < self.width {
                return self.value;
            }
        }
        0.0
    }

    fn tooth(&self, k: u64, sigma: f64, anchor: f64, a: f64, b: f64) -> f64 {
        // offsets from the tooth start keep sub-ulp widths intact far from 0
        let p = self.start(k);
        let lo = (a - p).max(0.0);
        let hi = (b - p).min(self.width);
        if hi <= lo {
            return 0.0;
        }
        self.value * exp(sigma * (p - anchor + lo)) * exp_integral(sigma, hi - lo)
    }

    /// `∫_a^b comb(u)·e^{σ(u − anchor)} du`.
    pub fn wint(&self, sigma: f64, anchor: f64, a: f64, b: f64) -> f64 {
        if self.count == 0 || b <= a {
            return 0.0;
        }
        let lo = self.clamp(self.index_near(a) - 1);
        let hi = self.clamp(self.index_near(b) + 1);
        if hi - lo <= 6 {
            return (lo..=hi).map(|k| self.tooth(k, sigma, anchor, a, b)).sum();
        }
        let mut sum = 0.0;
        for k in (lo..lo + 3).chain(hi - 2..=hi) {
            sum += self.tooth(k, sigma, anchor, a, b);
        }
        let first = lo + 3;
        let full = (hi - 2 - first) as f64;
        let per_tooth = self.value * exp_integral(sigma, self.width);
        let x0 = sigma * (self.start(first) - anchor);
        sum + per_tooth * exp_geometric(x0, sigma * self.spacing, full)
    }

    pub fn breaks(&self, a: f64, b: f64, out: &mut Vec<f64>, cap: usize) {
        if self.count == 0 {
            return;
        }
        let lo = self.clamp(self.index_near(a) - 1);
        let hi = self.clamp(self.index_near(b) + 1);
        for k in lo..=hi {
            if out.len() >= cap {
                return;
            }
            let p = self.start(k);
            for x in [p, p + self.width] {
                if x > a && x < b {
                    out.push(x);
                }
            }
        }
    }
}

impl Ramp {
    pub fn eval(&self, t: f64) -> f64 {
        if t >= self.x0 && t < self.x1 {
            self.v0 + self.slope * (t - self.x0)
        } else {
            0.0
        }
    }

    pub fn wint(&self, sigma: f64, anchor: f64, a: f64, b: f64) -> f64 {
        let lo = if a > self.x0 { a } else { self.x0 };
        let hi = if b < self.x1 { b } else { self.x1 };
        if hi <= lo {
            return 0.0;
        }
        let len = hi - lo;
        let v = self.v0 + self.slope * (lo - self.x0);
        exp(sigma * (lo - anchor)) * (v * exp_integral(sigma, len) + self.slope * exp_moment(sigma, len))
    }

    pub fn breaks(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        for x in [self.x0, self.x1] {
            if x > a && x < b {
                out.push(x);
            }
        }
    }
}

impl Term {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Term::Comb(c) => c.eval(t),
            Term::Ramp(r) => r.eval(t),
        }
    }

    pub fn wint(&self, sigma: f64, anchor: f64, a: f64, b: f64) -> f64 {
        match self {
            Term::Comb(c) => c.wint(sigma, anchor, a, b),
            Term::Ramp(r) => r.wint(sigma, anchor, a, b),
        }
    }

    pub fn breaks(&self, a: f64, b: f64, out: &mut Vec<f64>, cap: usize) {
        match self {
            Term::Comb(c) => c.breaks(a, b, out, cap),
            Term::Ramp(r) => r.breaks(a, b, out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(c: &Comb, a: f64, b: f64) -> f64 {
        let n = 200_000;
        let h = (b - a) / n as f64;
        (0..n).map(|i| c.eval(a + (i as f64 + 0.5) * h) * h).sum()
    }

    #[test]
    fn comb_matches_riemann_sum() {
        let c = Comb { origin: 2.0, spacing: 0.125, width: 0.03125, value: 16.0, count: 8 };
        for (a, b) in [(2.0, 3.0), (2.01, 2.7), (1.5, 2.3), (2.4, 2.41)] {
            let exact = c.wint(0.0, 0.0, a, b);
            assert!((exact - brute(&c, a, b)).abs() < 1e-3, "{a} {b}");
        }
        assert_eq!(c.wint(0.0, 0.0, 2.0, 3.0), 4.0);
    }

    #[test]
    fn comb_weighted_geometric_sum() {
        let c = Comb { origin: 0.0, spacing: 0.01, width: 0.004, value: 3.0, count: 100 };
        let sigma = 1.7;
        let direct: f64 = (0..100)
            .map(|k| {
                let p = k as f64 * 0.01;
                3.0 * (exp(sigma * (p + 0.004 - 1.0)) - exp(sigma * (p - 1.0))) / sigma
            })
            .sum();
        let fast = c.wint(sigma, 1.0, -1.0, 2.0);
        assert!((fast - direct).abs() < 1e-13);
    }

    #[test]
    fn ramp_moment() {
        let r = Ramp { x0: 0.0, x1: 1.0, v0: 1.0, slope: 2.0 };
        // ∫_0^1 (1 + 2u) e^u du = e·1 + ... closed form: (2u - 1) e^u |_0^1 = e + 1
        let v = r.wint(1.0, 0.0, 0.0, 1.0);
        assert!((v - (core::f64::consts::E + 1.0)).abs() < 1e-14);
        assert!((r.wint(0.0, 0.0, 0.0, 1.0) - 2.0).abs() < 1e-15);
    }
}
