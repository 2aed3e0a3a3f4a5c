//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};
use crate::math::{abs, ceil};

const MAX_DEPTH: u32 = 60;
const MAX_EVALS: usize = 10_000_000;
const MAX_PIECES: f64 = 4096.0;

struct Budget {
    left: usize,
}

impl Budget {
    fn take(&mut self, n: usize) -> bool {
        if self.left < n {
            return false;
        }
        self.left -= n;
        true
    }
}

/// Integrates `f` over `[a, b]`, splitting first at the sorted `breaks` inside the
/// interval. Returns `(value, error estimate)`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<(f64, f64)> {
    if !(b > a) {
        return Ok((0.0, 0.0));
    }
    let total = b - a;
    let mut budget = Budget { left: MAX_EVALS };
    let mut value = 0.0;
    let mut err = 0.0;
    let mut lo = a;
    let inner = breaks.iter().copied().filter(|&x| x > a && x < b);
    for hi in inner.chain(core::iter::once(b)) {
        if hi <= lo {
            continue;
        }
        let pieces = ceil(hi - lo).clamp(1.0, MAX_PIECES) as usize;
        let w = (hi - lo) / pieces as f64;
        for i in 0..pieces {
            let x0 = lo + w * i as f64;
            let x1 = if i + 1 == pieces { hi } else { x0 + w };
            let local = tol * (x1 - x0) / total;
            let (v, e) = segment(f, x0, x1, local, &mut budget).ok_or(Error::Quadrature { a, b, tol })?;
            value += v;
            err += e;
        }
        lo = hi;
    }
    Ok((value, err))
}

fn segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, budget: &mut Budget) -> Option<(f64, f64)> {
    if !budget.take(3) {
        return None;
    }
    let m = 0.5 * (a + b);
    // endpoint values are taken just inside so jumps at breakpoints count once
    let scale = if abs(a) > abs(b) { abs(a) } else { abs(b) };
    let nudge = (16.0 * f64::EPSILON * scale).min(0.25 * (b - a));
    let (fa, fm, fb) = (f(a + nudge), f(m), f(b - nudge));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, 0, budget)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
) -> Option<(f64, f64)> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    if !(a < lm && lm < m && m < rm && rm < b) || !budget.take(2) {
        return None;
    }
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return None;
    }
    if abs(delta) <= 15.0 * tol || abs(delta) <= 64.0 * f64::EPSILON * abs(left + right) {
        return Some((left + right + delta / 15.0, abs(delta) / 15.0));
    }
    if depth >= MAX_DEPTH {
        return None;
    }
    let (lv, le) = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, budget)?;
    let (rv, re) = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, budget)?;
    Some((lv + rv, le + re))
}
