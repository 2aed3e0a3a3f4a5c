//! Sampled almost-periodicity metrics and mean values.
//!
//! Every supremum over `ℝ` is replaced by a maximum over a finite grid of
//! anchors, so the reported numbers are lower bounds of the true quantities.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, ceil, powf};
use crate::signals::{Signal, Window};

pub const DEFAULT_TOL: f64 = 1e-10;
/// Sample count per unit cell when a measure has to be estimated by sampling.
pub const MEASURE_SAMPLES: usize = 4096;

/// Maximum of a sampled quantity together with where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    pub value: f64,
    pub argmax: f64,
    pub points: usize,
}

impl GridMax {
    fn over(points: impl Iterator<Item = f64>, mut g: impl FnMut(f64) -> Result<f64>) -> Result<GridMax> {
        let mut best = GridMax { value: f64::NEG_INFINITY, argmax: f64::NAN, points: 0 };
        for u in points {
            let v = g(u)?;
            best.points += 1;
            if v > best.value {
                best.value = v;
                best.argmax = u;
            }
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormParams {
    pub p: f64,
    pub r: f64,
    pub window: Window,
    pub samples_per_unit: usize,
    pub tol: f64,
}

impl NormParams {
    pub fn new(p: f64, r: f64, window: Window, samples_per_unit: usize) -> Result<Self> {
        if !(p >= 1.0) || !(r > 0.0) || samples_per_unit == 0 {
            return Err(Error::InvalidArgument("need p >= 1, r > 0 and a positive sample count"));
        }
        Ok(NormParams { p, r, window, samples_per_unit, tol: DEFAULT_TOL })
    }

    /// Anchor count covering the window at the requested density.
    pub fn anchors(&self) -> usize {
        grid_count(self.window, self.samples_per_unit)
    }
}

fn grid_count(w: Window, per_unit: usize) -> usize {
    ceil(w.len() * per_unit as f64) as usize + 1
}

fn lp_mean(f: &Signal, u: f64, r: f64, p: f64, tol: f64) -> Result<f64> {
    let i = if p == 1.0 {
        f.integrate_map(u, u + r, tol, &abs)?
    } else {
        f.integrate_map(u, u + r, tol, &|v| powf(abs(v), p))?
    };
    Ok(powf((i.value / r).max(0.0), 1.0 / p))
}

/// `max_t ((1/r)∫_t^{t+r} |f|^p)^{1/p}` over the anchor grid.
pub fn stepanov_norm(f: &Signal, params: &NormParams) -> Result<GridMax> {
    let w = params.window;
    GridMax::over(w.grid(params.anchors()), |u| lp_mean(f, u, params.r, params.p, params.tol))
}

/// Measure of `{t ∈ [u, u+1] : |f(t) − g(t)| ≥ η}` for one anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureMax {
    pub value: f64,
    pub argmax: f64,
    pub anchors: usize,
    /// `None` when measured exactly from pieces, else the samples per unit cell.
    pub samples: Option<usize>,
}

fn level_measure(diff: &Signal, eta: f64, u: f64) -> Result<(f64, Option<usize>)> {
    if diff.is_piecewise_constant() {
        let ind = move |v: f64| if abs(v) >= eta { 1.0 } else { 0.0 };
        if diff.breakpoints(u, u + 1.0).is_some() {
            return Ok((diff.integrate_map(u, u + 1.0, DEFAULT_TOL, &ind)?.value, None));
        }
    }
    let n = MEASURE_SAMPLES;
    let h = 1.0 / n as f64;
    let hits = (0..n).filter(|&i| abs(diff.eval(u + (i as f64 + 0.5) * h)) >= eta).count();
    Ok((hits as f64 * h, Some(n)))
}

fn measure_over(diff: &Signal, eta: f64, anchors: impl Iterator<Item = f64>) -> Result<MeasureMax> {
    if !(eta > 0.0) {
        return Err(Error::InvalidArgument("eta must be positive"));
    }
    let mut best = MeasureMax { value: f64::NEG_INFINITY, argmax: f64::NAN, anchors: 0, samples: None };
    for u in anchors {
        let (v, s) = level_measure(diff, eta, u)?;
        best.anchors += 1;
        if s.is_some() {
            best.samples = s;
        }
        if v > best.value {
            best.value = v;
            best.argmax = u;
        }
    }
    Ok(best)
}

/// `D(η; f, g)` with the supremum over `grid` anchors in `window`.
pub fn d_measure(f: &Signal, g: &Signal, eta: f64, window: Window, grid: usize) -> Result<MeasureMax> {
    measure_over(&f.minus(g), eta, window.grid(grid))
}

/// The same measure with anchors restricted to the integers `z0..=z1`.
pub fn d_measure_integer(f: &Signal, g: &Signal, eta: f64, z0: i64, z1: i64) -> Result<MeasureMax> {
    measure_over(&f.minus(g), eta, (z0..=z1).map(|z| z as f64))
}

/// `max_u ∫_u^{u+1} |f|/(1+|f|)` over the anchor grid.
pub fn f_norm_prime(f: &Signal, window: Window, grid: usize) -> Result<GridMax> {
    GridMax::over(window.grid(grid), |u| {
        Ok(f.integrate_map(u, u + 1.0, DEFAULT_TOL, &|v| abs(v) / (1.0 + abs(v)))?.value)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanMode {
    Uniform,
    Stepanov { p: f64 },
    Mu { eta: f64 },
}

impl ScanMode {
    /// Uniform and Stepanov almost periods need a strict inequality, μ ones do not.
    pub fn accepts(self, deviation: f64, eps: f64) -> bool {
        match self {
            ScanMode::Uniform | ScanMode::Stepanov { .. } => deviation < eps,
            ScanMode::Mu { .. } => deviation <= eps,
        }
    }
}

/// Sampling resolution used when scanning translations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanParams {
    pub window: Window,
    pub samples_per_unit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanEntry {
    pub tau: f64,
    pub deviation: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlmostPeriodScan {
    pub mode: ScanMode,
    pub eps: f64,
    pub entries: Vec<ScanEntry>,
    /// Largest gap between consecutive accepted translations, `∞` if fewer than two.
    pub max_gap: f64,
}

impl AlmostPeriodScan {
    pub fn from_deviations(mode: ScanMode, eps: f64, taus: &[f64], deviations: &[f64]) -> Self {
        let entries: Vec<ScanEntry> = taus
            .iter()
            .zip(deviations)
            .map(|(&tau, &deviation)| ScanEntry { tau, deviation, accepted: mode.accepts(deviation, eps) })
            .collect();
        let mut acc: Vec<f64> = entries.iter().filter(|e| e.accepted).map(|e| e.tau).collect();
        acc.sort_by(f64::total_cmp);
        let max_gap =
            if acc.len() < 2 { f64::INFINITY } else { acc.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max) };
        AlmostPeriodScan { mode, eps, entries, max_gap }
    }

    pub fn accepted(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(|e| e.accepted)
    }
}

/// Deviation of `f^τ` from `f` in the given mode.
pub fn deviation(f: &Signal, mode: ScanMode, tau: f64, params: &ScanParams) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let w = params.window;
    let count = grid_count(w, params.samples_per_unit);
    let diff = f.shift(tau).minus(f);
    match mode {
        ScanMode::Uniform => Ok(w.grid(count).map(|t| abs(diff.eval(t))).fold(0.0, f64::max)),
        ScanMode::Stepanov { p } => {
            let np = NormParams { p, r: 1.0, window: w, samples_per_unit: params.samples_per_unit, tol: DEFAULT_TOL };
            Ok(stepanov_norm(&diff, &np)?.value)
        }
        ScanMode::Mu { eta } => Ok(measure_over(&diff, eta, w.grid(count))?.value),
    }
}

pub fn scan_periods(
    f: &Signal,
    mode: ScanMode,
    eps: f64,
    taus: &[f64],
    params: &ScanParams,
) -> Result<AlmostPeriodScan> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive"));
    }
    let devs = taus.iter().map(|&t| deviation(f, mode, t, params)).collect::<Result<Vec<_>>>()?;
    Ok(AlmostPeriodScan::from_deviations(mode, eps, taus, &devs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanVerdict {
    Converged { limit: f64, tol: f64 },
    Oscillating { t1: f64, m1: f64, t2: f64, m2: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanEstimate {
    pub partials: Vec<(f64, f64)>,
    pub verdict: MeanVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanOptions {
    pub trailing: usize,
    pub tol: f64,
    pub quad_tol: f64,
}

impl Default for MeanOptions {
    fn default() -> Self {
        MeanOptions { trailing: 3, tol: 1e-3, quad_tol: DEFAULT_TOL }
    }
}

/// Partials `M_T = (1/T)∫_0^T f` along an increasing schedule and a verdict.
pub fn mean_value(f: &Signal, schedule: &[f64], opts: MeanOptions) -> Result<MeanEstimate> {
    if schedule.is_empty() || schedule[0] <= 0.0 || schedule.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("schedule must be positive and strictly increasing"));
    }
    let mut partials = Vec::with_capacity(schedule.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &t in schedule {
        acc += f.integrate(prev, t, opts.quad_tol)?.value;
        prev = t;
        partials.push((t, acc / t));
    }
    let verdict = judge(&partials, opts);
    Ok(MeanEstimate { partials, verdict })
}

fn judge(partials: &[(f64, f64)], opts: MeanOptions) -> MeanVerdict {
    let k = opts.trailing.max(1);
    if partials.len() >= k {
        let tail = &partials[partials.len() - k..];
        let hi = tail.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let lo = tail.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        if hi - lo <= opts.tol {
            return MeanVerdict::Converged { limit: partials[partials.len() - 1].1, tol: opts.tol };
        }
    }
    let median = partials[(partials.len() - 1) / 2].0;
    let mut best: Option<(f64, MeanVerdict)> = None;
    for (i, &(t1, m1)) in partials.iter().enumerate() {
        if t1 < median {
            continue;
        }
        for &(t2, m2) in &partials[i + 1..] {
            let gap = abs(m2 - m1);
            if gap > opts.tol && best.is_none_or(|b| gap > b.0) {
                best = Some((gap, MeanVerdict::Oscillating { t1, m1, t2, m2 }));
            }
        }
    }
    best.map_or(MeanVerdict::Inconclusive, |b| b.1)
}

/// The truncated signal `max(−N, min(f, N))`.
pub fn truncate(f: &Signal, n: f64) -> Result<Signal> {
    if !(n > 0.0) {
        return Err(Error::InvalidArgument("truncation level must be positive"));
    }
    Ok(f.truncate(n))
}

/// `max_t |∫_0^t (f(s) − m) ds|` over `grid` points of the window.
pub fn antiderivative_residual(f: &Signal, m: f64, window: Window, grid: usize) -> Result<GridMax> {
    let g = f.minus(&Signal::constant(m));
    let tol = DEFAULT_TOL;
    let start = window.a;
    let mut value =
        if start >= 0.0 { g.integrate(0.0, start, tol)?.value } else { -g.integrate(start, 0.0, tol)?.value };
    let mut prev = start;
    GridMax::over(window.grid(grid), |t| {
        value += g.integrate(prev, t, tol)?.value;
        prev = t;
        Ok(abs(value))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn verdict_prefers_far_pair() {
        let p = vec![(1.0, 0.0), (2.0, 1.0), (3.0, 0.2), (4.0, 0.9)];
        match judge(&p, MeanOptions::default()) {
            MeanVerdict::Oscillating { t1, t2, .. } => assert_eq!((t1, t2), (2.0, 3.0)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn constant_mean_converges() {
        let e = mean_value(&Signal::constant(4.0), &[1.0, 2.0, 3.0], MeanOptions::default()).unwrap();
        assert_eq!(e.verdict, MeanVerdict::Converged { limit: 4.0, tol: 1e-3 });
    }
}
