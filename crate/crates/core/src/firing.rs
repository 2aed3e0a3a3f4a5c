//! Firing maps of `ẋ = −σx + f(t)` with threshold 1 and reset 0.
//!
//! The solver tracks the membrane potential started from 0 at `t`,
//! `x(s) = ∫_t^s f(u)·e^{σ(u−s)} du`, which crosses 1 exactly when the charge
//! `∫_t^s (f(u) − σ)·e^{σ(u−t)} du` does. Each step anchors its exponential at
//! the step's right end, so no exponent is ever positive.

use alloc::vec::Vec;

use crate::apnorms::{self, MeanOptions, MeanVerdict};
use crate::error::{Error, Result};
use crate::math::{abs, exp, expm1, ln};
use crate::signals::Signal;

#[derive(Debug, Clone)]
pub struct FiringModel {
    pub sigma: f64,
    pub input: Signal,
}

impl FiringModel {
    pub fn new(sigma: f64, input: Signal) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument("sigma must be finite and non-negative"));
        }
        Ok(FiringModel { sigma, input })
    }

    /// Perfect integrator, `σ = 0`.
    pub fn pi(input: Signal) -> Self {
        FiringModel { sigma: 0.0, input }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub step: f64,
    pub time_tol: f64,
    pub horizon: f64,
    /// Known a.e. lower bound of `f − σ`.
    pub varsigma: Option<f64>,
    pub quad_tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { step: 1e-3, time_tol: 1e-10, horizon: 1e3, varsigma: None, quad_tol: 1e-10 }
    }
}

impl SolveConfig {
    /// Search horizon: `1/ς` plus one scan step when `ς` is known.
    pub fn effective_horizon(&self) -> f64 {
        match self.varsigma {
            Some(v) => 1.0 / v + self.step,
            None => self.horizon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.step > 0.0
            && self.time_tol > 0.0
            && self.horizon > 0.0
            && self.quad_tol > 0.0
            && self.varsigma.is_none_or(|v| v > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("solver parameters must be positive"))
        }
    }
}

/// `∫_t^s (f(u) − σ)·e^{σ(u−t)} du`.
pub fn charge(model: &FiringModel, t: f64, s: f64, cfg: &SolveConfig) -> Result<f64> {
    Ok(model.input.integrate_weighted(model.sigma, t, s, cfg.quad_tol)?.value)
}

/// A firing time with a bound on `|charge(t, time) − 1|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Firing {
    pub time: f64,
    pub residual_bound: f64,
}

struct Walker<'a> {
    model: &'a FiringModel,
    tol: f64,
    err: f64,
    steps: u64,
}

impl Walker<'_> {
    /// Potential at `s2` given potential `x` at `s`.
    fn advance(&mut self, x: f64, s: f64, s2: f64) -> Result<f64> {
        let sigma = self.model.sigma;
        let w = self.model.input.weighted(sigma, s2, s, s2, self.tol)?;
        self.err += w.err_bound;
        self.steps += 1;
        Ok(x * exp(-sigma * (s2 - s)) + w.value)
    }
}

pub fn fire_detailed(model: &FiringModel, t: f64, cfg: &SolveConfig) -> Result<Firing> {
    cfg.validate()?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument("t must be finite"));
    }
    let horizon = cfg.effective_horizon();
    let end = t + horizon;
    let mut walk = Walker { model, tol: cfg.quad_tol, err: 0.0, steps: 0 };
    let (mut s, mut x) = (t, 0.0);
    let (lo, x_lo, hi) = loop {
        if s >= end {
            return Err(Error::HorizonExceeded { t, horizon });
        }
        let next = (s + cfg.step).min(end);
        let x_next = walk.advance(x, s, next)?;
        if x_next >= 1.0 {
            break (s, x, next);
        }
        s = next;
        x = x_next;
    };
    let (mut lo, mut x_lo, mut hi) = (lo, x_lo, hi);
    while hi - lo > cfg.time_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let x_mid = walk.advance(x_lo, lo, mid)?;
        if x_mid >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
            x_lo = x_mid;
        }
    }
    // charge(hi) − 1 lies in [0, charge(hi) − charge(lo)]
    let sigma = model.sigma;
    let seg = model.input.weighted(sigma, lo, lo, hi, cfg.quad_tol)?;
    let rise = exp(sigma * (lo - t)) * abs(seg.value - expm1(sigma * (hi - lo)));
    let scale = exp(sigma * (hi - t));
    let rounding = scale * (walk.steps as f64 + 16.0) * 4.0 * f64::EPSILON;
    let residual_bound = rise + scale * (walk.err + seg.err_bound) + rounding;
    Ok(Firing { time: hi, residual_bound })
}

/// `Φ(t)`: the first `s > t` with `charge(t, s) ≥ 1`, to within `time_tol`.
pub fn fire(model: &FiringModel, t: f64, cfg: &SolveConfig) -> Result<f64> {
    fire_detailed(model, t, cfg).map(|f| f.time)
}

/// `Ψ(t) = Φ(t) − t`.
pub fn displacement(model: &FiringModel, t: f64, cfg: &SolveConfig) -> Result<f64> {
    Ok(fire(model, t, cfg)? - t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiringTrajectory {
    pub t0: f64,
    pub spikes: Vec<f64>,
    pub residual_bounds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("firing {index} failed: {cause}")]
pub struct TrajectoryError {
    /// Zero-based index of the spike that could not be found.
    pub index: usize,
    pub partial: FiringTrajectory,
    pub cause: Error,
}

impl From<TrajectoryError> for Error {
    fn from(e: TrajectoryError) -> Self {
        e.cause
    }
}

/// `Φ(t0), Φ²(t0), …, Φⁿ(t0)`.
pub fn trajectory(
    model: &FiringModel,
    t0: f64,
    n: usize,
    cfg: &SolveConfig,
) -> core::result::Result<FiringTrajectory, TrajectoryError> {
    let mut traj = FiringTrajectory { t0, spikes: Vec::with_capacity(n), residual_bounds: Vec::with_capacity(n) };
    let mut t = t0;
    for index in 0..n {
        match fire_detailed(model, t, cfg) {
            Ok(f) => {
                traj.spikes.push(f.time);
                traj.residual_bounds.push(f.residual_bound);
                t = f.time;
            }
            Err(cause) => return Err(TrajectoryError { index, partial: traj, cause }),
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub estimate: f64,
    /// `k / Φᵏ(t0)` for `k = 1..=n`.
    pub sequence: Vec<f64>,
    /// First-order effect of `n·time_tol` accumulated spike-time error.
    pub error_budget: f64,
}

pub fn firing_rate(model: &FiringModel, t0: f64, n: usize, cfg: &SolveConfig) -> Result<RateEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument("firing rate needs n >= 2"));
    }
    let traj = trajectory(model, t0, n, cfg)?;
    let sequence: Vec<f64> = traj.spikes.iter().enumerate().map(|(k, &s)| (k + 1) as f64 / s).collect();
    let estimate = sequence[n - 1];
    let last = traj.spikes[n - 1];
    let error_budget = abs(estimate) * n as f64 * cfg.time_tol / abs(last);
    Ok(RateEstimate { estimate, sequence, error_budget })
}

/// `(Φⁿ(t0) − t0) / n`.
pub fn rotation_number(model: &FiringModel, t0: f64, n: usize, cfg: &SolveConfig) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("rotation number needs n >= 1"));
    }
    let traj = trajectory(model, t0, n, cfg)?;
    Ok((traj.spikes[n - 1] - t0) / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    LikelyDefined,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub verdict: Verdict,
    /// Number of levels `1, 2, 4, …` reached by `∫_0^T (f − σ)e^{σu} du` for `T ≤ T_max`.
    pub levels: u32,
    /// Converged mean value, if any.
    pub mean: Option<f64>,
}

pub const PROBE_LEVELS: u32 = 4;

/// Heuristic check that `Φ` is defined everywhere. Never claims the opposite.
pub fn well_defined_probe(model: &FiringModel, t_max: f64, cfg: &SolveConfig) -> Result<Probe> {
    cfg.validate()?;
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument("T_max must be positive"));
    }
    let sigma = model.sigma;
    let h = cfg.step.max(t_max / 1e4);
    let mut walk = Walker { model, tol: cfg.quad_tol, err: 0.0, steps: 0 };
    let (mut s, mut x) = (0.0, 0.0);
    let mut levels = 0u32;
    while s < t_max {
        let next = (s + h).min(t_max);
        x = walk.advance(x, s, next)?;
        s = next;
        // charge = e^{σs}(x − 1) + 1 = e^{σs}(x − 1 + e^{−σs})
        let scaled = x - 1.0 + exp(-sigma * s);
        if scaled > 0.0 {
            let log_charge = ln(scaled) + sigma * s;
            while levels < 64 && log_charge >= levels as f64 * core::f64::consts::LN_2 {
                levels += 1;
            }
        }
    }
    let opts = MeanOptions::default();
    let schedule: Vec<f64> = (0..5).rev().map(|k| t_max / (1u32 << k) as f64).collect();
    let mean = match apnorms::mean_value(&model.input, &schedule, opts) {
        Ok(e) => match e.verdict {
            MeanVerdict::Converged { limit, .. } => Some(limit),
            _ => None,
        },
        Err(_) => None,
    };
    let by_mean = mean.is_some_and(|m| m > sigma + 10.0 * opts.tol);
    let verdict = if levels >= PROBE_LEVELS || by_mean { Verdict::LikelyDefined } else { Verdict::Unknown };
    Ok(Probe { verdict, levels, mean })
}
