//! Invariant checks shared by `verify` and the property tests.
//!
//! Each check takes its random inputs as plain arguments and returns a
//! description of the first violation.

use apfire_core::apnorms::{d_measure, d_measure_integer};
use apfire_core::firing::{charge, fire, fire_detailed, firing_rate, FiringModel, SolveConfig};
use apfire_core::haar::{coefficients, inner_product, HaarIndex};
use apfire_core::presets;
use apfire_core::signals::{Signal, Window};

pub type Check = Result<(), String>;

fn fail<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

/// Models with a known bound on `f − σ`, used by the solver properties.
pub fn models() -> Vec<(&'static str, FiringModel, f64)> {
    vec![
        ("ex4_3", FiringModel::new(1.0, presets::ex4_3()).expect("sigma 1"), 1.0),
        ("ex6_4", FiringModel::pi(presets::ex6_4()), 4.0),
        ("ex6_13_f", FiringModel::new(1.0, presets::ex6_13_f()).expect("sigma 1"), 2.0),
    ]
}

/// `|charge(t, Φ(t)) − 1|` stays within the reported bound, and that bound is
/// no larger than the charge slope times the time tolerance.
pub fn residual_bound(model: &FiringModel, sup: f64, t: f64) -> Check {
    let cfg = SolveConfig::default();
    let f = fire_detailed(model, t, &cfg).map_err(fail)?;
    let c = charge(model, t, f.time, &cfg).map_err(fail)?;
    if (c - 1.0).abs() > f.residual_bound + 1e-12 {
        return Err(format!("t={t}: |charge − 1| = {} > {}", (c - 1.0).abs(), f.residual_bound));
    }
    let slope = sup * (model.sigma * (f.time - t)).exp();
    if f.residual_bound > slope * cfg.time_tol + 1e-11 {
        return Err(format!("t={t}: residual bound {} too loose", f.residual_bound));
    }
    Ok(())
}

pub fn strictly_monotone(model: &FiringModel, t: f64, gap: f64) -> Check {
    let cfg = SolveConfig::default();
    let a = fire(model, t, &cfg).map_err(fail)?;
    let b = fire(model, t + gap, &cfg).map_err(fail)?;
    if a < b {
        Ok(())
    } else {
        Err(format!("Φ({t}) = {a} ≥ Φ({}) = {b}", t + gap))
    }
}

/// Periodic models for the start-point property. For these `Φⁿ(t0)` and
/// `Φⁿ(0)` differ by at most one period when `|t0| ≤ 1`.
pub fn periodic_models() -> Vec<FiringModel> {
    vec![
        FiringModel::new(1.0, presets::ex4_3()).expect("sigma 1"),
        FiringModel::new(1.0, presets::ex6_13_f()).expect("sigma 1"),
    ]
}

pub const RATE_SPIKES: usize = 1000;
pub const RATE_TOL: f64 = 5e-3;

pub fn start_point_independence(model: &FiringModel, t0: f64) -> Check {
    let cfg = SolveConfig::default();
    let r0 = firing_rate(model, 0.0, RATE_SPIKES, &cfg).map_err(fail)?.estimate;
    let r1 = firing_rate(model, t0, RATE_SPIKES, &cfg).map_err(fail)?.estimate;
    if (r0 - r1).abs() <= RATE_TOL {
        Ok(())
    } else {
        Err(format!("rate from 0 is {r0}, from {t0} is {r1}"))
    }
}

pub fn orthonormal(k: i64, j1: u32, j2: u32) -> Check {
    let a = HaarIndex::new(k, j1).map_err(fail)?;
    let b = HaarIndex::new(k, j2).map_err(fail)?;
    let want = if j1 == j2 { 1.0 } else { 0.0 };
    let exact = inner_product(a, b);
    if exact != want {
        return Err(format!("<h_{k},{j1}, h_{k},{j2}> = {exact}"));
    }
    let (s, m, e) = a.support();
    let h = if j1 == 1 {
        Signal::steps(vec![s, e], vec![1.0])
    } else {
        Signal::steps(vec![s, m, e], vec![a.height(), -a.height()])
    }
    .map_err(fail)?;
    let c = coefficients(&h, k, k, j1.max(j2), 1e-12).map_err(fail)?;
    let numeric = c.get(k, j2).unwrap_or(f64::NAN);
    if (numeric - want).abs() < 1e-12 {
        Ok(())
    } else {
        Err(format!("numerical <h_{k},{j1}, h_{k},{j2}> = {numeric}"))
    }
}

/// Projecting a projection reproduces its coefficients up to rounding.
pub fn idempotent(f: &Signal, n: u32) -> Check {
    let c = coefficients(f, -2, 2, n, 1e-11).map_err(fail)?;
    let again = coefficients(&c.to_signal(), -2, 2, n, 1e-11).map_err(fail)?;
    for (r1, r2) in c.table.iter().zip(&again.table) {
        for (x, y) in r1.iter().zip(r2) {
            if (x - y).abs() > 1e-9 * (1.0 + x.abs()) {
                return Err(format!("coefficient {x} became {y}"));
            }
        }
    }
    Ok(())
}

const MEASURE_WINDOW: (f64, f64) = (0.0, 12.0);

/// Monotone in `η`, symmetric, and zero on the diagonal.
pub fn d_measure_axioms(f: &Signal, g: &Signal, eta: f64, extra: f64) -> Check {
    let w = Window::new(MEASURE_WINDOW.0, MEASURE_WINDOW.1).map_err(fail)?;
    let d1 = d_measure(f, g, eta, w, 97).map_err(fail)?.value;
    let d2 = d_measure(f, g, eta + extra, w, 97).map_err(fail)?.value;
    let sym = d_measure(g, f, eta, w, 97).map_err(fail)?.value;
    let diag = d_measure(f, f, eta, w, 97).map_err(fail)?.value;
    if d2 > d1 {
        return Err(format!("D({}) = {d2} > D({eta}) = {d1}", eta + extra));
    }
    if sym != d1 {
        return Err(format!("D(f,g) = {d1} but D(g,f) = {sym}"));
    }
    if diag != 0.0 {
        return Err(format!("D(f,f) = {diag}"));
    }
    Ok(())
}

/// `D_ℤ ≤ D ≤ 2·D_ℤ` with integer anchors on the right. The window must cover
/// a full period of `f − g`.
pub fn sandwich(f: &Signal, g: &Signal, eta: f64) -> Check {
    let (a, b) = MEASURE_WINDOW;
    let w = Window::new(a, b).map_err(fail)?;
    let d = d_measure(f, g, eta, w, 12 * 16 + 1).map_err(fail)?.value;
    let dz = d_measure_integer(f, g, eta, a as i64, b as i64).map_err(fail)?.value;
    if dz <= d + 1e-12 && d <= 2.0 * dz + 1e-12 {
        Ok(())
    } else {
        Err(format!("D = {d}, integer-anchored D = {dz}"))
    }
}

/// Piecewise-constant input of integer period `p ≤ 3` with integer values.
pub fn integer_periodic(p: u32, values: &[f64]) -> Signal {
    let n = values.len() as f64;
    let p = p as f64;
    Signal::piecewise_periodic(p, values.iter().enumerate().map(|(i, &v)| (p * i as f64 / n, v.round())).collect())
        .expect("valid pieces")
}
