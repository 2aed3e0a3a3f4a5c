//! Reproduces the worked examples and the acceptance criteria.

use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use apfire_core::apnorms::{antiderivative_residual, mean_value, stepanov_norm, MeanOptions, NormParams};
use apfire_core::firing::{displacement, fire, firing_rate, trajectory, FiringModel, SolveConfig};
use apfire_core::haar::{modulus_bound_check, projection_error};
use apfire_core::presets;
use apfire_core::signals::{DyadicKind, Signal, Window};
use apfire_core::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::props;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub observed: String,
    pub expected: String,
}

impl Outcome {
    fn new(pass: bool, observed: impl Into<String>, expected: impl Into<String>) -> Self {
        Outcome { pass, observed: observed.into(), expected: expected.into() }
    }
}

type Run = fn() -> Result<Outcome, Error>;

pub struct Check {
    pub id: &'static str,
    pub group: &'static str,
    pub title: &'static str,
    /// Wall-clock budget in seconds.
    pub budget: Option<f64>,
    run: Run,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub id: &'static str,
    pub pass: bool,
    pub observed: String,
    pub expected: String,
    pub seconds: f64,
}

impl Report {
    pub fn line(&self) -> String {
        format!(
            "{} {}: observed {}; expected {} ({:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.observed,
            self.expected,
            self.seconds
        )
    }
}

pub const CHECKS: &[Check] = &[
    Check { id: "c1", group: "firing", title: "closed-form firing map of ex4_3", budget: Some(5.0), run: c1 },
    Check { id: "c2", group: "firing", title: "PI firing rate equals the mean (ex6_4)", budget: Some(30.0), run: c2 },
    Check { id: "c3", group: "firing", title: "LIF rates separate equal means (ex6_13)", budget: Some(10.0), run: c3 },
    Check { id: "c4", group: "apnorms", title: "mean-value oscillation (ex3_3)", budget: Some(20.0), run: c4 },
    Check { id: "c5", group: "apnorms", title: "mean of the unbounded series (ex3_4)", budget: Some(10.0), run: c5 },
    Check { id: "c6", group: "firing", title: "displacement bound 1/varsigma", budget: None, run: c6 },
    Check { id: "c7", group: "firing", title: "periodic covariance of ex4_3", budget: None, run: c7 },
    Check { id: "c8", group: "signals", title: "mu_no_mu construction and witness", budget: Some(60.0), run: c8 },
    Check { id: "c9", group: "firing", title: "ex4_13 displacement jump", budget: None, run: c9 },
    Check { id: "c10", group: "haar", title: "Haar projection convergence", budget: Some(60.0), run: c10 },
    Check { id: "c11", group: "apnorms", title: "antiderivative residual bound", budget: None, run: c11 },
    Check { id: "c12", group: "properties", title: "sampled invariant suites", budget: None, run: c12 },
    Check { id: "ex4_3-phi0", group: "examples", title: "ex4_3 fires at ln 2 from 0", budget: None, run: ex4_3_phi0 },
    Check { id: "ex6_13-spikes", group: "examples", title: "ex6_13_f first spikes", budget: None, run: ex6_13_spikes },
    Check { id: "const-rate", group: "examples", title: "constant input 1 has rate 1", budget: None, run: const_rate },
    Check {
        id: "stepanov-sin",
        group: "examples",
        title: "S^1 norm of sin with r = 2pi",
        budget: None,
        run: stepanov_sin,
    },
    Check { id: "haar-trig", group: "examples", title: "Haar error decay for 2 + cos t", budget: None, run: haar_trig },
];

/// Checks whose id or group matches one of `filters`; all checks when empty.
pub fn select(filters: &[String]) -> Vec<&'static Check> {
    CHECKS.iter().filter(|c| filters.is_empty() || filters.iter().any(|f| f == c.id || f == c.group)).collect()
}

pub fn find(id: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.id == id)
}

pub fn run(check: &Check) -> Report {
    let start = Instant::now();
    let outcome = (check.run)().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}"), "no error"));
    let seconds = start.elapsed().as_secs_f64();
    let mut report =
        Report { id: check.id, pass: outcome.pass, observed: outcome.observed, expected: outcome.expected, seconds };
    if let Some(limit) = check.budget {
        if seconds >= limit {
            report.pass = false;
            report.observed.push_str(&format!(", runtime {seconds:.1} s over the {limit} s budget"));
        }
    }
    report
}

fn cfg() -> SolveConfig {
    SolveConfig::default()
}

fn rng(tag: u64) -> StdRng {
    StdRng::seed_from_u64(0x00a9_f12e ^ tag)
}

fn ex4_3_model() -> FiringModel {
    FiringModel::new(1.0, presets::ex4_3()).expect("sigma 1")
}

fn c1() -> Result<Outcome, Error> {
    let m = ex4_3_model();
    // offsets within [2k, 2k+2) and the closed form on each branch
    type Branch = (f64, f64, fn(f64, f64) -> f64);
    let branches: [Branch; 3] = [
        (0.0, 1.0 - LN_2, |t, _| (2.0 * t.exp()).ln()),
        (1.0 - LN_2, 1.0, |t, k| (2.0 * t.exp() + (2.0 * k + 2.0).exp() - (2.0 * k + 1.0).exp()).ln()),
        (1.0, 2.0, |t, k| (t.exp() + (2.0 * k + 2.0).exp()).ln()),
    ];
    let mut worst = 0.0f64;
    for (lo, hi, formula) in branches {
        for i in 0..100 {
            let k = (i % 5) as f64 - 2.0;
            let t = 2.0 * k + lo + (hi - lo) * (i as f64 + 0.5) / 100.0;
            worst = worst.max((fire(&m, t, &cfg())? - formula(t, k)).abs());
        }
    }
    Ok(Outcome::new(worst <= 1e-6, format!("max error {worst:.3e} over 3x100 points"), "<= 1e-6"))
}

fn c2() -> Result<Outcome, Error> {
    let r = firing_rate(&FiringModel::pi(presets::ex6_4()), 0.0, 2000, &cfg())?.estimate;
    Ok(Outcome::new((r - 2.0).abs() <= 2e-3, format!("rate {r:.6}"), "2 +- 2e-3"))
}

fn c3() -> Result<Outcome, Error> {
    let f = FiringModel::new(1.0, presets::ex6_13_f())?;
    let g = FiringModel::new(1.0, presets::ex6_13_g())?;
    let fr_f = firing_rate(&f, 0.0, 400, &cfg())?.estimate;
    let fr_g = firing_rate(&g, 0.0, 400, &cfg())?.estimate;
    let ln3 = 3f64.ln();
    let want_f = 2.0 / ln3;
    let want_g = 1.0 / (1.0 + 1.0 / (2.0 - LN_2 / ln3)).ln();
    let t = 200.0 * ln3;
    let mean_f = f.input.integrate(0.0, t, 1e-10)?.value / t;
    let mean_g = g.input.integrate(0.0, t, 1e-10)?.value / t;
    let mean = 3.0 - LN_2 / ln3;
    let pass = (fr_f - want_f).abs() <= 1e-6
        && (fr_g - want_g).abs() <= 1e-6
        && (mean_f - mean_g).abs() <= 1e-6
        && (mean_f - mean).abs() <= 1e-6
        && (mean_g - mean).abs() <= 1e-6;
    Ok(Outcome::new(
        pass,
        format!("FR_f {fr_f:.9}, FR_g {fr_g:.9}, M(f) {mean_f:.9}, M(g) {mean_g:.9}"),
        format!("FR_f {want_f:.9}, FR_g {want_g:.9}, means {mean:.9}, all +- 1e-6"),
    ))
}

fn c4() -> Result<Outcome, Error> {
    let f = Signal::dyadic(DyadicKind::MeanlessSeries);
    let mut sched = Vec::new();
    for n in 2..=4 {
        let t = 2f64.powi(1 << n);
        sched.extend([t, t + 1.0]);
    }
    let e = mean_value(&f, &sched, MeanOptions::default())?;
    let mut pass = true;
    let mut seen = Vec::new();
    for pair in e.partials.chunks(2) {
        let (t, lo) = pair[0];
        let hi = pair[1].1;
        pass &= lo <= 2.0 / 3.0 && hi >= t / (t + 1.0);
        seen.push(format!("M({t})={lo:.4}, M({})={hi:.4}", t + 1.0));
    }
    Ok(Outcome::new(pass, seen.join("; "), "M(T) <= 2/3 and M(T+1) >= T/(T+1) for T = 16, 256, 65536"))
}

fn c5() -> Result<Outcome, Error> {
    let mut series = 0.0;
    let mut p = 1.0;
    for n in 1..200 {
        p *= 3.0;
        series += n as f64 / (2.0 * p);
    }
    let t = 2.0 * 3f64.powi(8);
    let m = Signal::dyadic(DyadicKind::UnboundedMeanSeries).integrate(0.0, t, 1e-10)?.value / t;
    let pass = (series - 0.375).abs() <= f64::EPSILON && (m - 0.375).abs() <= 0.02;
    Ok(Outcome::new(pass, format!("M_T {m:.6} at T = {t}, series sum {series:.17}"), "3/8 +- 0.02, series 3/8"))
}

fn c6() -> Result<Outcome, Error> {
    let mut rng = rng(6);
    let ts: Vec<f64> = (0..1000).map(|_| rng.gen_range(-100.0..100.0)).collect();
    let cases = [
        ("ex4_3", ex4_3_model(), 1.0),
        ("2+cos t", FiringModel::pi(Signal::trig(vec![(0.0, 2.0, 0.0), (0.0, 1.0, 1.0)])?), 1.0),
    ];
    let mut pass = true;
    let mut seen = Vec::new();
    for (name, model, varsigma) in cases {
        let mut bad = 0;
        let mut top = 0.0f64;
        for &t in &ts {
            let psi = displacement(&model, t, &cfg())?;
            top = top.max(psi);
            if !(psi > 0.0 && psi <= 1.0 / varsigma + 1e-6) {
                bad += 1;
            }
        }
        pass &= bad == 0;
        seen.push(format!("{name}: max psi {top:.6}, {bad}/1000 over"));
    }
    Ok(Outcome::new(pass, seen.join("; "), "0 < psi <= 1/varsigma + 1e-6 with varsigma = 1"))
}

fn c7() -> Result<Outcome, Error> {
    let m = ex4_3_model();
    let mut rng = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t: f64 = rng.gen_range(-100.0..100.0);
        worst = worst.max((fire(&m, t + 2.0, &cfg())? - fire(&m, t, &cfg())? - 2.0).abs());
    }
    Ok(Outcome::new(worst <= 1e-8, format!("max deviation {worst:.3e}"), "<= 1e-8"))
}

fn c8() -> Result<Outcome, Error> {
    let f = Signal::dyadic(DyadicKind::MuNoMu);
    let mut notes = Vec::new();
    let mut pass = true;

    let mut worst = 0.0f64;
    for z in (1..=10).flat_map(|i| [2 * i, -2 * i]) {
        let v = f.integrate(z as f64, z as f64 + 0.5, 1e-10)?.value;
        worst = worst.max((v - 1.0).abs());
    }
    pass &= worst <= 1e-9;
    notes.push(format!("half-cell integrals off by {worst:.2e}"));

    let mut rng = rng(8);
    let mut ratio = 0.0f64;
    let edge = 2f64.powi(20);
    for _ in 0..10_000 {
        let u: f64 = rng.gen_range(-edge..edge);
        for m in 2..=12 {
            let v = f.integrate(u, u + 2f64.powi(1 - m), 1e-10)?.value;
            ratio = ratio.max(v / 2f64.powf(3.0 - m as f64 / 2.0));
        }
    }
    pass &= ratio <= 1.0;
    notes.push(format!("window integral / bound at most {ratio:.4}"));

    let m = FiringModel::pi(f);
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let t = -0.25 + 0.0025 * i as f64;
        worst = worst.max((displacement(&m, t, &cfg())? - 1.0).abs());
    }
    pass &= worst <= 1e-8;
    notes.push(format!("psi on [-1/4,0] off by {worst:.2e}"));

    let grid = 400;
    let base: Vec<f64> =
        (0..grid).map(|i| displacement(&m, -1.0 + (i as f64 + 0.5) / grid as f64, &cfg())).collect::<Result<_, _>>()?;
    let mut least = f64::INFINITY;
    for tau in [1.0, 2.0, 4.0, 8.0] {
        let mut hits = 0;
        for (i, psi) in base.iter().enumerate() {
            let t = -1.0 + (i as f64 + 0.5) / grid as f64;
            if (displacement(&m, t + tau, &cfg())? - psi).abs() >= 0.25 {
                hits += 1;
            }
        }
        least = least.min(hits as f64 / grid as f64);
    }
    pass &= least >= 0.25 - 0.02;
    notes.push(format!("witness measure at least {least:.4}"));

    Ok(Outcome::new(
        pass,
        notes.join("; "),
        "half-cell integral 1 +- 1e-9, ratio <= 1, psi = 1 +- 1e-8, witness measure >= 0.23",
    ))
}

fn c9() -> Result<Outcome, Error> {
    let m = FiringModel::pi(Signal::dyadic(DyadicKind::AlternatingOffsets));
    let mut pass = true;
    let mut seen = Vec::new();
    for n in 3..=5u32 {
        // A_n = 2ⁿℤ + ((−2)ⁿ⁻¹ − 1)/3
        let z = ((-2i64).pow(n - 1) - 1) / 3;
        let gap = 1.0 / (n as f64 + 1.0);
        let jump = (fire(&m, z as f64 + 1.0 - gap, &cfg())? - fire(&m, z as f64 + 1.0, &cfg())?).abs();
        pass &= jump >= 0.5 - 1e-6 && DyadicKind::AlternatingOffsets.cell_index(z) >= n;
        seen.push(format!("n={n} z={z}: |dPhi| {jump:.6} over gap {gap:.4}"));
    }
    Ok(Outcome::new(pass, seen.join("; "), "|dPhi| >= 1/2 - 1e-6"))
}

fn c10() -> Result<Outcome, Error> {
    let f = presets::ex4_3();
    let ns: Vec<u32> = (0..=8).map(|i| 1 << i).collect();
    let mut errors = Vec::new();
    let mut modulus = true;
    for &n in &ns {
        errors.push(projection_error(&f, n, 1.0, -8, 8, 1e-10)?);
        modulus &= modulus_bound_check(&f, n, 1.0, -8, 8, 1e-10)?.holds;
    }
    let constant = projection_error(&Signal::constant(3.5), 8, 1.0, -8, 8, 1e-10)?;
    let (first, last) = (errors[0], errors[errors.len() - 1]);
    let pass = last <= first / 5.0 && modulus && constant == 0.0;
    Ok(Outcome::new(
        pass,
        format!("error {first:.3e} at n=1, {last:.3e} at n=256, modulus holds: {modulus}, constant error {constant:e}"),
        "final <= initial/5, modulus holds, constant error 0",
    ))
}

fn c11() -> Result<Outcome, Error> {
    let f = presets::ex4_3();
    let bound = 2.0 * f.integrate_map(0.0, 2.0, 1e-12, &|v| v.abs())?.value;
    let r = antiderivative_residual(&f, 1.5, Window::new(-50.0, 50.0)?, 10_001)?.value;
    let sin = Signal::trig(vec![(1.0, 0.0, 1.0)])?;
    let rs = antiderivative_residual(&sin, 0.0, Window::new(-50.0, 50.0)?, 100_001)?.value;
    Ok(Outcome::new(
        r <= bound && (rs - 2.0).abs() <= 1e-6,
        format!("ex4_3 residual {r:.6} (bound {bound}), sin residual {rs:.9}"),
        "ex4_3 <= 6, sin 2 +- 1e-6",
    ))
}

fn c12() -> Result<Outcome, Error> {
    let mut rng = rng(12);
    let mut failures = Vec::new();
    let mut runs = 0;
    let mut record = |name: &str, r: props::Check| {
        runs += 1;
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    let models = props::models();
    for _ in 0..50 {
        let (_, model, sup) = &models[rng.gen_range(0..models.len())];
        record("residual", props::residual_bound(model, *sup, rng.gen_range(-50.0..50.0)));
        record("monotone", props::strictly_monotone(model, rng.gen_range(-30.0..30.0), rng.gen_range(1e-6..5.0)));
    }
    for model in &props::periodic_models() {
        for _ in 0..2 {
            record("start point", props::start_point_independence(model, rng.gen_range(-1.0..1.0)));
        }
    }
    for _ in 0..100 {
        record("orthonormal", props::orthonormal(rng.gen_range(-5..5), rng.gen_range(1..64), rng.gen_range(1..64)));
    }
    for f in [presets::ex4_3(), presets::ex6_4(), presets::ex6_13_f(), Signal::dyadic(DyadicKind::MeanlessSeries)] {
        record("idempotent", props::idempotent(&f, rng.gen_range(1..40)));
    }
    let periodic = |rng: &mut StdRng| {
        let len = rng.gen_range(1..6);
        let values: Vec<f64> = (0..len).map(|_| rng.gen_range(-2.0..2.0)).collect();
        props::integer_periodic(rng.gen_range(1..4), &values)
    };
    for _ in 0..50 {
        let (f, g) = (periodic(&mut rng), periodic(&mut rng));
        record("d_measure", props::d_measure_axioms(&f, &g, rng.gen_range(0.1..2.0), rng.gen_range(0.0..2.0)));
        record("sandwich", props::sandwich(&f, &g, rng.gen_range(0.1..2.0)));
    }
    let pass = failures.is_empty();
    let observed = if pass { format!("{runs} cases held") } else { failures.join("; ") };
    Ok(Outcome::new(pass, observed, "every sampled case holds"))
}

fn ex4_3_phi0() -> Result<Outcome, Error> {
    let phi = fire(&ex4_3_model(), 0.0, &cfg())?;
    Ok(Outcome::new((phi - LN_2).abs() <= 1e-9, format!("{phi:.12}"), format!("ln 2 = {LN_2:.12}")))
}

fn ex6_13_spikes() -> Result<Outcome, Error> {
    let f = FiringModel::new(1.0, presets::ex6_13_f())?;
    let tr = trajectory(&f, 0.0, 2, &cfg()).map_err(Error::from)?;
    let pass = (tr.spikes[0] - LN_2).abs() <= 1e-9 && (tr.spikes[1] - 3f64.ln()).abs() <= 1e-9;
    Ok(Outcome::new(pass, format!("{:.12}, {:.12}", tr.spikes[0], tr.spikes[1]), "ln 2, ln 3"))
}

fn const_rate() -> Result<Outcome, Error> {
    let r = firing_rate(&FiringModel::pi(Signal::constant(1.0)), 0.0, 10, &cfg())?.estimate;
    Ok(Outcome::new((r - 1.0).abs() <= 1e-9, format!("{r}"), "1"))
}

fn stepanov_sin() -> Result<Outcome, Error> {
    let sin = Signal::trig(vec![(1.0, 0.0, 1.0)])?;
    let p = NormParams::new(1.0, 2.0 * PI, Window::new(0.0, 1.0)?, 4)?;
    let v = stepanov_norm(&sin, &p)?.value;
    Ok(Outcome::new((v - 2.0 / PI).abs() <= 1e-8, format!("{v:.12}"), format!("2/pi = {:.12}", 2.0 / PI)))
}

fn haar_trig() -> Result<Outcome, Error> {
    let f = Signal::trig(vec![(0.0, 2.0, 0.0), (0.0, 1.0, 1.0)])?;
    let first = projection_error(&f, 1, 1.0, -8, 8, 1e-10)?;
    let last = projection_error(&f, 256, 1.0, -8, 8, 1e-10)?;
    Ok(Outcome::new(last <= first / 5.0, format!("{first:.4e} at n=1, {last:.4e} at n=256"), "final <= initial/5"))
}
