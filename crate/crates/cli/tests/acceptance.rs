//! Acceptance criteria 1 to 12, one PASS/FAIL line each.
//!
//! Criteria 1 to 11 run the corresponding `verify` checks. Criterion 12 runs the
//! seeded sampled suite plus freshly seeded property tests.

use std::process::ExitCode;
use std::time::Instant;

use apfire::props;
use apfire::verify;
use apfire_core::signals::{DyadicKind, Signal};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

fn suite<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> props::Check,
) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, |v| check(v).map_err(TestCaseError::fail)).map(|_| cases).map_err(|e| format!("{name}: {e}"))
}

fn exact_signal() -> impl Strategy<Value = Signal> {
    prop_oneof![
        (-5.0..5.0f64).prop_map(Signal::constant),
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64, 0.0..4.0f64), 1..4).prop_map(|t| Signal::trig(t).unwrap()),
        (0.5..3.0f64, prop::collection::vec(-3.0..3.0f64, 1..5)).prop_map(|(p, v)| {
            let n = v.len() as f64;
            Signal::piecewise_periodic(p, v.iter().enumerate().map(|(i, &x)| (p * i as f64 / n, x)).collect()).unwrap()
        }),
        prop::sample::select(DyadicKind::ALL.to_vec()).prop_map(Signal::dyadic),
    ]
}

fn integer_periodic() -> impl Strategy<Value = Signal> {
    (1u32..4, prop::collection::vec(-2.0..2.0f64, 1..6)).prop_map(|(p, v)| props::integer_periodic(p, &v))
}

fn property_suites() -> Result<u32, String> {
    let models = props::models();
    let n = models.len();
    let mut total = 0;
    total += suite("residual bound", 64, (0..n, -50.0..50.0f64), |(i, t)| {
        props::residual_bound(&models[i].1, models[i].2, t)
    })?;
    total += suite("strict monotonicity", 64, (0..n, -30.0..30.0f64, 1e-6..5.0f64), |(i, t, gap)| {
        props::strictly_monotone(&models[i].1, t, gap)
    })?;
    let periodic = props::periodic_models();
    total += suite("start-point independence", 6, (0..periodic.len(), -1.0..1.0f64), |(i, t0)| {
        props::start_point_independence(&periodic[i], t0)
    })?;
    total += suite("orthonormality", 256, (-5i64..5, 1u32..64, 1u32..64), |(k, a, b)| props::orthonormal(k, a, b))?;
    total += suite("idempotence", 24, (exact_signal(), 1u32..40), |(f, m)| props::idempotent(&f, m))?;
    total += suite(
        "d_measure axioms",
        64,
        (integer_periodic(), integer_periodic(), 0.1..2.0f64, 0.0..2.0f64),
        |(f, g, eta, extra)| props::d_measure_axioms(&f, &g, eta, extra),
    )?;
    total += suite("sandwich", 64, (integer_periodic(), integer_periodic(), 0.1..2.0f64), |(f, g, eta)| {
        props::sandwich(&f, &g, eta)
    })?;
    Ok(total)
}

fn main() -> ExitCode {
    let mut failed = 0;
    for (n, id) in ["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10", "c11", "c12"].iter().enumerate() {
        let check = verify::find(id).expect("known check");
        let mut report = verify::run(check);
        if *id == "c12" {
            let start = Instant::now();
            match property_suites() {
                Ok(cases) => report.observed.push_str(&format!(", {cases} property cases held")),
                Err(e) => {
                    report.pass = false;
                    report.observed.push_str(&format!(", property failure: {e}"));
                }
            }
            report.seconds += start.elapsed().as_secs_f64();
        }
        println!("criterion {:>2} {} [{}]", n + 1, report.line(), check.title);
        failed += usize::from(!report.pass);
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
