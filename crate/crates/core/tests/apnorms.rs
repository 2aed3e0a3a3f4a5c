use apfire_core::apnorms::{
    antiderivative_residual, d_measure, f_norm_prime, mean_value, scan_periods, stepanov_norm, truncate, MeanOptions,
    MeanVerdict, NormParams, ScanMode, ScanParams,
};
use apfire_core::presets;
use apfire_core::signals::{DyadicKind, Signal, Window};

fn w(a: f64, b: f64) -> Window {
    Window::new(a, b).unwrap()
}

/// Σ n/(2·3ⁿ) summed until the terms vanish in double precision.
fn series_three_eighths() -> f64 {
    let mut s = 0.0;
    let mut p = 1.0;
    for n in 1..200 {
        p *= 3.0;
        s += n as f64 / (2.0 * p);
    }
    s
}

#[test]
fn stepanov_examples() {
    let params = NormParams::new(1.0, 1.0, w(-3.0, 3.0), 4).unwrap();
    assert_eq!(stepanov_norm(&Signal::constant(-2.5), &params).unwrap().value, 2.5);

    let un = Signal::dyadic(DyadicKind::UnboundedMeanSeries);
    for n in 2..=6u32 {
        let z = 3f64.powi(n as i32);
        let p = NormParams::new(1.0, 1.0, w(-z - 1.0, -z + 1.0), 8).unwrap();
        assert!(stepanov_norm(&un, &p).unwrap().value >= n as f64);
    }

    let sin = Signal::trig(vec![(1.0, 0.0, 1.0)]).unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    let p = NormParams::new(1.0, two_pi, w(0.0, 1.0), 4).unwrap();
    let v = stepanov_norm(&sin, &p).unwrap().value;
    assert!((v - 2.0 / std::f64::consts::PI).abs() < 1e-8, "{v}");
}

#[test]
fn d_measure_examples() {
    let f = presets::ex4_3();
    assert_eq!(d_measure(&f, &f, 0.1, w(-2.0, 2.0), 41).unwrap().value, 0.0);
    let one = Signal::constant(1.0);
    let zero = Signal::constant(0.0);
    assert_eq!(d_measure(&one, &zero, 0.5, w(0.0, 3.0), 7).unwrap().value, 1.0);

    // partial sums g_k of the comb series: D(η; f, g_k) ≤ 2ε once 2^{−(k+1)} < ε
    let mu = Signal::dyadic(DyadicKind::MuNoMu);
    for k in [3u32, 5, 7] {
        let eps = 2f64.powi(-(k as i32 + 1)) * 1.01;
        let gk = Signal::dyadic_partial(DyadicKind::MuNoMu, k);
        let d = d_measure(&mu, &gk, 0.5, w(-64.0, 64.0), 513).unwrap();
        assert!(d.samples.is_none());
        assert!(d.value <= 2.0 * eps, "k={k}: {}", d.value);
    }
}

#[test]
fn f_norm_examples() {
    let win = w(-1.0, 1.0);
    assert_eq!(f_norm_prime(&Signal::constant(0.0), win, 5).unwrap().value, 0.0);
    assert_eq!(f_norm_prime(&Signal::constant(1.0), win, 5).unwrap().value, 0.5);
    assert!(f_norm_prime(&Signal::constant(1e12), win, 5).unwrap().value < 1.0);
}

#[test]
fn scan_examples() {
    let f = presets::ex4_3();
    let params = ScanParams { window: w(-4.0, 4.0), samples_per_unit: 50 };
    let s = scan_periods(&f, ScanMode::Uniform, 0.1, &[0.0, 2.0, 4.0, 6.0], &params).unwrap();
    assert!(s.entries.iter().all(|e| e.deviation == 0.0 && e.accepted));
    assert_eq!(s.max_gap, 2.0);
    let s = scan_periods(&f, ScanMode::Mu { eta: 0.5 }, 0.0001, &[2.0, 4.0, 6.0, 1.0], &params).unwrap();
    assert_eq!(s.accepted().count(), 3);
}

#[test]
fn scan_two_frequency_trig() {
    // dense numpy oracle: t-step 0.005 on [0, 100]
    let f = Signal::trig(vec![(0.0, 1.0, 1.0), (0.0, 1.0, 2f64.sqrt())]).unwrap();
    let params = ScanParams { window: w(0.0, 100.0), samples_per_unit: 200 };
    let taus: Vec<f64> = (1..=500).map(f64::from).collect();
    let strict = scan_periods(&f, ScanMode::Uniform, 0.1, &taus, &params).unwrap();
    assert_eq!(strict.accepted().count(), 0);
    assert_eq!(strict.max_gap, f64::INFINITY);
    let loose = scan_periods(&f, ScanMode::Uniform, 0.5, &taus, &params).unwrap();
    let acc: Vec<f64> = loose.accepted().map(|e| e.tau).collect();
    assert_eq!(acc, vec![151.0, 182.0, 289.0, 333.0, 440.0, 471.0]);
    assert_eq!(loose.max_gap, 107.0);
    let d151 = loose.entries[150].deviation;
    assert!((d151 - 0.2852).abs() < 2e-3, "{d151}");
}

#[test]
fn mean_examples() {
    let c = mean_value(&Signal::constant(2.5), &[1.0, 10.0, 100.0], MeanOptions::default()).unwrap();
    assert!(c.partials.iter().all(|p| p.1 == 2.5));
    assert!(matches!(c.verdict, MeanVerdict::Converged { limit, .. } if limit == 2.5));

    let three_eighths = series_three_eighths();
    assert!((three_eighths - 0.375).abs() < 1e-15);
    let un = Signal::dyadic(DyadicKind::UnboundedMeanSeries);
    let base = 2.0 * 3f64.powi(7);
    let e = mean_value(&un, &[base, 2.0 * base, 3.0 * base], MeanOptions::default()).unwrap();
    match e.verdict {
        MeanVerdict::Converged { limit, .. } => assert!((limit - three_eighths).abs() < 1e-3, "{limit}"),
        v => panic!("{v:?}"),
    }

    let meanless = Signal::dyadic(DyadicKind::MeanlessSeries);
    let mut sched = Vec::new();
    for n in 2..=4 {
        let t = 2f64.powi(1 << n);
        sched.extend([t, t + 1.0]);
    }
    let e = mean_value(&meanless, &sched, MeanOptions::default()).unwrap();
    for pair in e.partials.chunks(2) {
        let t = pair[0].0;
        assert!(pair[0].1 <= 2.0 / 3.0);
        assert!(pair[1].1 >= t / (t + 1.0));
    }
    assert!(matches!(e.verdict, MeanVerdict::Oscillating { .. }));
}

#[test]
fn mean_is_shift_invariant_for_periodic_inputs() {
    let f = presets::ex4_3();
    for alpha in [0.0, 0.3, -5.0] {
        let t = 1000.0;
        let m = f.integrate(alpha, alpha + t, 1e-10).unwrap().value / t;
        assert!((m - 1.5).abs() < 1e-3);
    }
}

#[test]
fn truncation_examples() {
    let c = truncate(&Signal::constant(5.0), 3.0).unwrap();
    assert_eq!(c.eval(1.0), 3.0);
    let f = presets::ex6_4();
    let g = truncate(&f, 4.0).unwrap();
    for i in 0..100 {
        let t = i as f64 * 0.37;
        assert_eq!(g.eval(t), f.eval(t));
    }
    let un = Signal::dyadic(DyadicKind::UnboundedMeanSeries);
    let t = 2.0 * 3f64.powi(8);
    let means: Vec<f64> = [1.0, 4.0, 16.0]
        .iter()
        .map(|&n| truncate(&un, n).unwrap().integrate(0.0, t, 1e-10).unwrap().value / t)
        .collect();
    assert!(means[0] <= means[1] && means[1] <= means[2], "{means:?}");
}

#[test]
fn antiderivative_examples() {
    let f = presets::ex4_3();
    let r = antiderivative_residual(&f, 1.5, w(-50.0, 50.0), 10_001).unwrap();
    assert!(r.value <= 6.0);
    let c = antiderivative_residual(&Signal::constant(3.0), 3.0, w(-5.0, 5.0), 101).unwrap();
    assert_eq!(c.value, 0.0);
    let sin = Signal::trig(vec![(1.0, 0.0, 1.0)]).unwrap();
    let r = antiderivative_residual(&sin, 0.0, w(-50.0, 50.0), 100_001).unwrap();
    assert!((r.value - 2.0).abs() < 1e-6, "{}", r.value);
}

#[test]
fn zero_mean_probe_on_comb_excess() {
    // f − 1 for the comb series is non-negative and not a.e. zero
    let g = Signal::dyadic(DyadicKind::MuNoMu).minus(&Signal::constant(1.0));
    let mut lowest = f64::INFINITY;
    for n in 1..=64 {
        let t = 2.0 * n as f64;
        let m = g.integrate(0.0, t, 1e-10).unwrap().value / t;
        lowest = lowest.min(m);
    }
    assert!(lowest > 0.0);
}

#[test]
fn truncated_means_approach_the_mean() {
    let un = Signal::dyadic(DyadicKind::UnboundedMeanSeries);
    let t = 2.0 * 3f64.powi(8);
    let full = un.integrate(0.0, t, 1e-10).unwrap().value / t;
    let diffs: Vec<f64> = [4.0, 16.0, 100.0]
        .iter()
        .map(|&n| (full - un.truncate(n).integrate(0.0, t, 1e-10).unwrap().value / t).abs())
        .collect();
    assert!(diffs[0] > diffs[1] && diffs[1] > diffs[2], "{diffs:?}");
}
