use apfire_core::presets;
use apfire_core::signals::{active_terms, DyadicKind, Signal, Window};

const TOL: f64 = 1e-10;

fn riemann(f: &Signal, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f.eval(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

#[test]
fn eval_examples() {
    let f = Signal::piecewise_periodic(2.0, vec![(0.0, 2.0), (1.0, 1.0)]).unwrap();
    assert_eq!(f.eval(0.5), 2.0);
    assert_eq!(Signal::constant(3.0).eval(17.2), 3.0);
    assert_eq!(Signal::dyadic(DyadicKind::MuNoMu).eval(0.3), 1.0);
}

#[test]
fn integrate_examples() {
    let c = Signal::constant(2.5).integrate(-1.0, 3.0, TOL).unwrap();
    assert_eq!((c.value, c.err_bound), (10.0, 0.0));

    let mu = Signal::dyadic(DyadicKind::MuNoMu);
    for z in [-6i64, -4, -2, 2, 4, 6, 8, 12, 64, 1 << 20] {
        let i = mu.integrate(z as f64, z as f64 + 0.5, TOL).unwrap();
        assert!((i.value - 1.0).abs() < 1e-12, "z={z}: {}", i.value);
    }
    for z in [-3i64, 1, 5] {
        let i = mu.integrate(z as f64, z as f64 + 0.5, TOL).unwrap();
        assert!(i.value >= 1.0);
    }

    let un = Signal::dyadic(DyadicKind::UnboundedMeanSeries);
    for n in 1..=6u32 {
        let z = 3i64.pow(n);
        let i = un.integrate(z as f64, z as f64 + 1.0, TOL).unwrap();
        assert!(i.value >= n as f64);
    }
}

#[test]
fn weighted_examples() {
    let f = presets::ex4_3();
    let v = f.integrate_weighted(1.0, 0.0, core::f64::consts::LN_2, TOL).unwrap();
    assert!((v.value - 1.0).abs() < 1e-14);
    let any = presets::ex6_4();
    assert_eq!(any.integrate_weighted(0.0, 1.3, 1.3, TOL).unwrap().value, 0.0);
    let two = Signal::constant(2.0).integrate_weighted(1.0, 0.0, 1.0, TOL).unwrap();
    assert!((two.value - (std::f64::consts::E - 1.0)).abs() < 1e-14);
}

#[test]
fn weighted_trig_matches_quadrature() {
    let f = Signal::trig(vec![(0.7, -1.1, 2.3), (0.0, 0.5, 0.0), (1.0, 0.0, 0.4)]).unwrap();
    let g = {
        let f = f.clone();
        Signal::func("copy", move |t| f.eval(t))
    };
    for (sigma, t, s) in [(0.0, 0.0, 5.0), (1.3, -2.0, 4.0), (0.2, 10.0, 10.5)] {
        let exact = f.integrate_weighted(sigma, t, s, TOL).unwrap();
        let quad = g.integrate_weighted(sigma, t, s, 1e-12).unwrap();
        assert_eq!(exact.err_bound, 0.0);
        assert!((exact.value - quad.value).abs() < 1e-9, "{sigma} {t} {s}");
    }
}

#[test]
fn active_terms_examples() {
    assert_eq!(active_terms(DyadicKind::MuNoMu, Window::new(-1.0, 1.0).unwrap()), 2);
    assert_eq!(active_terms(DyadicKind::MuNoMu, Window::new(0.01, 0.02).unwrap()), 0);
    // brute force over A_n = 2·3ⁿℤ − 3ⁿ, n ≤ 20, for cells meeting [0, 10]
    let mut expect = 0;
    for n in 1..=20u32 {
        let p = 3i64.pow(n);
        for z in -1i64..=10 {
            if (z + p).rem_euclid(2 * p) == 0 {
                expect = expect.max(n);
            }
        }
    }
    assert_eq!(active_terms(DyadicKind::UnboundedMeanSeries, Window::new(0.0, 10.0).unwrap()), expect);
}

#[test]
fn shift_sum_scale_examples() {
    let s = Signal::trig(vec![(1.0, 0.0, 1.0)]).unwrap().shift(std::f64::consts::PI);
    assert!(s.eval(0.0).abs() < 1e-15);
    let f = presets::ex4_3();
    let g = f.shift(2.0);
    for i in 0..200 {
        let t = -7.0 + i as f64 * 0.0731;
        assert_eq!(g.eval(t), f.eval(t));
    }
    let sum = Signal::sum(vec![
        Signal::constant(2.0),
        Signal::trig(vec![(0.0, 1.0, 1.0)]).unwrap(),
        Signal::trig(vec![(0.0, 1.0, 2f64.sqrt())]).unwrap(),
    ]);
    assert_eq!(sum.eval(0.0), 4.0);
}

#[test]
fn exact_nodes_agree_with_riemann_sums() {
    let cases: Vec<(Signal, f64, f64)> = vec![
        (presets::ex4_3(), -13.3, 41.9),
        (presets::ex6_13_f(), 0.0, 97.0),
        (presets::ex6_4(), -20.0, 60.0),
        (Signal::dyadic(DyadicKind::MuNoMu), -17.2, 29.9),
        (Signal::dyadic(DyadicKind::MeanlessSeries), 0.0, 40.0),
        (Signal::dyadic(DyadicKind::UnboundedMeanSeries), -30.0, 30.0),
        (Signal::dyadic(DyadicKind::AlternatingOffsets), -12.5, 50.0),
        (presets::ex4_3().shift(0.37).scale(-1.5).plus(&presets::ex6_4()), -5.0, 5.0),
    ];
    for (f, a, b) in cases {
        let i = f.integrate(a, b, TOL).unwrap();
        assert_eq!(i.err_bound, 0.0, "{f:?}");
        // midpoint error is bounded by the number of jumps times jump·h
        let r = riemann(&f, a, b, 4_000_000);
        assert!((i.value - r).abs() < 2e-4 * (b - a), "{f:?}: {} vs {r}", i.value);
    }
}

#[test]
fn meanless_tent_integrals() {
    let f = Signal::dyadic(DyadicKind::MeanlessSeries);
    for (z, n) in [(4.0, 1u32), (16.0, 2), (256.0, 3), (65536.0, 4)] {
        let i = f.integrate(z, z + 1.0, TOL).unwrap().value;
        assert!((i - 2f64.powi(1 << n)).abs() < 1e-9 * i, "{z}");
        let peak = f.eval(z + 0.5);
        assert!((peak - (n as f64 + 1.0) * 2f64.powi(1 << n)).abs() < 1e-6);
    }
}

#[test]
fn truncation_is_exact_on_pieces() {
    let f = Signal::dyadic(DyadicKind::UnboundedMeanSeries);
    let g = f.truncate(4.0);
    assert!(g.is_exact());
    // cell z = 9: boxes n=1 (value 1 on [9,10)) and n=2 (value 4 on [9,9.5))
    let i = g.integrate(9.0, 10.0, TOL).unwrap();
    assert_eq!(i.err_bound, 0.0);
    assert!((i.value - (4.0 * 0.5 + 0.5)).abs() < 1e-15);
}
