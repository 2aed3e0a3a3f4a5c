//! The worked examples as ready-made models.

use alloc::vec;

use crate::math::{ln, sqrt};
use crate::signals::{DyadicKind, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub alias: Option<&'static str>,
    pub description: &'static str,
}

pub const PRESETS: [Preset; 8] = [
    Preset {
        name: "ex4_3",
        alias: None,
        description: "2-periodic input equal to 2 on [2k,2k+1) and 1 on [2k+1,2k+2); sigma 1",
    },
    Preset { name: "ex3_3", alias: None, description: "continuous tent series without a mean value" },
    Preset { name: "ex3_4", alias: None, description: "series with mean 3/8 that is not S^1-bounded" },
    Preset {
        name: "ex4_12",
        alias: Some("mu_no_mu"),
        description: "1 + comb series; PI displacement not mu-almost periodic",
    },
    Preset {
        name: "ex4_13",
        alias: None,
        description: "2 + spikes at alternating offsets; displacement not uniformly continuous",
    },
    Preset { name: "ex6_4", alias: None, description: "2 + cos t + cos(sqrt2 t); PI firing rate 2" },
    Preset { name: "ex6_13_f", alias: None, description: "ln3-periodic input 2 then 3; sigma 1" },
    Preset {
        name: "ex6_13_g",
        alias: None,
        description: "constant 3 - log_3 2 with the same mean as ex6_13_f; sigma 1",
    },
];

pub fn find(name: &str) -> Option<Preset> {
    PRESETS.iter().copied().find(|p| p.name == name || p.alias == Some(name))
}

/// Leak rate the example is stated with.
pub fn sigma(name: &str) -> Option<f64> {
    let p = find(name)?;
    Some(match p.name {
        "ex4_3" | "ex6_13_f" | "ex6_13_g" => 1.0,
        _ => 0.0,
    })
}

pub fn signal(name: &str) -> Option<Signal> {
    let p = find(name)?;
    Some(match p.name {
        "ex4_3" => ex4_3(),
        "ex3_3" => Signal::dyadic(DyadicKind::MeanlessSeries),
        "ex3_4" => Signal::dyadic(DyadicKind::UnboundedMeanSeries),
        "ex4_12" => Signal::dyadic(DyadicKind::MuNoMu),
        "ex4_13" => Signal::dyadic(DyadicKind::AlternatingOffsets),
        "ex6_4" => ex6_4(),
        "ex6_13_f" => ex6_13_f(),
        "ex6_13_g" => ex6_13_g(),
        _ => return None,
    })
}

pub fn ex4_3() -> Signal {
    Signal::piecewise_periodic(2.0, vec![(0.0, 2.0), (1.0, 1.0)]).expect("valid pieces")
}

pub fn ex6_4() -> Signal {
    Signal::trig(vec![(0.0, 2.0, 0.0), (0.0, 1.0, 1.0), (0.0, 1.0, sqrt(2.0))]).expect("finite terms")
}

pub fn ex6_13_f() -> Signal {
    Signal::piecewise_periodic(ln(3.0), vec![(0.0, 2.0), (ln(2.0), 3.0)]).expect("valid pieces")
}

pub fn ex6_13_g() -> Signal {
    Signal::constant(3.0 - ln(2.0) / ln(3.0))
}

/// Closed-form firing map of [`ex4_3`] with `σ = 1`.
pub fn ex4_3_phi(t: f64) -> f64 {
    use crate::math::{exp, floor, ln_1p};
    let base = 2.0 * floor(t / 2.0);
    let ln2 = ln(2.0);
    if t <= base + 1.0 - ln2 {
        // ln(2e^t)
        t + ln2
    } else if t < base + 1.0 {
        // ln(2e^t + e^{2k+2} − e^{2k+1})
        t + ln(2.0 + exp(base + 2.0 - t) - exp(base + 1.0 - t))
    } else {
        // ln(e^t + e^{2k+2})
        t + ln_1p(exp(base + 2.0 - t))
    }
}
