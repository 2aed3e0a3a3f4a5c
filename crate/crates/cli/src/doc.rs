//! JSON signal documents.
//!
//! A document is a tagged union on `"kind"` that mirrors the signal node kinds:
//!
//! ```json
//! {"kind":"sum","children":[
//!   {"kind":"const","value":2},
//!   {"kind":"shift","tau":0.5,"child":{"kind":"trig","terms":[[0,1,1]]}}
//! ]}
//! ```
//!
//! Command lines also accept `const:<c>`, `preset:<name>` and `@<path>`.

use apfire_core::presets;
use apfire_core::signals::{DyadicKind, Signal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalDoc {
    Const {
        value: f64,
    },
    Trig {
        terms: Vec<[f64; 3]>,
    },
    PiecewisePeriodic {
        period: f64,
        pieces: Vec<[f64; 2]>,
    },
    Dyadic {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_terms: Option<u32>,
    },
    Steps {
        edges: Vec<f64>,
        values: Vec<f64>,
    },
    Sum {
        children: Vec<SignalDoc>,
    },
    Scale {
        c: f64,
        child: Box<SignalDoc>,
    },
    Shift {
        tau: f64,
        child: Box<SignalDoc>,
    },
    Truncate {
        n: f64,
        child: Box<SignalDoc>,
    },
    Preset {
        name: String,
    },
}

pub const DYADIC_NAMES: [(&str, DyadicKind); 4] = [
    ("mu_no_mu", DyadicKind::MuNoMu),
    ("meanless", DyadicKind::MeanlessSeries),
    ("unbounded_mean", DyadicKind::UnboundedMeanSeries),
    ("alternating_offsets", DyadicKind::AlternatingOffsets),
];

pub fn dyadic_kind(name: &str) -> Option<DyadicKind> {
    DYADIC_NAMES.iter().find(|(n, _)| *n == name).map(|&(_, k)| k)
}

impl SignalDoc {
    pub fn build(&self) -> Result<Signal, String> {
        Ok(match self {
            SignalDoc::Const { value } => {
                if !value.is_finite() {
                    return Err("const value must be finite".into());
                }
                Signal::constant(*value)
            }
            SignalDoc::Trig { terms } => {
                Signal::trig(terms.iter().map(|t| (t[0], t[1], t[2])).collect()).map_err(|e| e.to_string())?
            }
            SignalDoc::PiecewisePeriodic { period, pieces } => {
                Signal::piecewise_periodic(*period, pieces.iter().map(|p| (p[0], p[1])).collect())
                    .map_err(|e| e.to_string())?
            }
            SignalDoc::Dyadic { name, max_terms } => {
                let kind = dyadic_kind(name).ok_or_else(|| format!("unknown dyadic series `{name}`"))?;
                match max_terms {
                    Some(n) => Signal::dyadic_partial(kind, *n),
                    None => Signal::dyadic(kind),
                }
            }
            SignalDoc::Steps { edges, values } => {
                Signal::steps(edges.clone(), values.clone()).map_err(|e| e.to_string())?
            }
            SignalDoc::Sum { children } => {
                Signal::sum(children.iter().map(SignalDoc::build).collect::<Result<_, _>>()?)
            }
            SignalDoc::Scale { c, child } => child.build()?.scale(finite(*c, "scale factor")?),
            SignalDoc::Shift { tau, child } => child.build()?.shift(finite(*tau, "shift")?),
            SignalDoc::Truncate { n, child } => {
                if !(*n > 0.0) {
                    return Err("truncation level must be positive".into());
                }
                child.build()?.truncate(*n)
            }
            SignalDoc::Preset { name } => presets::signal(name).ok_or_else(|| format!("unknown preset `{name}`"))?,
        })
    }

    /// Parses a command-line signal argument.
    pub fn parse_arg(arg: &str) -> Result<SignalDoc, String> {
        if let Some(c) = arg.strip_prefix("const:") {
            let value = c.trim().parse().map_err(|_| format!("bad constant `{c}`"))?;
            return Ok(SignalDoc::Const { value });
        }
        if let Some(name) = arg.strip_prefix("preset:") {
            return Ok(SignalDoc::Preset { name: name.to_string() });
        }
        let text = match arg.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
            None => arg.to_string(),
        };
        serde_json::from_str(&text).map_err(|e| format!("signal document: {e}"))
    }
}

fn finite(x: f64, what: &str) -> Result<f64, String> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{what} must be finite"))
    }
}
