use std::io::Write;
use std::path::PathBuf;

use apfire_core::apnorms::{self, MeanOptions, MeanVerdict, ScanMode, ScanParams};
use apfire_core::firing::{self, FiringModel, SolveConfig};
use apfire_core::haar;
use apfire_core::presets;
use apfire_core::signals::{Signal, Window};
use apfire_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::doc::SignalDoc;
use crate::output::{num, Cell, Format, Table};
use crate::{schedule, verify};

#[derive(Debug, Parser)]
#[command(name = "apfire", version, about = "Integrate-and-fire models with almost periodic input")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the input signal.
    Eval {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        points: Points,
        #[command(flatten)]
        out: Out,
    },
    /// Firing map and displacement at the given reset times.
    Fire {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        points: Points,
        #[command(flatten)]
        out: Out,
    },
    /// Successive spike times from a start point.
    Traj {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        solver: Solver,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Firing rate n / Φⁿ(t0).
    Rate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        solver: Solver,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long)]
        n: usize,
        /// Emit k / Φᵏ(t0) for every k instead of the final estimate.
        #[arg(long)]
        sequence: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Partial means (1/T)∫_0^T f with a convergence verdict.
    Mean {
        #[command(flatten)]
        source: Source,
        /// linear:a:b:k, geometric:a:ratio:k, pow2tower:n or a comma list.
        #[arg(long)]
        schedule: String,
        #[arg(long, default_value_t = 3)]
        trailing: usize,
        /// Spread allowed among the trailing partial means.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Deviation of f from its translates over candidate periods.
    Scan {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Metric::Uniform)]
        mode: Metric,
        #[arg(long)]
        eps: f64,
        /// Level for the mu metric.
        #[arg(long)]
        eta: Option<f64>,
        /// Exponent for the Stepanov metric.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Candidate periods, in the schedule syntax.
        #[arg(long)]
        taus: String,
        #[arg(long, default_value = "0:10", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 50)]
        samples_per_unit: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Haar projection errors and the modulus check, or the coefficient table.
    Haar {
        #[command(flatten)]
        source: Source,
        /// Comma separated truncation levels.
        #[arg(long, default_value = "1,2,4,8,16")]
        n: String,
        /// Unit cells k0:k1.
        #[arg(long, default_value = "-8:8", allow_hyphen_values = true)]
        cells: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Emit the coefficients at the largest level instead.
        #[arg(long)]
        coeffs: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Run the built-in example and acceptance checks.
    Verify {
        /// Check ids or groups to run.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Uniform,
    Stepanov,
    Mu,
}

#[derive(Debug, Args)]
pub struct Source {
    /// JSON document, const:<c>, preset:<name> or @file.
    #[arg(long, conflicts_with = "preset", allow_hyphen_values = true)]
    signal: Option<String>,
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct Solver {
    /// Leak rate; defaults to the preset's own, else 0.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Bisection tolerance on spike times.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
    #[arg(long, default_value_t = 1e3)]
    horizon: f64,
    /// Lower bound on f − σ; caps the search at 1/varsigma.
    #[arg(long)]
    varsigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Points {
    /// Times, in the schedule syntax.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "window")]
    t: Option<String>,
    /// Sample window a:b.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, default_value_t = 101)]
    points: usize,
}

#[derive(Debug, Args)]
pub struct Out {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// A failed run: exit code and a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HorizonExceeded { .. } => EXIT_SOLVER,
            Error::Quadrature { .. } => EXIT_QUADRATURE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<firing::TrajectoryError> for Failure {
    fn from(e: firing::TrajectoryError) -> Self {
        let mut f = Failure::from(e.cause);
        f.message = format!("spike {}: {}", e.index + 1, f.message);
        f
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        usage(format!("write failed: {e}"))
    }
}

impl Source {
    fn resolve(&self) -> Result<(Signal, Option<f64>), Failure> {
        let doc = match (&self.signal, &self.preset) {
            (Some(s), None) => SignalDoc::parse_arg(s).map_err(usage)?,
            (None, Some(p)) => SignalDoc::Preset { name: p.clone() },
            _ => return Err(usage("give one of --signal or --preset")),
        };
        let sigma = match &doc {
            SignalDoc::Preset { name } => presets::sigma(name),
            _ => None,
        };
        Ok((doc.build().map_err(usage)?, sigma))
    }
}

impl Solver {
    fn model(&self, signal: Signal, preset_sigma: Option<f64>) -> Result<(FiringModel, SolveConfig), Failure> {
        let sigma = self.sigma.or(preset_sigma).unwrap_or(0.0);
        let model = FiringModel::new(sigma, signal)?;
        let cfg = SolveConfig {
            step: self.step,
            time_tol: self.tol,
            horizon: self.horizon,
            varsigma: self.varsigma,
            quad_tol: self.quad_tol,
        };
        cfg.validate()?;
        Ok((model, cfg))
    }
}

impl Points {
    fn times(&self) -> Result<Vec<f64>, Failure> {
        match (&self.t, &self.window) {
            (Some(t), _) => schedule::parse(t).map_err(usage),
            (None, Some(w)) => {
                let w = window(w)?;
                if self.points < 2 {
                    return Err(usage("--points must be at least 2"));
                }
                Ok(w.grid(self.points).collect())
            }
            (None, None) => Err(usage("give --t or --window")),
        }
    }
}

fn window(spec: &str) -> Result<Window, Failure> {
    let (a, b) = schedule::pair(spec).map_err(usage)?;
    Window::new(a, b).map_err(|e| usage(e.to_string()))
}

/// Output sinks: the main stream and the diagnostics stream.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

fn emit(table: &Table, out: &Out, io: &mut Io) -> Result<(), Failure> {
    match &out.output {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            table.write(out.format, &mut file, io.err)?;
        }
        None => table.write(out.format, io.out, io.err)?,
    }
    Ok(())
}

pub fn execute(cli: Cli, io: &mut Io) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { source, points, out } => {
            let (f, _) = source.resolve()?;
            let mut table = Table::new(&["t", "value"]);
            for t in points.times()? {
                table.push(vec![Cell::Num(t), Cell::Num(f.eval(t))]);
            }
            emit(&table, &out, io)
        }
        Command::Fire { source, solver, points, out } => {
            let (f, sigma) = source.resolve()?;
            let (model, cfg) = solver.model(f, sigma)?;
            let ts = points.times()?;
            let fired: Vec<_> = ts.par_iter().map(|&t| firing::fire_detailed(&model, t, &cfg)).collect();
            let mut table = Table::new(&["t", "phi", "psi", "residual_bound"]);
            for (&t, r) in ts.iter().zip(fired) {
                let r = r.map_err(|e| Failure { message: format!("t = {t}: {e}"), ..Failure::from(e) })?;
                table.push(vec![Cell::Num(t), Cell::Num(r.time), Cell::Num(r.time - t), Cell::Num(r.residual_bound)]);
            }
            table.note("sigma", num(model.sigma));
            emit(&table, &out, io)
        }
        Command::Traj { source, solver, t0, n, out } => {
            let (f, sigma) = source.resolve()?;
            let (model, cfg) = solver.model(f, sigma)?;
            let tr = firing::trajectory(&model, t0, n, &cfg)?;
            let mut table = Table::new(&["k", "spike", "residual_bound"]);
            for (k, (s, r)) in tr.spikes.iter().zip(&tr.residual_bounds).enumerate() {
                table.push(vec![Cell::Int(k as i64 + 1), Cell::Num(*s), Cell::Num(*r)]);
            }
            table.note("t0", num(t0));
            table.note("sigma", num(model.sigma));
            emit(&table, &out, io)
        }
        Command::Rate { source, solver, t0, n, sequence, out } => {
            let (f, sigma) = source.resolve()?;
            let (model, cfg) = solver.model(f, sigma)?;
            let r = firing::firing_rate(&model, t0, n, &cfg)?;
            let table = if sequence {
                let mut table = Table::new(&["k", "rate"]);
                for (k, v) in r.sequence.iter().enumerate() {
                    table.push(vec![Cell::Int(k as i64 + 1), Cell::Num(*v)]);
                }
                table
            } else {
                let mut table = Table::new(&["n", "rate", "error_budget"]);
                table.push(vec![Cell::Int(n as i64), Cell::Num(r.estimate), Cell::Num(r.error_budget)]);
                table
            };
            emit(&table, &out, io)
        }
        Command::Mean { source, schedule: spec, trailing, eps, quad_tol, out } => {
            let (f, _) = source.resolve()?;
            let sched = schedule::parse(&spec).map_err(usage)?;
            let e = apnorms::mean_value(&f, &sched, MeanOptions { trailing, tol: eps, quad_tol })?;
            let mut table = Table::new(&["T", "mean"]);
            for (t, m) in &e.partials {
                table.push(vec![Cell::Num(*t), Cell::Num(*m)]);
            }
            table.note("verdict", verdict_json(&e.verdict));
            emit(&table, &out, io)
        }
        Command::Scan { source, mode, eps, eta, p, taus, window: w, samples_per_unit, out } => {
            let (f, _) = source.resolve()?;
            let mode = match (mode, eta) {
                (Metric::Uniform, _) => ScanMode::Uniform,
                (Metric::Stepanov, _) => ScanMode::Stepanov { p },
                (Metric::Mu, Some(eta)) => ScanMode::Mu { eta },
                (Metric::Mu, None) => return Err(usage("--mode mu needs --eta")),
            };
            let taus = schedule::parse(&taus).map_err(usage)?;
            let params = ScanParams { window: window(&w)?, samples_per_unit };
            let devs: Vec<f64> =
                taus.par_iter().map(|&tau| apnorms::deviation(&f, mode, tau, &params)).collect::<Result<_, _>>()?;
            let scan = apnorms::AlmostPeriodScan::from_deviations(mode, eps, &taus, &devs);
            let mut table = Table::new(&["tau", "deviation", "accepted"]);
            for e in &scan.entries {
                table.push(vec![Cell::Num(e.tau), Cell::Num(e.deviation), Cell::Bool(e.accepted)]);
            }
            table.note("accepted", json!(scan.accepted().count()));
            table.note("max_gap", num(scan.max_gap));
            emit(&table, &out, io)
        }
        Command::Haar { source, n, cells, p, tol, coeffs, out } => {
            let (f, _) = source.resolve()?;
            let (k0, k1) = schedule::pair(&cells).map_err(usage)?;
            if k0.fract() != 0.0 || k1.fract() != 0.0 || k0 > k1 {
                return Err(usage("--cells takes integers k0:k1 with k0 <= k1"));
            }
            let (k0, k1) = (k0 as i64, k1 as i64);
            let levels: Vec<u32> = n
                .split(',')
                .map(|s| s.trim().parse::<u32>().ok().filter(|&v| v >= 1))
                .collect::<Option<_>>()
                .ok_or_else(|| usage(format!("bad level list `{n}`")))?;
            let table = if coeffs {
                let top = *levels.iter().max().expect("non-empty");
                let c = haar::coefficients(&f, k0, k1, top, tol)?;
                let mut table = Table::new(&["k", "j", "coeff"]);
                for k in k0..=k1 {
                    for j in 1..=top {
                        table.push(vec![Cell::Int(k), Cell::Int(j as i64), Cell::Num(c.get(k, j).unwrap_or(f64::NAN))]);
                    }
                }
                table
            } else {
                let rows: Vec<_> = levels
                    .par_iter()
                    .map(|&n| -> Result<_, Error> {
                        let e = haar::projection_error(&f, n, p, k0, k1, tol)?;
                        let m = haar::modulus_bound_check(&f, n, p, k0, k1, tol)?;
                        Ok((n, e, m))
                    })
                    .collect::<Result<_, _>>()?;
                let mut table = Table::new(&["n", "error", "modulus_lhs", "modulus_rhs", "modulus_holds"]);
                for (n, e, m) in rows {
                    table.push(vec![
                        Cell::Int(n as i64),
                        Cell::Num(e),
                        Cell::Num(m.lhs),
                        Cell::Num(m.rhs),
                        Cell::Bool(m.holds),
                    ]);
                }
                table
            };
            emit(&table, &out, io)
        }
        Command::Verify { only, list } => {
            let chosen = verify::select(&only);
            if chosen.is_empty() {
                return Err(usage(format!("no check matches {only:?}")));
            }
            if list {
                for c in chosen {
                    writeln!(io.out, "{}\t{}\t{}", c.id, c.group, c.title)?;
                }
                return Ok(());
            }
            let mut failed = 0;
            for c in &chosen {
                let r = verify::run(c);
                writeln!(io.out, "{}", r.line())?;
                failed += usize::from(!r.pass);
            }
            if failed > 0 {
                return Err(Failure {
                    code: EXIT_VERIFY,
                    message: format!("{failed} of {} checks failed", chosen.len()),
                });
            }
            Ok(())
        }
    }
}

fn verdict_json(v: &MeanVerdict) -> Value {
    match *v {
        MeanVerdict::Converged { limit, tol } => json!({"kind": "converged", "limit": num(limit), "tol": num(tol)}),
        MeanVerdict::Oscillating { t1, m1, t2, m2 } => {
            json!({"kind": "oscillating", "t1": num(t1), "m1": num(m1), "t2": num(t2), "m2": num(m2)})
        }
        MeanVerdict::Inconclusive => json!({"kind": "inconclusive"}),
    }
}
