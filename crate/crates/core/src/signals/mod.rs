//! Immutable signal expressions with exact integration where a closed form exists.

mod dyadic;
mod term;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math::{abs, cos, exp, exp_geometric, exp_integral, floor, sin};
use crate::quad;

pub use dyadic::{active_terms, DyadicKind};

/// Upper bound on the number of breakpoints collected for one window.
pub const BREAK_CAP: usize = 1 << 22;

/// A finite observation interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub a: f64,
    pub b: f64,
}

impl Window {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument("window needs finite a < b"));
        }
        Ok(Window { a, b })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    /// `count` evenly spaced points from `a` to `b` inclusive.
    pub fn grid(&self, count: usize) -> impl Iterator<Item = f64> + '_ {
        let n = count.max(2);
        let h = self.len() / (n - 1) as f64;
        (0..n).map(move |i| if i + 1 == n { self.b } else { self.a + h * i as f64 })
    }
}

/// Result of a definite integral; `err_bound` is 0 for closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Integral {
    pub value: f64,
    pub err_bound: f64,
}

impl Integral {
    pub fn exact(value: f64) -> Self {
        Integral { value, err_bound: 0.0 }
    }

    fn plus(self, o: Integral) -> Self {
        Integral { value: self.value + o.value, err_bound: self.err_bound + o.err_bound }
    }
}

pub type SignalFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct Signal(Arc<Node>);

#[derive(Debug, Clone, Copy, PartialEq)]
struct Segment {
    start: f64,
    end: f64,
    value: f64,
}

enum Node {
    Const(f64),
    Trig(Vec<(f64, f64, f64)>),
    Periodic { period: f64, pieces: Vec<(f64, f64)>, segments: Vec<Segment> },
    Dyadic { kind: DyadicKind, max_terms: u32 },
    Steps { edges: Vec<f64>, values: Vec<f64> },
    Sum(Vec<Signal>),
    Scale(f64, Signal),
    Shift(f64, Signal),
    Truncate(f64, Signal),
    Func(String, Arc<SignalFn>),
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "Const({c})"),
            Node::Trig(t) => write!(f, "Trig({t:?})"),
            Node::Periodic { period, pieces, .. } => write!(f, "Periodic({period}, {pieces:?})"),
            Node::Dyadic { kind, max_terms } if *max_terms == u32::MAX => write!(f, "Dyadic({kind:?})"),
            Node::Dyadic { kind, max_terms } => write!(f, "Dyadic({kind:?}, ≤{max_terms})"),
            Node::Steps { edges, values } => write!(f, "Steps({edges:?}, {values:?})"),
            Node::Sum(c) => f.debug_tuple("Sum").field(c).finish(),
            Node::Scale(c, s) => write!(f, "Scale({c}, {s:?})"),
            Node::Shift(t, s) => write!(f, "Shift({t}, {s:?})"),
            Node::Truncate(n, s) => write!(f, "Truncate({n}, {s:?})"),
            Node::Func(label, _) => write!(f, "Func({label})"),
        }
    }
}

impl Signal {
    fn node(n: Node) -> Self {
        Signal(Arc::new(n))
    }

    pub fn constant(c: f64) -> Self {
        Self::node(Node::Const(c))
    }

    /// `Σ aⱼ·sin(λⱼt) + bⱼ·cos(λⱼt)` from `(a, b, λ)` triples.
    pub fn trig(terms: Vec<(f64, f64, f64)>) -> Result<Self> {
        if terms.iter().any(|&(a, b, l)| !(a.is_finite() && b.is_finite() && l.is_finite())) {
            return Err(Error::InvalidArgument("trig coefficients must be finite"));
        }
        Ok(Self::node(Node::Trig(terms)))
    }

    /// Right-open constant pieces `(breakpoint, value)` repeated with period `ω`.
    /// Phases before the first breakpoint take the last piece's value.
    pub fn piecewise_periodic(period: f64, pieces: Vec<(f64, f64)>) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidArgument("period must be positive"));
        }
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("at least one piece is required"));
        }
        if pieces.iter().any(|&(x, v)| !(x >= 0.0 && x < period && v.is_finite())) {
            return Err(Error::InvalidArgument("breakpoints must lie in [0, period)"));
        }
        if pieces.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidArgument("breakpoints must be strictly increasing"));
        }
        let mut segments = Vec::with_capacity(pieces.len() + 1);
        let last = pieces[pieces.len() - 1].1;
        if pieces[0].0 > 0.0 {
            segments.push(Segment { start: 0.0, end: pieces[0].0, value: last });
        }
        for (i, &(x, v)) in pieces.iter().enumerate() {
            let end = pieces.get(i + 1).map_or(period, |p| p.0);
            segments.push(Segment { start: x, end, value: v });
        }
        Ok(Self::node(Node::Periodic { period, pieces, segments }))
    }

    pub fn dyadic(kind: DyadicKind) -> Self {
        Self::node(Node::Dyadic { kind, max_terms: u32::MAX })
    }

    /// The series with only the terms of index `1..=max_terms`.
    pub fn dyadic_partial(kind: DyadicKind, max_terms: u32) -> Self {
        Self::node(Node::Dyadic { kind, max_terms })
    }

    /// Finite step function: `values[i]` on `[edges[i], edges[i+1])`, zero elsewhere.
    pub fn steps(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if edges.len() != values.len() + 1 {
            return Err(Error::InvalidArgument("steps need one more edge than values"));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) || edges.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("step edges must be finite and increasing"));
        }
        Ok(Self::node(Node::Steps { edges, values }))
    }

    /// Opaque closure; integrated by adaptive quadrature.
    pub fn func(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::node(Node::Func(label.into(), Arc::new(f)))
    }

    pub fn sum(children: Vec<Signal>) -> Self {
        Self::node(Node::Sum(children))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::node(Node::Scale(c, self.clone()))
    }

    /// `t ↦ f(t + τ)`.
    pub fn shift(&self, tau: f64) -> Self {
        Self::node(Node::Shift(tau, self.clone()))
    }

    /// `t ↦ max(−N, min(f(t), N))`.
    pub fn truncate(&self, n: f64) -> Self {
        Self::node(Node::Truncate(n, self.clone()))
    }

    pub fn plus(&self, other: &Signal) -> Self {
        Self::sum(alloc::vec![self.clone(), other.clone()])
    }

    pub fn minus(&self, other: &Signal) -> Self {
        self.plus(&other.scale(-1.0))
    }

    /// The dyadic kind and term budget when this is a bare series node.
    pub fn as_dyadic(&self) -> Option<(DyadicKind, Option<u32>)> {
        match &*self.0 {
            Node::Dyadic { kind, max_terms } => Some((*kind, (*max_terms != u32::MAX).then_some(*max_terms))),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &*self.0 {
            Node::Const(c) => *c,
            Node::Trig(terms) => terms.iter().map(|&(a, b, l)| trig_value(a, b, l, t)).sum(),
            Node::Periodic { period, segments, .. } => {
                let phase = t - period * floor(t / period);
                segment_at(segments, phase).map_or(segments[segments.len() - 1].value, |s| s.value)
            }
            Node::Dyadic { kind, max_terms } => {
                let mut v = kind.baseline();
                dyadic::cell_terms(*kind, floor(t) as i64, *max_terms, &mut |_, term| v += term.eval(t));
                v
            }
            Node::Steps { edges, values } => step_value(edges, values, t),
            Node::Sum(children) => children.iter().map(|c| c.eval(t)).sum(),
            Node::Scale(c, s) => c * s.eval(t),
            Node::Shift(tau, s) => s.eval(t + tau),
            Node::Truncate(n, s) => s.eval(t).clamp(-n, *n),
            Node::Func(_, f) => f(t),
        }
    }

    /// True when the signal is constant between the points reported by
    /// [`Signal::breakpoints`].
    pub fn is_piecewise_constant(&self) -> bool {
        match &*self.0 {
            Node::Const(_) | Node::Periodic { .. } | Node::Steps { .. } => true,
            Node::Trig(terms) => terms.iter().all(|t| t.2 == 0.0),
            Node::Dyadic { kind, .. } => kind.piecewise_constant(),
            Node::Sum(c) => c.iter().all(Signal::is_piecewise_constant),
            Node::Scale(_, s) | Node::Shift(_, s) | Node::Truncate(_, s) => s.is_piecewise_constant(),
            Node::Func(..) => false,
        }
    }

    /// True when integrals are computed in closed form.
    pub fn is_exact(&self) -> bool {
        match &*self.0 {
            Node::Func(..) => false,
            Node::Truncate(_, s) => s.is_piecewise_constant(),
            Node::Sum(c) => c.iter().all(Signal::is_exact),
            Node::Scale(_, s) | Node::Shift(_, s) => s.is_exact(),
            _ => true,
        }
    }

    /// Sorted, deduplicated discontinuities and kinks inside `(a, b)`, or `None`
    /// if there are more than [`BREAK_CAP`].
    pub fn breakpoints(&self, a: f64, b: f64) -> Option<Vec<f64>> {
        let mut out = Vec::new();
        self.collect_breaks(a, b, &mut out);
        if out.len() >= BREAK_CAP {
            return None;
        }
        out.sort_by(|x, y| x.total_cmp(y));
        out.dedup();
        Some(out)
    }

    fn collect_breaks(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        if out.len() >= BREAK_CAP || !(b > a) {
            return;
        }
        match &*self.0 {
            Node::Const(_) | Node::Trig(_) | Node::Func(..) => {}
            Node::Periodic { period, segments, .. } => {
                let mut k = floor(a / period);
                while k * period < b && out.len() < BREAK_CAP {
                    for s in segments {
                        let x = k * period + s.start;
                        if x > a && x < b {
                            out.push(x);
                        }
                    }
                    k += 1.0;
                }
            }
            Node::Dyadic { kind, max_terms } => {
                let hi = floor(b) as i64;
                let mut z = floor(a) as i64;
                while z <= hi && out.len() < BREAK_CAP {
                    dyadic::cell_terms(*kind, z, *max_terms, &mut |_, term| term.breaks(a, b, out, BREAK_CAP));
                    z += 1;
                }
            }
            Node::Steps { edges, .. } => out.extend(edges.iter().copied().filter(|&x| x > a && x < b)),
            Node::Sum(children) => children.iter().for_each(|c| c.collect_breaks(a, b, out)),
            Node::Scale(_, s) | Node::Truncate(_, s) => s.collect_breaks(a, b, out),
            Node::Shift(tau, s) => {
                let start = out.len();
                s.collect_breaks(a + tau, b + tau, out);
                for x in &mut out[start..] {
                    *x -= tau;
                }
            }
        }
    }

    /// `∫_a^b f(u) du`.
    pub fn integrate(&self, a: f64, b: f64, tol: f64) -> Result<Integral> {
        check_interval(a, b, tol)?;
        self.weighted(0.0, 0.0, a, b, tol)
    }

    /// The charge `∫_t^s (f(u) − σ)·e^{σ(u−t)} du`.
    pub fn integrate_weighted(&self, sigma: f64, t: f64, s: f64, tol: f64) -> Result<Integral> {
        check_interval(t, s, tol)?;
        if !(sigma >= 0.0) {
            return Err(Error::InvalidArgument("sigma must be non-negative"));
        }
        let w = self.weighted(sigma, t, t, s, tol)?;
        Ok(Integral { value: w.value - crate::math::expm1(sigma * (s - t)), err_bound: w.err_bound })
    }

    /// `∫_a^b f(u)·e^{σ(u − anchor)} du`. Keep `anchor` near the interval so the
    /// exponent stays moderate.
    pub fn weighted(&self, sigma: f64, anchor: f64, a: f64, b: f64, tol: f64) -> Result<Integral> {
        if !(b > a) {
            return Ok(Integral::default());
        }
        let exact = |v: f64| Ok(Integral::exact(v));
        match &*self.0 {
            Node::Const(c) => exact(c * exp(sigma * (a - anchor)) * exp_integral(sigma, b - a)),
            Node::Trig(terms) => {
                exact(terms.iter().map(|&(ca, cb, l)| trig_wint(ca, cb, l, sigma, anchor, a, b)).sum())
            }
            Node::Periodic { period, segments, .. } => exact(periodic_wint(*period, segments, sigma, anchor, a, b)),
            Node::Dyadic { kind, max_terms } => {
                let mut v = kind.baseline() * exp(sigma * (a - anchor)) * exp_integral(sigma, b - a);
                let hi = crate::math::ceil(b) as i64;
                let mut z = floor(a) as i64;
                while z < hi {
                    let lo_c = (z as f64).max(a);
                    let hi_c = ((z + 1) as f64).min(b);
                    dyadic::cell_terms(*kind, z, *max_terms, &mut |_, term| v += term.wint(sigma, anchor, lo_c, hi_c));
                    z += 1;
                }
                exact(v)
            }
            Node::Steps { edges, values } => {
                let mut v = 0.0;
                for (i, &val) in values.iter().enumerate() {
                    let lo = edges[i].max(a);
                    let hi = edges[i + 1].min(b);
                    if hi > lo {
                        v += val * exp(sigma * (lo - anchor)) * exp_integral(sigma, hi - lo);
                    }
                }
                exact(v)
            }
            Node::Sum(children) => {
                let mut total = Integral::default();
                for c in children {
                    total = total.plus(c.weighted(sigma, anchor, a, b, tol)?);
                }
                Ok(total)
            }
            Node::Scale(c, s) => {
                let i = s.weighted(sigma, anchor, a, b, tol)?;
                Ok(Integral { value: c * i.value, err_bound: abs(*c) * i.err_bound })
            }
            Node::Shift(tau, s) => s.weighted(sigma, anchor + tau, a + tau, b + tau, tol),
            Node::Truncate(n, s) => {
                let n = *n;
                self.map_weighted(sigma, anchor, a, b, tol, &|v| v.clamp(-n, n), s)
            }
            Node::Func(..) => self.quadrature(sigma, anchor, a, b, tol, &|v| v),
        }
    }

    /// Exact piece enumeration when `inner` is piecewise constant, quadrature otherwise.
    fn map_weighted(
        &self,
        sigma: f64,
        anchor: f64,
        a: f64,
        b: f64,
        tol: f64,
        g: &dyn Fn(f64) -> f64,
        inner: &Signal,
    ) -> Result<Integral> {
        if inner.is_piecewise_constant() {
            if let Some(v) = inner.piece_sum(sigma, anchor, a, b, g) {
                return Ok(Integral::exact(v));
            }
        }
        inner.quadrature(sigma, anchor, a, b, tol, g)
    }

    fn piece_sum(&self, sigma: f64, anchor: f64, a: f64, b: f64, g: &dyn Fn(f64) -> f64) -> Option<f64> {
        let breaks = self.breakpoints(a, b)?;
        let mut v = 0.0;
        let mut lo = a;
        for hi in breaks.into_iter().chain(core::iter::once(b)) {
            if hi > lo {
                let y = g(self.eval(0.5 * (lo + hi)));
                if y != 0.0 {
                    v += y * exp(sigma * (lo - anchor)) * exp_integral(sigma, hi - lo);
                }
                lo = hi;
            }
        }
        Some(v)
    }

    fn quadrature(
        &self,
        sigma: f64,
        anchor: f64,
        a: f64,
        b: f64,
        tol: f64,
        g: &dyn Fn(f64) -> f64,
    ) -> Result<Integral> {
        let breaks = self.breakpoints(a, b).unwrap_or_default();
        let h = |u: f64| {
            let y = g(self.eval(u));
            if sigma == 0.0 {
                y
            } else {
                y * exp(sigma * (u - anchor))
            }
        };
        let (value, err_bound) = quad::integrate(&h, a, b, &breaks, tol)?;
        Ok(Integral { value, err_bound })
    }

    /// `∫_a^b g(f(u)) du`, exact for piecewise-constant signals.
    pub fn integrate_map(&self, a: f64, b: f64, tol: f64, g: &dyn Fn(f64) -> f64) -> Result<Integral> {
        check_interval(a, b, tol)?;
        self.map_weighted(0.0, 0.0, a, b, tol, g, self)
    }
}

fn check_interval(a: f64, b: f64, tol: f64) -> Result<()> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument("integration bounds need finite a <= b"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    Ok(())
}

fn trig_value(a: f64, b: f64, l: f64, t: f64) -> f64 {
    if l == 0.0 {
        b
    } else {
        a * sin(l * t) + b * cos(l * t)
    }
}

/// `∫_lo^hi (a·sin λu + b·cos λu)·e^{σ(u − anchor)} du`.
fn trig_wint(a: f64, b: f64, l: f64, sigma: f64, anchor: f64, lo: f64, hi: f64) -> f64 {
    if l == 0.0 {
        return b * exp(sigma * (lo - anchor)) * exp_integral(sigma, hi - lo);
    }
    let d = sigma * sigma + l * l;
    let prim = |u: f64| {
        let (s, c) = (sin(l * u), cos(l * u));
        exp(sigma * (u - anchor)) * (a * (sigma * s - l * c) + b * (sigma * c + l * s)) / d
    };
    prim(hi) - prim(lo)
}

fn segment_at(segments: &[Segment], phase: f64) -> Option<&Segment> {
    let i = segments.partition_point(|s| s.start <= phase);
    if i == 0 {
        None
    } else {
        Some(&segments[i - 1])
    }
}

fn step_value(edges: &[f64], values: &[f64], t: f64) -> f64 {
    let i = edges.partition_point(|&e| e <= t);
    if i == 0 || i > values.len() {
        0.0
    } else {
        values[i - 1]
    }
}

/// Weighted integral over phases `[p0, p1] ⊆ [0, ω]` of the period starting at `base`.
fn period_part(segments: &[Segment], sigma: f64, anchor: f64, base: f64, p0: f64, p1: f64) -> f64 {
    let mut v = 0.0;
    for s in segments {
        let lo = s.start.max(p0);
        let hi = s.end.min(p1);
        if hi > lo {
            v += s.value * exp(sigma * (base + lo - anchor)) * exp_integral(sigma, hi - lo);
        }
    }
    v
}

fn periodic_wint(period: f64, segments: &[Segment], sigma: f64, anchor: f64, a: f64, b: f64) -> f64 {
    let ka = floor(a / period);
    let kb = floor(b / period);
    let phase = |x: f64, k: f64| (x - k * period).clamp(0.0, period);
    if ka == kb {
        let base = ka * period;
        return period_part(segments, sigma, anchor, base, phase(a, ka), phase(b, ka));
    }
    let first = period_part(segments, sigma, anchor, ka * period, phase(a, ka), period);
    let last = period_part(segments, sigma, anchor, kb * period, 0.0, phase(b, kb));
    let full = kb - ka - 1.0;
    let middle = if full > 0.0 {
        let one = period_part(segments, sigma, 0.0, 0.0, 0.0, period);
        one * exp_geometric(sigma * ((ka + 1.0) * period - anchor), sigma * period, full)
    } else {
        0.0
    };
    first + middle + last
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn periodic_eval_and_wrap() {
        let f = Signal::piecewise_periodic(2.0, vec![(0.0, 2.0), (1.0, 1.0)]).unwrap();
        assert_eq!(f.eval(0.5), 2.0);
        assert_eq!(f.eval(1.0), 1.0);
        assert_eq!(f.eval(-0.5), 1.0);
        let g = Signal::piecewise_periodic(2.0, vec![(0.5, 3.0), (1.5, 4.0)]).unwrap();
        assert_eq!(g.eval(0.25), 4.0);
        assert_eq!(g.eval(2.6), 3.0);
    }

    #[test]
    fn periodic_integrals_across_many_periods() {
        let f = Signal::piecewise_periodic(2.0, vec![(0.0, 2.0), (1.0, 1.0)]).unwrap();
        let i = f.integrate(-3.5, 10.25, 1e-12).unwrap();
        // [-3.5,-3): 1·0.5, [-3,10): 6.5 periods of mean 1.5 → 19.5, [10,10.25): 0.5
        assert!((i.value - (0.5 + 19.5 + 0.5)).abs() < 1e-12);
        assert_eq!(i.err_bound, 0.0);
        let w = f.integrate_weighted(1.0, 0.0, core::f64::consts::LN_2, 1e-12).unwrap();
        assert!((w.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn truncated_steps_are_exact() {
        let f = Signal::steps(vec![0.0, 1.0, 2.0], vec![5.0, -7.0]).unwrap().truncate(3.0);
        let i = f.integrate(-1.0, 3.0, 1e-9).unwrap();
        assert_eq!(i, Integral::exact(0.0));
    }

    #[test]
    fn func_uses_quadrature() {
        let f = Signal::func("exp", crate::math::exp);
        let i = f.integrate(0.0, 1.0, 1e-12).unwrap();
        assert!((i.value - (core::f64::consts::E - 1.0)).abs() < 1e-11);
    }
}
