//! Gil-Pelaez inversion of a characteristic function:
//!
//! ```text
//! F(x) = 1/2 − (1/π) ∫₀^∞ Im[e^{−itx} cf(t)] / t dt
//! f(x) = (1/π) ∫₀^∞ Re[e^{−itx} cf(t)] dt
//! ```
//!
//! Two backends evaluate the integrals. [`Backend::Grid`] uses one midpoint
//! grid of `n_points` frequencies for every x, which is exact up to
//! truncation when the grid period `2π/δ` exceeds the spread of the
//! distribution. [`Backend::Adaptive`] integrates each x separately with
//! Gauss–Kronrod panels over half periods of `e^{−itx}` and extrapolates the
//! resulting alternating series with Wynn's epsilon algorithm, so it works
//! for |x| as large as 1e300.

mod adaptive;
mod grid;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmodel::CharFn;

pub use adaptive::{cdf_adaptive, pdf_adaptive, quantile_adaptive, Adaptive};
pub use grid::{invert_on_grid, Grid};

/// |cf| below which the frequency integral is truncated.
pub const CF_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Grid,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InversionOptions {
    pub n_points: usize,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub backend: Backend,
    pub accelerate: bool,
    pub max_subdivisions: usize,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            n_points: 1 << 10,
            x_min: None,
            x_max: None,
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            backend: Backend::Grid,
            accelerate: true,
            max_subdivisions: 500,
        }
    }
}

impl InversionOptions {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 64 {
            return Err(Error::InvalidOptions(format!("n_points = {} is below 64", self.n_points)));
        }
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidOptions(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [("x_min", self.x_min), ("x_max", self.x_max)] {
            if matches!(v, Some(b) if !b.is_finite()) {
                return Err(Error::InvalidOptions(format!("{name} is not finite")));
            }
        }
        if let (Some(lo), Some(hi)) = (self.x_min, self.x_max) {
            if lo >= hi {
                return Err(Error::InvalidOptions(format!("x_min = {lo} must be below x_max = {hi}")));
            }
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidOptions("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

/// A single inverted value: clamped, raw, and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointValue {
    pub value: f64,
    pub raw: f64,
    pub est_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantile {
    pub prob: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Frequency step of the grid backend.
    pub grid_step: Option<f64>,
    pub n_points: Option<usize>,
    pub truncation_point: f64,
    pub backend_used: Backend,
    pub est_error: f64,
    pub elapsed_seconds: f64,
    /// CDF and PDF before clamping to [0, 1] and [0, ∞).
    pub cdf_raw: Vec<f64>,
    pub pdf_raw: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistResult {
    pub x: Vec<f64>,
    pub pdf: Vec<f64>,
    pub cdf: Vec<f64>,
    pub quantiles: Vec<Quantile>,
    pub coverage: Option<Coverage>,
    pub diagnostics: Diagnostics,
}

impl DistResult {
    /// CDF at `x` by linear interpolation of the tabulated values.
    pub fn cdf_at(&self, x: f64) -> f64 {
        interpolate(&self.x, &self.cdf, x)
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    match xs.iter().position(|&v| v >= x) {
        None => *ys.last().unwrap(),
        Some(0) => ys[0],
        Some(i) => {
            let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            ys[i - 1] + w * (ys[i] - ys[i - 1])
        }
    }
}

/// `F(x)` with the backend selected in `opts`.
pub fn gil_pelaez_cdf<C: CharFn + ?Sized>(cf: &C, x: f64, opts: &InversionOptions) -> Result<PointValue> {
    point(cf, x, opts, true)
}

/// `f(x)` with the backend selected in `opts`.
pub fn gil_pelaez_pdf<C: CharFn + ?Sized>(cf: &C, x: f64, opts: &InversionOptions) -> Result<PointValue> {
    point(cf, x, opts, false)
}

fn point<C: CharFn + ?Sized>(cf: &C, x: f64, opts: &InversionOptions, cdf: bool) -> Result<PointValue> {
    opts.validate()?;
    if !x.is_finite() {
        return Err(Error::InvalidOptions(format!("x = {x} is not finite")));
    }
    match opts.backend {
        Backend::Grid => {
            let grid = Grid::new(cf, &[x], opts)?;
            let (f, p, err) = grid.eval(x);
            Ok(if cdf { clamp_cdf(f, err) } else { clamp_pdf(p, err) })
        }
        Backend::Adaptive => {
            let a = Adaptive::new(cf, opts)?;
            if cdf {
                a.cdf(x)
            } else {
                a.pdf(x)
            }
        }
    }
}

pub(crate) fn clamp_cdf(raw: f64, est_error: f64) -> PointValue {
    PointValue { value: raw.clamp(0.0, 1.0), raw, est_error }
}

pub(crate) fn clamp_pdf(raw: f64, est_error: f64) -> PointValue {
    PointValue { value: raw.max(0.0), raw, est_error }
}

/// Inverts `cf` on `x` with whichever backend `opts` selects.
pub fn invert<C: CharFn + ?Sized>(cf: &C, x: &[f64], probs: &[f64], opts: &InversionOptions) -> Result<DistResult> {
    match opts.backend {
        Backend::Grid => invert_on_grid(cf, x, probs, opts),
        Backend::Adaptive => adaptive::invert_adaptive(cf, x, probs, opts),
    }
}

pub(crate) fn check_inputs(x: &[f64], probs: &[f64]) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidOptions("x grid contains non-finite values".into()));
    }
    if x.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidOptions("x grid must be sorted".into()));
    }
    if probs.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::InvalidOptions("probabilities must lie in (0, 1)".into()));
    }
    if probs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidOptions("probabilities must be sorted".into()));
    }
    Ok(())
}

/// Central interval from a quantile pair `(p, 1 − p)`; the widest pair wins.
pub(crate) fn coverage_from(quantiles: &[Quantile]) -> Option<Coverage> {
    let mut best: Option<Coverage> = None;
    for lo in quantiles.iter().filter(|q| q.prob < 0.5) {
        for hi in quantiles.iter().filter(|q| (q.prob + lo.prob - 1.0).abs() < 1e-12) {
            let level = hi.prob - lo.prob;
            if best.is_none_or(|b| level > b.level) {
                best = Some(Coverage { lower: lo.value, upper: hi.value, level });
            }
        }
    }
    best
}

/// Smallest power-of-two multiple `T` (relative to a start of 1) such that
/// `max |g|` over `[T, 2T]` stays below `tol`; sampled, so a decaying
/// envelope is assumed beyond `T`.
pub(crate) fn truncation_point<G: Fn(f64) -> f64>(g: G, tol: f64) -> Result<f64> {
    const SAMPLES: usize = 32;
    let envelope = |t: f64| (0..=SAMPLES).map(|k| g(t * (1.0 + k as f64 / SAMPLES as f64))).fold(0.0f64, f64::max);
    let mut t = 1.0;
    if envelope(t) < tol {
        while t > 1e-290 && envelope(0.5 * t) < tol {
            t *= 0.5;
        }
        return Ok(t);
    }
    while envelope(t) >= tol {
        t *= 2.0;
        if t > 1e290 {
            return Err(Error::ConvergenceFailure("characteristic function does not decay below 1e-12".into()));
        }
    }
    Ok(t)
}

/// Smallest `t` with `|g(t)| ≤ 1/2`, a reciprocal scale of the distribution.
pub(crate) fn half_decay_point<G: Fn(f64) -> f64>(g: G, t_max: f64) -> f64 {
    let mut hi = t_max.min(1.0);
    while g(hi) > 0.5 && hi < t_max {
        hi = (2.0 * hi).min(t_max);
    }
    while hi > 1e-290 && g(0.5 * hi) <= 0.5 {
        hi *= 0.5;
    }
    let mut lo = 0.5 * hi;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Brent's method for `f(x) = 0` on a bracket with `f(a)·f(b) ≤ 0`.
pub(crate) fn brent<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::ConvergenceFailure(format!("root search did not converge near {b}")))
}

/// Newton steps with `f` as derivative, kept inside a shrinking bracket.
pub(crate) fn newton_bisect<F: FnMut(f64) -> Result<(f64, f64)>>(
    mut eval: F,
    p: f64,
    mut lo: f64,
    mut hi: f64,
    mut x: f64,
) -> Result<f64> {
    for _ in 0..100 {
        let (fx, dens) = eval(x)?;
        let r = fx - p;
        if r == 0.0 {
            return Ok(x);
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - r / dens;
        let next = if dens > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let step = (next - x).abs();
        x = next;
        if step <= 1e-14 * (1.0 + x.abs()) || hi - lo <= 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    Ok(x)
}

pub struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Self(Instant::now())
    }

    pub fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn options_validation() {
        assert!(InversionOptions::default().validate().is_ok());
        let bad = InversionOptions { n_points: 32, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = InversionOptions { x_min: Some(1.0), x_max: Some(0.0), ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = InversionOptions { rel_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn coverage_picks_symmetric_pair() {
        let qs = [
            Quantile { prob: 0.025, value: -2.0 },
            Quantile { prob: 0.5, value: 0.0 },
            Quantile { prob: 0.975, value: 2.0 },
        ];
        let c = coverage_from(&qs).unwrap();
        assert_eq!((c.lower, c.upper), (-2.0, 2.0));
        assert!((c.level - 0.95).abs() < 1e-15);
        assert!(coverage_from(&qs[1..]).is_none());
    }

    #[test]
    fn brent_finds_cubic_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = brent(f, 0.0, 2.0, -2.0, 6.0, 1e-15, 100).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn truncation_of_gaussian() {
        let t = truncation_point(|t| (-0.5 * t * t).exp(), 1e-12).unwrap();
        assert_eq!(t, 8.0);
        let t = truncation_point(|t| (-0.5 * (1e4 * t).powi(2)).exp(), 1e-12).unwrap();
        assert!(t < 1e-3 && t > 2e-4);
        assert!(truncation_point(|_| 1.0, 1e-12).is_err());
    }
}
