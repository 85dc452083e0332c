use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::{
    brent, check_inputs, clamp_cdf, clamp_pdf, coverage_from, half_decay_point, truncation_point, Backend, Diagnostics,
    DistResult, InversionOptions, PointValue, Quantile, Stopwatch, CF_TAIL_TOL,
};
use crate::error::{Error, Result};
use crate::extrap::wynn_epsilon;
use crate::qmodel::CharFn;
use crate::quad::integrate;

/// Half periods up to which the whole frequency range is integrated directly.
const DIRECT_HALF_PERIODS: f64 = 64.0;
/// Partial sums skipped before extrapolation starts, and the window length.
const WYNN_SKIP: usize = 5;
const WYNN_WINDOW: usize = 40;
/// Cells after which extrapolation is abandoned for plain summation.
const WYNN_CELLS: usize = 4000;
const MAX_CELLS: usize = 1_000_000;
/// Loosest admissible quadrature error, as a multiple of the target.
/// Floor of the cell frequency, relative to `1/s`.
const CENTER_FREQUENCY: f64 = 1e-3;
const QUAD_SLACK: f64 = 1e4;

/// Per-point Gil-Pelaez integration for arbitrary |x|.
///
/// Centered at the location `m`, the integrals for `x` run over `u = t|x − m|`
/// (or a multiple of `t` set by the scale when `x` is near `m`) in cells of
/// length π. Partial sums of the cells form an alternating series
/// whose limit is extrapolated with Wynn's epsilon algorithm.
pub struct Adaptive<'a, C: CharFn + ?Sized> {
    cf: &'a C,
    opts: InversionOptions,
    loc: f64,
    t_max: f64,
    scale: f64,
}

enum Target {
    Cdf,
    Pdf,
}

impl<'a, C: CharFn + ?Sized> Adaptive<'a, C> {
    pub fn new(cf: &'a C, opts: &InversionOptions) -> Result<Self> {
        opts.validate()?;
        let modulus = |t: f64| cf.eval_centered(t).norm();
        let t_max = truncation_point(modulus, CF_TAIL_TOL)?;
        let scale = 1.0 / half_decay_point(modulus, t_max);
        Ok(Self { cf, opts: opts.clone(), loc: cf.location(), t_max, scale })
    }

    pub fn truncation_point(&self) -> f64 {
        self.t_max
    }

    pub fn cdf(&self, x: f64) -> Result<PointValue> {
        let (raw, err) = self.integral(x, Target::Cdf)?;
        Ok(clamp_cdf(raw, err))
    }

    pub fn pdf(&self, x: f64) -> Result<PointValue> {
        let (raw, err) = self.integral(x, Target::Pdf)?;
        Ok(clamp_pdf(raw, err))
    }

    /// Root of `F(x) = p` found by Brent's method in `y = asinh((x − m)/s)`,
    /// with `s` the reciprocal of the frequency where |cf| halves.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidOptions(format!("probability {p} is outside (0, 1)")));
        }
        let (loc, s) = (self.loc, self.scale);
        let to_x = |y: f64| loc + s * y.sinh();
        let h = |y: f64| Ok(self.integral(to_x(y), Target::Cdf)?.0 - p);
        let h0 = h(0.0)?;
        if h0 == 0.0 {
            return Ok(loc);
        }
        let dir = if h0 < 0.0 { 1.0 } else { -1.0 };
        let (mut y_prev, mut h_prev) = (0.0, h0);
        let mut k = 0;
        loop {
            let reach = s * 10f64.powi(k);
            if reach > 1e300 {
                return Err(Error::BracketFailure(format!("no bracket for the {p} quantile below |x| = 1e300")));
            }
            let y = dir * (reach / s).asinh();
            let hy = h(y)?;
            if (hy >= 0.0) != (h_prev >= 0.0) || hy == 0.0 {
                let (a, b, fa, fb) = if dir > 0.0 { (y_prev, y, h_prev, hy) } else { (y, y_prev, hy, h_prev) };
                let y_root = brent(h, a, b, fa, fb, 1e-12, 200)?;
                return Ok(to_x(y_root));
            }
            (y_prev, h_prev) = (y, hy);
            k += 1;
        }
    }

    /// Raw CDF or PDF at `x` with its error estimate. Cells are half periods
    /// of `e^{-itω}` with `ω = |x − m|`, floored at a small multiple of `1/s`
    /// so the center still gets a finite cell length.
    fn integral(&self, x: f64, target: Target) -> Result<(f64, f64)> {
        if !x.is_finite() {
            return Err(Error::InvalidOptions(format!("x = {x} is not finite")));
        }
        let xs = x - self.loc;
        let omega = xs.abs().max(CENTER_FREQUENCY / self.scale);
        let direct = self.t_max * omega / PI <= DIRECT_HALF_PERIODS;
        let (abs_tol, rel_tol) = (self.opts.abs_tol, self.opts.rel_tol);
        match target {
            Target::Cdf => {
                let to_cdf = |i: f64| 0.5 - i / PI;
                let tol = |i: f64| {
                    let f = to_cdf(i);
                    PI * abs_tol.max(rel_tol * f.min(1.0 - f).max(0.0))
                };
                let f = |t: f64| {
                    let z = self.cf.eval_centered(t);
                    let (s, c) = (t * xs).sin_cos();
                    (z.im * c - z.re * s) / t
                };
                let (i, err) = if direct { self.direct(&f, omega, &tol)? } else { self.cells(&f, PI, omega, &tol)? };
                Ok((to_cdf(i), err / PI))
            }
            Target::Pdf => {
                let tol = |i: f64| PI * abs_tol.max(rel_tol * (i / PI).abs());
                let f = |t: f64| {
                    let z = self.cf.eval_centered(t);
                    let (s, c) = (t * xs).sin_cos();
                    z.re * c + z.im * s
                };
                let (i, err) =
                    if direct { self.direct(&f, omega, &tol)? } else { self.cells(&f, FRAC_PI_2, omega, &tol)? };
                Ok((i / PI, err / PI))
            }
        }
    }

    /// Integral over `[0, T]` on uniform panels, two per half period of
    /// `e^{-itω}` and at least eight.
    fn direct<F: Fn(f64) -> f64>(&self, f: &F, omega: f64, tol: &dyn Fn(f64) -> f64) -> Result<(f64, f64)> {
        let t_max = self.t_max;
        let panels = (2.0 * t_max * omega / PI).ceil().max(8.0) as usize;
        let breaks: Vec<f64> = (0..=panels).map(|k| t_max * k as f64 / panels as f64).collect();
        let q = integrate(f, &breaks, tol(0.0), self.opts.rel_tol, self.opts.max_subdivisions.max(panels));
        if !q.value.is_finite() || (!q.converged && q.error > QUAD_SLACK * tol(q.value)) {
            return Err(Error::ConvergenceFailure(format!(
                "frequency integral did not converge (error {:.3e})",
                q.error
            )));
        }
        Ok((q.value, q.error))
    }

    /// Sum of cell integrals over `[0, first/ω]`, then steps of `π/ω` up to
    /// `T`, extrapolated once the Wynn limit is stable twice in a row.
    fn cells<F: Fn(f64) -> f64>(&self, f: &F, first: f64, omega: f64, tol: &dyn Fn(f64) -> f64) -> Result<(f64, f64)> {
        let t_max = self.t_max;
        let cell_tol = 0.1 * tol(0.0);
        let mut sums: Vec<f64> = Vec::new();
        let (mut total, mut quad_err) = (0.0, 0.0);
        let mut prev: Option<f64> = None;
        let mut stable = 0;
        let mut j = 0usize;
        let (mut a, mut b) = (0.0, (first / omega).min(t_max));
        loop {
            let q = integrate(f, &[a, b], cell_tol, self.opts.rel_tol, self.opts.max_subdivisions);
            if !q.value.is_finite() {
                return Err(Error::ConvergenceFailure(format!("non-finite integrand on [{a}, {b}]")));
            }
            total += q.value;
            quad_err += q.error;
            if b >= t_max {
                return Ok((total, quad_err));
            }
            sums.push(total);
            let n = sums.len();
            if self.opts.accelerate && n > WYNN_SKIP && n <= WYNN_CELLS {
                let window = &sums[WYNN_SKIP.max(n.saturating_sub(WYNN_WINDOW))..];
                let lim = wynn_epsilon(window);
                let target = tol(lim.value);
                match prev {
                    Some(p) if (lim.value - p).abs() <= target && lim.error <= target => {
                        stable += 1;
                        if stable >= 2 {
                            return Ok((lim.value, (lim.value - p).abs() + lim.error + quad_err));
                        }
                    }
                    _ => stable = 0,
                }
                prev = Some(lim.value);
            }
            if n >= MAX_CELLS {
                return Err(Error::ConvergenceFailure(format!(
                    "oscillatory integral did not converge after {MAX_CELLS} cells"
                )));
            }
            j += 1;
            a = b;
            b = ((first + j as f64 * PI) / omega).min(t_max);
        }
    }
}

/// `F(x)` by per-point integration.
pub fn cdf_adaptive<C: CharFn + ?Sized>(cf: &C, x: f64, opts: &InversionOptions) -> Result<PointValue> {
    Adaptive::new(cf, opts)?.cdf(x)
}

/// `f(x)` by per-point integration.
pub fn pdf_adaptive<C: CharFn + ?Sized>(cf: &C, x: f64, opts: &InversionOptions) -> Result<PointValue> {
    Adaptive::new(cf, opts)?.pdf(x)
}

/// `F⁻¹(p)` by root finding on the per-point CDF.
pub fn quantile_adaptive<C: CharFn + ?Sized>(cf: &C, p: f64, opts: &InversionOptions) -> Result<f64> {
    Adaptive::new(cf, opts)?.quantile(p)
}

pub(crate) fn invert_adaptive<C: CharFn + ?Sized>(
    cf: &C,
    x: &[f64],
    probs: &[f64],
    opts: &InversionOptions,
) -> Result<DistResult> {
    let clock = Stopwatch::start();
    check_inputs(x, probs)?;
    let engine = Adaptive::new(cf, opts)?;
    let points = x
        .par_iter()
        .map(|&xi| Ok((engine.cdf(xi)?, engine.pdf(xi)?)))
        .collect::<Result<Vec<(PointValue, PointValue)>>>()?;
    let quantiles =
        probs.par_iter().map(|&p| Ok(Quantile { prob: p, value: engine.quantile(p)? })).collect::<Result<Vec<_>>>()?;
    let est_error = points.iter().map(|(c, d)| c.est_error.max(d.est_error)).fold(0.0, f64::max);
    Ok(DistResult {
        x: x.to_vec(),
        pdf: points.iter().map(|(_, d)| d.value).collect(),
        cdf: points.iter().map(|(c, _)| c.value).collect(),
        coverage: coverage_from(&quantiles),
        quantiles,
        diagnostics: Diagnostics {
            grid_step: None,
            n_points: None,
            truncation_point: engine.truncation_point(),
            backend_used: Backend::Adaptive,
            est_error,
            elapsed_seconds: clock.seconds(),
            cdf_raw: points.iter().map(|(c, _)| c.raw).collect(),
            pdf_raw: points.iter().map(|(_, d)| d.raw).collect(),
        },
    })
}
