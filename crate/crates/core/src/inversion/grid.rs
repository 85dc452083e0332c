use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    check_inputs, clamp_cdf, clamp_pdf, coverage_from, newton_bisect, truncation_point, Adaptive, Backend, Diagnostics,
    DistResult, InversionOptions, Quantile, Stopwatch, CF_TAIL_TOL,
};
use crate::error::{Error, Result};
use crate::qmodel::CharFn;

/// Probabilities whose quantiles bound the default x-range of unbounded models.
const RANGE_PROBS: (f64, f64) = (1e-4, 1.0 - 1e-4);
/// Largest |cf| tolerated at the end of the frequency grid.
const UNRESOLVED_TAIL: f64 = 1e-3;

/// Midpoint frequency grid `t_k = (k + ½)δ`, `k < n_points`, shared by every
/// x. With the distribution inside a window of width below `2π/δ` the sums
/// equal the Gil-Pelaez integrals up to truncation at `n_points·δ`.
pub struct Grid {
    loc: f64,
    delta: f64,
    t: Vec<f64>,
    c: Vec<Complex64>,
    truncation_point: f64,
    range: (f64, f64),
}

impl Grid {
    /// Builds a grid whose period covers `x` and the bulk of the distribution.
    pub fn new<C: CharFn + ?Sized>(cf: &C, x: &[f64], opts: &InversionOptions) -> Result<Self> {
        let range = evaluation_range(cf, x, opts)?;
        let t_cf = truncation_point(|t| cf.eval_centered(t).norm(), CF_TAIL_TOL)?;
        let n = opts.n_points;
        let mut delta = t_cf / n as f64;
        let width = range.1 - range.0;
        if width > 0.0 {
            // Keep the period 2π/δ strictly wider than the evaluation range.
            delta = delta.min(2.0 * PI / (width * (1.0 + 1e-3)));
        }
        let t: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) * delta).collect();
        let c: Vec<Complex64> = t.par_iter().map(|&tk| cf.eval_centered(tk)).collect();
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ConvergenceFailure(
                "characteristic function is not finite on the frequency grid".into(),
            ));
        }
        let t_end = n as f64 * delta;
        let tail = cf.eval_centered(t_end).norm();
        if tail > UNRESOLVED_TAIL {
            return Err(Error::ConvergenceFailure(format!(
                "frequency grid ends at t = {t_end:.3e} where |cf| = {tail:.2e}; raise n_points, \
                 narrow the x range or use the adaptive backend"
            )));
        }
        Ok(Self { loc: cf.location(), delta, t, c, truncation_point: t_end, range })
    }

    pub fn step(&self) -> f64 {
        self.delta
    }

    pub fn truncation_point(&self) -> f64 {
        self.truncation_point
    }

    /// Raw CDF, raw PDF and a truncation estimate for the CDF at `x`. The
    /// estimate is the contribution of the upper half of the grid.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let xs = x - self.loc;
        let half = self.t.len() / 2;
        let (mut fc, mut fp) = (0.0, 0.0);
        let mut fc_half = 0.0;
        for (k, (&t, z)) in self.t.iter().zip(&self.c).enumerate() {
            if k == half {
                fc_half = fc;
            }
            let (s, c) = (t * xs).sin_cos();
            fc += (z.im * c - z.re * s) / t;
            fp += z.re * c + z.im * s;
        }
        let scale = self.delta / PI;
        (0.5 - scale * fc, scale * fp, scale * (fc - fc_half).abs())
    }

    /// Starting bracket and guess for the `p` quantile: interpolation of the
    /// tabulated CDF, else a scan of the evaluation range.
    fn start(&self, p: f64, xs: &[f64], cdf: &[f64]) -> Result<(f64, f64, f64)> {
        match cdf.iter().position(|&f| f >= p) {
            Some(i) if i > 0 => {
                let w = (p - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
                Ok((xs[i - 1], xs[i], xs[i - 1] + w * (xs[i] - xs[i - 1])))
            }
            _ => {
                let (lo, hi) = self.bracket(p)?;
                Ok((lo, hi, 0.5 * (lo + hi)))
            }
        }
    }

    /// Bracket from a scan of the evaluation range.
    fn bracket(&self, p: f64) -> Result<(f64, f64)> {
        const STEPS: usize = 256;
        let (a, b) = self.range;
        let h = (b - a) / STEPS as f64;
        let mut prev = a;
        if self.eval(a).0 >= p {
            return Err(Error::BracketFailure(format!("quantile {p} lies below the range start {a}")));
        }
        for k in 1..=STEPS {
            let x = a + k as f64 * h;
            if self.eval(x).0 >= p {
                return Ok((prev, x));
            }
            prev = x;
        }
        Err(Error::BracketFailure(format!("quantile {p} lies above the range end {b}")))
    }
}

/// Union of the requested x values with the support, the explicit bounds,
/// or first-pass quantiles at 1e-4 and 1 − 1e-4.
fn evaluation_range<C: CharFn + ?Sized>(cf: &C, x: &[f64], opts: &InversionOptions) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = match (opts.x_min, opts.x_max, cf.support()) {
        (Some(a), Some(b), _) => (a, b),
        (a, b, Some((s0, s1))) => (a.unwrap_or(s0), b.unwrap_or(s1)),
        (a, b, None) => {
            let first_pass =
                InversionOptions { backend: Backend::Adaptive, rel_tol: opts.rel_tol.max(1e-6), ..opts.clone() };
            let adaptive = Adaptive::new(cf, &first_pass)?;
            let lo = match a {
                Some(a) => a,
                None => adaptive.quantile(RANGE_PROBS.0)?,
            };
            let hi = match b {
                Some(b) => b,
                None => adaptive.quantile(RANGE_PROBS.1)?,
            };
            (lo, hi)
        }
    };
    if let (Some(&first), Some(&last)) = (x.first(), x.last()) {
        let slack = 1e-3 * (hi - lo).abs().max(f64::MIN_POSITIVE);
        let explicit_lo = opts.x_min.is_some_and(|b| first < b - slack);
        let explicit_hi = opts.x_max.is_some_and(|b| last > b + slack);
        if explicit_lo || explicit_hi {
            return Err(Error::InvalidBounds(format!(
                "x grid [{first}, {last}] exceeds [x_min, x_max] = [{lo}, {hi}]"
            )));
        }
        lo = lo.min(first);
        hi = hi.max(last);
    }
    if lo >= hi {
        let pad = 1.0f64.max(lo.abs());
        return Ok((lo - pad, hi + pad));
    }
    Ok((lo, hi))
}

/// Newton steps on the per-point Gil-Pelaez CDF from a grid-based start. The
/// bracket is widened first if aliasing has moved the root outside it.
fn polish<C: CharFn + ?Sized>(exact: &Adaptive<C>, p: f64, mut lo: f64, mut hi: f64, x0: f64) -> Result<f64> {
    let mut width = (hi - lo).max(f64::EPSILON * (1.0 + x0.abs()));
    for _ in 0..64 {
        let below = exact.cdf(lo)?.raw < p;
        let above = exact.cdf(hi)?.raw >= p;
        if below && above {
            let eval = |x: f64| Ok((exact.cdf(x)?.raw, exact.pdf(x)?.raw));
            return newton_bisect(eval, p, lo, hi, x0.clamp(lo, hi));
        }
        if !below {
            lo -= width;
        }
        if !above {
            hi += width;
        }
        width *= 2.0;
    }
    Err(Error::BracketFailure(format!("no bracket for the {p} quantile near {x0}")))
}

/// PDF and CDF on `x` from one shared midpoint grid. Quantiles start from the
/// tabulated CDF and are polished on the per-point integrals.
pub fn invert_on_grid<C: CharFn + ?Sized>(
    cf: &C,
    x: &[f64],
    probs: &[f64],
    opts: &InversionOptions,
) -> Result<DistResult> {
    let clock = Stopwatch::start();
    opts.validate()?;
    check_inputs(x, probs)?;
    let grid = Grid::new(cf, x, opts)?;
    let values: Vec<(f64, f64, f64)> = x.par_iter().map(|&xi| grid.eval(xi)).collect();
    let cdf_raw: Vec<f64> = values.iter().map(|v| v.0).collect();
    let pdf_raw: Vec<f64> = values.iter().map(|v| v.1).collect();
    let est_error = values.iter().map(|v| v.2).fold(0.0, f64::max);
    let quantiles = if probs.is_empty() {
        Vec::new()
    } else {
        let exact = Adaptive::new(cf, opts)?;
        probs
            .iter()
            .map(|&p| {
                let (lo, hi, x0) = grid.start(p, x, &cdf_raw)?;
                Ok(Quantile { prob: p, value: polish(&exact, p, lo, hi, x0)? })
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(DistResult {
        x: x.to_vec(),
        pdf: pdf_raw.iter().map(|&v| clamp_pdf(v, 0.0).value).collect(),
        cdf: cdf_raw.iter().map(|&v| clamp_cdf(v, 0.0).value).collect(),
        coverage: coverage_from(&quantiles),
        quantiles,
        diagnostics: Diagnostics {
            grid_step: Some(grid.step()),
            n_points: Some(opts.n_points),
            truncation_point: grid.truncation_point(),
            backend_used: Backend::Grid,
            est_error,
            elapsed_seconds: clock.seconds(),
            cdf_raw,
            pdf_raw,
        },
    })
}
