//! Monte Carlo propagation of linear q-Gaussian models.
//!
//! Each input is drawn from its exact representation: `μ + σZ` for q = 1,
//! `μ + σa(2B − 1)` with `B ~ Beta(θ, θ)` for q < 1, and `μ + σbT` with
//! `T ~ t(ν)` for 1 < q < 3. Term `k`, chunk `c` draws from the ChaCha8
//! stream `(k << 32) | c` of the seeded generator, so results depend only on
//! the seed and the chunk count, never on thread scheduling or term order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{OpenClosed01, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inversion::{Adaptive, Backend, InversionOptions, Stopwatch};
use crate::qmodel::{CharFn, LinearModel, QGaussianParams, Regime};

pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McmOptions {
    pub n_samples: usize,
    pub seed: u64,
    pub coverage_level: f64,
    /// Independent substreams per term; 1 keeps the run single-threaded.
    pub chunks: usize,
}

impl Default for McmOptions {
    fn default() -> Self {
        Self { n_samples: 100_000, seed: 0, coverage_level: 0.95, chunks: 1 }
    }
}

impl McmOptions {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::InvalidOptions(format!("n_samples below minimum: {} < {MIN_SAMPLES}", self.n_samples)));
        }
        if !(self.coverage_level > 0.0 && self.coverage_level < 1.0) {
            return Err(Error::InvalidOptions(format!(
                "coverage level {} must lie strictly inside (0, 1)",
                self.coverage_level
            )));
        }
        if self.chunks == 0 || self.chunks > self.n_samples {
            return Err(Error::InvalidOptions(format!("chunks = {} must be in 1..=n_samples", self.chunks)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmResult {
    pub ci_lower: f64,
    pub ci_upper: f64,
    /// Absent when some term has no finite mean (ν ≤ 1).
    pub sample_mean: Option<f64>,
    pub elapsed_seconds: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub coverage_level: f64,
}

/// `n` i.i.d. draws of one q-Gaussian.
pub fn sample_tqg<R: Rng + ?Sized>(p: &QGaussianParams, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| draw(p, rng)).collect()
}

fn draw<R: Rng + ?Sized>(p: &QGaussianParams, rng: &mut R) -> f64 {
    let d = p.derived();
    let standard = match d.regime {
        Regime::Gaussian => rng.sample::<f64, _>(StandardNormal),
        Regime::Bounded => {
            // 2B − 1 = (G₁ − G₂)/(G₁ + G₂) keeps precision near the endpoints.
            let g1 = ln_gamma_variate(d.theta.unwrap(), rng).exp();
            let g2 = ln_gamma_variate(d.theta.unwrap(), rng).exp();
            d.a.unwrap() * (g1 - g2) / (g1 + g2)
        }
        Regime::Heavy => {
            let nu = d.nu.unwrap();
            d.b.unwrap() * student_t(nu, rng)
        }
    };
    p.mu() + p.sigma() * standard
}

/// `Z/√(G/ν)` with `G ~ Gamma(ν/2, scale 2)` handled in logs, so fractional
/// ν far below 1 does not underflow `G`.
fn student_t<R: Rng + ?Sized>(nu: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    let ln_g = std::f64::consts::LN_2 + ln_gamma_variate(0.5 * nu, rng);
    z * (-0.5 * (ln_g - nu.ln())).exp()
}

/// Logarithm of a Gamma(shape, 1) variate by Marsaglia–Tsang, boosted by
/// `U^{1/shape}` for shape < 1.
fn ln_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.sample(OpenClosed01);
        return ln_gamma_variate(shape + 1.0, rng) + u.ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v3 = v * v * v;
        let u: f64 = rng.sample(OpenClosed01);
        if u.ln() < 0.5 * x * x + d - d * v3 + d * v3.ln() {
            return d.ln() + v3.ln();
        }
    }
}

/// Sorted draws of `Y = Σ c_k X_k`.
pub fn simulate(model: &LinearModel, opts: &McmOptions) -> Result<Vec<f64>> {
    opts.validate()?;
    let n = opts.n_samples;
    let chunks = opts.chunks;
    let bounds: Vec<usize> = (0..=chunks).map(|c| c * n / chunks).collect();
    let mut y: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let len = bounds[c + 1] - bounds[c];
            let mut acc = vec![0.0; len];
            for (k, term) in model.terms().iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(((k as u64) << 32) | c as u64);
                for v in acc.iter_mut() {
                    *v += term.coef * draw(&term.params, &mut rng);
                }
            }
            acc
        })
        .collect();
    if y.iter().any(|v| v.is_nan()) {
        return Err(Error::ConvergenceFailure("sampling produced NaN".into()));
    }
    y.sort_unstable_by(f64::total_cmp);
    Ok(y)
}

/// 1-based order-statistic indices `⌊Nα⌋` and `⌈N(1 − α)⌉` with
/// `α = (1 − level)/2`, snapped to integers when rounding noise straddles one.
pub fn coverage_indices(n: usize, level: f64) -> (usize, usize) {
    let alpha = 0.5 * (1.0 - level);
    let snap = |v: f64| {
        let r = v.round();
        if (v - r).abs() <= 1e-9 * n as f64 {
            r
        } else {
            v
        }
    };
    let lo = snap(n as f64 * alpha).floor() as usize;
    let hi = snap(n as f64 * (1.0 - alpha)).ceil() as usize;
    (lo.clamp(1, n), hi.clamp(1, n))
}

/// Coverage interval from sorted draws.
pub fn coverage_interval(sorted: &[f64], level: f64) -> (f64, f64) {
    let (lo, hi) = coverage_indices(sorted.len(), level);
    (sorted[lo - 1], sorted[hi - 1])
}

pub fn propagate(model: &LinearModel, opts: &McmOptions) -> Result<McmResult> {
    let clock = Stopwatch::start();
    let y = simulate(model, opts)?;
    let (ci_lower, ci_upper) = coverage_interval(&y, opts.coverage_level);
    let finite_mean = model.terms().iter().all(|t| t.params.derived().nu.is_none_or(|nu| nu > 1.0));
    let sample_mean = finite_mean.then(|| y.iter().sum::<f64>() / y.len() as f64);
    Ok(McmResult {
        ci_lower,
        ci_upper,
        sample_mean,
        elapsed_seconds: clock.seconds(),
        n_samples: opts.n_samples,
        seed: opts.seed,
        coverage_level: opts.coverage_level,
    })
}

/// Two-sided Kolmogorov–Smirnov distance between sorted draws and `cdf`.
pub fn ks_statistic<F: FnMut(f64) -> f64>(sorted: &[f64], mut cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    })
}

/// KS distance between sorted draws and the inverted CDF of `cf`. The CDF is
/// computed per point at every `len/KS_NODES`-th order statistic and
/// interpolated linearly in between.
pub fn ks_against_cfa<C: CharFn + ?Sized>(sorted: &[f64], cf: &C, opts: &InversionOptions) -> Result<f64> {
    const KS_NODES: usize = 4000;
    let n = sorted.len();
    let mut nodes: Vec<f64> = (0..=KS_NODES).map(|i| sorted[i * (n - 1) / KS_NODES]).collect();
    nodes.dedup();
    let engine = Adaptive::new(cf, &InversionOptions { backend: Backend::Adaptive, ..opts.clone() })?;
    let values = nodes.par_iter().map(|&x| Ok(engine.cdf(x)?.value)).collect::<Result<Vec<f64>>>()?;
    let mut j = 0;
    Ok(ks_statistic(sorted, |x| {
        while j + 1 < nodes.len() && nodes[j + 1] < x {
            j += 1;
        }
        if j + 1 == nodes.len() || x <= nodes[j] {
            return values[j];
        }
        let w = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
        values[j] + w * (values[j + 1] - values[j])
    }))
}
