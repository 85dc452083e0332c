//! Tsallis q-Gaussian parameters and characteristic functions.
//!
//! With `X ~ TQG(μ, σ, q)` the standardized variable `(X − μ)/σ` is
//!
//! * a symmetric beta on `[−a, a]` with shape `θ` for `q < 1`,
//! * standard normal for `q = 1`,
//! * `b·T` with `T` Student-t on `ν` degrees of freedom for `1 < q < 3`,
//!
//! where `θ = (2−q)/(1−q)`, `a = √(2/(1−q))`, `ν = (3−q)/(q−1)` and
//! `b = √(2/(3−q))`. Its characteristic function is
//!
//! ```text
//! q < 1:      ₀F₁(θ + ½; −(a t)²/4)
//!           = 2^{θ−½} Γ(θ+½) (a t)^{−(θ−½)} J_{θ−½}(a t)
//! q = 1:      exp(−t²/2)
//! 1 < q < 3:  2^{1−ν/2} (b√ν |t|)^{ν/2} K_{ν/2}(b√ν |t|) / Γ(ν/2)
//! ```
//!
//! All three are real and even, so a linear combination `Σ c_k X_k` has the
//! characteristic function `exp(i t Σ c_k μ_k) · Π cf_std(c_k σ_k t)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{hyp0f1, ln_gamma, matern, SpecFunResult, Status};

/// `|q − 1|` at or below which a parameter set is treated as Gaussian.
pub const GAUSSIAN_Q_TOL: f64 = 1e-12;

/// Largest admissible q; closer to 3 the heavy-tail index ν/2 is too small
/// for K_{ν/2} and Γ(ν/2) to keep any precision.
pub const Q_MAX: f64 = 3.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Bounded,
    Gaussian,
    Heavy,
}

/// Constants derived from q. Fields that do not apply to the regime are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub regime: Regime,
    pub theta: Option<f64>,
    pub a: Option<f64>,
    pub nu: Option<f64>,
    pub b: Option<f64>,
}

fn classify(q: f64) -> DerivedParams {
    if (q - 1.0).abs() <= GAUSSIAN_Q_TOL {
        DerivedParams { regime: Regime::Gaussian, theta: None, a: None, nu: None, b: None }
    } else if q < 1.0 {
        DerivedParams {
            regime: Regime::Bounded,
            theta: Some((2.0 - q) / (1.0 - q)),
            a: Some((2.0 / (1.0 - q)).sqrt()),
            nu: None,
            b: None,
        }
    } else {
        DerivedParams {
            regime: Regime::Heavy,
            theta: None,
            a: None,
            nu: Some((3.0 - q) / (q - 1.0)),
            b: Some((2.0 / (3.0 - q)).sqrt()),
        }
    }
}

fn check_q(q: f64) -> Result<()> {
    if !q.is_finite() || q >= 3.0 {
        return Err(Error::Domain(format!("q = {q} violates q < 3")));
    }
    if q > Q_MAX {
        return Err(Error::Domain(format!("q = {q} is too close to 3 (q <= 3 - 1e-6 required)")));
    }
    Ok(())
}

/// Parameters of one `TQG(μ, σ, q)` input quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGaussianParams {
    mu: f64,
    sigma: f64,
    q: f64,
    derived: DerivedParams,
}

impl QGaussianParams {
    pub fn new(mu: f64, sigma: f64, q: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain(format!("mu = {mu} is not finite")));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Domain(format!("sigma = {sigma} must be finite and > 0")));
        }
        check_q(q)?;
        Ok(Self { mu, sigma, q, derived: classify(q) })
    }

    /// Builds the parameters from the Tsallis rate `β = 1/(2σ²)`.
    pub fn from_tsallis_beta(mu: f64, beta: f64, q: f64) -> Result<Self> {
        Self::new(mu, sigma_from_tsallis_beta(beta)?, q)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.derived.regime
    }

    pub fn derived(&self) -> DerivedParams {
        self.derived
    }
}

pub fn derive_params(p: &QGaussianParams) -> DerivedParams {
    p.derived
}

pub fn sigma_from_tsallis_beta(beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("beta = {beta} must be finite and > 0")));
    }
    Ok((1.0 / (2.0 * beta)).sqrt())
}

/// Support interval for `q < 1`; `None` when the support is the real line.
pub fn support(p: &QGaussianParams) -> Option<(f64, f64)> {
    p.derived.a.map(|a| (p.mu - p.sigma * a, p.mu + p.sigma * a))
}

fn value_or_zero(r: SpecFunResult) -> f64 {
    match r.status {
        Status::Ok | Status::UnderflowToZero => r.value,
        // Unreachable for admissible parameters.
        Status::Overflow | Status::DomainError => f64::NAN,
    }
}

/// Standard characteristic function for already classified parameters.
fn cf_std_derived(t: f64, d: &DerivedParams) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return 1.0;
    }
    match d.regime {
        Regime::Gaussian => (-0.5 * t * t).exp(),
        Regime::Bounded => {
            let (theta, a) = (d.theta.unwrap(), d.a.unwrap());
            let at = a * t;
            value_or_zero(hyp0f1(theta + 0.5, -0.25 * at * at))
        }
        Regime::Heavy => {
            let (nu, b) = (d.nu.unwrap(), d.b.unwrap());
            value_or_zero(matern(0.5 * nu, b * nu.sqrt() * t))
        }
    }
}

/// Characteristic function of `TQG(0, 1, q)`. It is real and even.
pub fn cf_standard(t: f64, q: f64) -> Result<Complex64> {
    check_q(q)?;
    Ok(Complex64::new(cf_std_derived(t, &classify(q)), 0.0))
}

/// `exp(i t μ) · cf_standard(σ t, q)`.
pub fn cf_tqg(t: f64, p: &QGaussianParams) -> Complex64 {
    let m = cf_std_derived(p.sigma * t, &p.derived);
    let (s, c) = (t.abs() * p.mu).sin_cos();
    let z = Complex64::new(m * c, m * s);
    if t < 0.0 {
        z.conj()
    } else {
        z
    }
}

/// Density through the exact stochastic representation of each regime.
pub fn pdf_direct(x: f64, p: &QGaussianParams) -> f64 {
    let z = (x - p.mu) / p.sigma;
    let d = &p.derived;
    let ln_f = match d.regime {
        Regime::Gaussian => -0.5 * z * z - 0.5 * (2.0 * PI).ln(),
        Regime::Bounded => {
            // z = a(2B − 1) with B ~ Beta(θ, θ).
            let (theta, a) = (d.theta.unwrap(), d.a.unwrap());
            let u = z / a;
            if u.abs() >= 1.0 {
                return 0.0;
            }
            let ln_beta = 2.0 * ln_gamma(theta) - ln_gamma(2.0 * theta);
            (theta - 1.0) * (0.25 * (1.0 - u) * (1.0 + u)).ln() - ln_beta - (2.0 * a).ln()
        }
        Regime::Heavy => {
            // z = b T with T ~ t(ν).
            let (nu, b) = (d.nu.unwrap(), d.b.unwrap());
            let tau = z / b;
            ln_gamma(0.5 * (nu + 1.0))
                - ln_gamma(0.5 * nu)
                - 0.5 * (nu * PI).ln()
                - 0.5 * (nu + 1.0) * (tau * tau / nu).ln_1p()
                - b.ln()
        }
    };
    ln_f.exp() / p.sigma
}

/// A characteristic function together with hints used by the inversion
/// routines.
pub trait CharFn: Sync {
    fn eval(&self, t: f64) -> Complex64;

    /// A central value of the distribution; the inversion shifts by it.
    fn location(&self) -> f64 {
        0.0
    }

    /// Finite support, when known.
    fn support(&self) -> Option<(f64, f64)> {
        None
    }

    /// `exp(−i t · location) · cf(t)`.
    fn eval_centered(&self, t: f64) -> Complex64 {
        let (s, c) = (t * self.location()).sin_cos();
        self.eval(t) * Complex64::new(c, -s)
    }
}

/// Wraps an arbitrary closure as a [`CharFn`].
pub struct ClosureCf<F> {
    f: F,
    location: f64,
    support: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> Complex64 + Sync> ClosureCf<F> {
    pub fn new(f: F) -> Self {
        Self { f, location: 0.0, support: None }
    }

    pub fn with_location(mut self, location: f64) -> Self {
        self.location = location;
        self
    }

    pub fn with_support(mut self, lo: f64, hi: f64) -> Self {
        self.support = Some((lo, hi));
        self
    }
}

impl<F: Fn(f64) -> Complex64 + Sync> CharFn for ClosureCf<F> {
    fn eval(&self, t: f64) -> Complex64 {
        (self.f)(t)
    }

    fn location(&self) -> f64 {
        self.location
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.support
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub params: QGaussianParams,
}

/// `Y = Σ c_k X_k` over independent q-Gaussians.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    terms: Vec<Term>,
    location: f64,
}

impl LinearModel {
    pub fn new(terms: Vec<(f64, QGaussianParams)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidModel("model has no terms".into()));
        }
        for (k, (c, _)) in terms.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::InvalidModel(format!("term {}: coef {c} is not finite", k + 1)));
            }
        }
        if terms.iter().all(|(c, _)| *c == 0.0) {
            return Err(Error::InvalidModel("all coefficients are zero".into()));
        }
        let location = terms.iter().map(|(c, p)| c * p.mu).sum();
        let terms = terms.into_iter().map(|(coef, params)| Term { coef, params }).collect();
        Ok(Self { terms, location })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Exact support when every contributing term is bounded.
    pub fn bounded_support(&self) -> Option<(f64, f64)> {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for term in self.terms.iter().filter(|t| t.coef != 0.0) {
            let (a, b) = support(&term.params)?;
            let (a, b) = (term.coef * a, term.coef * b);
            lo += a.min(b);
            hi += a.max(b);
        }
        Some((lo, hi))
    }

    /// Real, even product `Π cf_std(c_k σ_k t)`.
    pub fn cf_modulus_part(&self, t: f64) -> f64 {
        let mut acc = 1.0;
        for term in &self.terms {
            if term.coef == 0.0 {
                continue;
            }
            acc *= cf_std_derived(term.coef * term.params.sigma * t, &term.params.derived);
            if acc == 0.0 {
                break;
            }
        }
        acc
    }
}

pub fn cf_linear_combination(t: f64, m: &LinearModel) -> Complex64 {
    m.eval(t)
}

impl CharFn for LinearModel {
    fn eval(&self, t: f64) -> Complex64 {
        let r = self.cf_modulus_part(t);
        let (s, c) = (t.abs() * self.location).sin_cos();
        let z = Complex64::new(r * c, r * s);
        if t < 0.0 {
            z.conj()
        } else {
            z
        }
    }

    fn location(&self) -> f64 {
        self.location
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.bounded_support()
    }

    fn eval_centered(&self, t: f64) -> Complex64 {
        Complex64::new(self.cf_modulus_part(t), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use proptest::prelude::*;

    fn p(mu: f64, sigma: f64, q: f64) -> QGaussianParams {
        QGaussianParams::new(mu, sigma, q).unwrap()
    }

    #[test]
    fn derived_constants() {
        let d = derive_params(&p(0.0, 1.0, 0.0));
        assert_eq!(d.regime, Regime::Bounded);
        assert_eq!(d.theta, Some(2.0));
        assert!((d.a.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(d.nu.is_none());
        let d = derive_params(&p(0.0, 1.0, 2.0));
        assert_eq!(d.regime, Regime::Heavy);
        assert_eq!(d.nu, Some(1.0));
        assert!((d.b.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(derive_params(&p(0.0, 1.0, 1.0)).regime, Regime::Gaussian);
        assert_eq!(derive_params(&p(0.0, 1.0, 1.0 + 1e-13)).regime, Regime::Gaussian);
    }

    #[test]
    fn validation() {
        assert!(QGaussianParams::new(0.0, 1.0, 3.5).unwrap_err().to_string().contains("q < 3"));
        assert!(QGaussianParams::new(0.0, 1.0, 3.0).is_err());
        assert!(QGaussianParams::new(0.0, 1.0, 3.0 - 1e-7).is_err());
        assert!(QGaussianParams::new(0.0, 1.0, 3.0 - 1e-6).is_ok());
        assert!(QGaussianParams::new(0.0, 0.0, 1.0).is_err());
        assert!(QGaussianParams::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(sigma_from_tsallis_beta(0.0).is_err());
        assert!(LinearModel::new(vec![]).is_err());
        assert!(LinearModel::new(vec![(0.0, p(0.0, 1.0, 1.0))]).is_err());
        assert!(LinearModel::new(vec![(f64::INFINITY, p(0.0, 1.0, 1.0))]).is_err());
    }

    #[test]
    fn tsallis_beta_and_support() {
        assert_eq!(sigma_from_tsallis_beta(2.0).unwrap(), 0.5);
        assert_eq!(sigma_from_tsallis_beta(0.5).unwrap(), 1.0);
        assert!((sigma_from_tsallis_beta(5.0).unwrap() - 0.316_227_766_016_837_94).abs() < 1e-15);
        let (lo, hi) = support(&p(0.0, 3.0, -100.0)).unwrap();
        let half = 3.0 * (2.0f64 / 101.0).sqrt();
        assert!((lo + half).abs() < 1e-15 && (hi - half).abs() < 1e-15);
        assert!((half - 0.422_17).abs() < 2e-5);
        assert!(support(&p(0.0, 1.0, 1.0)).is_none());
        assert_eq!(support(&p(1.0, 1.0, 0.5)), Some((-1.0, 3.0)));
    }

    #[test]
    fn standard_cf_spot_values() {
        assert!((cf_standard(1.0, 1.0).unwrap().re - 0.606_530_659_712_633_4).abs() < 1e-16);
        let cauchy = cf_standard(1.0, 2.0).unwrap();
        assert!((cauchy.re - 0.243_116_734_434_214_2).abs() < 1e-15);
        assert_eq!(cauchy.im, 0.0);
        let b = cf_standard(0.7, 0.0).unwrap().re;
        assert!((b - hyp0f1(2.5, -0.245).value).abs() < 1e-16);
        assert_eq!(cf_standard(0.0, -3.0).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn lifted_cf() {
        let z = cf_tqg(1.0, &p(2.0, 1.0, 1.0));
        let want = Complex64::new(0.0, 2.0).exp() * (-0.5f64).exp();
        assert!((z - want).norm() < 1e-16);
        let z = cf_tqg(1.0, &p(0.0, 2.0, 2.0));
        assert!((z.re - (-2.0 * 2f64.sqrt()).exp()).abs() < 1e-16);
        assert_eq!(cf_tqg(0.0, &p(5.0, 2.0, 0.3)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn linear_combination() {
        let g = p(0.0, 1.0, 1.0);
        let m = LinearModel::new(vec![(1.0, g), (1.0, g)]).unwrap();
        assert!((cf_linear_combination(1.0, &m).re - (-1f64).exp()).abs() < 1e-16);
        let single = LinearModel::new(vec![(1.0, p(0.3, 2.0, 1.7))]).unwrap();
        for &t in &[-3.0, 0.1, 2.5] {
            assert!((single.eval(t) - cf_tqg(t, &single.terms()[0].params)).norm() < 1e-15);
        }
        // Example-1 model as an explicit product of bounded factors.
        let terms = [(0.8, p(0.0, 3.0, -100.0)), (0.15, p(0.0, 2.0, -10.0)), (0.05, p(0.0, 1.0, 0.0))];
        let m = LinearModel::new(terms.to_vec()).unwrap();
        let mut prod = Complex64::new(1.0, 0.0);
        for (c, q) in terms {
            let d = q.derived();
            let at = d.a.unwrap() * c * q.sigma();
            prod *= hyp0f1(d.theta.unwrap() + 0.5, -0.25 * at * at).value;
        }
        assert!((m.eval(1.0) - prod).norm() < 1e-15);
        let (lo, hi) = m.bounded_support().unwrap();
        assert!((hi + lo).abs() < 1e-15 && (hi - 0.536_38).abs() < 1e-4);
    }

    #[test]
    fn regime_boundary_is_continuous() {
        for &q in &[1.0 - 1e-6, 1.0 + 1e-6] {
            for i in 0..=100 {
                let t = -10.0 + 0.2 * i as f64;
                let got = cf_standard(t, q).unwrap().re;
                assert!((got - (-0.5 * t * t).exp()).abs() <= 1e-4, "q={q} t={t}: {got}");
            }
        }
    }

    #[test]
    fn bounded_cf_matches_beta_density_quadrature() {
        for &q in &[-100.0, -5.0, -1.0, 0.0, 0.5, 0.9] {
            let prm = p(0.0, 1.0, q);
            let (lo, hi) = support(&prm).unwrap();
            for &t in &[0.3, 1.0, 4.0, 12.5] {
                let f = |x: f64| (t * x).cos() * pdf_direct(x, &prm);
                let r = integrate(&f, &[lo, 0.0, hi], 1e-13, 1e-13, 2000);
                let got = cf_standard(t, q).unwrap().re;
                assert!((got - r.value).abs() < 1e-8, "q={q} t={t}: {got} vs {}", r.value);
            }
        }
    }

    #[test]
    fn heavy_cf_half_integer_closed_forms() {
        // ν = 1 at q = 2, ν = 3 at q = 3/2.
        for i in 0..200 {
            let t = 0.05 * i as f64;
            let b1 = 2f64.sqrt();
            let want1 = (-b1 * t).exp();
            let got1 = cf_standard(t, 2.0).unwrap().re;
            assert!((got1 - want1).abs() <= 1e-10 * want1, "t={t}");
            let b3 = (2.0f64 / 1.5).sqrt() * 3f64.sqrt();
            let want3 = (1.0 + b3 * t) * (-b3 * t).exp();
            let got3 = cf_standard(t, 1.5).unwrap().re;
            assert!((got3 - want3).abs() <= 1e-10 * want3, "t={t}");
        }
    }

    #[test]
    fn pdf_direct_values_and_normalization() {
        assert!((pdf_direct(0.0, &p(0.0, 1.0, 1.0)) - 0.398_942_280_401_432_7).abs() < 1e-16);
        assert_eq!(pdf_direct(2.0, &p(0.0, 1.0, 0.0)), 0.0);
        let cauchy = pdf_direct(0.0, &p(0.0, 1.0, 2.0));
        assert!((cauchy - 1.0 / (PI * 2f64.sqrt())).abs() < 1e-15);
        for &(q, sigma) in &[(-100.0, 3.0), (-1.0, 1.0), (0.0, 0.5), (0.99, 2.0), (1.0, 1.0)] {
            let prm = p(0.3, sigma, q);
            let (lo, hi) = support(&prm).unwrap_or((0.3 - 40.0 * sigma, 0.3 + 40.0 * sigma));
            let r = integrate(&|x| pdf_direct(x, &prm), &[lo, 0.3, hi], 1e-12, 1e-12, 2000);
            assert!((r.value - 1.0).abs() < 1e-8, "q={q}: {}", r.value);
        }
        // Heavy tails: the core directly, each tail in x = ±e^u.
        for &q in &[1.2, 1.5, 2.0, 2.5, 2.9] {
            let prm = p(0.0, 1.0, q);
            let core = integrate(&|x| pdf_direct(x, &prm), &[-1.0, 0.0, 1.0], 1e-13, 1e-13, 500);
            let tail = |u: f64| {
                let x = u.exp();
                pdf_direct(x, &prm) * x
            };
            let breaks: Vec<f64> = (0..=14).map(|k| 50.0 * k as f64).collect();
            let right = integrate(&tail, &breaks, 1e-13, 1e-13, 5000);
            let total = core.value + 2.0 * right.value;
            assert!((total - 1.0).abs() < 1e-8, "q={q}: {total}");
        }
    }

    proptest! {
        #[test]
        fn cf_axioms(
            mu in -5.0f64..5.0,
            sigma in 0.01f64..10.0,
            q in -50.0f64..2.99,
            c in -3.0f64..3.0,
            t in -200.0f64..200.0,
        ) {
            let m = LinearModel::new(vec![(c, p(mu, sigma, q)), (1.0, p(0.0, 1.0, 0.5))]).unwrap();
            prop_assert_eq!(m.eval(0.0), Complex64::new(1.0, 0.0));
            let z = m.eval(t);
            prop_assert!(z.norm() <= 1.0 + 1e-13);
            prop_assert_eq!(m.eval(-t), z.conj());
            let centered = LinearModel::new(vec![(c, p(0.0, sigma, q))]).unwrap();
            let w = centered.eval(t);
            prop_assert_eq!(w.im, 0.0);
            prop_assert_eq!(centered.eval(-t), w);
        }
    }
}
