use std::f64::consts::PI;

use super::bessel::{hyp0f1_series, jy, ln_bessel_j_normalized_debye, DEBYE_ORDER};
use super::gamma::ln_gamma;
use super::SpecFunResult;

/// |z| up to which the power series is used regardless of b.
const SERIES_ABS_Z: f64 = 16.0;

/// Confluent hypergeometric limit function ₀F₁(b; z) for b > 0.
///
/// For z < 0 beyond the series range it switches to
/// ₀F₁(b; −x²/4) = Γ(b) (x/2)^{1−b} J_{b−1}(x), using the uniform expansion
/// of J when the order is large and the argument well below it.
pub fn hyp0f1(b: f64, z: f64) -> SpecFunResult {
    if !(b > 0.0) || z.is_nan() || b.is_infinite() {
        return SpecFunResult::domain();
    }
    if z == 0.0 {
        return SpecFunResult::ok(1.0);
    }
    if z > 0.0 {
        let v = hyp0f1_series(b, z);
        return if v.is_finite() { SpecFunResult::ok(v) } else { SpecFunResult::overflow(1.0) };
    }
    if z.is_infinite() {
        return SpecFunResult::underflow();
    }
    let az = -z;
    if az <= SERIES_ABS_Z || az <= 2.0 * b {
        return SpecFunResult::ok(hyp0f1_series(b, z));
    }

    let x = 2.0 * az.sqrt();
    let order = b - 1.0;
    if order >= DEBYE_ORDER && x <= 0.5 * order {
        return SpecFunResult::from_log(ln_bessel_j_normalized_debye(order, x), 1.0);
    }
    let ln_pre = ln_gamma(b) + (1.0 - b) * (0.5 * x).ln();
    if order >= 0.0 {
        match jy(order, x) {
            Some(parts) => SpecFunResult::from_log(ln_pre + parts.ln_abs_j, parts.sign_j),
            None => SpecFunResult::domain(),
        }
    } else {
        // J_{−μ} = cos(μπ) J_μ − sin(μπ) Y_μ for 0 < μ < 1.
        let mu = -order;
        match jy(mu, x) {
            Some(parts) => {
                let j_mu = parts.sign_j * parts.ln_abs_j.exp();
                let j = (mu * PI).cos() * j_mu - (mu * PI).sin() * parts.y;
                SpecFunResult::from_log(ln_pre + j.abs().ln(), j.signum())
            }
            None => SpecFunResult::domain(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel::steed_jy;
    use crate::specfun::{gamma_fn, Status};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn elementary_identities() {
        assert_eq!(hyp0f1(2.5, 0.0).value, 1.0);
        assert!(rel(hyp0f1(0.5, -PI * PI / 4.0).value, -1.0) < 1e-14);
        assert!(rel(hyp0f1(1.5, -0.25).value, 0.841_470_984_807_896_5) < 1e-14);
        // cos and sinc across the series / Bessel crossover.
        for i in 1..400 {
            let x = 0.37 * i as f64;
            let c = hyp0f1(0.5, -x * x / 4.0).value;
            if x.cos().abs() > 1e-2 {
                assert!(rel(c, x.cos()) < 1e-10, "cos at {x}: {c}");
            }
            let s = hyp0f1(1.5, -x * x / 4.0).value;
            if x.sin().abs() > 1e-2 {
                assert!(rel(s, x.sin() / x) < 1e-10, "sinc at {x}: {s}");
            }
        }
    }

    #[test]
    fn positive_argument_and_domain() {
        // ₀F₁(1/2; x²/4) = cosh x.
        assert!(rel(hyp0f1(0.5, 9.0).value, 6f64.cosh()) < 1e-14);
        assert_eq!(hyp0f1(0.0, 1.0).status, Status::DomainError);
        assert_eq!(hyp0f1(-1.0, 1.0).status, Status::DomainError);
        assert_eq!(hyp0f1(1.0, 1e6).status, Status::Overflow);
    }

    #[test]
    fn mpmath_reference_values() {
        // mpmath hyp0f1 at 30 digits.
        let cases = [
            (2.5, -0.245, 0.905_368_439_872_402_8),
            (3.5, -100.0, -0.001_813_707_132_410_961_1),
            (21.0, -1e4, 9.111_446_399_775_166e-24),
            (1.509_900_990_099_01, -1e6, 0.000_437_071_949_893_357_35),
            (1e6, -5e5, 0.606_530_583_896_331),
            (1e6, -4.5e7, 2.859_621_576_415_128e-20),
        ];
        for (b, z, want) in cases {
            let got = hyp0f1(b, z).value;
            assert!(rel(got, want) < 1e-11, "0F1({b}; {z}) = {got}, want {want}");
        }
    }

    #[test]
    fn j_form_exponent_is_theta_minus_half() {
        // ₀F₁(θ+½; −x²/4) = 2^{θ−½} Γ(θ+½) x^{−(θ−½)} J_{θ−½}(x) on the series
        // range, where the two routes are computed independently.
        for &theta in &[1.5, 2.0, 5.0, 20.0] {
            for i in 1..=40 {
                let x = 0.2 * i as f64;
                let lhs = hyp0f1(theta + 0.5, -x * x / 4.0).value;
                let pref = 2f64.powf(theta - 0.5) * gamma_fn(theta + 0.5).value;
                // Steed's method, not the series that backs ₀F₁ here.
                let parts = steed_jy(theta - 0.5, x).unwrap();
                let j = parts.sign_j * parts.ln_abs_j.exp();
                let good = pref * x.powf(-(theta - 0.5)) * j;
                let bad = pref * x.powf(-(theta + 0.5)) * j;
                assert!(rel(lhs, good) < 1e-12, "θ={theta} x={x}");
                assert!(rel(lhs, bad) > 1e-3 || (x - 1.0).abs() < 1e-12);
            }
        }
    }
}
