use std::f64::consts::PI;

use super::SpecFunResult;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which Γ(z) is finite in double precision.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// Taylor coefficients of 1/Γ(1+x) about x = 0.
pub(crate) const RGAMMA1P: [f64; 29] = [
    1.0,
    0.577_215_664_901_532_860_6,
    -0.655_878_071_520_253_881_1,
    -0.042_002_635_034_095_235_53,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_75,
    -0.009_621_971_527_876_973_562,
    0.007_218_943_246_663_099_542,
    -0.001_165_167_591_859_065_112,
    -0.000_215_241_674_114_950_972_8,
    0.000_128_050_282_388_116_186_2,
    -0.000_020_134_854_780_788_238_66,
    -1.250_493_482_142_670_657e-6,
    1.133_027_231_981_695_882e-6,
    -2.056_338_416_977_607_104e-7,
    6.116_095_104_481_415_818e-9,
    5.002_007_644_469_222_930e-9,
    -1.181_274_570_487_020_145e-9,
    1.043_426_711_691_100_511e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783e-14,
    -5.348_122_539_423_017_982e-15,
    1.226_778_628_238_260_790e-15,
    -1.181_259_301_697_458_770e-16,
    1.186_692_254_751_600_333e-18,
    1.412_380_655_318_031_782e-18,
    -2.298_745_684_435_370_207e-19,
];

pub fn gamma_fn(z: f64) -> SpecFunResult {
    if z.is_nan() || (z <= 0.0 && z == z.floor()) {
        return SpecFunResult::domain();
    }
    if z > GAMMA_MAX_ARG {
        return SpecFunResult::overflow(1.0);
    }
    if z == z.floor() && z <= 171.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < z {
            acc *= k;
            k += 1.0;
        }
        return SpecFunResult::ok(acc);
    }
    if z < 0.5 {
        // Reflection: Γ(z)Γ(1-z) = π / sin(πz).
        let s = (PI * z).sin();
        let g = lanczos(1.0 - z);
        let v = PI / (s * g);
        return if v.is_finite() { SpecFunResult::ok(v) } else { SpecFunResult::overflow(v.signum()) };
    }
    SpecFunResult::ok(lanczos(z))
}

/// Lanczos approximation for z ≥ 1/2. The power is split in two halves so
/// the intermediate never overflows below the true overflow threshold.
fn lanczos(z: f64) -> f64 {
    let x = z - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * a
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x < 10.0 {
        return gamma_fn(x).value.ln();
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + stirling_correction(x)
}

/// lnΓ(x) − [(x − ½) ln x − x + ½ ln 2π], the remainder of Stirling's series.
pub(crate) fn stirling_correction(x: f64) -> f64 {
    if x < 10.0 {
        // Shift up: lnΓ(x) = lnΓ(x+n) − ln(x(x+1)…(x+n−1)).
        let n = (10.0 - x).ceil();
        let shifted = x + n;
        let mut log_prod = 0.0;
        let mut k = 0.0;
        while k < n {
            log_prod += (x + k).ln();
            k += 1.0;
        }
        let lg =
            (shifted - 0.5) * shifted.ln() - shifted + 0.5 * (2.0 * PI).ln() + stirling_correction(shifted) - log_prod;
        return lg - ((x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln());
    }
    let r = 1.0 / x;
    let r2 = r * r;
    // Bernoulli terms B_{2k} / (2k(2k-1)).
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 * (1.0 / 156.0)))))))
}

/// 1/Γ(1+x) for |x| ≤ 1/2 from its Taylor series.
pub(crate) fn rgamma1p(x: f64) -> f64 {
    RGAMMA1P.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::Status;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn known_values() {
        assert_eq!(gamma_fn(1.0).value, 1.0);
        assert_eq!(gamma_fn(5.0).value, 24.0);
        assert!(rel(gamma_fn(0.5).value, 1.772_453_850_905_516) < 1e-15);
        // mpmath reference; the power term costs about z·ε near overflow.
        assert!(rel(gamma_fn(170.5).value, 5.562_092_414_559_999_6e305) < 5e-13);
        assert!(rel(gamma_fn(-0.5).value, -3.544_907_701_811_032) < 1e-14);
    }

    #[test]
    fn poles_and_overflow() {
        assert_eq!(gamma_fn(0.0).status, Status::DomainError);
        assert_eq!(gamma_fn(-3.0).status, Status::DomainError);
        assert_eq!(gamma_fn(172.0).status, Status::Overflow);
        assert_eq!(gamma_fn(171.5).status, Status::Ok);
    }

    #[test]
    fn recurrence_holds() {
        let mut z = 0.013;
        while z < 100.0 {
            let lhs = gamma_fn(z + 1.0).value;
            let rhs = z * gamma_fn(z).value;
            assert!(rel(lhs, rhs) < 1e-12, "z={z}: {lhs} vs {rhs}");
            z += 0.377;
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.1, 0.9, 3.3, 9.99, 10.0, 10.5, 57.2, 150.0] {
            let lg = ln_gamma(x);
            assert!((lg - gamma_fn(x).value.ln()).abs() < 1e-12 * lg.abs().max(1.0), "x={x}");
        }
        // mpmath: loggamma(1e6)
        assert!(rel(ln_gamma(1e6), 12_815_504.569_147_61) < 1e-15);
    }

    #[test]
    fn stirling_remainder_small_and_large() {
        for &x in &[0.3, 2.0, 7.5, 10.0, 42.0] {
            let direct = ln_gamma(x) - ((x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln());
            assert!((stirling_correction(x) - direct).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn reciprocal_gamma_series() {
        for &x in &[-0.5, -0.3, -1e-3, 0.0, 0.2, 0.5] {
            let expect = 1.0 / gamma_fn(1.0 + x).value;
            assert!((rgamma1p(x) - expect).abs() < 1e-15, "x={x}");
        }
    }
}
