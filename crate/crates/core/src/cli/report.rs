//! Tables and human-readable summaries.

use std::fmt::Write as _;

use crate::inversion::{Backend, DistResult};
use crate::mcm::McmResult;

/// Value with four decimals, or four in scientific notation from 1e5 up.
pub fn short(v: f64) -> String {
    if v.abs() >= 1e5 {
        format!("{v:.4e}")
    } else {
        format!("{v:.4}")
    }
}

/// Coverage level as a percentage, without rounding noise.
pub fn percent(level: f64) -> String {
    format!("{}", (1e6 * 100.0 * level).round() / 1e6)
}

/// Probability label at 12 significant digits, so (1 − 0.95)/2 reads 0.025.
pub fn prob(p: f64) -> String {
    format!("{}", format!("{p:.11e}").parse::<f64>().unwrap_or(p))
}

/// Machine format: 17 significant digits.
pub fn full(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn dist_csv(r: &DistResult) -> String {
    let mut out = String::from("x,pdf,cdf\n");
    for ((x, p), c) in r.x.iter().zip(&r.pdf).zip(&r.cdf) {
        let _ = writeln!(out, "{},{},{}", full(*x), full(*p), full(*c));
    }
    out
}

pub fn cf_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("t,re,im\n");
    for (t, re, im) in rows {
        let _ = writeln!(out, "{},{},{}", full(*t), full(*re), full(*im));
    }
    out
}

/// Summary of a result; a function of the result alone, so the JSON output
/// read back reproduces it exactly.
pub fn dist_summary(r: &DistResult) -> String {
    let mut out = String::new();
    let d = &r.diagnostics;
    match d.backend_used {
        Backend::Grid => {
            let _ = writeln!(
                out,
                "backend: grid, n_points {}, step {:.3e}, truncation {:.3e}",
                d.n_points.unwrap_or(0),
                d.grid_step.unwrap_or(f64::NAN),
                d.truncation_point
            );
        }
        Backend::Adaptive => {
            let _ = writeln!(out, "backend: adaptive, truncation {:.3e}", d.truncation_point);
        }
    }
    if let Some(c) = r.coverage {
        let _ = writeln!(out, "{}% coverage interval: [{}, {}]", percent(c.level), short(c.lower), short(c.upper));
    }
    for q in &r.quantiles {
        let _ = writeln!(out, "quantile {}: {}", prob(q.prob), short(q.value));
    }
    if !r.x.is_empty() && r.x.len() <= 20 {
        let _ = writeln!(out, "{:>14}  {:>9}", "x", "cdf");
        for (x, c) in r.x.iter().zip(&r.cdf) {
            let _ = writeln!(out, "{:>14}  {c:.5}", format!("{x:e}"));
        }
    }
    let _ = writeln!(out, "points: {}, est_error {:.2e}, elapsed {:.4} s", r.x.len(), d.est_error, d.elapsed_seconds);
    out
}

pub fn mcm_summary(r: &McmResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "MCM {}% coverage interval: [{}, {}]",
        percent(r.coverage_level),
        short(r.ci_lower),
        short(r.ci_upper)
    );
    if let Some(m) = r.sample_mean {
        let _ = writeln!(out, "sample mean: {}", short(m));
    }
    let _ = writeln!(out, "N = {}, seed = {}, elapsed {:.4} s", r.n_samples, r.seed, r.elapsed_seconds);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formats() {
        assert_eq!(short(-0.375135), "-0.3751");
        assert_eq!(short(9.15403e22), "9.1540e22");
        assert_eq!(full(0.1), "1.0000000000000001e-1");
        assert_eq!(full(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(percent(0.95), "95");
        assert_eq!(percent(0.995), "99.5");
        assert_eq!(prob(0.5 * (1.0 - 0.95)), "0.025");
        assert_eq!(prob(1e-10), "0.0000000001");
    }
}
