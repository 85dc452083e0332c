use proptest::prelude::*;

use tsallis_cf::cli::{preset, run_dist, BackendChoice};
use tsallis_cf::error::Error;
use tsallis_cf::inversion::{cdf_adaptive, invert, quantile_adaptive, Backend, InversionOptions};
use tsallis_cf::qmodel::{cf_tqg, LinearModel, QGaussianParams};

fn term(centered: bool) -> impl Strategy<Value = (f64, QGaussianParams)> {
    let q = prop_oneof![-4.0..0.9f64, Just(1.0), 1.1..2.6f64];
    let mu = if centered { Just(0.0).boxed() } else { (-2.0..2.0f64).boxed() };
    (prop_oneof![-2.0..-0.1f64, 0.1..2.0f64], mu, 0.2..2.0f64, q)
        .prop_map(|(c, mu, s, q)| (c, QGaussianParams::new(mu, s, q).unwrap()))
}

fn model(centered: bool) -> impl Strategy<Value = LinearModel> {
    prop::collection::vec(term(centered), 1..4).prop_map(|t| LinearModel::new(t).unwrap())
}

fn adaptive() -> InversionOptions {
    InversionOptions { backend: Backend::Adaptive, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn grid_cdf_is_monotone(m in model(false)) {
        let lo = quantile_adaptive(&m, 0.001, &adaptive()).unwrap();
        let hi = quantile_adaptive(&m, 0.999, &adaptive()).unwrap();
        let x: Vec<f64> = (0..201).map(|k| lo + (hi - lo) * k as f64 / 200.0).collect();
        // Tails too heavy for this grid size are refused rather than returned.
        let r = match invert(&m, &x, &[], &InversionOptions { n_points: 1 << 12, ..Default::default() }) {
            Err(Error::ConvergenceFailure(_)) => return Err(TestCaseError::reject("grid too short")),
            r => r.unwrap(),
        };
        for w in r.cdf.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        prop_assert!(r.cdf.iter().all(|c| (0.0..=1.0).contains(c)));
    }

    #[test]
    fn centered_models_are_symmetric(m in model(true), x in 0.0..3.0f64) {
        let o = adaptive();
        let (a, b) = (cdf_adaptive(&m, -x, &o).unwrap().value, cdf_adaptive(&m, x, &o).unwrap().value);
        prop_assert!((a + b - 1.0).abs() <= 1e-7, "{a} + {b}");
    }

    #[test]
    fn quantile_inverts_cdf(m in model(false), p in 0.005..0.995f64) {
        let o = adaptive();
        let x = quantile_adaptive(&m, p, &o).unwrap();
        let back = quantile_adaptive(&m, cdf_adaptive(&m, x, &o).unwrap().value, &o).unwrap();
        prop_assert!((back - x).abs() <= 1e-6 * (1.0 + x.abs()), "{x} -> {back}");
    }

    #[test]
    fn cf_continuous_across_the_gaussian(t in 0.0..6.0f64, mu in -1.0..1.0f64, s in 0.2..2.0f64) {
        let gauss = cf_tqg(t, &QGaussianParams::new(mu, s, 1.0).unwrap());
        for eps in [1e-3, 1e-5] {
            for q in [1.0 - eps, 1.0 + eps] {
                let z = cf_tqg(t, &QGaussianParams::new(mu, s, q).unwrap());
                prop_assert!((z - gauss).norm() <= 20.0 * eps, "q = {q}: {z} vs {gauss}");
            }
        }
    }
}

#[test]
fn backends_agree_on_example_endpoints() {
    for name in ["example1", "example2", "example3"] {
        let spec = preset(name).unwrap();
        let m = spec.model().unwrap();
        let ends = |choice| {
            let r = run_dist(&spec, &m, None, None, None, choice, None).unwrap_or_else(|e| panic!("{}", e.message));
            let c = r.coverage.unwrap();
            (c.lower, c.upper)
        };
        let (g, a) = (ends(BackendChoice::Grid), ends(BackendChoice::Adaptive));
        assert!((g.0 - a.0).abs() <= 1e-6 && (g.1 - a.1).abs() <= 1e-6, "{name}: {g:?} vs {a:?}");
    }
}
