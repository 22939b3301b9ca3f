use std::f64::consts::PI;

use blockage_core::link_stats::{
    beta_approx, cdf_s_uniform_gamma, expected_blockages, height_factor, laplace_s_db,
    los_probability, mean_received_power, moment_s, pdf_s_uniform_gamma, GammaModel, HeightContext,
    LinkType, LossModel,
};
use blockage_core::network::{
    average_rate, baseline_coverage_no_blockage, coverage_probability, mean_visible_area,
    nearest_visible_ccdf, nearest_visible_pdf, silent_fraction, visible_measure, NetworkParams,
    QuadratureConfig,
};
use blockage_core::processes::DistSpec;
use proptest::prelude::*;
use statrs::function::gamma::gamma_lr;

/// `P{S <= y}` for uniform γ: given K = k ≥ 1, `-ln S ~ Gamma(k, 1)`.
fn cdf_series(y: f64, m: f64) -> f64 {
    let l = -y.ln();
    let mut pmf = (-m).exp();
    let mut total = 0.0;
    for k in 1..400 {
        pmf *= m / k as f64;
        total += pmf * (1.0 - gamma_lr(k as f64, l));
        if pmf < 1e-18 && k as f64 > m {
            break;
        }
    }
    total
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn uniform_loss_cdf_matches_compound_poisson_series(
        beta in 1e-4f64..0.05, p in 0.0f64..1.5, r in 1.0f64..300.0, y in 1e-6f64..0.999,
    ) {
        let m = expected_blockages(beta, p, r);
        let got = cdf_s_uniform_gamma(y, beta, p, r).unwrap();
        prop_assert!((got - cdf_series(y, m)).abs() < 1e-8, "{} vs {}", got, cdf_series(y, m));
    }

    #[test]
    fn uniform_loss_density_reproduces_laplace_transform(
        beta in 1e-3f64..0.03, p in 0.0f64..1.0, r in 10.0f64..150.0, t in 0.01f64..2.0,
    ) {
        // in L = -ln S the dB loss is 10 L / ln 10
        let (atom, _) = pdf_s_uniform_gamma(0.5, beta, p, r).unwrap();
        let k = 10.0 / std::f64::consts::LN_10;
        let body = simpson(
            |l| {
                let y = (-l).exp();
                let (_, f) = pdf_s_uniform_gamma(y, beta, p, r).unwrap();
                f * y * (-t * k * l).exp()
            },
            1e-12,
            120.0,
            60_000,
        );
        let exact = laplace_s_db(t, &GammaModel::Uniform01, beta, p, r).unwrap();
        prop_assert!((atom + body - exact).abs() < 1e-6, "{} vs {}", atom + body, exact);
    }

    #[test]
    fn beta_mixture_matches_first_two_moments(
        beta in 1e-4f64..0.05, p in 0.0f64..2.0, r in 1.0f64..400.0,
        mean in 0.02f64..0.98, spread in 0.05f64..0.95,
    ) {
        let mean_sq = mean * mean + spread * (mean - mean * mean);
        let g = GammaModel::Custom { mean, mean_sq };
        let law = beta_approx(&g, beta, p, r).unwrap();
        let LossModel::BetaMixture { a, b, delta0 } = law else {
            panic!("penetrable loss must use the beta mixture")
        };
        prop_assert!(a > 0.0 && b > 0.0);
        prop_assert!((delta0 - los_probability(beta, p, r)).abs() < 1e-15);
        for n in 1..=2 {
            let exact = moment_s(n, &g, beta, p, r).unwrap();
            prop_assert!((law.moment(n) - exact).abs() < 1e-10 * exact.max(1e-3), "n={} {} vs {}", n, law.moment(n), exact);
        }
        prop_assert!(law.cdf(0.0) >= 0.0 && law.cdf(0.999_999) <= 1.0 - delta0 + 1e-12);
    }

    #[test]
    fn nearest_visible_law_is_consistent(
        mu in 1e-6f64..1e-3, beta in 1e-4f64..0.05, p in 0.0f64..2.0, x in 1.0f64..800.0,
    ) {
        let ccdf = nearest_visible_ccdf(x, mu, beta, p);
        let xi = silent_fraction(mu, beta, p);
        prop_assert!(ccdf >= xi - 1e-15 && ccdf <= 1.0);
        // the pdf is minus the derivative of the ccdf
        let h = 1e-4 * x;
        let slope = (nearest_visible_ccdf(x - h, mu, beta, p) - nearest_visible_ccdf(x + h, mu, beta, p)) / (2.0 * h);
        let pdf = nearest_visible_pdf(x, mu, beta, p);
        prop_assert!((slope - pdf).abs() <= 1e-5 * pdf + 1e-14, "{} vs {}", slope, pdf);
        // U(x) approaches the mean visible area / 2π
        let far = visible_measure(1e3 / beta, beta, p);
        prop_assert!((2.0 * PI * far - mean_visible_area(beta, p)).abs() < 1e-9 * mean_visible_area(beta, p));
    }

    #[test]
    fn conditioned_power_orders_link_types(
        beta in 0.0f64..0.05, p in 0.0f64..2.0, r in 1.0f64..500.0, eg in 0.0f64..1.0,
    ) {
        let g = GammaModel::Constant { gamma: eg };
        let pw = |t| mean_received_power(1.0, r, 3.0, &g, beta, p, t).unwrap();
        let (gen, out, ind) = (pw(LinkType::General), pw(LinkType::OutdoorOutdoor), pw(LinkType::IndoorOutdoor));
        prop_assert!(gen <= out * (1.0 + 1e-12));
        prop_assert!(ind <= out * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn coverage_is_a_bounded_decreasing_curve(
        mu in 5e-6f64..5e-4, alpha in 2.5f64..5.0, beta in 1e-3f64..0.05, p in 0.0f64..1.5,
    ) {
        let net = NetworkParams::new(mu, alpha, beta, p);
        let quad = QuadratureConfig::default();
        let xi = silent_fraction(mu, beta, p);
        let mut prev = 1.0;
        for db in [-10.0, 0.0, 10.0, 30.0] {
            let c = coverage_probability(10f64.powf(db / 10.0), &net, &quad).unwrap();
            prop_assert!(c.unconditional >= 0.0 && c.unconditional <= 1.0 - xi + 1e-9);
            prop_assert!(c.unconditional <= prev + 1e-9, "not decreasing at {} dB", db);
            prop_assert!((c.conditional * (1.0 - xi) - c.unconditional).abs() < 1e-9);
            prev = c.unconditional;
        }
    }
}

#[test]
fn height_factor_for_constant_height_is_the_clearance_fraction() {
    for h in [0.0, 5.0, 12.0, 29.0, 40.0] {
        let ctx = HeightContext {
            h_base: 30.0,
            h_user: 1.5,
            heights: DistSpec::constant(h),
        };
        let exact = ((h - 1.5) / 28.5).clamp(0.0, 1.0);
        assert!(
            (height_factor(&ctx).unwrap() - exact).abs() < 1e-12,
            "h={h}"
        );
    }
}

#[test]
fn height_factor_for_uniform_heights() {
    // H ~ U[0, 2c]: η = 1 - (1/(hb-hu)) ∫_{hu}^{hb} h/(2c) dh for hb ≤ 2c
    let ctx = HeightContext {
        h_base: 20.0,
        h_user: 2.0,
        heights: DistSpec::uniform(0.0, 40.0),
    };
    let exact = 1.0 - (20.0f64.powi(2) - 2.0f64.powi(2)) / (2.0 * 40.0) / 18.0;
    assert!((height_factor(&ctx).unwrap() - exact).abs() < 1e-10);
}

#[test]
fn coverage_without_blockage_ignores_density() {
    let quad = QuadratureConfig::default();
    for mu in [1e-6, 1e-4, 1e-2] {
        let c = coverage_probability(1.0, &NetworkParams::new(mu, 4.0, 0.0, 0.0), &quad).unwrap();
        assert!((c.unconditional - 1.0 / (1.0 + PI / 4.0)).abs() < 1e-9);
    }
    // α = 4: ρ = √T (π/2 - atan(1/√T))
    for t in [0.1f64, 3.0, 25.0] {
        let rho = t.sqrt() * (PI / 2.0 - (1.0 / t.sqrt()).atan());
        let got = baseline_coverage_no_blockage(t, 4.0).unwrap();
        assert!((got - 1.0 / (1.0 + rho)).abs() < 1e-10, "T={t}");
    }
}

#[test]
fn rate_grows_with_the_sir_cap() {
    let quad = QuadratureConfig::default();
    let base = NetworkParams::new(1e-4, 4.0, 0.01, 0.2);
    let low = average_rate(&base.with_t_max_db(20.0), &quad).unwrap();
    let high = average_rate(&base.with_t_max_db(40.0), &quad).unwrap();
    assert!(low > 0.0 && high > low, "{low} {high}");
}
