//! Cross-module invariants that tie the integrator to the closed forms.

use nlqs::closedform::{self, CompleteSearchParams};
use nlqs::dynamics::{self, Controls, GammaPolicy, Nonlinearity, SearchConfig};
use std::f64::consts::{FRAC_PI_2, PI};

/// Integrator vs closed form, pointwise over a full period, for both sizes
/// and both couplings.
#[test]
fn cubic_closed_form_agreement_grid() {
    for n in [100usize, 1000] {
        let nf = n as f64;
        for g_big in [0.1, 1.0] {
            let g = g_big * (nf - 1.0);
            let config =
                SearchConfig::complete(n, 1, Nonlinearity::Cubic { g }, GammaPolicy::CubicCritical);
            let params = CompleteSearchParams::new(nf, 1.0, g);
            let t_star = closedform::cubic_runtime(&params);
            let controls = Controls { sample_dt: t_star / 1500.0, ..Default::default() };
            let traj = dynamics::integrate(&config, 2.0 * t_star, &controls).unwrap();
            let mut worst = 0.0f64;
            for s in &traj.samples {
                worst = worst.max((s.probs[0] - closedform::cubic_prob(&params, s.t)).abs());
            }
            assert!(worst <= 1e-6, "N={n} G={g_big}: max deviation {worst:.2e}");
        }
    }
}

/// The success probability is periodic with period 2t*.
#[test]
fn cubic_periodicity() {
    for n in [100usize, 1000] {
        let nf = n as f64;
        let g = nf - 1.0;
        let config =
            SearchConfig::complete(n, 1, Nonlinearity::Cubic { g }, GammaPolicy::CubicCritical);
        let controls = Controls { sample_dt: 0.001, ..Default::default() };
        let traj = dynamics::integrate(&config, 2.0 * FRAC_PI_2, &controls).unwrap();
        let last = traj.samples.last().unwrap();
        assert!(
            (last.probs[0] - 1.0 / nf).abs() <= 1e-4,
            "N={n}: x(2t*) = {}, expected 1/N = {}",
            last.probs[0],
            1.0 / nf
        );
    }
}

/// Time-rescaling identity: along a critical-γ cubic run,
/// x(t) = sin²(τ/√N) + cos²(τ/√N)/N with τ = ∫γN dt = (1−G)t + GN∫x dt.
/// Checked as a residual on integrator output, with the integral accumulated
/// by the trapezoid rule on the same samples.
#[test]
fn rescaled_time_residual_identity() {
    let n = 100usize;
    let nf = n as f64;
    let g_big = 1.0;
    let g = g_big * (nf - 1.0);
    let config =
        SearchConfig::complete(n, 1, Nonlinearity::Cubic { g }, GammaPolicy::CubicCritical);
    let controls = Controls { sample_dt: 2e-4, ..Default::default() };
    let traj = dynamics::integrate(&config, PI, &controls).unwrap();
    let mut integral = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let x = s.probs[0];
        if let Some((t0, x0)) = prev {
            integral += 0.5 * (x + x0) * (s.t - t0);
        }
        prev = Some((s.t, x));
        let tau = (1.0 - g_big) * s.t + g_big * nf * integral;
        let predicted = (tau / nf.sqrt()).sin().powi(2) + (tau / nf.sqrt()).cos().powi(2) / nf;
        worst = worst.max((x - predicted).abs());
    }
    assert!(worst <= 1e-4, "rescaled-time residual {worst:.2e}");
}

/// Closed-form/quadrature equivalence for cubic and cubic-quintic runtimes
/// over the full 3×3×3 (N, k, g) grid.
#[test]
fn runtime_equivalence_grid() {
    for &n in &[500.0, 1000.0, 2000.0] {
        for &k in &[1.0, 2.0, 5.0] {
            for &g in &[1.0, 10.0, 100.0] {
                let cubic_closed = closedform::cubic_runtime(&CompleteSearchParams::new(n, k, g));
                let cubic_quad =
                    closedform::general_runtime(&Nonlinearity::Cubic { g }, n, k).unwrap();
                assert!(
                    (cubic_closed - cubic_quad).abs() <= 1e-6 * cubic_closed,
                    "cubic N={n} k={k} g={g}: {cubic_closed} vs {cubic_quad}"
                );
                let cq = closedform::cq_runtime(n, k, g).unwrap();
                assert!(!cq.used_fallback);
                let cq_quad =
                    closedform::general_runtime(&Nonlinearity::CubicQuintic { g }, n, k).unwrap();
                assert!(
                    (cq.value - cq_quad).abs() <= 1e-6 * cq_quad,
                    "cq N={n} k={k} g={g}: {} vs {cq_quad}",
                    cq.value
                );
            }
        }
    }
}

/// Perturbative strongly-regular predictions against integrated runs.
#[test]
fn srg_predictions_match_integration() {
    use nlqs::dynamics::GraphSource;
    use nlqs::graphs::SrgParams;

    // k = o(N): predicted peak within 5% of the integrated peak at γ_c2
    let latin = SrgParams::new(900, 87, 30, 6);
    let pred = closedform::srg_prediction(&latin).unwrap();
    let config = SearchConfig {
        graph: GraphSource::srg(latin),
        marked_count: 1,
        nonlinearity: Nonlinearity::Linear,
        policy: GammaPolicy::SrgC2,
    };
    let t_end = 1.4 * PI * 30.0 / 2.0;
    let controls = Controls { sample_dt: t_end / 4000.0, ..Default::default() };
    let traj = dynamics::integrate(&config, t_end, &controls).unwrap();
    let (_t, peak) = traj.peak().unwrap();
    assert!(pred.peak <= 1.0);
    assert!(
        (pred.peak / peak - 1.0).abs() <= 0.05,
        "predicted {} vs integrated {peak}",
        pred.peak
    );

    // k = Θ(N): predicted runtime within 2% of the integrated first peak at γ_c1
    let paley = SrgParams::new(101, 50, 24, 25);
    let pred = closedform::srg_prediction(&paley).unwrap();
    let config = SearchConfig {
        graph: GraphSource::srg(paley),
        marked_count: 1,
        nonlinearity: Nonlinearity::Linear,
        policy: GammaPolicy::SrgC1,
    };
    let t_end = 1.4 * PI * 101.0f64.sqrt() / 2.0;
    let controls = Controls { sample_dt: t_end / 8000.0, ..Default::default() };
    let traj = dynamics::integrate(&config, t_end, &controls).unwrap();
    let (t_peak, _p) = traj.peak().unwrap();
    assert!(
        (t_peak / pred.t_star - 1.0).abs() <= 0.02,
        "first peak {t_peak} vs predicted {}",
        pred.t_star
    );
}

/// The finite-size hypercube stays near the idealized sufficiently-complete
/// prediction but not on it: at n = 10 and the numeric γ*, the pointwise gap
/// tops out at ≈0.26.
#[test]
fn hypercube_close_to_idealized_prediction() {
    use nlqs::dynamics::GraphSource;
    use nlqs::graphs::{self, Family, FamilySpec};

    let collapsed = graphs::collapse_analytic_hypercube(10);
    let search = dynamics::find_gamma_numeric(&collapsed, (0.02, 1.0), 600);
    let config = SearchConfig {
        graph: GraphSource::Family(FamilySpec::new(Family::Hypercube, 10)),
        marked_count: 1,
        nonlinearity: Nonlinearity::Linear,
        policy: GammaPolicy::Fixed { gamma: search.gamma },
    };
    let controls = Controls { sample_dt: 0.05, ..Default::default() };
    let traj = dynamics::integrate(&config, 60.0, &controls).unwrap();
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let pred = closedform::suff_complete_probs(&collapsed, s.t)[0];
        worst = worst.max((s.probs[0] - pred).abs());
    }
    assert!(worst <= 0.27, "pointwise gap {worst}");
    assert!(worst >= 0.05, "n = 10 should still show visible finite-size error, got {worst}");
}

/// The loglinear width expression carries lower-bound semantics: it scales
/// with (N, g) like the measured width at fixed ε, though its Θ(√ε) constant
/// is not part of the expression.
#[test]
fn loglinear_width_scales_like_the_bound() {
    let eps = 0.01;
    let mut ratios = Vec::new();
    for n in [10_000usize, 40_000] {
        let nf = n as f64;
        let g = 100.0 / nf.ln();
        let config =
            SearchConfig::complete(n, 1, Nonlinearity::Loglinear { g }, GammaPolicy::GeneralCritical);
        let t_guess = closedform::log_runtime_numeric(nf, 1.0, g).unwrap();
        let controls = Controls { sample_dt: t_guess / 2000.0, ..Default::default() };
        let (_t, width) =
            dynamics::measure_peak_width(&config, 1.5 * t_guess, eps, &controls).unwrap();
        let bound = closedform::log_width_lower_bound(nf, 1.0, g, eps);
        ratios.push(width / bound);
    }
    assert!(
        (ratios[0] / ratios[1] - 1.0).abs() <= 0.15,
        "measured/bound ratio drifts: {ratios:?}"
    );
}
