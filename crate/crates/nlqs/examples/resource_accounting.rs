//! Resource accounting: a narrow success peak costs clock ions
//! (time-measurement precision), so runtime alone is a misleading figure of
//! merit. This sweeps the g-exponent κ for cubic search, tabulates
//! space/time products, and locates the jointly optimal exponent.
//!
//!     cargo run --release --example resource_accounting

use nlqs::closedform::{self, CompleteSearchParams};
use nlqs::dynamics::NonlinearityKind;
use nlqs::resources::{self, ResourceModel, ScalingExponents};

fn main() {
    let n = 1.0e6f64;
    let eps = 0.01;
    println!("cubic search on N = {n:.0}, one marked vertex, width at height 1 − {eps}:");
    println!("{:>6} {:>12} {:>12} {:>12} {:>14} {:>14}", "kappa", "T", "width", "S", "ST", "ST^2");
    for kappa in [-0.5, 0.0, 0.25, 0.5, 0.75, 1.0] {
        let g = n.powf(kappa);
        let p = CompleteSearchParams::new(n, 1.0, g).with_epsilon(eps);
        let t = closedform::cubic_runtime(&p);
        let width = closedform::cubic_width_leading(&p);
        let model = ResourceModel::new(t, width, n);
        let s = resources::space_requirement(&model);
        let st = resources::st_products(&model);
        println!(
            "{kappa:>6} {t:>12.4} {width:>12.6} {s:>12.2} {:>14.2} {:>14.2}",
            st.st, st.st2
        );
    }

    for (kind, label) in [
        (NonlinearityKind::Cubic, "cubic"),
        (NonlinearityKind::CubicQuintic, "cubic-quintic"),
        (NonlinearityKind::Loglinear, "loglinear"),
    ] {
        let opt = resources::optimize_exponent(kind, 0.0);
        println!(
            "\n{label}: optimal control exponent {} → ST ∝ {}",
            opt.exponent_star, opt.st_scaling
        );
    }

    // particle-count lower bounds at the strongest settings
    let cubic_bound =
        resources::n0_lower_bound(NonlinearityKind::Cubic, &ScalingExponents::new(1.0, 0.0), n);
    println!(
        "\nparticle count at κ = 1 (cubic): N₀ ≳ {:.3e}   [{}]",
        cubic_bound.value, cubic_bound.regime
    );
    let log_bound = resources::n0_lower_bound(
        NonlinearityKind::Loglinear,
        &ScalingExponents::new(0.0, 0.0).with_sigma(0.75),
        n,
    );
    println!(
        "particle count at σ = 3/4 (loglinear): N₀ ≳ {:.3e}   [{}]",
        log_bound.value, log_bound.regime
    );
}
