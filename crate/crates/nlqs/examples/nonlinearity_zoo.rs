//! The three physical nonlinearities side by side, with coefficients scaled
//! to make each runtime constant in N: cubic and cubic-quintic take
//! g = Θ(N), loglinear takes g = Θ(√N/log N). Note how the cubic-quintic
//! peak is wide for one marked vertex but a narrow spike for two — catching
//! the spike is what costs clock resources.
//!
//!     cargo run --release --example nonlinearity_zoo

use nlqs::closedform;
use nlqs::dynamics::{self, Controls, GammaPolicy, Nonlinearity, SearchConfig};

fn main() {
    std::fs::create_dir_all("examples_out").unwrap();
    let n = 1000usize;
    let nf = n as f64;
    for k in [1usize, 2] {
        for (label, nl) in [
            ("cubic", Nonlinearity::Cubic { g: nf - 1.0 }),
            ("cubic_quintic", Nonlinearity::CubicQuintic { g: nf - 1.0 }),
            ("loglinear", Nonlinearity::Loglinear { g: nf.sqrt() / nf.ln() }),
        ] {
            let runtime = closedform::general_runtime(&nl, nf, k as f64).expect("runtime");
            let config =
                SearchConfig::complete(n, k, nl.clone(), GammaPolicy::GeneralCritical);
            let t_end = 2.5 * runtime;
            let controls = Controls { sample_dt: t_end / 4000.0, ..Default::default() };
            let traj = dynamics::integrate(&config, t_end, &controls).expect("integration");
            let (t_peak, peak) = traj.peak().unwrap();
            let width = traj.width_at_height(0.01);
            println!(
                "{label:14} k={k}: runtime (quadrature) {runtime:8.4}, peak {peak:.6} at {t_peak:8.4}, width@0.99 {}",
                width.map_or("—".to_string(), |w| format!("{w:.4}")),
            );
            std::fs::write(
                format!("examples_out/zoo_{label}_k{k}.csv"),
                traj.to_csv(),
            )
            .unwrap();
        }
    }
    println!("trajectories written to examples_out/");
}
