//! Cubic (Gross–Pitaevskii) search at the critical γ policy: with G = 1 the
//! runtime is exactly π/2, independent of N, and the integrated trajectory
//! tracks the closed-form success probability pointwise.
//!
//!     cargo run --release --example cubic_constant_time

use nlqs::closedform::{self, CompleteSearchParams};
use nlqs::dynamics::{self, Controls, GammaPolicy, Nonlinearity, SearchConfig};
use std::f64::consts::FRAC_PI_2;

fn main() {
    std::fs::create_dir_all("examples_out").unwrap();
    for n in [100usize, 1000] {
        let nf = n as f64;
        let g = nf - 1.0; // G = g/(N−1) = 1
        let config =
            SearchConfig::complete(n, 1, Nonlinearity::Cubic { g }, GammaPolicy::CubicCritical);
        let controls = Controls { sample_dt: 0.002, ..Default::default() };
        let traj = dynamics::integrate(&config, 2.0 * FRAC_PI_2, &controls).expect("integration");

        let params = CompleteSearchParams::new(nf, 1.0, g);
        let mut worst = 0.0f64;
        for s in &traj.samples {
            worst = worst.max((s.probs[0] - closedform::cubic_prob(&params, s.t)).abs());
        }
        let (t_peak, peak) = traj.peak().unwrap();
        println!(
            "N = {n}: runtime {:.6} (π/2 = {:.6}), peak {:.9}, max |integrator − closed form| = {:.2e}",
            t_peak,
            FRAC_PI_2,
            peak,
            worst
        );
        let width = closedform::cubic_width_exact(&params.with_epsilon(0.01));
        println!("        width at height 0.99: {width:.6} (shrinks like 1/√N)");
        std::fs::write(format!("examples_out/cubic_constant_time_n{n}.csv"), traj.to_csv())
            .unwrap();
    }
    println!("trajectories written to examples_out/");
}
