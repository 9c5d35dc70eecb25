//! Repulsive coupling (g < 0) under the critical γ policy. For
//! G > −1/(N−1) the success probability still reaches 1 (just later); beyond
//! that a stationary point of the flow appears inside (1/N, 1) and caps the
//! achievable success probability.
//!
//!     cargo run --release --example repulsive_interactions

use nlqs::closedform;
use nlqs::dynamics::{self, Controls, GammaPolicy, Nonlinearity, SearchConfig};
use std::f64::consts::PI;

fn main() {
    std::fs::create_dir_all("examples_out").unwrap();
    let n = 1024usize;
    let nf = n as f64;
    let horizon = 2.5 * PI * nf.sqrt() / 2.0;
    for g in [0.0, -0.5, -1.0, -1.5] {
        let nl = if g == 0.0 { Nonlinearity::Linear } else { Nonlinearity::Cubic { g } };
        let config = SearchConfig::complete(n, 1, nl, GammaPolicy::CubicCritical);
        let controls = Controls { sample_dt: horizon / 4000.0, ..Default::default() };
        let traj = dynamics::integrate(&config, horizon, &controls).expect("integration");
        let (t_peak, peak) = traj.peak().unwrap();
        print!("g = {g:>4}: max success {peak:.5} at t = {t_peak:7.2}");
        if g < 0.0 {
            let pts = closedform::repulsive_stationary_points(nf, 1.0, g / (nf - 1.0));
            if pts.blocking {
                print!("  (stationary point at x = {:.4} blocks probability 1)", pts.x_stat);
            } else {
                print!("  (stationary point at x = {:.2} is not inside (1/N, 1))", pts.x_stat);
            }
        }
        println!();
        std::fs::write(format!("examples_out/repulsive_g{g}.csv"), traj.to_csv()).unwrap();
    }
    println!("trajectories written to examples_out/");
}
