//! Linear search on the complete graph: the success probability rotates from
//! 1/N to 1 in time π√N/2 at the critical jumping rate γ = 1/N.
//!
//!     cargo run --release --example linear_complete

use nlqs::closedform;
use nlqs::dynamics::{self, Controls, GammaPolicy, Nonlinearity, SearchConfig};
use std::f64::consts::PI;

fn main() {
    let n = 1024usize;
    let nf = n as f64;
    let t_star = PI * nf.sqrt() / 2.0;

    let config = SearchConfig::complete(
        n,
        1,
        Nonlinearity::Linear,
        GammaPolicy::Fixed { gamma: 1.0 / nf },
    );
    let controls = Controls { sample_dt: t_star / 1000.0, ..Default::default() };
    let traj = dynamics::integrate(&config, 2.2 * t_star, &controls).expect("integration");

    let (t_peak, peak) = traj.peak().expect("samples");
    println!("N = {n}: expected runtime π√N/2 = {t_star:.6}");
    println!("integrated peak: p0 = {peak:.12} at t = {t_peak:.6}");
    println!("closed form at the peak: {:.12}", closedform::linear_prob(nf, t_peak));
    println!("norm drift: {:.3e}", traj.max_norm_err());

    std::fs::create_dir_all("examples_out").unwrap();
    std::fs::write("examples_out/linear_complete.csv", traj.to_csv()).unwrap();
    println!("trajectory written to examples_out/linear_complete.csv");
}
