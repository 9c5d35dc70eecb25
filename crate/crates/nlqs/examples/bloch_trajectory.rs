//! Two-class runs on the Bloch sphere (marked class at the north pole): the
//! well-tuned linear search arcs straight to the pole, while a fixed γ under
//! cubic dynamics veers off and never gets there.
//!
//!     cargo run --release --example bloch_trajectory

use nlqs::closedform;
use nlqs::dynamics::{self, Controls, GammaPolicy, Nonlinearity, SearchConfig};
use std::f64::consts::PI;

fn write_bloch(path: &str, traj: &dynamics::Trajectory) {
    let mut out = String::from("t,bx,by,bz\n");
    for (s, amps) in traj.samples.iter().zip(&traj.amplitudes) {
        let norm = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
        let (x, y, z) = closedform::bloch_coords(amps[0] / norm, amps[1] / norm);
        out.push_str(&format!("{:.6},{x:.9},{y:.9},{z:.9}\n", s.t));
    }
    std::fs::write(path, out).unwrap();
}

fn main() {
    std::fs::create_dir_all("examples_out").unwrap();
    let n = 1024usize;
    let nf = n as f64;
    let t_end = 2.2 * PI * nf.sqrt() / 2.0;
    let controls = Controls { sample_dt: t_end / 4000.0, ..Default::default() };

    let linear = SearchConfig::complete(
        n,
        1,
        Nonlinearity::Linear,
        GammaPolicy::Fixed { gamma: 1.0 / nf },
    );
    let traj = dynamics::integrate(&linear, t_end, &controls).unwrap();
    let start = traj.amplitudes.first().unwrap();
    let (_, _, z0) = closedform::bloch_coords(start[0], start[1]);
    println!("start |s⟩ sits at z = {z0:.6} (south pole is −1, marked state is +1)");
    let z_max = traj
        .amplitudes
        .iter()
        .map(|a| a[0].norm_sqr() - a[1].norm_sqr())
        .fold(f64::MIN, f64::max);
    println!("linear, γ = 1/N: reaches z = {z_max:.6}");
    write_bloch("examples_out/bloch_linear.csv", &traj);

    let stuck = SearchConfig::complete(
        n,
        1,
        Nonlinearity::Cubic { g: 1.0 },
        GammaPolicy::Fixed { gamma: 1.0 / nf },
    );
    let traj = dynamics::integrate(&stuck, t_end, &controls).unwrap();
    let z_max = traj
        .amplitudes
        .iter()
        .map(|a| a[0].norm_sqr() - a[1].norm_sqr())
        .fold(f64::MIN, f64::max);
    println!("cubic g = 1 at fixed γ: only reaches z = {z_max:.6} before veering off");
    write_bloch("examples_out/bloch_cubic_fixed_gamma.csv", &traj);
    println!("coordinates written to examples_out/");
}
