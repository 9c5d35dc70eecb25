//! Search on the n-dimensional hypercube in its (n+1)-class Hamming
//! subspace. The critical γ is located numerically from the balanced-overlap
//! crossing of the two lowest eigenvectors; at n = 10 the first peak lands
//! near π√1024/2 ≈ 50.27 but its height stays well below 1 — the graph is
//! sufficiently complete only asymptotically.
//!
//!     cargo run --release --example hypercube_search

use nlqs::closedform;
use nlqs::dynamics::{self, Controls, GammaPolicy, GraphSource, Nonlinearity, SearchConfig};
use nlqs::graphs::{self, Family, FamilySpec};
use std::f64::consts::PI;

fn main() {
    std::fs::create_dir_all("examples_out").unwrap();
    let dim = 10usize;
    let n = 1usize << dim;
    let collapsed = graphs::collapse_analytic_hypercube(dim);
    let search = dynamics::find_gamma_numeric(&collapsed, (0.02, 1.0), 600);
    println!("n = {dim} (N = {n}): numeric γ* = {:.6}", search.gamma);

    let controls = Controls { sample_dt: 0.02, ..Default::default() };
    let linear = SearchConfig {
        graph: GraphSource::Family(FamilySpec::new(Family::Hypercube, dim)),
        marked_count: 1,
        nonlinearity: Nonlinearity::Linear,
        policy: GammaPolicy::Fixed { gamma: search.gamma },
    };
    let traj = dynamics::integrate(&linear, 160.0, &controls).expect("integration");
    let (t_peak, peak) = traj.peak_in(0.0, 80.0).unwrap();
    println!(
        "linear: first peak {peak:.4} at t = {t_peak:.2} (π√N/2 = {:.2}); prediction at that t: {:.4}",
        PI * (n as f64).sqrt() / 2.0,
        closedform::suff_complete_probs(&collapsed, t_peak)[0]
    );
    std::fs::write("examples_out/hypercube_linear.csv", traj.to_csv()).unwrap();

    // nonlinear runs ride the same γ_L; their benefit on the hypercube is an
    // open question, so this is qualitative output only
    let cubic = SearchConfig {
        graph: GraphSource::Family(FamilySpec::new(Family::Hypercube, dim)),
        marked_count: 1,
        nonlinearity: Nonlinearity::Cubic { g: (n - 1) as f64 },
        policy: GammaPolicy::SuffCompleteCritical { gamma_l: search.gamma },
    };
    let traj = dynamics::integrate(&cubic, 60.0, &controls).expect("integration");
    let (t_peak, peak) = traj.peak().unwrap();
    println!("cubic g=N−1: peak {peak:.4} at t = {t_peak:.2}");
    std::fs::write("examples_out/hypercube_cubic.csv", traj.to_csv()).unwrap();
    println!("trajectories written to examples_out/");
}
