//! Spectral diagnostics behind the critical-γ choices: sweep γ, watch the
//! gap close and the uniform state's weight split evenly between the two
//! lowest eigenvectors at the crossing.
//!
//!     cargo run --release --example overlap_diagnostics

use nlqs::dynamics;
use nlqs::graphs::{self, SrgParams};
use nlqs::spectral;

fn main() {
    std::fs::create_dir_all("examples_out").unwrap();

    // complete graph: crossing at γ = 1/N
    let n = 1024usize;
    let collapsed = graphs::collapse_analytic_complete(n, 1).unwrap();
    let grid: Vec<f64> = (1..=300).map(|i| 2.0 * i as f64 / (300.0 * n as f64)).collect();
    let sweep = spectral::overlap_sweep(&collapsed, &grid);
    std::fs::write("examples_out/overlaps_complete.csv", spectral::sweep_to_csv(&sweep)).unwrap();
    let search = dynamics::find_gamma_numeric(&collapsed, (0.2 / n as f64, 4.0 / n as f64), 300);
    println!(
        "complete N={n}: γ* = {:.8} (1/N = {:.8}), residual overlap imbalance {:.2e}",
        search.gamma,
        1.0 / n as f64,
        search.objective
    );

    // Latin square graph: the third eigenvector stays orthogonal to |s⟩
    let latin = graphs::collapse_analytic_srg(&SrgParams::new(900, 87, 30, 6)).unwrap();
    let gamma_c2 = 1.0 / 87.0 + 1.0 / (899.0 * 6.0);
    let grid: Vec<f64> = (1..=300).map(|i| gamma_c2 * 2.0 * i as f64 / 300.0).collect();
    let sweep = spectral::overlap_sweep(&latin, &grid);
    let max_os2 = sweep.iter().map(|s| s.overlaps_s[2]).fold(0.0f64, f64::max);
    std::fs::write("examples_out/overlaps_latin30.csv", spectral::sweep_to_csv(&sweep)).unwrap();
    let search = dynamics::find_gamma_numeric(&latin, (0.5 * gamma_c2, 2.0 * gamma_c2), 300);
    println!(
        "L3(30): γ* = {:.8} (γ_c2 = {:.8}); max |⟨s|ψ₂⟩|² over the sweep = {:.2e}",
        search.gamma, gamma_c2, max_os2
    );
    println!("sweeps written to examples_out/");
}
