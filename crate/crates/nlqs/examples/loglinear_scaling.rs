//! Loglinear runtime: the integral has no simple closed form, so it is
//! bracketed by closed-form bounds and evaluated by quadrature. Sweeping
//! N with k = N^{1/4} and g = N^{1/8}/ln(N/k) and fitting a power law
//! reproduces the ~N^0.26 scaling, much closer to the lower bound N^{1/4}
//! than to the upper bound N^{5/16}.
//!
//!     cargo run --release --example loglinear_scaling

use nlqs::closedform;
use nlqs::resources;

fn main() {
    // bound sandwich at a reference point
    let (n, k, g) = (1024.0, 5.0, 1.0);
    let b = closedform::log_runtime_bounds(n, k, g).expect("bounds");
    let numeric = closedform::log_runtime_numeric(n, k, g).expect("quadrature");
    println!("N={n}, k={k}, g={g}:");
    println!("  lower ≤ numeric ≤ tight ≤ loose:");
    println!(
        "  {:.6} ≤ {:.6} ≤ {:.6} ≤ {:.6}",
        b.lower, numeric, b.upper_tight, b.upper_loose
    );

    // scaling sweep and fit
    let mut points = Vec::new();
    let mut n = 500_000.0f64;
    while n <= 1_000_000.0 + 1.0 {
        let k = n.powf(0.25);
        let g = n.powf(0.125) / (n / k).ln();
        points.push((n, closedform::log_runtime_numeric(n, k, g).expect("quadrature")));
        n += 10_000.0;
    }
    let fit = resources::fit_power_law(&points).expect("fit");
    println!(
        "\nrecipe k = N^(1/4), g = N^(1/8)/ln(N/k) over N ∈ [5e5, 1e6]:\n  t* ≈ {:.4}·N^{:.4}  (R² = {:.6})",
        fit.prefactor, fit.exponent, fit.r_squared
    );
    println!("  lower-bound exponent 1/4 = 0.25, upper-bound exponent 5/16 = 0.3125");

    std::fs::create_dir_all("examples_out").unwrap();
    let mut csv = String::from("N,t_star\n");
    for (n, t) in &points {
        csv.push_str(&format!("{n},{t:.12}\n"));
    }
    std::fs::write("examples_out/log_runtimes.csv", csv).unwrap();
    println!("sweep written to examples_out/log_runtimes.csv");
}
