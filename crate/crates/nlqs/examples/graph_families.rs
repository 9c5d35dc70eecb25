//! Tour of the graph constructions: parameter feasibility checks, the
//! family parameterizations, and the collapse onto identically-evolving
//! vertex classes (with the analytic quotient cross-checked against the
//! equitable-partition refinement).
//!
//!     cargo run --release --example graph_families

use nlqs::graphs::{self, Family, FamilySpec, SrgParams};

fn main() {
    // feasibility: the pair-counting identity k(k−λ−1) = (N−k−1)μ
    for params in [
        SrgParams::new(10, 3, 0, 1),
        SrgParams::new(5, 2, 0, 1),
        SrgParams::new(10, 3, 0, 2),
        SrgParams::new(900, 87, 30, 6),
    ] {
        let report = graphs::srg_check(&params);
        println!(
            "({}, {}, {}, {}): feasible = {}, type = {:?} {}",
            params.n_vertices,
            params.degree,
            params.lambda_common,
            params.mu_common,
            report.feasible,
            report.srg_type,
            if report.violations.is_empty() {
                String::new()
            } else {
                format!("— {}", report.violations.join("; "))
            }
        );
    }

    println!();
    for spec in [
        FamilySpec::petersen(),
        FamilySpec::new(Family::Paley, 13),
        FamilySpec::new(Family::SquareLattice, 3),
        FamilySpec::new(Family::LatinSquare, 4),
        FamilySpec::new(Family::Triangular, 5),
        FamilySpec::new(Family::Hypercube, 4),
    ] {
        let graph = graphs::build_graph(&spec).expect("family builds");
        let collapsed = graphs::collapse(&graph, &[0]).expect("collapse");
        let analytic = graphs::collapse_analytic(&spec, 1).expect("analytic collapse");
        let diff = collapsed.max_abs_diff(&analytic).unwrap();
        println!(
            "{:>14}: N = {:>3}, degree {:>2}, classes {:?}, |refined − analytic| = {:.1e}",
            spec.family.name(),
            graph.n_vertices,
            collapsed.degree,
            collapsed.class_sizes,
            diff
        );
        if let Some(params) = spec.derived_srg_params().unwrap() {
            assert!(graphs::srg_check(&params).feasible);
        }
    }

    // the Petersen worked example, printed
    let petersen = graphs::collapse_analytic(&FamilySpec::petersen(), 1).unwrap();
    println!("\nPetersen reduced adjacency (classes of sizes {:?}):", petersen.class_sizes);
    for i in 0..3 {
        println!(
            "  [{:8.5} {:8.5} {:8.5}]",
            petersen.at(i, 0),
            petersen.at(i, 1),
            petersen.at(i, 2)
        );
    }
}
