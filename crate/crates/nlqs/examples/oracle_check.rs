//! Brute-force verification that the dynamics really live in the collapsed
//! subspace: integrate the full N-dimensional state and the reduced class
//! state with the same policy and compare.
//!
//!     cargo run --release --example oracle_check

use nlqs::dynamics::{self, Controls, GammaPolicy, GraphSource, Nonlinearity, SearchConfig};
use nlqs::graphs::{self, Family, FamilySpec};
use nlqs::oracle;
use std::f64::consts::PI;

fn main() {
    let cases: [(FamilySpec, Nonlinearity, GammaPolicy); 4] = [
        (
            FamilySpec::petersen(),
            Nonlinearity::Linear,
            GammaPolicy::SrgC2,
        ),
        (
            FamilySpec::petersen(),
            Nonlinearity::Cubic { g: 9.0 },
            GammaPolicy::SuffCompleteCritical { gamma_l: 1.0 / 3.0 + 1.0 / 9.0 },
        ),
        (
            FamilySpec::new(Family::Complete, 64),
            Nonlinearity::Loglinear { g: 1.5 },
            GammaPolicy::GeneralCritical,
        ),
        (
            FamilySpec::new(Family::Hypercube, 4),
            Nonlinearity::Cubic { g: 15.0 },
            GammaPolicy::SuffCompleteCritical { gamma_l: 0.35 },
        ),
    ];
    for (spec, nl, policy) in cases {
        let graph = graphs::build_graph(&spec).expect("family builds");
        let n = graph.n_vertices as f64;
        let t_end = 1.2 * PI * n.sqrt() / 2.0;
        let controls = Controls { sample_dt: t_end / 400.0, ..Default::default() };
        let full = oracle::full_integrate(&graph, &[0], &nl, &policy, t_end, &controls)
            .expect("full integration");
        let config = SearchConfig {
            graph: GraphSource::Family(spec),
            marked_count: 1,
            nonlinearity: nl.clone(),
            policy,
        };
        let reduced = dynamics::integrate(&config, t_end, &controls).expect("reduced integration");
        let report = oracle::compare(&full, &reduced).expect("aligned trajectories");
        println!(
            "{:>14} / {:<13?} N = {:>4}: {} classes, max |full − reduced| = {:.3e}",
            spec.family.name(),
            nl.kind(),
            graph.n_vertices,
            full.classes.len(),
            report.max_abs_dev
        );
    }
}
