//! Brute-force integrator over the full N-dimensional space, used as ground
//! truth for the reduced-subspace dynamics.
//!
//! The full run uses the same Runge–Kutta scheme, the same γ policies
//! (evaluated on class-aggregated probabilities), and the same sampling grid
//! as the reduced run, so a comparison sees only genuine subspace-leakage or
//! integration error, never interpolation error.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{
    Controls, DynamicsError, EvalContext, GammaPolicy, Nonlinearity, ResolvedPolicy, Trajectory,
    TrajectorySample,
};
use crate::graphs::{self, Graph, GraphError, SrgParams};
use crate::ode;

/// A full-space run: per-vertex trajectory plus the vertex classes it should
/// stay confined to.
#[derive(Debug, Clone)]
pub struct FullRun {
    /// Per-vertex probabilities in the `probs` columns.
    pub trajectory: Trajectory,
    /// Equitable classes (class 0 is the marked class).
    pub classes: Vec<Vec<u32>>,
}

/// Integrates i·dψ/dt = [−γB − Σ_{x∈M}|x⟩⟨x| − g·Σᵢ f(|ψᵢ|²)|i⟩⟨i|]ψ over the
/// full vertex set, from the uniform superposition.
///
/// B matches the reduced-side convention: N|s⟩⟨s| on complete graphs, the
/// adjacency matrix elsewhere.
pub fn full_integrate(
    graph: &Graph,
    marked: &[usize],
    nl: &Nonlinearity,
    policy: &GammaPolicy,
    t_end: f64,
    controls: &Controls,
) -> Result<FullRun, DynamicsError> {
    let n = graph.n_vertices;
    if n > 5000 {
        return Err(DynamicsError::BadConfig(format!(
            "full-space integration is desk-scale only (N ≤ 5000, got {n})"
        )));
    }
    let degree = graph.regular_degree().ok_or(GraphError::NotRegular)?;
    let classes = graphs::equitable_partition(graph, marked)?;
    let is_complete = degree == n - 1;

    let mut vertex_class = vec![0usize; n];
    for (c, cls) in classes.iter().enumerate() {
        for &v in cls {
            vertex_class[v as usize] = c;
        }
    }
    let class_sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();

    let ctx = EvalContext {
        n_vertices: n as f64,
        marked_count: marked.len() as f64,
        class_sizes: class_sizes.clone(),
        srg: infer_srg_params(graph),
        is_complete,
    };
    let resolved = ResolvedPolicy::resolve(policy, &ctx)?;

    let mut is_marked = vec![false; n];
    for &m in marked {
        is_marked[m] = true;
    }
    let neighbors: Vec<Vec<u32>> =
        (0..n).map(|v| graph.neighbors_of(v).to_vec()).collect();

    let m_classes = classes.len();
    let nl_rhs = nl.clone();
    let resolved_rhs = resolved.clone();
    let vc = vertex_class.clone();
    let sizes_rhs = class_sizes.clone();
    let mut class_probs = vec![0.0; m_classes];
    let rhs = move |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        class_probs.iter_mut().for_each(|p| *p = 0.0);
        for (i, z) in y.iter().enumerate() {
            class_probs[vc[i]] += z.norm_sqr();
        }
        let gamma = resolved_rhs.eval(&class_probs, t, &nl_rhs, &sizes_rhs);
        let g = nl_rhs.g();
        let total: Complex64 = if is_complete { y.iter().sum() } else { Complex64::ZERO };
        for i in 0..n {
            let walk = if is_complete {
                total
            } else {
                let mut acc = Complex64::ZERO;
                for &w in &neighbors[i] {
                    acc += y[w as usize];
                }
                acc
            };
            let mut acc = walk * gamma;
            if is_marked[i] {
                acc += y[i];
            }
            acc += y[i] * (g * nl_rhs.f(y[i].norm_sqr()));
            dy[i] = Complex64::new(-acc.im, acc.re);
        }
    };

    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let y0 = vec![amp; n];
    let n_samples = (t_end / controls.sample_dt).ceil() as usize;
    let mut times: Vec<f64> = (0..=n_samples).map(|i| i as f64 * controls.sample_dt).collect();
    times.retain(|&t| t < t_end);
    times.push(t_end);
    let raw = ode::integrate_sampled(rhs, 0.0, t_end, &y0, &times, &controls.ode())?;

    let mut samples = Vec::with_capacity(raw.len());
    let mut amplitudes = Vec::with_capacity(raw.len());
    for s in raw {
        let probs: Vec<f64> = s.y.iter().map(|z| z.norm_sqr()).collect();
        let norm: f64 = probs.iter().sum();
        let mut cls = vec![0.0; m_classes];
        for (i, &p) in probs.iter().enumerate() {
            cls[vertex_class[i]] += p;
        }
        let gamma = resolved.eval(&cls, s.t, nl, &class_sizes);
        samples.push(TrajectorySample { t: s.t, probs, gamma, norm_err: (norm - 1.0).abs() });
        amplitudes.push(s.y);
    }

    let config_hash = {
        let desc = format!(
            "full:{}:{:?}:{:?}:{:?}",
            n,
            marked,
            nl.kind(),
            serde_json::to_string(policy).unwrap_or_default()
        );
        let mut h: u64 = 0xcbf29ce484222325;
        for b in desc.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    };

    Ok(FullRun {
        trajectory: Trajectory { samples, config_hash, amplitudes },
        classes,
    })
}

/// Reads (k, λ, μ) off a regular graph if it is strongly regular.
fn infer_srg_params(graph: &Graph) -> Option<SrgParams> {
    let n = graph.n_vertices;
    let k = graph.regular_degree()?;
    if k == 0 || k == n - 1 {
        return None;
    }
    let common = |u: usize, v: usize| -> usize {
        graph.neighbors_of(u).iter().filter(|&&w| graph.has_edge(v, w as usize)).count()
    };
    let mut lambda: Option<usize> = None;
    let mut mu: Option<usize> = None;
    for u in 0..n {
        for v in (u + 1)..n {
            let c = common(u, v);
            let slot = if graph.has_edge(u, v) { &mut lambda } else { &mut mu };
            match slot {
                None => *slot = Some(c),
                Some(x) if *x == c => {}
                _ => return None,
            }
        }
    }
    Some(SrgParams::new(n, k, lambda?, mu?))
}

/// Reduced-vs-full deviation summary.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub max_abs_dev: f64,
    pub per_class_dev: Vec<f64>,
    pub n_samples: usize,
}

/// Aggregates the full run's per-vertex probabilities into classes and
/// reports the deviation from the reduced run's class probabilities.
///
/// Both trajectories must have been sampled on the same time grid.
pub fn compare(full: &FullRun, reduced: &Trajectory) -> Result<CompareReport, DynamicsError> {
    let m = full.classes.len();
    if reduced.n_classes() != m {
        return Err(DynamicsError::BadConfig(format!(
            "class count mismatch: full has {m}, reduced has {}",
            reduced.n_classes()
        )));
    }
    if full.trajectory.samples.len() != reduced.samples.len() {
        return Err(DynamicsError::BadConfig(format!(
            "sample count mismatch: {} vs {}",
            full.trajectory.samples.len(),
            reduced.samples.len()
        )));
    }
    let n = full
        .trajectory
        .samples
        .first()
        .map(|s| s.probs.len())
        .unwrap_or(0);
    let mut vertex_class = vec![0usize; n];
    for (c, cls) in full.classes.iter().enumerate() {
        for &v in cls {
            vertex_class[v as usize] = c;
        }
    }
    let mut per_class_dev = vec![0.0f64; m];
    for (fs, rs) in full.trajectory.samples.iter().zip(&reduced.samples) {
        if (fs.t - rs.t).abs() > 1e-9 * fs.t.abs().max(1.0) {
            return Err(DynamicsError::BadConfig(format!(
                "sample time mismatch: {} vs {}",
                fs.t, rs.t
            )));
        }
        let mut cls = vec![0.0; m];
        for (i, &p) in fs.probs.iter().enumerate() {
            cls[vertex_class[i]] += p;
        }
        for c in 0..m {
            per_class_dev[c] = per_class_dev[c].max((cls[c] - rs.probs[c]).abs());
        }
    }
    let max_abs_dev = per_class_dev.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(CompareReport { max_abs_dev, per_class_dev, n_samples: reduced.samples.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform;
    use crate::dynamics::{integrate, SearchConfig};
    use crate::graphs::{build_graph, Family, FamilySpec};

    #[test]
    fn complete_vertices_evolve_identically() {
        let g = build_graph(&FamilySpec::new(Family::Complete, 8)).unwrap();
        let controls = Controls { sample_dt: 0.2, ..Default::default() };
        let run = full_integrate(
            &g,
            &[0],
            &Nonlinearity::Linear,
            &GammaPolicy::Fixed { gamma: 1.0 / 8.0 },
            6.0,
            &controls,
        )
        .unwrap();
        for s in &run.trajectory.samples {
            let rest = &s.probs[1..];
            let spread = rest.iter().fold(0.0f64, |a, &p| a.max((p - rest[0]).abs()));
            assert!(spread <= 1e-9, "spread {spread} at t = {}", s.t);
        }
    }

    #[test]
    fn petersen_classes_share_probabilities() {
        let g = build_graph(&FamilySpec::petersen()).unwrap();
        let controls = Controls { sample_dt: 0.25, ..Default::default() };
        let run = full_integrate(
            &g,
            &[0],
            &Nonlinearity::Linear,
            &GammaPolicy::Fixed { gamma: 1.0 / 3.0 },
            8.0,
            &controls,
        )
        .unwrap();
        assert_eq!(run.classes.len(), 3);
        for s in &run.trajectory.samples {
            for cls in &run.classes[1..] {
                let ps: Vec<f64> = cls.iter().map(|&v| s.probs[v as usize]).collect();
                let spread = ps.iter().fold(0.0f64, |a, &p| a.max((p - ps[0]).abs()));
                assert!(spread <= 1e-9);
            }
        }
    }

    #[test]
    fn cubic_full_run_matches_closed_form() {
        let n = 8usize;
        let g_coeff = (n - 1) as f64; // G = 1
        let graph = build_graph(&FamilySpec::new(Family::Complete, n)).unwrap();
        let controls = Controls { sample_dt: 0.01, ..Default::default() };
        let run = full_integrate(
            &graph,
            &[0],
            &Nonlinearity::Cubic { g: g_coeff },
            &GammaPolicy::CubicCritical,
            1.6,
            &controls,
        )
        .unwrap();
        let params = closedform::CompleteSearchParams::new(n as f64, 1.0, g_coeff);
        for s in &run.trajectory.samples {
            let expected = closedform::cubic_prob(&params, s.t);
            assert!((s.probs[0] - expected).abs() < 1e-6, "t={}: {} vs {expected}", s.t, s.probs[0]);
        }
    }

    #[test]
    fn reduced_and_full_agree_linear() {
        let n = 16usize;
        let graph = build_graph(&FamilySpec::new(Family::Complete, n)).unwrap();
        let controls = Controls { sample_dt: 0.25, ..Default::default() };
        let policy = GammaPolicy::Fixed { gamma: 1.0 / n as f64 };
        let full = full_integrate(&graph, &[0], &Nonlinearity::Linear, &policy, 14.0, &controls)
            .unwrap();
        let config = SearchConfig::complete(n, 1, Nonlinearity::Linear, policy);
        let reduced = integrate(&config, 14.0, &controls).unwrap();
        let report = compare(&full, &reduced).unwrap();
        assert!(report.max_abs_dev <= 1e-7, "dev {}", report.max_abs_dev);
    }

    #[test]
    fn identical_trajectories_compare_to_zero() {
        let g = build_graph(&FamilySpec::petersen()).unwrap();
        let controls = Controls { sample_dt: 0.5, ..Default::default() };
        let run = full_integrate(
            &g,
            &[0],
            &Nonlinearity::Linear,
            &GammaPolicy::SrgC2,
            4.0,
            &controls,
        )
        .unwrap();
        // aggregate the full run into a class trajectory and compare to itself
        let mut vertex_class = [0usize; 10];
        for (c, cls) in run.classes.iter().enumerate() {
            for &v in cls {
                vertex_class[v as usize] = c;
            }
        }
        let samples: Vec<TrajectorySample> = run
            .trajectory
            .samples
            .iter()
            .map(|s| {
                let mut cls = vec![0.0; run.classes.len()];
                for (i, &p) in s.probs.iter().enumerate() {
                    cls[vertex_class[i]] += p;
                }
                TrajectorySample { t: s.t, probs: cls, gamma: s.gamma, norm_err: s.norm_err }
            })
            .collect();
        let reduced = Trajectory {
            samples,
            config_hash: "self".into(),
            amplitudes: Vec::new(),
        };
        let report = compare(&run, &reduced).unwrap();
        assert_eq!(report.max_abs_dev, 0.0);
    }

    #[test]
    fn srg_params_inferred_for_policies() {
        let g = build_graph(&FamilySpec::petersen()).unwrap();
        assert_eq!(infer_srg_params(&g), Some(SrgParams::new(10, 3, 0, 1)));
        let h = build_graph(&FamilySpec::new(Family::Hypercube, 3)).unwrap();
        assert_eq!(infer_srg_params(&h), None);
    }

    #[test]
    fn desk_scale_guard() {
        let g = crate::graphs::Graph::from_edges(5001, &[]).unwrap();
        let controls = Controls::default();
        let r = full_integrate(
            &g,
            &[0],
            &Nonlinearity::Linear,
            &GammaPolicy::Fixed { gamma: 0.1 },
            1.0,
            &controls,
        );
        assert!(r.is_err());
    }
}
