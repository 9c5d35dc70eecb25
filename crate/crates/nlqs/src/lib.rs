//! Simulation and analysis toolkit for continuous-time quantum search governed by
//! nonlinear Schrödinger equations of the form i∂ψ/∂t = [H₀ − g f(|ψ|²)]ψ.
//!
//! The library covers search on complete graphs, strongly regular graphs, and
//! hypercubes. Each graph is collapsed onto the subspace of identically-evolving
//! vertex classes, where the dynamics are integrated with an adaptive embedded
//! Runge–Kutta scheme under a choice of jumping-rate (γ) control policies. A full
//! N-dimensional brute-force integrator serves as ground truth for the reduction.
//!
//! Modules:
//! - [`graphs`]: graph families, strongly-regular parameter checks, equitable-partition collapse
//! - [`dynamics`]: reduced-subspace nonlinear integrator, nonlinearity library, γ policies
//! - [`spectral`]: small dense symmetric eigensolver and gap/overlap diagnostics
//! - [`closedform`]: success probabilities, runtimes, peak widths, bounds, special functions
//! - [`resources`]: clock-precision accounting, space-time products, exponent optimization, fits
//! - [`oracle`]: full-space integrator and reduced-vs-full comparison
//! - [`cli`]: command-line entry point used by the `nlqs` binary
//!
//! Runnable demonstrations of each capability live in the crate's `examples/`
//! directory; `cargo run --example <name>` is the quickest way in.
//!
//! ```
//! use nlqs::closedform::{self, CompleteSearchParams};
//! use nlqs::dynamics::{self, Controls, GammaPolicy, Nonlinearity, SearchConfig};
//!
//! // cubic search at rescaled coupling G = g/(N−1) = 1: constant runtime π/2
//! let n = 1000;
//! let g = (n - 1) as f64;
//! let config =
//!     SearchConfig::complete(n, 1, Nonlinearity::Cubic { g }, GammaPolicy::CubicCritical);
//! // the success peak is ~0.006 wide here, so sample finely enough to see it
//! let controls = Controls { sample_dt: 0.002, ..Default::default() };
//! let traj = dynamics::integrate(&config, 2.0, &controls).unwrap();
//! let (t_peak, peak) = traj.peak().unwrap();
//! assert!((t_peak - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
//! assert!(peak > 0.999);
//!
//! let params = CompleteSearchParams::new(n as f64, 1.0, g);
//! assert!((closedform::cubic_runtime(&params) - t_peak).abs() < 1e-3);
//! ```

pub mod cli;
pub mod closedform;
pub mod dynamics;
pub mod graphs;
pub mod ode;
pub mod oracle;
pub mod quad;
pub mod resources;
pub mod spectral;

pub(crate) mod fmt;

pub use graphs::{CollapsedGraph, FamilySpec, Graph, SrgParams};
pub use dynamics::{GammaPolicy, Nonlinearity, SearchConfig, Trajectory};
