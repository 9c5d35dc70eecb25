//! Reduced-subspace integrator for nonlinear search dynamics, with the γ
//! control policies and the nonlinearity library.
//!
//! The state is the complex amplitude vector over identically-evolving vertex
//! classes. The equation of motion is i·dc/dt = [H₀ − V(c)]c with
//! H₀ = −γB − |m₀⟩⟨m₀| and V = diag(g·f(|c_i|²/|m_i|)). On the complete graph
//! B is the rank-one N|s⟩⟨s| block (the two differ by a multiple of the
//! identity, which only shifts the global phase); elsewhere B is the reduced
//! adjacency with the degree term dropped. γ is re-evaluated at every
//! Runge–Kutta stage, since the critical policies depend on the instantaneous
//! probabilities.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::sync::Arc;

use crate::fmt::sig12;
use crate::graphs::{self, CollapsedGraph, Family, FamilySpec, GraphError, SrgParams};
use crate::ode::{self, OdeControls, OdeError};
use crate::spectral;

/// Pointwise nonlinearity g·f(|ψ|²) entering the self-potential.
#[derive(Clone)]
pub enum Nonlinearity {
    Linear,
    /// f(p) = p.
    Cubic { g: f64 },
    /// f(p) = p − p².
    CubicQuintic { g: f64 },
    /// f(p) = log p, evaluated as log(max(p, 1e-300)) so a class whose
    /// probability underflows cannot produce −∞; the start state keeps every
    /// class at p = 1/N > 0 and √p·log p → 0, so the clamp only guards
    /// round-off.
    Loglinear { g: f64 },
    Custom {
        g: f64,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        f_prime: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearityKind {
    Linear,
    Cubic,
    CubicQuintic,
    Loglinear,
    Custom,
}

const LOG_CLAMP: f64 = 1e-300;

impl Nonlinearity {
    pub fn kind(&self) -> NonlinearityKind {
        match self {
            Nonlinearity::Linear => NonlinearityKind::Linear,
            Nonlinearity::Cubic { .. } => NonlinearityKind::Cubic,
            Nonlinearity::CubicQuintic { .. } => NonlinearityKind::CubicQuintic,
            Nonlinearity::Loglinear { .. } => NonlinearityKind::Loglinear,
            Nonlinearity::Custom { .. } => NonlinearityKind::Custom,
        }
    }

    pub fn from_kind(kind: NonlinearityKind, g: f64) -> Option<Nonlinearity> {
        match kind {
            NonlinearityKind::Linear => Some(Nonlinearity::Linear),
            NonlinearityKind::Cubic => Some(Nonlinearity::Cubic { g }),
            NonlinearityKind::CubicQuintic => Some(Nonlinearity::CubicQuintic { g }),
            NonlinearityKind::Loglinear => Some(Nonlinearity::Loglinear { g }),
            NonlinearityKind::Custom => None,
        }
    }

    pub fn g(&self) -> f64 {
        match self {
            Nonlinearity::Linear => 0.0,
            Nonlinearity::Cubic { g }
            | Nonlinearity::CubicQuintic { g }
            | Nonlinearity::Loglinear { g }
            | Nonlinearity::Custom { g, .. } => *g,
        }
    }

    pub fn f(&self, p: f64) -> f64 {
        match self {
            Nonlinearity::Linear => 0.0,
            Nonlinearity::Cubic { .. } => p,
            Nonlinearity::CubicQuintic { .. } => p - p * p,
            Nonlinearity::Loglinear { .. } => p.max(LOG_CLAMP).ln(),
            Nonlinearity::Custom { f, .. } => f(p),
        }
    }

    pub fn f_prime(&self, p: f64) -> f64 {
        match self {
            Nonlinearity::Linear => 0.0,
            Nonlinearity::Cubic { .. } => 1.0,
            Nonlinearity::CubicQuintic { .. } => 1.0 - 2.0 * p,
            Nonlinearity::Loglinear { .. } => 1.0 / p.max(LOG_CLAMP),
            Nonlinearity::Custom { f_prime, .. } => f_prime(p),
        }
    }
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Nonlinearity::Custom { g, .. } => write!(f, "Custom {{ g: {g} }}"),
            other => write!(f, "{:?} {{ g: {} }}", other.kind(), other.g()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct NlWire {
    kind: NonlinearityKind,
    g: f64,
}

impl Serialize for Nonlinearity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NlWire { kind: self.kind(), g: self.g() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Nonlinearity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = NlWire::deserialize(deserializer)?;
        Nonlinearity::from_kind(wire.kind, wire.g)
            .ok_or_else(|| D::Error::custom("custom nonlinearities are not representable in JSON"))
    }
}

/// Jumping-rate control policy γ(state, t).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaPolicy {
    Fixed { gamma: f64 },
    /// γ = (1 + Gδ)/N with G = g/(k(N−k)), δ = Nx − k; complete graph only.
    CubicCritical,
    /// γ = (1/N)[1 + g(f(x/k) − f((1−x)/(N−k)))]; complete graph only.
    GeneralCritical,
    /// γ = 1/k.
    SrgC1,
    /// γ = 1/k + 1/((N−1)μ).
    SrgC2,
    /// γ = 1/(k−μ).
    SrgC2Prime,
    /// γ = γ_L(1 + g·f₀ − g·f₁) with f_i = f(|c_i|²/|m_i|).
    SuffCompleteCritical { gamma_l: f64 },
    /// Piecewise-linear interpolation of tabulated (t, γ) pairs.
    NumericTable { table: Vec<(f64, f64)> },
}

/// Which reduced operator plays the walk term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianForm {
    /// −γ·A on the reduced classes (degree term dropped).
    Adjacency,
    /// −γ·N|s⟩⟨s|, the complete-graph convention; equals the adjacency form
    /// plus γ·I on complete graphs.
    CompleteProjector,
}

/// Graph half of a [`SearchConfig`]: either a named family instance or a bare
/// strongly-regular parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Family(FamilySpec),
    Srg { srg: SrgParams },
}

impl GraphSource {
    pub fn srg(params: SrgParams) -> Self {
        GraphSource::Srg { srg: params }
    }
}

/// Everything needed to define one dynamics run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    #[serde(flatten)]
    pub graph: GraphSource,
    pub marked_count: usize,
    pub nonlinearity: Nonlinearity,
    pub policy: GammaPolicy,
}

impl SearchConfig {
    pub fn complete(n: usize, marked_count: usize, nl: Nonlinearity, policy: GammaPolicy) -> Self {
        SearchConfig {
            graph: GraphSource::Family(FamilySpec::new(Family::Complete, n)),
            marked_count,
            nonlinearity: nl,
            policy,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.graph, GraphSource::Family(FamilySpec { family: Family::Complete, .. }))
    }

    pub fn hamiltonian_form(&self) -> HamiltonianForm {
        if self.is_complete() {
            HamiltonianForm::CompleteProjector
        } else {
            HamiltonianForm::Adjacency
        }
    }

    pub fn srg_params(&self) -> Result<Option<SrgParams>, GraphError> {
        match &self.graph {
            GraphSource::Family(spec) => spec.derived_srg_params(),
            GraphSource::Srg { srg } => Ok(Some(*srg)),
        }
    }

    pub fn collapsed(&self) -> Result<CollapsedGraph, GraphError> {
        match &self.graph {
            GraphSource::Family(spec) => graphs::collapse_analytic(spec, self.marked_count),
            GraphSource::Srg { srg } => {
                if self.marked_count != 1 {
                    return Err(GraphError::BadMarkedSet(
                        "strongly regular runs are single-marked".into(),
                    ));
                }
                graphs::collapse_analytic_srg(srg)
            }
        }
    }

    /// Stable identifier of this configuration (FNV-1a over the canonical JSON).
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).unwrap_or_default();
        let mut h: u64 = 0xcbf29ce484222325;
        for b in json.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

/// Complex amplitudes over classes at one instant.
#[derive(Debug, Clone)]
pub struct SubspaceState {
    pub t: f64,
    pub c: Vec<Complex64>,
}

impl SubspaceState {
    /// Uniform superposition: c_i = √(|m_i|/N).
    pub fn uniform(collapsed: &CollapsedGraph) -> Self {
        let n = collapsed.n_vertices() as f64;
        let c = collapsed
            .class_sizes
            .iter()
            .map(|&s| Complex64::new((s as f64 / n).sqrt(), 0.0))
            .collect();
        SubspaceState { t: 0.0, c }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.c.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// One sampled instant of a run.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub probs: Vec<f64>,
    pub gamma: f64,
    pub norm_err: f64,
}

/// Time series of class probabilities, the γ actually applied, and the norm
/// drift diagnostic. Norm drift is reported, never silently repaired.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub config_hash: String,
    /// Raw amplitudes per sample, for phase-sensitive postprocessing.
    pub amplitudes: Vec<Vec<Complex64>>,
}

impl Trajectory {
    pub fn n_classes(&self) -> usize {
        self.samples.first().map_or(0, |s| s.probs.len())
    }

    pub fn max_norm_err(&self) -> f64 {
        self.samples.iter().fold(0.0, |acc, s| acc.max(s.norm_err))
    }

    /// Greatest success probability (class 0) and its parabola-refined time.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.peak_in(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Peak restricted to samples with t in [t_lo, t_hi].
    pub fn peak_in(&self, t_lo: f64, t_hi: f64) -> Option<(f64, f64)> {
        let idx: Vec<usize> = (0..self.samples.len())
            .filter(|&i| self.samples[i].t >= t_lo && self.samples[i].t <= t_hi)
            .collect();
        let &best = idx.iter().max_by(|&&a, &&b| {
            self.samples[a].probs[0].partial_cmp(&self.samples[b].probs[0]).unwrap()
        })?;
        // parabolic vertex through the winning sample and its neighbors
        if best > 0 && best + 1 < self.samples.len() {
            let (tm, t0, tp) = (self.samples[best - 1].t, self.samples[best].t, self.samples[best + 1].t);
            let (ym, y0, yp) =
                (self.samples[best - 1].probs[0], self.samples[best].probs[0], self.samples[best + 1].probs[0]);
            let denom = ym - 2.0 * y0 + yp;
            if denom < 0.0 && (tp - t0 - (t0 - tm)).abs() < 1e-9 * (tp - tm).abs() {
                let dt = 0.5 * (tp - tm) / 2.0;
                let shift = 0.5 * (ym - yp) / denom * dt * 2.0;
                let tv = t0 + shift.clamp(tm - t0, tp - t0);
                let yv = y0 - 0.25 * (ym - yp) * (shift / dt / 2.0);
                return Some((tv, yv.max(y0)));
            }
        }
        Some((self.samples[best].t, self.samples[best].probs[0]))
    }

    /// Interpolated times where the success probability crosses `level`,
    /// rising before the peak and falling after; returns (t_left, t_right).
    pub fn crossings_around_peak(&self, level: f64) -> Option<(f64, f64)> {
        let (t_peak, p_peak) = self.peak()?;
        if p_peak < level {
            return None;
        }
        let peak_idx = self
            .samples
            .iter()
            .position(|s| s.t >= t_peak)
            .unwrap_or(self.samples.len() - 1)
            .min(self.samples.len() - 1);
        let cross = |i0: usize, i1: usize| -> f64 {
            let (s0, s1) = (&self.samples[i0], &self.samples[i1]);
            let (p0, p1) = (s0.probs[0], s1.probs[0]);
            if (p1 - p0).abs() < 1e-300 {
                return s0.t;
            }
            s0.t + (level - p0) / (p1 - p0) * (s1.t - s0.t)
        };
        let mut left = None;
        for i in (0..peak_idx).rev() {
            if self.samples[i].probs[0] < level && self.samples[i + 1].probs[0] >= level {
                left = Some(cross(i, i + 1));
                break;
            }
        }
        let mut right = None;
        for i in peak_idx..self.samples.len() - 1 {
            if self.samples[i].probs[0] >= level && self.samples[i + 1].probs[0] < level {
                right = Some(cross(i, i + 1));
                break;
            }
        }
        Some((left?, right?))
    }

    /// Width of the success peak at absolute height `1 − eps`.
    pub fn width_at_height(&self, eps: f64) -> Option<f64> {
        let (l, r) = self.crossings_around_peak(1.0 - eps)?;
        Some(r - l)
    }

    /// Success probability at the sample nearest to `t`.
    pub fn prob_near(&self, t: f64) -> Option<f64> {
        self.samples
            .iter()
            .min_by(|a, b| (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap())
            .map(|s| s.probs[0])
    }

    /// CSV export with header "t,p0,...,p{M-1},gamma,norm_err".
    pub fn to_csv(&self) -> String {
        let m = self.n_classes();
        let mut out = String::from("t");
        for i in 0..m {
            out.push_str(&format!(",p{i}"));
        }
        out.push_str(",gamma,norm_err\n");
        for s in &self.samples {
            out.push_str(&sig12(s.t));
            for p in &s.probs {
                out.push(',');
                out.push_str(&sig12(*p));
            }
            out.push(',');
            out.push_str(&sig12(s.gamma));
            out.push(',');
            out.push_str(&sig12(s.norm_err));
            out.push('\n');
        }
        out
    }
}

/// Integration accuracy and sampling controls.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Controls {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub sample_dt: f64,
}

impl Default for Controls {
    fn default() -> Self {
        Controls { rel_tol: 1e-10, abs_tol: 1e-12, max_step: f64::INFINITY, sample_dt: 0.05 }
    }
}

impl Controls {
    /// Stepper settings; the raw tolerances are tightened by a fixed factor so
    /// that the accumulated norm drift of a run stays below 10·rel_tol (the
    /// per-step estimate controls the embedded 4th-order error, while the
    /// propagated 5th-order solution accrues roughly tol × elapsed-time).
    pub(crate) fn ode(&self) -> OdeControls {
        OdeControls {
            rel_tol: self.rel_tol / 8.0,
            abs_tol: self.abs_tol / 8.0,
            max_step: self.max_step,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug)]
pub enum DynamicsError {
    Graph(GraphError),
    Ode(OdeError),
    PolicyMismatch(String),
    BadConfig(String),
}

impl std::fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DynamicsError::Graph(e) => write!(f, "{e}"),
            DynamicsError::Ode(e) => write!(f, "{e}"),
            DynamicsError::PolicyMismatch(s) => write!(f, "policy/graph mismatch: {s}"),
            DynamicsError::BadConfig(s) => write!(f, "bad config: {s}"),
        }
    }
}

impl std::error::Error for DynamicsError {}

impl From<GraphError> for DynamicsError {
    fn from(e: GraphError) -> Self {
        DynamicsError::Graph(e)
    }
}

impl From<OdeError> for DynamicsError {
    fn from(e: OdeError) -> Self {
        DynamicsError::Ode(e)
    }
}

/// Linear Hamiltonian −γA − |m₀⟩⟨m₀| on the collapsed classes (row-major M×M).
pub fn hamiltonian(collapsed: &CollapsedGraph, gamma: f64) -> Vec<f64> {
    let m = collapsed.n_classes();
    let mut h = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            h[i * m + j] = -gamma * collapsed.at(i, j);
        }
    }
    h[0] -= 1.0;
    h
}

/// Complete-graph convention −γN|s⟩⟨s| − |m₀⟩⟨m₀|; on a complete graph this is
/// the adjacency form shifted by −γ·I, so probabilities are unchanged.
pub fn hamiltonian_complete_form(collapsed: &CollapsedGraph, gamma: f64) -> Vec<f64> {
    let m = collapsed.n_classes();
    let mut h = hamiltonian(collapsed, gamma);
    for i in 0..m {
        h[i * m + i] -= gamma;
    }
    h
}

/// Diagonal self-potential entries g·f(|c_i|²/|m_i|).
pub fn self_potential(
    state: &SubspaceState,
    collapsed: &CollapsedGraph,
    nl: &Nonlinearity,
) -> Vec<f64> {
    let g = nl.g();
    state
        .c
        .iter()
        .zip(&collapsed.class_sizes)
        .map(|(z, &size)| g * nl.f(z.norm_sqr() / size as f64))
        .collect()
}

/// Context a policy needs besides the instantaneous state.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub n_vertices: f64,
    pub marked_count: f64,
    pub class_sizes: Vec<usize>,
    pub srg: Option<SrgParams>,
    pub is_complete: bool,
}

impl EvalContext {
    pub fn for_config(config: &SearchConfig) -> Result<Self, DynamicsError> {
        let collapsed = config.collapsed()?;
        Ok(EvalContext {
            n_vertices: collapsed.n_vertices() as f64,
            marked_count: config.marked_count as f64,
            class_sizes: collapsed.class_sizes.clone(),
            srg: config.srg_params()?,
            is_complete: config.is_complete(),
        })
    }
}

/// Evaluates a policy on a state. Pure in (state, t, context).
pub fn gamma_eval(
    policy: &GammaPolicy,
    state: &SubspaceState,
    nl: &Nonlinearity,
    ctx: &EvalContext,
) -> Result<f64, DynamicsError> {
    let resolved = ResolvedPolicy::resolve(policy, ctx)?;
    let probs = state.probabilities();
    Ok(resolved.eval(&probs, state.t, nl, &ctx.class_sizes))
}

/// Policy with graph-dependent constants folded in, so evaluation cannot fail.
#[derive(Debug, Clone)]
pub(crate) enum ResolvedPolicy {
    Fixed(f64),
    CubicCritical { n: f64, k: f64 },
    GeneralCritical { n: f64, k: f64 },
    SuffComplete { gamma_l: f64 },
    Table(Vec<(f64, f64)>),
}

impl ResolvedPolicy {
    pub(crate) fn resolve(policy: &GammaPolicy, ctx: &EvalContext) -> Result<Self, DynamicsError> {
        let n = ctx.n_vertices;
        let k = ctx.marked_count;
        match policy {
            GammaPolicy::Fixed { gamma } => Ok(ResolvedPolicy::Fixed(*gamma)),
            GammaPolicy::CubicCritical => {
                if !ctx.is_complete {
                    return Err(DynamicsError::PolicyMismatch(
                        "cubic_critical applies to the complete graph".into(),
                    ));
                }
                Ok(ResolvedPolicy::CubicCritical { n, k })
            }
            GammaPolicy::GeneralCritical => {
                if !ctx.is_complete {
                    return Err(DynamicsError::PolicyMismatch(
                        "general_critical applies to the complete graph".into(),
                    ));
                }
                Ok(ResolvedPolicy::GeneralCritical { n, k })
            }
            GammaPolicy::SrgC1 | GammaPolicy::SrgC2 | GammaPolicy::SrgC2Prime => {
                let srg = ctx.srg.ok_or_else(|| {
                    DynamicsError::PolicyMismatch(
                        "srg policies need strongly regular parameters".into(),
                    )
                })?;
                let kd = srg.degree as f64;
                let mu = srg.mu_common as f64;
                let nn = srg.n_vertices as f64;
                let gamma = match policy {
                    GammaPolicy::SrgC1 => 1.0 / kd,
                    GammaPolicy::SrgC2 => 1.0 / kd + 1.0 / ((nn - 1.0) * mu),
                    _ => {
                        if srg.degree <= srg.mu_common {
                            return Err(DynamicsError::PolicyMismatch(
                                "srg_c2_prime needs k > μ".into(),
                            ));
                        }
                        1.0 / (kd - mu)
                    }
                };
                Ok(ResolvedPolicy::Fixed(gamma))
            }
            GammaPolicy::SuffCompleteCritical { gamma_l } => {
                if ctx.class_sizes.len() < 2 {
                    return Err(DynamicsError::PolicyMismatch(
                        "suff_complete_critical needs at least two classes".into(),
                    ));
                }
                Ok(ResolvedPolicy::SuffComplete { gamma_l: *gamma_l })
            }
            GammaPolicy::NumericTable { table } => {
                if table.is_empty() {
                    return Err(DynamicsError::PolicyMismatch("empty γ table".into()));
                }
                if table.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(DynamicsError::PolicyMismatch(
                        "γ table times must be strictly increasing".into(),
                    ));
                }
                Ok(ResolvedPolicy::Table(table.clone()))
            }
        }
    }

    /// γ for the given class probabilities at time t.
    pub(crate) fn eval(&self, probs: &[f64], t: f64, nl: &Nonlinearity, m_sizes: &[usize]) -> f64 {
        match self {
            ResolvedPolicy::Fixed(g) => *g,
            ResolvedPolicy::CubicCritical { n, k } => {
                let g_big = nl.g() / (k * (n - k));
                let x = probs[0];
                (1.0 + g_big * (n * x - k)) / n
            }
            ResolvedPolicy::GeneralCritical { n, k } => {
                let x = probs[0];
                let fa = nl.f(x / k);
                let fb = nl.f((1.0 - x) / (n - k));
                (1.0 + nl.g() * (fa - fb)) / n
            }
            ResolvedPolicy::SuffComplete { gamma_l } => {
                let f0 = nl.f(probs[0] / m_sizes[0] as f64);
                let f1 = nl.f(probs[1] / m_sizes[1] as f64);
                gamma_l * (1.0 + nl.g() * (f0 - f1))
            }
            ResolvedPolicy::Table(table) => {
                if t <= table[0].0 {
                    return table[0].1;
                }
                for w in table.windows(2) {
                    if t <= w[1].0 {
                        let frac = (t - w[0].0) / (w[1].0 - w[0].0);
                        return w[0].1 + frac * (w[1].1 - w[0].1);
                    }
                }
                table.last().unwrap().1
            }
        }
    }
}

/// Integrates a configured run from the uniform start state to `t_end`,
/// sampling every `controls.sample_dt`.
pub fn integrate(
    config: &SearchConfig,
    t_end: f64,
    controls: &Controls,
) -> Result<Trajectory, DynamicsError> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(DynamicsError::BadConfig("t_end must be positive".into()));
    }
    let n_samples = (t_end / controls.sample_dt).ceil() as usize;
    let mut times: Vec<f64> = (0..=n_samples).map(|i| i as f64 * controls.sample_dt).collect();
    times.retain(|&t| t < t_end);
    times.push(t_end);
    integrate_at_times(config, &times, controls)
}

/// Like [`integrate`], but samples exactly at `sample_times` (ascending).
pub fn integrate_at_times(
    config: &SearchConfig,
    sample_times: &[f64],
    controls: &Controls,
) -> Result<Trajectory, DynamicsError> {
    let collapsed = config.collapsed()?;
    let ctx = EvalContext::for_config(config)?;
    let resolved = ResolvedPolicy::resolve(&config.policy, &ctx)?;
    let t_end = sample_times.last().copied().unwrap_or(0.0);
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(DynamicsError::BadConfig("need at least one positive sample time".into()));
    }

    let m = collapsed.n_classes();
    let sizes = collapsed.class_sizes.clone();
    let nl = config.nonlinearity.clone();
    let form = config.hamiltonian_form();

    // walk operator B: reduced adjacency, plus I in the projector convention
    let mut walk = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            walk[i * m + j] = collapsed.at(i, j);
        }
        if form == HamiltonianForm::CompleteProjector {
            walk[i * m + i] += 1.0;
        }
    }

    let mut probs_buf = vec![0.0; m];
    let rhs = move |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        for (p, z) in probs_buf.iter_mut().zip(y) {
            *p = z.norm_sqr();
        }
        let gamma = resolved.eval(&probs_buf, t, &nl, &sizes);
        let g = nl.g();
        for i in 0..m {
            let mut acc = Complex64::ZERO;
            for j in 0..m {
                let w = walk[i * m + j];
                if w != 0.0 {
                    acc += y[j] * w;
                }
            }
            acc *= gamma;
            if i == 0 {
                acc += y[0];
            }
            let v = g * nl.f(probs_buf[i] / sizes[i] as f64);
            acc += y[i] * v;
            // i·(γB + oracle + V) y
            dy[i] = Complex64::new(-acc.im, acc.re);
        }
    };

    let y0 = SubspaceState::uniform(&collapsed).c;
    let samples = ode::integrate_sampled(rhs, 0.0, t_end, &y0, sample_times, &controls.ode())?;

    // γ re-derived per sample for reporting (the RHS closure owns its copy)
    let resolved = ResolvedPolicy::resolve(&config.policy, &ctx)?;
    let mut out_samples = Vec::with_capacity(samples.len());
    let mut amplitudes = Vec::with_capacity(samples.len());
    for s in samples {
        let probs: Vec<f64> = s.y.iter().map(|z| z.norm_sqr()).collect();
        let norm: f64 = probs.iter().sum();
        let gamma = resolved.eval(&probs, s.t, &config.nonlinearity, &collapsed.class_sizes);
        out_samples.push(TrajectorySample {
            t: s.t,
            probs,
            gamma,
            norm_err: (norm - 1.0).abs(),
        });
        amplitudes.push(s.y);
    }
    Ok(Trajectory {
        samples: out_samples,
        config_hash: config.config_hash(),
        amplitudes,
    })
}

/// Peak location and width at height 1−eps, measured from the integrated
/// trajectory: a coarse pass locates the peak, a fine pass concentrates
/// samples around it, and the crossing times come from the dense samples.
pub fn measure_peak_width(
    config: &SearchConfig,
    t_end: f64,
    eps: f64,
    controls: &Controls,
) -> Result<(f64, f64), DynamicsError> {
    let coarse_times: Vec<f64> = (1..=4000).map(|i| i as f64 * t_end / 4000.0).collect();
    let coarse = integrate_at_times(config, &coarse_times, controls)?;
    let (t_peak, p_peak) = coarse
        .peak()
        .ok_or_else(|| DynamicsError::BadConfig("no samples produced".into()))?;
    if p_peak < 1.0 - eps {
        return Err(DynamicsError::BadConfig(format!(
            "peak {p_peak:.6} never reaches height 1 − ε = {:.6}",
            1.0 - eps
        )));
    }
    let rough = coarse.width_at_height(eps).unwrap_or(t_end / 100.0);
    let lo = (t_peak - 3.0 * rough).max(0.0);
    let hi = (t_peak + 3.0 * rough).min(t_end);
    let mut times: Vec<f64> = Vec::with_capacity(4600);
    // keep a sparse prefix so the integrator output still covers [0, lo)
    let n_pre = 500;
    for i in 1..n_pre {
        let t = lo * i as f64 / n_pre as f64;
        if t > 0.0 {
            times.push(t);
        }
    }
    let n_fine = 4000;
    for i in 0..=n_fine {
        times.push(lo + (hi - lo) * i as f64 / n_fine as f64);
    }
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let fine = integrate_at_times(config, &times, controls)?;
    let (t_peak, _) = fine.peak_in(lo, hi).unwrap();
    let width = fine.width_at_height(eps).ok_or_else(|| {
        DynamicsError::BadConfig("peak does not cross the requested height on both sides".into())
    })?;
    Ok((t_peak, width))
}

/// Numeric critical-γ search for a linear (state-independent) Hamiltonian:
/// finds the γ that balances the uniform state's overlap between the two
/// lowest eigenvectors.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaSearch {
    pub gamma: f64,
    /// Objective | |⟨s|ψ₀⟩|² − |⟨s|ψ₁⟩|² | at the reported γ.
    pub objective: f64,
    /// True when the minimum sat on the range boundary (no interior crossing).
    pub at_boundary: bool,
}

pub fn find_gamma_numeric(
    collapsed: &CollapsedGraph,
    gamma_range: (f64, f64),
    n_grid: usize,
) -> GammaSearch {
    let (lo, hi) = gamma_range;
    let n_grid = n_grid.max(3);
    let obj = |gamma: f64| -> f64 {
        let s = spectral::spectral_summary(collapsed, gamma);
        (s.overlaps_s[0] - s.overlaps_s[1]).abs()
    };
    let grid: Vec<f64> =
        (0..n_grid).map(|i| lo + (hi - lo) * i as f64 / (n_grid - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&g| obj(g)).collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    if best == 0 || best == n_grid - 1 {
        return GammaSearch { gamma: grid[best], objective: values[best], at_boundary: true };
    }
    // golden-section refinement inside the bracketing cells
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = obj(x1);
    let mut f2 = obj(x2);
    for _ in 0..80 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = obj(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = obj(x2);
        }
        if (b - a).abs() < 1e-14 * b.abs().max(1.0) {
            break;
        }
    }
    let gamma = 0.5 * (a + b);
    GammaSearch { gamma, objective: obj(gamma), at_boundary: false }
}
