//! Closed-form and semi-analytic results: success probabilities, runtimes,
//! peak widths, runtime bounds, perturbative strongly-regular predictions, and
//! auxiliary coordinates.
//!
//! Conventions: N is the vertex count, k the number of marked vertices, g the
//! bare nonlinearity coefficient, and G = g/(k(N−k)) its rescaled form. All
//! quantities here take real-valued N and k so that scaling recipes such as
//! k = N^{1/4} evaluate without rounding.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::Nonlinearity;
use crate::graphs::{srg_check, CollapsedGraph, SrgParams, SrgType};
use crate::quad;

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormError {
    /// The runtime integrand's denominator 1 + g(f_α − f_β) crosses zero.
    StationaryPoint { x: f64 },
    /// f diverges at the peak; the loglinear width has its own bound.
    DivergesAtPeak,
    Domain(String),
    Infeasible(String),
}

impl std::fmt::Display for ClosedFormError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClosedFormError::StationaryPoint { x } => {
                write!(f, "runtime integrand has a stationary point near x = {x:.6}; the success probability cannot pass it")
            }
            ClosedFormError::DivergesAtPeak => {
                write!(f, "f diverges as the success probability reaches 1; use the loglinear width bound instead")
            }
            ClosedFormError::Domain(s) => write!(f, "domain error: {s}"),
            ClosedFormError::Infeasible(s) => write!(f, "infeasible parameters: {s}"),
        }
    }
}

impl std::error::Error for ClosedFormError {}

/// Parameters of complete-graph search at the critical γ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CompleteSearchParams {
    pub n_vertices: f64,
    pub marked_count: f64,
    pub g: f64,
    /// Height offset ε for width-at-height (1 − ε) queries.
    pub epsilon_height: f64,
}

impl CompleteSearchParams {
    pub fn new(n: f64, k: f64, g: f64) -> Self {
        assert!(n >= 2.0 && k >= 1.0 && k < n, "need 1 ≤ k < N");
        CompleteSearchParams { n_vertices: n, marked_count: k, g, epsilon_height: 0.01 }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon_height = eps;
        self
    }

    /// G = g/(k(N−k)).
    pub fn g_big(&self) -> f64 {
        self.g / (self.marked_count * (self.n_vertices - self.marked_count))
    }

    pub fn from_g_big(n: f64, k: f64, g_big: f64) -> Self {
        Self::new(n, k, g_big * k * (n - k))
    }
}

/// Linear complete-graph success probability
/// x(t) = (1/N)cos²(t/√N) + sin²(t/√N); equals 1 at t = π√N/2.
pub fn linear_prob(n: f64, t: f64) -> f64 {
    let phase = t / n.sqrt();
    let c = phase.cos();
    let s = phase.sin();
    c * c / n + s * s
}

/// Cubic success probability at the critical γ,
/// x(t) = k(N·sin²φ + (k+g)cos²φ) / (N(k·sin²φ + (k+g)cos²φ)), φ = √((k+g)/N)·t.
///
/// Periodic with period 2t*; reduces to the linear rotation at g = 0.
pub fn cubic_prob(params: &CompleteSearchParams, t: f64) -> f64 {
    let (n, k, g) = (params.n_vertices, params.marked_count, params.g);
    let q = k + g;
    let phase = (q / n).sqrt() * t;
    let s2 = phase.sin().powi(2);
    let c2 = phase.cos().powi(2);
    k * (n * s2 + q * c2) / (n * (k * s2 + q * c2))
}

/// Inverse of [`cubic_prob`] on [k/N, 1] → [0, t*]:
/// t(x) = −√(N/(k+g))·{tan⁻¹[√(Nk)·√(1−x)/(√(k+g)·√(Nx−k))] − π/2}.
pub fn cubic_time_of_prob(params: &CompleteSearchParams, x: f64) -> f64 {
    let (n, k, g) = (params.n_vertices, params.marked_count, params.g);
    assert!(
        x >= k / n - 1e-12 && x <= 1.0 + 1e-12,
        "x must lie in [k/N, 1], got {x}"
    );
    let q = k + g;
    let num = (n * k).sqrt() * (1.0 - x).max(0.0).sqrt();
    let den = q.sqrt() * (n * x - k).max(0.0).sqrt();
    let angle = if den == 0.0 { std::f64::consts::FRAC_PI_2 } else { (num / den).atan() };
    -(n / q).sqrt() * (angle - std::f64::consts::FRAC_PI_2)
}

/// First time the cubic success probability reaches 1: t* = π√N/(2√(k+g)).
pub fn cubic_runtime(params: &CompleteSearchParams) -> f64 {
    let (n, k, g) = (params.n_vertices, params.marked_count, params.g);
    assert!(k + g > 0.0, "need k + g > 0");
    std::f64::consts::PI * n.sqrt() / (2.0 * (k + g).sqrt())
}

/// Exact width of the cubic success peak at height 1 − ε:
/// Δt = 2√(N/(k+g))·tan⁻¹[√(Nk)·√ε/(√(k+g)·√(N(1−ε)−k))].
pub fn cubic_width_exact(params: &CompleteSearchParams) -> f64 {
    let (n, k, g) = (params.n_vertices, params.marked_count, params.g);
    let eps = params.epsilon_height;
    assert!(eps > 0.0 && eps < 1.0 - k / n, "ε must lie in (0, 1 − k/N)");
    let q = k + g;
    let arg = (n * k).sqrt() * eps.sqrt() / (q.sqrt() * (n * (1.0 - eps) - k).sqrt());
    2.0 * (n / q).sqrt() * arg.atan()
}

/// Leading-order width Δt⁽⁰⁾ = 2Nk/(k+g)·√(ε/(k(N−k))).
pub fn cubic_width_leading(params: &CompleteSearchParams) -> f64 {
    let (n, k, g) = (params.n_vertices, params.marked_count, params.g);
    let eps = params.epsilon_height;
    2.0 * n * k / (k + g) * (eps / (k * (n - k))).sqrt()
}

/// Runtime for a general nonlinearity by quadrature of
/// t* = (N/2√k)·∫ [1 + g(f_α − f_β)]⁻¹ [(1−x)(Nx−k)]^(−1/2) dx
/// over x ∈ [k/N, 1], using the substitution x = k/N + (1 − k/N)sin²θ which
/// removes both inverse-square-root endpoint singularities and leaves
/// t* = √(N/k)·∫₀^{π/2} [1 + g(f_α − f_β)]⁻¹ dθ.
pub fn general_runtime(nl: &Nonlinearity, n: f64, k: f64) -> Result<f64, ClosedFormError> {
    if !(k >= 1.0 && k < n) {
        return Err(ClosedFormError::Domain(format!("need 1 ≤ k < N, got k={k}, N={n}")));
    }
    let g = nl.g();
    let x_of = |theta: f64| k / n + (1.0 - k / n) * theta.sin().powi(2);
    let denom_of = |x: f64| 1.0 + g * (nl.f(x / k) - nl.f((1.0 - x) / (n - k)));
    // the denominator must stay positive on (k/N, 1)
    for i in 1..4096 {
        let x = x_of(std::f64::consts::FRAC_PI_2 * i as f64 / 4096.0);
        if denom_of(x) <= 0.0 {
            return Err(ClosedFormError::StationaryPoint { x });
        }
    }
    let integrand = |theta: f64| 1.0 / denom_of(x_of(theta));
    let r = quad::integrate_to_tol(integrand, 0.0, std::f64::consts::FRAC_PI_2, 1e-8);
    Ok((n / k).sqrt() * r.value)
}

/// Leading-order width Δt⁽⁰⁾ = 2N/(1 + g(f_α|ₓ₌₁ − f_β|ₓ₌₁))·√(ε/(k(N−k))).
///
/// f_α|ₓ₌₁ = f(1/k) and f_β|ₓ₌₁ = f(0⁺); nonlinearities that diverge at 0
/// (loglinear) are directed to [`log_width_lower_bound`]. For the
/// cubic-quintic with k ≥ 2 the coefficient follows the large-k
/// simplification (k−1)/k² → 1/k, matching the cubic formula.
pub fn general_width_leading(
    nl: &Nonlinearity,
    n: f64,
    k: f64,
    eps: f64,
) -> Result<f64, ClosedFormError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ClosedFormError::Domain("ε must lie in (0, 1)".into()));
    }
    let g = nl.g();
    let df = match nl {
        Nonlinearity::Linear => 0.0,
        Nonlinearity::Cubic { .. } => 1.0 / k,
        Nonlinearity::CubicQuintic { .. } => {
            if k >= 2.0 {
                1.0 / k
            } else {
                // (k−1)/k² vanishes at k = 1: the g term drops entirely
                (k - 1.0) / (k * k)
            }
        }
        Nonlinearity::Loglinear { .. } => return Err(ClosedFormError::DivergesAtPeak),
        Nonlinearity::Custom { f, .. } => {
            let f0 = f(1e-15);
            if !f0.is_finite() {
                return Err(ClosedFormError::DivergesAtPeak);
            }
            f(1.0 / k) - f0
        }
    };
    Ok(2.0 * n / (1.0 + g * df) * (eps / (k * (n - k))).sqrt())
}

/// Coefficients of the cubic-quintic runtime integrand's quadratic
/// denominator, with the derived combinations Δ = b²−4ac, Σ = a+b+c,
/// ξ = 2ak + 2cN + b(k+N).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CubicQuinticCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub delta: f64,
    pub sigma: f64,
    pub xi: f64,
}

pub fn cq_coeffs(n: f64, k: f64, g: f64) -> CubicQuinticCoeffs {
    let a = -g * n * (n - 2.0 * k);
    let b = g * k * (n * n - k * n - 2.0 * k);
    let c = -g * k * k * (n - k - 1.0) + k * k * (n - k) * (n - k);
    CubicQuinticCoeffs {
        a,
        b,
        c,
        delta: b * b - 4.0 * a * c,
        sigma: a + b + c,
        xi: 2.0 * a * k + 2.0 * c * n + b * (k + n),
    }
}

/// Closed-form cubic-quintic runtime. `used_fallback` marks parameter points
/// where a radicand lost all significance and the value came from quadrature
/// instead.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CqRuntime {
    pub value: f64,
    pub used_fallback: bool,
}

/// Cubic-quintic runtime
/// t* = (π/2)·(Nk²(N−k)²/2√k)·(√2/(√Σ√Δ))·[(2a+b+√Δ)/√(ξ+√Δ(k−N)) + (−2a−b+√Δ)/√(ξ−√Δ(k−N))].
///
/// The combination ξ + √Δ(k−N) cancels in its leading terms, so it is
/// regrouped as 2k(a+b) + 2cN + (N−k)·4ac/(b+√Δ), which is the same quantity
/// with the cancellation performed analytically (b − √Δ = 4ac/(b + √Δ)).
pub fn cq_runtime(n: f64, k: f64, g: f64) -> Result<CqRuntime, ClosedFormError> {
    if !(k >= 1.0 && 2.0 * k < n) {
        return Err(ClosedFormError::Domain(format!("need 1 ≤ k < N/2, got k={k}, N={n}")));
    }
    if g < 0.0 {
        return Err(ClosedFormError::Domain("attractive coefficient g ≥ 0 expected".into()));
    }
    if g == 0.0 {
        return Ok(CqRuntime {
            value: std::f64::consts::FRAC_PI_2 * (n / k).sqrt(),
            used_fallback: false,
        });
    }
    let co = cq_coeffs(n, k, g);
    let fallback = || {
        general_runtime(&Nonlinearity::CubicQuintic { g }, n, k)
            .map(|value| CqRuntime { value, used_fallback: true })
    };
    if co.delta <= 0.0 || co.sigma <= 0.0 {
        return fallback();
    }
    let sd = co.delta.sqrt();
    let (a, b, c) = (co.a, co.b, co.c);
    // stable forms: √Δ − b = −4ac/(b+√Δ), so the leading b's cancel analytically
    let sd_minus_b = -4.0 * a * c / (b + sd);
    let num_plus = 2.0 * (a + b) + sd_minus_b;
    let num_minus = -2.0 * a + sd_minus_b;
    let den_plus = 2.0 * k * (a + b) + 2.0 * c * n + (n - k) * 4.0 * a * c / (b + sd);
    let den_minus = co.xi + sd * (n - k);
    if den_plus <= 0.0 || den_minus <= 0.0 {
        return fallback();
    }
    let prefactor = std::f64::consts::FRAC_PI_2 * n * k * k * (n - k) * (n - k)
        / (2.0 * k.sqrt())
        * std::f64::consts::SQRT_2
        / (co.sigma.sqrt() * sd);
    let value = prefactor * (num_plus / den_plus.sqrt() + num_minus / den_minus.sqrt());
    if !value.is_finite() || value <= 0.0 {
        return fallback();
    }
    Ok(CqRuntime { value, used_fallback: false })
}

/// Loglinear runtime by quadrature of the runtime integral.
pub fn log_runtime_numeric(n: f64, k: f64, g: f64) -> Result<f64, ClosedFormError> {
    if g <= 0.0 {
        return Err(ClosedFormError::Domain("loglinear runtime needs g > 0".into()));
    }
    general_runtime(&Nonlinearity::Loglinear { g }, n, k)
}

/// Closed-form loglinear runtime bounds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogRuntimeBounds {
    pub lower: f64,
    pub upper_loose: f64,
    pub upper_tight: f64,
}

/// Evaluates the split-integral lower bound, the loose upper bound, and the
/// tangent-line upper bound of the loglinear runtime.
///
/// The lower bound's E₁ term is computed through e^x·E₁(x), which keeps the
/// e^{1/2g} prefactor finite for small g: e^{1/2g}·E₁(w/2g) =
/// √(k/2(N−k))·[e^z E₁(z)] at z = (1 + g·log(2(N−k)/k))/2g.
pub fn log_runtime_bounds(n: f64, k: f64, g: f64) -> Result<LogRuntimeBounds, ClosedFormError> {
    if !(k >= 1.0 && 2.0 * k < n) {
        return Err(ClosedFormError::Domain(format!("need 1 ≤ k < N/2, got k={k}, N={n}")));
    }
    if g <= 0.0 {
        return Err(ClosedFormError::Domain("bounds need g > 0".into()));
    }
    let big_l = ((n - k) / k).ln();
    let pre = n / (2.0 * k.sqrt());

    // lower bound
    let z = (1.0 + g * (2.0 * (n - k) / k).ln()) / (2.0 * g);
    let e1_term = (k / (2.0 * (n - k))).sqrt() * exp_integral_e1_scaled(z);
    let lower = pre / (n - k).sqrt()
        * ((2.0 * (n - 2.0 * k) / n).sqrt() / (1.0 + g * big_l)
            - (1.0 / g) * ((n - k) / k).sqrt() * e1_term);

    // loose upper bound
    let upper_loose =
        pre * (2.0 * (n - 2.0 * k).sqrt() / n + 2.0 / ((n - 2.0 * k).sqrt() * (1.0 + g * big_l)));

    // tangent-line upper bound
    let d = n - 2.0 * k + 2.0 * g * (n - k) * big_l;
    let e = 4.0 * g * k + n - 2.0 * g * n + g * n * big_l;
    let f = 1.0 + 2.0 * g + g * big_l;
    if d <= 0.0 || e <= 0.0 {
        return Err(ClosedFormError::Domain(
            "tangent-line bound leaves its validity region (k too close to N/2)".into(),
        ));
    }
    let t1 = -2.0 * (n - 2.0 * k).sqrt() / (n.sqrt() * d.sqrt()) * (n.sqrt() / d.sqrt()).atan();
    let t2 = std::f64::consts::PI / ((n - k).sqrt() * n.sqrt())
        * ((n * n - 3.0 * k * n + 2.0 * k * k) / d).sqrt();
    let t3 = 2.0 * (e.sqrt() / ((n - 2.0 * k).sqrt() * f.sqrt())).atan() / (f.sqrt() * e.sqrt());
    let upper_tight = pre * (t1 + t2 + t3);

    Ok(LogRuntimeBounds { lower, upper_loose, upper_tight })
}

/// Exponential integral E₁(x) = ∫ₓ^∞ e^{−t}/t dt for x > 0.
///
/// Power series below 1, modified-Lentz continued fraction above; relative
/// error stays under 1e-10 across the range.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E₁ needs x > 0");
    if x < 1.0 {
        e1_series(x)
    } else {
        (-x).exp() * e1_cf(x)
    }
}

/// e^x·E₁(x), stable for large x where E₁ itself underflows.
pub fn exp_integral_e1_scaled(x: f64) -> f64 {
    assert!(x > 0.0, "E₁ needs x > 0");
    if x < 1.0 {
        x.exp() * e1_series(x)
    } else {
        e1_cf(x)
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn e1_series(x: f64) -> f64 {
    // E₁(x) = −γ − ln x + Σ (−1)^{n+1} xⁿ/(n·n!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 1..=60 {
        term *= -x / n as f64;
        let add = -term / n as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

fn e1_cf(x: f64) -> f64 {
    // e^x E₁(x) = 1/(x+1− 1²/(x+3− 2²/(x+5− …))); modified Lentz
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for n in 1..200u64 {
        let an = -((n * n) as f64);
        b += 2.0;
        let mut dn = an * d + b;
        if dn.abs() < tiny {
            dn = tiny;
        }
        let mut cn = b + an / c;
        if cn.abs() < tiny {
            cn = tiny;
        }
        c = cn;
        d = 1.0 / dn;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

/// Ω-style loglinear width estimate √(N/k)/(g·log(N/(kε))); lower-bound
/// semantics, an actual measured width may only exceed it.
pub fn log_width_lower_bound(n: f64, k: f64, g: f64, eps: f64) -> f64 {
    assert!(eps > 0.0 && eps < 0.5, "ε must lie in (0, 1/2)");
    (n / k).sqrt() / (g * (n / (k * eps)).ln())
}

/// Critical points of the repulsive (G < 0) success-probability flow.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StationaryPoints {
    /// Minimum at the start value k/N.
    pub x_min: f64,
    /// Maximum at 1.
    pub x_max: f64,
    /// Stationary point k/N − 1/(NG).
    pub x_stat: f64,
    /// True when x_stat lands inside (k/N, 1), blocking probability 1.
    pub blocking: bool,
}

pub fn repulsive_stationary_points(n: f64, k: f64, g_big: f64) -> StationaryPoints {
    assert!(g_big < 0.0, "repulsive regime means G < 0");
    let x_stat = k / n - 1.0 / (n * g_big);
    StationaryPoints {
        x_min: k / n,
        x_max: 1.0,
        x_stat,
        blocking: g_big < -1.0 / (n - k),
    }
}

/// Which perturbative regime a strongly regular parameter set falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SrgRegime {
    /// k = Θ(N) (conference graphs): gap 2/√(N−1), runtime π√(N−1)/2.
    DegreeThetaN,
    /// k = o(N): sin² prediction with amplitude AμN/k^{3/2}.
    DegreeSmall,
}

/// Perturbative eigenstructure and success-probability predictor for linear
/// search on a strongly regular graph.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SrgPrediction {
    pub regime: SrgRegime,
    pub e_plus: f64,
    pub e_minus: f64,
    /// Normalization constant A = (1 + (k−λ+μ)²/k)^{−1/2}; 1 in the Θ(N) regime.
    pub norm_a: f64,
    /// Predicted peak success probability.
    pub peak: f64,
    /// Predicted first peak time.
    pub t_star: f64,
    /// Angular rate ω of the sin²(ωt) predictor.
    omega: f64,
    n_vertices: f64,
}

impl SrgPrediction {
    /// Predicted success probability at time t.
    pub fn predicted_prob(&self, t: f64) -> f64 {
        match self.regime {
            SrgRegime::DegreeThetaN => {
                let s = (self.omega * t).sin();
                let c = (self.omega * t).cos();
                c * c / self.n_vertices + s * s
            }
            SrgRegime::DegreeSmall => self.peak * (self.omega * t).sin().powi(2),
        }
    }
}

pub fn srg_prediction(params: &SrgParams) -> Result<SrgPrediction, ClosedFormError> {
    let report = srg_check(params);
    if !report.feasible {
        return Err(ClosedFormError::Infeasible(report.violations.join("; ")));
    }
    let n = params.n_vertices as f64;
    let k = params.degree as f64;
    let lambda = params.lambda_common as f64;
    let mu = params.mu_common as f64;
    if report.srg_type == SrgType::TypeI {
        // conference graphs have k = 2t ≈ N/2
        let gap = 2.0 / (n - 1.0).sqrt();
        Ok(SrgPrediction {
            regime: SrgRegime::DegreeThetaN,
            e_plus: -1.0 + 1.0 / (n - 1.0).sqrt(),
            e_minus: -1.0 - 1.0 / (n - 1.0).sqrt(),
            norm_a: 1.0,
            peak: 1.0,
            t_star: std::f64::consts::PI / gap,
            omega: 1.0 / (n - 1.0).sqrt(),
            n_vertices: n,
        })
    } else {
        let a = (1.0 + (k - lambda + mu).powi(2) / k).powf(-0.5);
        let amp = a * mu * n / k.powf(1.5);
        let gamma = 1.0 / k + 1.0 / ((n - 1.0) * mu);
        let split = gamma * a * (n / k).sqrt() * mu;
        // sin argument evaluated at γ ≈ 1/k
        let omega = a * n.sqrt() * mu / k.powf(1.5);
        Ok(SrgPrediction {
            regime: SrgRegime::DegreeSmall,
            e_plus: -gamma * k + split,
            e_minus: -gamma * k - split,
            norm_a: a,
            peak: amp * amp,
            t_star: std::f64::consts::FRAC_PI_2 / omega,
            omega,
            n_vertices: n,
        })
    }
}

/// Idealized error-free per-class probabilities of linear search on a
/// sufficiently complete graph: |c₀|² = cos²(t/√N)/N + sin²(t/√N) and
/// |c_i|² = (|m_i|/N)cos²(t/√N); they sum to exactly 1.
pub fn suff_complete_probs(collapsed: &CollapsedGraph, t: f64) -> Vec<f64> {
    assert!(collapsed.class_sizes[0] == 1, "prediction assumes a single marked vertex");
    let n = collapsed.n_vertices() as f64;
    let phase = t / n.sqrt();
    let c2 = phase.cos().powi(2);
    let s2 = phase.sin().powi(2);
    collapsed
        .class_sizes
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            if i == 0 {
                c2 / n + s2
            } else {
                m as f64 / n * c2
            }
        })
        .collect()
}

/// Bloch-sphere coordinates of a normalized two-class state, marked class at
/// the north pole: z = |c₀|² − |c₁|², x + iy = 2·c₀·c̄₁.
pub fn bloch_coords(c0: Complex64, c1: Complex64) -> (f64, f64, f64) {
    let norm = c0.norm_sqr() + c1.norm_sqr();
    debug_assert!((norm - 1.0).abs() < 1e-8, "state must be normalized, |ψ|² = {norm}");
    let xy = 2.0 * c0 * c1.conj();
    (xy.re, xy.im, c0.norm_sqr() - c1.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn linear_prob_reference_points() {
        assert!((linear_prob(100.0, 0.0) - 0.01).abs() < 1e-15);
        assert!((linear_prob(100.0, PI * 10.0 / 2.0) - 1.0).abs() < 1e-12);
        assert!((linear_prob(1024.0, 25.13) - 0.500402708).abs() < 2e-4);
    }

    #[test]
    fn cubic_prob_and_time_are_mutual_inverses() {
        for &(n, k, g) in &[(100.0, 1.0, 99.0), (1000.0, 1.0, 50.0), (1000.0, 4.0, 12.0)] {
            let params = CompleteSearchParams::new(n, k, g);
            for i in 0..=200 {
                let x = k / n + (1.0 - k / n) * i as f64 / 200.0;
                let t = cubic_time_of_prob(&params, x);
                let back = cubic_prob(&params, t);
                assert!((back - x).abs() < 1e-10, "N={n} k={k} g={g} x={x}: {back}");
            }
        }
    }

    #[test]
    fn constant_time_at_unit_g_big() {
        for n in [100.0, 1000.0, 1e6] {
            let params = CompleteSearchParams::from_g_big(n, 1.0, 1.0);
            assert!((cubic_runtime(&params) - PI / 2.0).abs() < 1e-12);
            assert!((cubic_prob(&params, PI / 2.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn g_zero_reduces_to_linear() {
        let params = CompleteSearchParams::new(256.0, 1.0, 0.0);
        for i in 1..40 {
            let t = i as f64;
            assert!((cubic_prob(&params, t) - linear_prob(256.0, t)).abs() < 1e-13);
        }
    }

    #[test]
    fn cubic_width_against_linear_root_finding() {
        // independent check: bisect linear_prob(t) = 1 − ε around the peak
        let n: f64 = 100.0;
        let eps = 0.01;
        let t_star = PI * n.sqrt() / 2.0;
        let solve = |mut lo: f64, mut hi: f64| -> f64 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if (linear_prob(n, mid) - (1.0 - eps)) * (linear_prob(n, lo) - (1.0 - eps)) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let left = solve(0.0, t_star);
        let right = solve(t_star, 2.0 * t_star);
        let oracle_width = right - left;

        let params = CompleteSearchParams::new(n, 1.0, 0.0).with_epsilon(eps);
        let exact = cubic_width_exact(&params);
        let leading = cubic_width_leading(&params);
        assert!((exact - oracle_width).abs() < 1e-9 * oracle_width);
        assert!((leading - 2.0101).abs() < 1e-3, "leading = {leading}");
        assert!((exact / leading - 1.0).abs() < 0.03);
    }

    #[test]
    fn width_ratio_approaches_one_with_epsilon() {
        let base = CompleteSearchParams::new(10_000.0, 1.0, 30.0);
        let mut prev_gap = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6] {
            let p = base.with_epsilon(eps);
            let ratio = cubic_width_exact(&p) / cubic_width_leading(&p);
            let gap = (ratio - 1.0).abs();
            assert!(gap < prev_gap, "ratio {ratio} did not tighten at ε = {eps}");
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-5);
    }

    #[test]
    fn joint_optimum_width_is_n_independent() {
        // g = √N·k makes the leading width N-free
        for n in [100.0, 10_000.0] {
            let params = CompleteSearchParams::new(n, 1.0, n.sqrt()).with_epsilon(0.01);
            let w = cubic_width_leading(&params);
            let expected = 2.0 * n / (1.0 + n.sqrt()) * (0.01 / (n - 1.0)).sqrt();
            assert!((w - expected).abs() < 1e-12);
        }
        let w100 = cubic_width_leading(&CompleteSearchParams::new(100.0, 1.0, 10.0));
        let w10k = cubic_width_leading(&CompleteSearchParams::new(10_000.0, 1.0, 100.0));
        assert!((w100 / w10k - 1.0).abs() < 0.1, "{w100} vs {w10k}");
    }

    #[test]
    fn quadrature_matches_cubic_closed_form() {
        for &k in &[1.0, 4.0] {
            for &g in &[0.0, 10.0] {
                let n = 1000.0;
                let t_quad = general_runtime(&Nonlinearity::Cubic { g }, n, k).unwrap();
                let t_closed = cubic_runtime(&CompleteSearchParams::new(n, k, g));
                assert!(
                    (t_quad - t_closed).abs() < 1e-6 * t_closed,
                    "k={k} g={g}: {t_quad} vs {t_closed}"
                );
            }
        }
    }

    #[test]
    fn quadrature_linear_is_exact() {
        let t = general_runtime(&Nonlinearity::Linear, 1000.0, 1.0).unwrap();
        assert!((t - PI / 2.0 * 1000.0f64.sqrt()).abs() < 1e-8 * t);
        let t4 = general_runtime(&Nonlinearity::Linear, 1000.0, 4.0).unwrap();
        assert!((t4 - PI / 2.0 * (250.0f64).sqrt()).abs() < 1e-8 * t4);
    }

    #[test]
    fn repulsive_stationary_point_blocks_quadrature() {
        // G = −1 on N=1024: stationary point at x = 2/N
        let g = -(1024.0 - 1.0);
        let r = general_runtime(&Nonlinearity::Cubic { g }, 1024.0, 1.0);
        match r {
            Err(ClosedFormError::StationaryPoint { x }) => {
                assert!((x - 2.0 / 1024.0).abs() < 0.01);
            }
            other => panic!("expected stationary point, got {other:?}"),
        }
    }

    #[test]
    fn width_leading_cubic_and_cq() {
        let n = 1000.0;
        let eps = 0.01;
        let w_cubic = general_width_leading(&Nonlinearity::Cubic { g: 5.0 }, n, 1.0, eps).unwrap();
        let expected = 2.0 * n / 6.0 * (eps / (n - 1.0)).sqrt();
        assert!((w_cubic - expected).abs() < 1e-12);

        // cubic-quintic, k = 1: g drops out
        let w1 = general_width_leading(&Nonlinearity::CubicQuintic { g: 10.0 }, n, 1.0, eps).unwrap();
        let w2 = general_width_leading(&Nonlinearity::CubicQuintic { g: 1000.0 }, n, 1.0, eps).unwrap();
        assert!((w1 - w2).abs() < 1e-12);
        assert!((w1 - 2.0 * n * (eps / (n - 1.0)).sqrt()).abs() < 1e-12);

        // cubic-quintic, k ≥ 2: matches the cubic formula
        let w3 = general_width_leading(&Nonlinearity::CubicQuintic { g: 12.0 }, n, 3.0, eps).unwrap();
        let w4 = general_width_leading(&Nonlinearity::Cubic { g: 12.0 }, n, 3.0, eps).unwrap();
        assert!((w3 - w4).abs() < 1e-12);

        assert!(matches!(
            general_width_leading(&Nonlinearity::Loglinear { g: 1.0 }, n, 1.0, eps),
            Err(ClosedFormError::DivergesAtPeak)
        ));
    }

    #[test]
    fn cq_closed_form_matches_quadrature() {
        for &(n, k, g) in &[(500.0, 1.0, 10.0), (1000.0, 2.0, 100.0), (2000.0, 5.0, 1.0)] {
            let closed = cq_runtime(n, k, g).unwrap();
            assert!(!closed.used_fallback);
            let quad = general_runtime(&Nonlinearity::CubicQuintic { g }, n, k).unwrap();
            assert!(
                (closed.value - quad).abs() < 1e-6 * quad,
                "N={n} k={k} g={g}: {} vs {quad}",
                closed.value
            );
        }
    }

    #[test]
    fn cq_small_g_limit() {
        let n = 1000.0;
        let t = cq_runtime(n, 1.0, 1e-8).unwrap().value;
        let linear = PI / 2.0 * n.sqrt();
        assert!((t / linear - 1.0).abs() < 1e-4, "{t} vs {linear}");
    }

    #[test]
    fn cq_constant_runtime_scaling_at_kappa_one() {
        // g = N with one marked vertex: runtime approaches a constant
        let t1 = cq_runtime(2000.0, 1.0, 2000.0).unwrap().value;
        let t2 = cq_runtime(4000.0, 1.0, 4000.0).unwrap().value;
        assert!((t2 / t1 - 1.0).abs() < 0.01, "{t1} vs {t2}");
    }

    #[test]
    fn e1_reference_values_and_bounds() {
        // oracle: panel quadrature of ∫₁^∞ e^{-t}/t dt
        let rule = crate::quad::GaussLegendre::cached(64);
        let mut oracle = 0.0;
        let mut lo = 1.0f64;
        while lo < 60.0 {
            let hi = lo * 2.0;
            oracle += rule.integrate(lo, hi, |t| (-t).exp() / t);
            lo = hi;
        }
        let e1 = exp_integral_e1(1.0);
        assert!((e1 - oracle).abs() < 1e-10, "{e1} vs oracle {oracle}");
        assert!((e1 - 0.21938393439552026).abs() < 1e-10);

        // strict sandwich at several points
        for &x in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let v = exp_integral_e1(x);
            let lower = 0.5 * (-x).exp() * (1.0 + 2.0 / x).ln();
            let upper = (-x).exp() * (1.0 + 1.0 / x).ln();
            assert!(lower < v && v < upper, "x={x}: {lower} < {v} < {upper}");
        }

        // asymptotic: x·eˣ·E₁(x) → 1
        let x = 1e4;
        assert!((exp_integral_e1_scaled(x) * x - 1.0).abs() < 1e-3);

        // series and continued fraction agree where either could be used
        for x in [0.5, 0.9, 1.0, 1.5] {
            let s = e1_series(x);
            let c = (-x).exp() * e1_cf(x);
            assert!((s - c).abs() < 1e-13, "x={x}: {s} vs {c}");
        }
    }

    #[test]
    fn log_bounds_ordering_on_grid() {
        for &(n, k, g) in &[
            (1024.0, 5.0, 1.0),
            (1024.0, 1.0, 0.5),
            (4096.0, 2.0, 2.0),
            (100_000.0, 17.0, 3.0),
        ] {
            let b = log_runtime_bounds(n, k, g).unwrap();
            let numeric = log_runtime_numeric(n, k, g).unwrap();
            assert!(
                b.lower <= numeric && numeric <= b.upper_tight && b.upper_tight <= b.upper_loose,
                "N={n} k={k} g={g}: lower={} numeric={numeric} tight={} loose={}",
                b.lower,
                b.upper_tight,
                b.upper_loose
            );
        }
    }

    #[test]
    fn log_runtime_small_g_approaches_linear() {
        let n = 1024.0;
        let k = 1.0;
        let t = log_runtime_numeric(n, k, 1e-6).unwrap();
        let linear = PI / 2.0 * n.sqrt();
        assert!((t / linear - 1.0).abs() < 0.01, "{t} vs {linear}");
    }

    #[test]
    fn log_width_bound_behaviour() {
        // doubling ε decreases the bound
        let w1 = log_width_lower_bound(10_000.0, 1.0, 2.0, 0.01);
        let w2 = log_width_lower_bound(10_000.0, 1.0, 2.0, 0.02);
        assert!(w2 > w1);
        // g = √N / ln N keeps it roughly N-independent
        let at = |n: f64| {
            let g = n.sqrt() / n.ln();
            log_width_lower_bound(n, 1.0, g, 0.01)
        };
        assert!((at(1e6) / at(1e8) - 1.0).abs() < 0.1);
    }

    #[test]
    fn repulsive_points_examples() {
        let r = repulsive_stationary_points(1024.0, 1.0, -1.0);
        assert!((r.x_stat - 2.0 / 1024.0).abs() < 1e-15);
        assert!(r.blocking);

        let r2 = repulsive_stationary_points(1024.0, 1.0, -0.5 / 1023.0);
        assert!(!r2.blocking);

        let r3 = repulsive_stationary_points(1024.0, 1.0, -1e-9);
        assert!(r3.x_stat > 1.0);
        assert!(!r3.blocking);
    }

    #[test]
    fn srg_prediction_latin_square_and_paley() {
        let latin = srg_prediction(&SrgParams::new(900, 87, 30, 6)).unwrap();
        assert_eq!(latin.regime, SrgRegime::DegreeSmall);
        assert!(latin.peak <= 1.0);
        assert!((latin.peak - 0.9498).abs() < 1e-3, "peak = {}", latin.peak);
        // amplitude A ≈ k^{3/2}/(μN) in the k ≤ (μN)^{2/3} regime
        let a_approx = 87.0f64.powf(1.5) / (6.0 * 900.0);
        assert!((latin.norm_a / a_approx - 1.0).abs() < 0.1);

        let paley = srg_prediction(&SrgParams::new(101, 50, 24, 25)).unwrap();
        assert_eq!(paley.regime, SrgRegime::DegreeThetaN);
        assert!((paley.t_star - PI * 100.0f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(paley.e_plus > paley.e_minus);
    }

    #[test]
    fn suff_complete_probs_normalized() {
        let collapsed = crate::graphs::collapse_analytic_hypercube(10);
        let n = 1024.0;
        let p0 = suff_complete_probs(&collapsed, 0.0);
        assert!((p0[0] - 1.0 / n).abs() < 1e-15);
        for (i, &m) in collapsed.class_sizes.iter().enumerate().skip(1) {
            assert!((p0[i] - m as f64 / n).abs() < 1e-15);
        }
        let p_star = suff_complete_probs(&collapsed, PI * n.sqrt() / 2.0);
        assert!((p_star[0] - 1.0).abs() < 1e-12);
        let sum: f64 = p_star.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_reference_points() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::ZERO;
        assert_eq!(bloch_coords(one, zero), (0.0, 0.0, 1.0));
        assert_eq!(bloch_coords(zero, one), (0.0, 0.0, -1.0));
        let n: f64 = 1024.0;
        let (x, y, z) = bloch_coords(
            Complex64::new((1.0 / n).sqrt(), 0.0),
            Complex64::new(((n - 1.0) / n).sqrt(), 0.0),
        );
        assert!((z - (2.0 / n - 1.0)).abs() < 1e-14);
        assert!((x * x + y * y + z * z - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_identity_by_finite_differences() {
        // dx/dt = (2/N)·√(k(1−x)(Nx−k))·[1 + G(Nx−k)] along the rising branch
        let n = 100.0;
        let k = 1.0;
        let g_big = 0.3;
        let params = CompleteSearchParams::from_g_big(n, k, g_big);
        let t_star = cubic_runtime(&params);
        let mut state = 12345u64;
        let mut rand01 = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let h = 1e-3;
        for _ in 0..100 {
            let t = (0.02 + 0.96 * rand01()) * t_star;
            let x = cubic_prob(&params, t);
            let fd = (cubic_prob(&params, t - 2.0 * h) - 8.0 * cubic_prob(&params, t - h)
                + 8.0 * cubic_prob(&params, t + h)
                - cubic_prob(&params, t + 2.0 * h))
                / (12.0 * h);
            let formula =
                2.0 / n * (k * (1.0 - x) * (n * x - k)).max(0.0).sqrt() * (1.0 + g_big * (n * x - k));
            assert!((fd - formula).abs() < 1e-8, "t={t}: fd={fd} formula={formula}");
        }
    }
}
