//! Adaptive Dormand–Prince 5(4) integrator over complex state vectors.
//!
//! The embedded pair drives step-size control; the standard quartic dense
//! interpolant provides samples at requested times without constraining the
//! step sequence. State is a flat `Vec<Complex64>` and the right-hand side is
//! any `FnMut(t, y, dy)`, so the same core serves both the reduced-subspace
//! dynamics and the full-space oracle.

use num_complex::Complex64;

// Butcher tableau (Dormand & Prince 1980), FSAL form.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights are row 7 of A (FSAL); these are (b5 - b4) for the error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output coefficients (Hairer, Nørsett & Wanner, dopri5 CONTD5).
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Step-size and accuracy controls.
#[derive(Debug, Clone, Copy)]
pub struct OdeControls {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeControls {
    fn default() -> Self {
        OdeControls { rel_tol: 1e-10, abs_tol: 1e-12, max_step: f64::INFINITY, max_steps: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OdeError {
    /// Step size shrank below representable resolution at time t.
    StepSizeUnderflow { t: f64 },
    /// NaN or infinity appeared in the state or derivative at time t.
    NonFinite { t: f64 },
    /// Step budget exhausted before reaching t_end.
    TooManySteps { t: f64 },
}

impl std::fmt::Display for OdeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OdeError::StepSizeUnderflow { t } => {
                write!(f, "step size underflow at t = {t} (stiff regime; loosen tolerances or shorten the run)")
            }
            OdeError::NonFinite { t } => write!(f, "non-finite state at t = {t}"),
            OdeError::TooManySteps { t } => write!(f, "step budget exhausted at t = {t}"),
        }
    }
}

impl std::error::Error for OdeError {}

/// One accepted sample produced by [`integrate_sampled`].
#[derive(Debug, Clone)]
pub struct OdeSample {
    pub t: f64,
    pub y: Vec<Complex64>,
}

struct DenseStep {
    cont: [Vec<Complex64>; 5],
    t0: f64,
    h: f64,
}

impl DenseStep {
    fn eval(&self, t: f64, out: &mut [Complex64]) {
        let theta = (t - self.t0) / self.h;
        let th1 = 1.0 - theta;
        for i in 0..out.len() {
            let c = &self.cont;
            out[i] = c[0][i]
                + (c[1][i] + (c[2][i] + (c[3][i] + c[4][i] * th1) * theta) * th1) * theta;
        }
    }
}

/// Integrates dy/dt = rhs(t, y) from `t0` to `t_end`, returning the state at
/// each of `sample_times` (must be ascending, within [t0, t_end]).
///
/// The final state (at `t_end`) is always appended if not already sampled.
pub fn integrate_sampled<F>(
    mut rhs: F,
    t0: f64,
    t_end: f64,
    y0: &[Complex64],
    sample_times: &[f64],
    controls: &OdeControls,
) -> Result<Vec<OdeSample>, OdeError>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k: Vec<Vec<Complex64>> = (0..7).map(|_| vec![Complex64::ZERO; dim]).collect();
    let mut y_stage = vec![Complex64::ZERO; dim];
    let mut y_new = vec![Complex64::ZERO; dim];

    let mut samples = Vec::with_capacity(sample_times.len() + 1);
    let mut next_sample = 0usize;
    while next_sample < sample_times.len() && sample_times[next_sample] <= t0 {
        samples.push(OdeSample { t: sample_times[next_sample], y: y.clone() });
        next_sample += 1;
    }

    {
        let (k0, rest) = k.split_first_mut().unwrap();
        let _ = rest;
        rhs(t, &y, k0);
    }
    if !finite(&k[0]) {
        return Err(OdeError::NonFinite { t });
    }

    let mut h = initial_step(t0, t_end, &y, &k[0], controls);
    let mut n_steps = 0usize;

    while t < t_end {
        if n_steps >= controls.max_steps {
            return Err(OdeError::TooManySteps { t });
        }
        n_steps += 1;
        h = h.min(controls.max_step).min(t_end - t);
        if h <= t.abs().max(1.0) * 1e-15 {
            return Err(OdeError::StepSizeUnderflow { t });
        }

        // stages 2..=7 (k[0] is FSAL from the previous step)
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = Complex64::ZERO;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += kj[i] * a;
                    }
                }
                y_stage[i] = y[i] + acc * h;
            }
            let ts = t + C[s] * h;
            let ks = &mut k[s];
            rhs(ts, &y_stage, ks);
        }
        // 5th-order solution is stage 7's argument (A row 6 == b), i.e. y_stage
        y_new.copy_from_slice(&y_stage);

        // error estimate
        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut e = Complex64::ZERO;
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += kj[i] * E[j];
                }
            }
            let e = e * h;
            let sc = controls.abs_tol + controls.rel_tol * y[i].norm().max(y_new[i].norm());
            err_sq += (e.norm() / sc).powi(2);
        }
        let err = (err_sq / dim as f64).sqrt();

        if !err.is_finite() || !finite(&y_new) {
            // halve and retry; repeated failure trips the underflow guard
            h *= 0.25;
            if h <= t.abs().max(1.0) * 1e-15 {
                return Err(OdeError::NonFinite { t });
            }
            continue;
        }

        if err <= 1.0 {
            // accept: build dense interpolant, emit samples inside (t, t+h]
            let t_new = t + h;
            if next_sample < sample_times.len() && sample_times[next_sample] <= t_new {
                let dense = make_dense(&y, &y_new, &k, h, t);
                while next_sample < sample_times.len() && sample_times[next_sample] <= t_new {
                    let ts = sample_times[next_sample];
                    let mut yi = vec![Complex64::ZERO; dim];
                    dense.eval(ts, &mut yi);
                    samples.push(OdeSample { t: ts, y: yi });
                    next_sample += 1;
                }
            }
            // FSAL: k7 becomes next step's k1
            let k6 = k.pop().unwrap();
            k[0].copy_from_slice(&k6);
            k.push(k6);
            std::mem::swap(&mut y, &mut y_new);
            t = t_new;
        }

        let fac = 0.9 * err.powf(-0.2);
        h *= fac.clamp(0.2, 5.0);
    }

    if samples.last().map(|s| s.t < t_end) != Some(false) {
        samples.push(OdeSample { t, y: y.clone() });
    }
    Ok(samples)
}

fn make_dense(
    y: &[Complex64],
    y_new: &[Complex64],
    k: &[Vec<Complex64>],
    h: f64,
    t: f64,
) -> DenseStep {
    let dim = y.len();
    let mut cont: [Vec<Complex64>; 5] = [
        vec![Complex64::ZERO; dim],
        vec![Complex64::ZERO; dim],
        vec![Complex64::ZERO; dim],
        vec![Complex64::ZERO; dim],
        vec![Complex64::ZERO; dim],
    ];
    for i in 0..dim {
        let ydiff = y_new[i] - y[i];
        let bspl = k[0][i] * h - ydiff;
        cont[0][i] = y[i];
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - k[6][i] * h - bspl;
        let mut d = Complex64::ZERO;
        for (j, kj) in k.iter().enumerate() {
            if D[j] != 0.0 {
                d += kj[i] * D[j];
            }
        }
        cont[4][i] = d * h;
    }
    DenseStep { cont, t0: t, h }
}

fn initial_step(
    t0: f64,
    t_end: f64,
    y: &[Complex64],
    f0: &[Complex64],
    controls: &OdeControls,
) -> f64 {
    let d0 = rms(y, controls);
    let d1 = rms(f0, controls);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0.min(t_end - t0).min(controls.max_step)
}

fn rms(v: &[Complex64], c: &OdeControls) -> f64 {
    let s: f64 = v
        .iter()
        .map(|z| (z.norm() / (c.abs_tol + c.rel_tol * z.norm())).powi(2))
        .sum();
    (s / v.len() as f64).sqrt()
}

fn finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phase_rotation_exact_solution() {
        // dy/dt = -i y  =>  y(t) = e^{-it}
        let controls = OdeControls::default();
        let samples = integrate_sampled(
            |_t, y, dy| {
                dy[0] = c(0.0, -1.0) * y[0];
            },
            0.0,
            10.0,
            &[c(1.0, 0.0)],
            &[2.5, 5.0, 10.0],
            &controls,
        )
        .unwrap();
        for s in &samples {
            let exact = c(s.t.cos(), -s.t.sin());
            assert!((s.y[0] - exact).norm() < 1e-9, "t={} err={}", s.t, (s.y[0] - exact).norm());
        }
    }

    #[test]
    fn two_level_rabi_oscillation() {
        // H = σ_x: |0> -> cos(t)|0> - i sin(t)|1>
        let controls = OdeControls { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() };
        let times: Vec<f64> = (1..=40).map(|i| i as f64 * PI / 20.0).collect();
        let samples = integrate_sampled(
            |_t, y, dy| {
                dy[0] = c(0.0, -1.0) * y[1];
                dy[1] = c(0.0, -1.0) * y[0];
            },
            0.0,
            2.0 * PI,
            &[c(1.0, 0.0), c(0.0, 0.0)],
            &times,
            &controls,
        )
        .unwrap();
        for s in samples.iter().take(times.len()) {
            let exact0 = c(s.t.cos(), 0.0);
            let exact1 = c(0.0, -s.t.sin());
            assert!((s.y[0] - exact0).norm() < 1e-10);
            assert!((s.y[1] - exact1).norm() < 1e-10);
        }
    }

    #[test]
    fn dense_output_matches_tight_sampling() {
        // nonlinear scalar: dy/dt = -i |y|^2 y with |y| = 1 → pure phase e^{-it}
        let controls = OdeControls::default();
        let fine: Vec<f64> = (1..1000).map(|i| i as f64 * 0.01).collect();
        let samples = integrate_sampled(
            |_t, y, dy| {
                let p = y[0].norm_sqr();
                dy[0] = c(0.0, -p) * y[0];
            },
            0.0,
            10.0,
            &[c(1.0, 0.0)],
            &fine,
            &controls,
        )
        .unwrap();
        for s in &samples {
            let exact = c(s.t.cos(), -s.t.sin());
            assert!((s.y[0] - exact).norm() < 1e-8);
        }
    }

    #[test]
    fn norm_drift_stays_small() {
        let controls = OdeControls::default();
        let samples = integrate_sampled(
            |_t, y, dy| {
                dy[0] = c(0.0, -1.0) * y[1];
                dy[1] = c(0.0, -1.0) * y[0];
            },
            0.0,
            100.0,
            &[c(1.0 / 2.0f64.sqrt(), 0.0), c(0.5, 0.5)],
            &[100.0],
            &controls,
        )
        .unwrap();
        // raw-stepper drift accumulates like tol × elapsed time; callers that
        // promise tighter norm conservation scale their tolerances down
        let n: f64 = samples.last().unwrap().y.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-8, "norm drift {}", (n - 1.0).abs());
    }

    #[test]
    fn nan_rhs_is_reported() {
        let controls = OdeControls::default();
        let r = integrate_sampled(
            |_t, _y, dy| {
                dy[0] = c(f64::NAN, 0.0);
            },
            0.0,
            1.0,
            &[c(1.0, 0.0)],
            &[],
            &controls,
        );
        assert!(matches!(r, Err(OdeError::NonFinite { .. })));
    }
}
