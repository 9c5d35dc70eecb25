//! Dense symmetric eigensolver and the gap/overlap diagnostics used to locate
//! critical jumping rates.
//!
//! The reduced subspaces here are tiny (M ≤ a few dozen), so a cyclic Jacobi
//! sweep with a deterministic rotation order is both adequate and exactly
//! reproducible across runs.

use serde::Serialize;

use crate::fmt::sig12;
use crate::graphs::CollapsedGraph;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    NotSymmetric { residual: f64 },
    NotSquare { len: usize },
}

impl std::fmt::Display for SpectralError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectralError::NotSymmetric { residual } => {
                write!(f, "matrix is not symmetric (residual {residual:.3e})")
            }
            SpectralError::NotSquare { len } => write!(f, "{len} entries do not form a square matrix"),
        }
    }
}

impl std::error::Error for SpectralError {}

/// Eigendecomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors (column j ↔ eigenvalue j).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Row-major M×M; `eigenvectors[i * m + j]` is component i of vector j.
    pub eigenvectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        let m = self.eigenvalues.len();
        (0..m).map(|i| self.eigenvectors[i * m + j]).collect()
    }
}

/// Cyclic Jacobi diagonalization of a symmetric M×M matrix (row-major).
///
/// Eigenvalues come back ascending; each eigenvector's first component of
/// magnitude above 1e-12 is made positive so overlap tables are stable.
pub fn eig_sym(matrix: &[f64], m: usize) -> Result<EigenDecomposition, SpectralError> {
    if matrix.len() != m * m {
        return Err(SpectralError::NotSquare { len: matrix.len() });
    }
    let scale = matrix.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut sym_res = 0.0f64;
    for i in 0..m {
        for j in (i + 1)..m {
            sym_res = sym_res.max((matrix[i * m + j] - matrix[j * m + i]).abs());
        }
    }
    if sym_res > 1e-10 * scale.max(1.0) {
        return Err(SpectralError::NotSymmetric { residual: sym_res });
    }

    let mut a = matrix.to_vec();
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                s += a[i * m + j] * a[i * m + j];
            }
        }
        s.sqrt()
    };

    let fro = {
        let s: f64 = a.iter().map(|x| x * x).sum();
        s.sqrt().max(f64::MIN_POSITIVE)
    };
    for _sweep in 0..100 {
        if off(&a) <= 1e-15 * fro {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- JᵀAJ on rows/columns p, q
                for i in 0..m {
                    let aip = a[i * m + p];
                    let aiq = a[i * m + q];
                    a[i * m + p] = c * aip - s * aiq;
                    a[i * m + q] = s * aip + c * aiq;
                }
                for j in 0..m {
                    let apj = a[p * m + j];
                    let aqj = a[q * m + j];
                    a[p * m + j] = c * apj - s * aqj;
                    a[q * m + j] = s * apj + c * aqj;
                }
                for i in 0..m {
                    let vip = v[i * m + p];
                    let viq = v[i * m + q];
                    v[i * m + p] = c * vip - s * viq;
                    v[i * m + q] = s * vip + c * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i * m + i].partial_cmp(&a[j * m + j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * m + i]).collect();
    let mut eigenvectors = vec![0.0; m * m];
    for (new_j, &old_j) in order.iter().enumerate() {
        let mut sign = 1.0;
        for i in 0..m {
            if v[i * m + old_j].abs() > 1e-12 {
                sign = v[i * m + old_j].signum();
                break;
            }
        }
        for i in 0..m {
            eigenvectors[i * m + new_j] = sign * v[i * m + old_j];
        }
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Spectrum diagnostics of the linear search Hamiltonian at one γ.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub gamma: f64,
    pub eigenvalues: Vec<f64>,
    /// E₁ − E₀.
    pub gap: f64,
    /// |⟨s|ψ_j⟩|² per eigenvector.
    pub overlaps_s: Vec<f64>,
    /// |⟨w|ψ_j⟩|² per eigenvector.
    pub overlaps_w: Vec<f64>,
}

/// Diagonalizes the linear Hamiltonian on a γ grid and reports gaps and
/// overlaps with the uniform state |s⟩ and the marked class |w⟩.
pub fn overlap_sweep(collapsed: &CollapsedGraph, gamma_grid: &[f64]) -> Vec<SpectralSummary> {
    gamma_grid.iter().map(|&g| spectral_summary(collapsed, g)).collect()
}

/// Single-γ version of [`overlap_sweep`].
pub fn spectral_summary(collapsed: &CollapsedGraph, gamma: f64) -> SpectralSummary {
    let m = collapsed.n_classes();
    let n = collapsed.n_vertices() as f64;
    let h = crate::dynamics::hamiltonian(collapsed, gamma);
    let eig = eig_sym(&h, m).expect("collapsed adjacency is symmetric");
    let s: Vec<f64> = collapsed.class_sizes.iter().map(|&sz| (sz as f64 / n).sqrt()).collect();
    let mut overlaps_s = Vec::with_capacity(m);
    let mut overlaps_w = Vec::with_capacity(m);
    for j in 0..m {
        let mut ds = 0.0;
        for (i, si) in s.iter().enumerate() {
            ds += si * eig.eigenvectors[i * m + j];
        }
        overlaps_s.push(ds * ds);
        let dw = eig.eigenvectors[j]; // row 0, column j
        overlaps_w.push(dw * dw);
    }
    let gap = eig.eigenvalues[1] - eig.eigenvalues[0];
    SpectralSummary { gamma, eigenvalues: eig.eigenvalues, gap, overlaps_s, overlaps_w }
}

/// CSV export: "gamma,gap,os0,os1,...,ow0,ow1,...".
pub fn sweep_to_csv(summaries: &[SpectralSummary]) -> String {
    let mut out = String::new();
    let m = summaries.first().map_or(0, |s| s.overlaps_s.len());
    out.push_str("gamma,gap");
    for j in 0..m {
        out.push_str(&format!(",os{j}"));
    }
    for j in 0..m {
        out.push_str(&format!(",ow{j}"));
    }
    out.push('\n');
    for s in summaries {
        out.push_str(&sig12(s.gamma));
        out.push(',');
        out.push_str(&sig12(s.gap));
        for v in &s.overlaps_s {
            out.push(',');
            out.push_str(&sig12(*v));
        }
        for v in &s.overlaps_w {
            out.push(',');
            out.push_str(&sig12(*v));
        }
        out.push('\n');
    }
    out
}
