//! Partial eigensolver for symmetric tridiagonal matrices: Sturm-sequence
//! bisection for eigenvalues, inverse iteration for eigenvectors.

use thiserror::Error;

/// Relative accuracy of the bisected eigenvalues.
pub const BISECTION_RTOL: f64 = 1e-12;
const MAX_BISECTION_STEPS: usize = 200;
const INVERSE_ITERATION_SWEEPS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("off-diagonal length {offdiag} does not match diagonal length {diag}")]
    Shape { diag: usize, offdiag: usize },
    #[error("requested {requested} eigenvalues of a {dim}x{dim} matrix")]
    OutOfRange { requested: usize, dim: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, EigenError> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(EigenError::Shape {
                diag: diag.len(),
                offdiag: offdiag.len(),
            });
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(EigenError::NonFinite);
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, x: f64) -> usize {
        let guard = f64::EPSILON * self.norm_bound();
        self.sturm_count_guarded(x, guard)
    }

    fn sturm_count_guarded(&self, x: f64, guard: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q.abs() < guard {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.offdiag[i] * x[i + 1];
            }
            y[i] = v;
        }
        y
    }

    /// Solve `(T - shift·I) x = rhs` by Gaussian elimination with partial
    /// pivoting; exactly singular pivots are nudged to `ε‖T‖`.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::EPSILON * self.norm_bound();
        // Row i of U holds (u0 = diagonal, u1, u2) after elimination.
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut b = rhs.to_vec();

        let mut cur_d = self.diag[0] - shift;
        let mut cur_e = if n > 1 { self.offdiag[0] } else { 0.0 };
        let mut cur_f = 0.0;
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if cur_d == 0.0 { tiny } else { cur_d };
                break;
            }
            let sub = self.offdiag[i];
            let next_d = self.diag[i + 1] - shift;
            let next_e = if i + 2 < n { self.offdiag[i + 1] } else { 0.0 };
            if cur_d.abs() >= sub.abs() {
                let pivot = if cur_d == 0.0 { tiny } else { cur_d };
                let m = sub / pivot;
                u0[i] = pivot;
                u1[i] = cur_e;
                u2[i] = cur_f;
                b[i + 1] -= m * b[i];
                cur_d = next_d - m * cur_e;
                cur_e = next_e - m * cur_f;
                cur_f = 0.0;
            } else {
                // swap rows i and i+1
                let m = cur_d / sub;
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_e;
                b.swap(i, i + 1);
                b[i + 1] -= m * b[i];
                cur_d = cur_e - m * next_d;
                cur_e = cur_f - m * next_e;
                cur_f = 0.0;
            }
        }

        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = b[i];
            if i + 1 < n {
                v -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= u2[i] * x[i + 2];
            }
            x[i] = v / u0[i];
        }
        x
    }
}

/// Eigenpairs of a bare matrix; vectors have unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub residual_bound: f64,
}

/// The `k` smallest eigenvalues, and optionally their eigenvectors.
pub fn eigen_tridiag(
    t: &TridiagonalMatrix,
    k: usize,
    want_vectors: bool,
) -> Result<TridiagEigen, EigenError> {
    let n = t.dim();
    if k == 0 || k > n {
        return Err(EigenError::OutOfRange {
            requested: k,
            dim: n,
        });
    }
    let scale = t.norm_bound();
    let guard = f64::EPSILON * scale;
    let floor = 4.0 * f64::EPSILON * scale;
    let (g_lo, g_hi) = t.gershgorin();

    let mut eigenvalues = Vec::with_capacity(k);
    let mut width_bound: f64 = 0.0;
    let mut lower = g_lo - floor;
    for index in 0..k {
        let mut lo = lower;
        let mut hi = g_hi + floor;
        for _ in 0..MAX_BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let tol = (BISECTION_RTOL * lo.abs().max(hi.abs())).max(floor);
            if hi - lo <= tol || mid <= lo || mid >= hi {
                break;
            }
            if t.sturm_count_guarded(mid, guard) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        width_bound = width_bound.max(hi - lo);
        eigenvalues.push(0.5 * (lo + hi));
        lower = lo;
    }

    if !want_vectors {
        return Ok(TridiagEigen {
            eigenvalues,
            eigenvectors: None,
            residual_bound: width_bound,
        });
    }

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut residual_bound: f64 = 0.0;
    for &lambda in &eigenvalues {
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * (((i as f64) + 1.0) * 0.618_033_988_749_895).fract())
            .collect();
        let mut residual = f64::INFINITY;
        for _ in 0..INVERSE_ITERATION_SWEEPS {
            x = t.solve_shifted(lambda, &x);
            for prev in &vectors {
                let c: f64 = prev.iter().zip(&x).map(|(p, v)| p * v).sum();
                x.iter_mut().zip(prev).for_each(|(v, p)| *v -= c * p);
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
            residual = residual_norm(t, &x, lambda);
            if residual <= 1e3 * f64::EPSILON * scale {
                break;
            }
        }
        residual_bound = residual_bound.max(residual);
        vectors.push(x);
    }

    Ok(TridiagEigen {
        eigenvalues,
        eigenvectors: Some(vectors),
        residual_bound,
    })
}

pub(crate) fn residual_norm(t: &TridiagonalMatrix, v: &[f64], lambda: f64) -> f64 {
    t.matvec(v)
        .iter()
        .zip(v)
        .map(|(tv, vi)| (tv - lambda * vi).powi(2))
        .sum::<f64>()
        .sqrt()
}
