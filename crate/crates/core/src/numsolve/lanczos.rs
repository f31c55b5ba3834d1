//! Matrix-free block Lanczos with full reorthogonalization and thick restart.
//!
//! The Krylov basis is grown one vector at a time: processing basis vector
//! `v_j` applies the operator, orthogonalizes the image against the whole
//! basis (classical Gram-Schmidt, twice) and appends the remainder. Starting
//! from `b` random vectors this spans the block Krylov space, which resolves
//! eigenvalues of multiplicity up to `b`. The projected matrix `Vᵀ A V` is
//! banded and assembled from the Gram-Schmidt coefficients.
//!
//! When the basis is full, the lowest Ritz vectors are kept together with
//! the `b` unprocessed vectors, so the smallest Ritz value never increases
//! across restarts.
//!
//! The basis is stored element-major (`data[e * cap + j]`) so that
//! projections, updates and restarts stream through memory once per pass.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::{Execution, CHUNK};

pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    /// `y = A x`; `y` is fully overwritten.
    fn apply(&self, x: &[f64], y: &mut [f64], exec: Execution);
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LanczosError {
    #[error("no convergence after {restarts} restarts; worst residual {residual:e}")]
    NotConverged { residual: f64, restarts: usize },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosOptions {
    pub block_size: usize,
    pub max_basis: usize,
    pub max_restarts: usize,
    /// Converged when `‖A y - θ y‖ ≤ tol · max(|θ|, 1)` for each wanted pair.
    pub tol: f64,
    pub seed: u64,
    pub want_vectors: bool,
    pub exec: Execution,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            block_size: 3,
            max_basis: 60,
            max_restarts: 400,
            tol: 1e-8,
            seed: 0x0005_EED0_F4B0_D1E5,
            want_vectors: false,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosOutcome {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub matvecs: usize,
    pub restarts: usize,
    /// Smallest Ritz value after each restart cycle.
    pub lowest_ritz_history: Vec<f64>,
}

struct Basis {
    n: usize,
    cap: usize,
    len: usize,
    data: Vec<f64>,
}

impl Basis {
    fn new(n: usize, cap: usize) -> Self {
        Self {
            n,
            cap,
            len: 0,
            data: vec![0.0; n * cap],
        }
    }

    fn column(&self, j: usize, out: &mut [f64], exec: Execution) {
        let cap = self.cap;
        exec.for_each_chunk_mut(out, CHUNK, |start, chunk| {
            for (k, o) in chunk.iter_mut().enumerate() {
                *o = self.data[(start + k) * cap + j];
            }
        });
    }

    /// `Vᵀ w`, reduced chunk by chunk in a fixed order.
    fn project(&self, w: &[f64], exec: Execution) -> Vec<f64> {
        let (cap, len, n) = (self.cap, self.len, self.n);
        let chunks: Vec<usize> = (0..n.div_ceil(CHUNK)).collect();
        let partials = exec.map(&chunks, |&c| {
            let mut acc = vec![0.0; len];
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            for (e, &we) in (start..end).zip(&w[start..end]) {
                let row = &self.data[e * cap..e * cap + len];
                for (a, v) in acc.iter_mut().zip(row) {
                    *a += v * we;
                }
            }
            acc
        });
        let mut total = vec![0.0; len];
        for part in partials {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
        total
    }

    /// `w -= V c`.
    fn subtract(&self, w: &mut [f64], c: &[f64], exec: Execution) {
        let cap = self.cap;
        exec.for_each_chunk_mut(w, CHUNK, |start, chunk| {
            for (k, wi) in chunk.iter_mut().enumerate() {
                let e = start + k;
                let row = &self.data[e * cap..e * cap + c.len()];
                let s: f64 = row.iter().zip(c).map(|(v, ci)| v * ci).sum();
                *wi -= s;
            }
        });
    }

    fn orthogonalize(&self, w: &mut [f64], exec: Execution) -> Vec<f64> {
        let mut c = self.project(w, exec);
        self.subtract(w, &c, exec);
        let c2 = self.project(w, exec);
        self.subtract(w, &c2, exec);
        c.iter_mut().zip(c2).for_each(|(a, b)| *a += b);
        c
    }

    fn push(&mut self, w: &[f64], scale: f64, exec: Execution) {
        let (cap, j) = (self.cap, self.len);
        assert!(j < cap);
        exec.for_each_chunk_mut(&mut self.data, CHUNK * cap, |start, chunk| {
            let e0 = start / cap;
            for (k, row) in chunk.chunks_mut(cap).enumerate() {
                row[j] = w[e0 + k] * scale;
            }
        });
        self.len += 1;
    }

    /// Replace the basis by `[V[..p] · coeffs, V[p..len]]`, where `coeffs`
    /// is `p × keep` column-major.
    fn restart(&mut self, p: usize, coeffs: &[f64], keep: usize, exec: Execution) {
        let (cap, len) = (self.cap, self.len);
        exec.for_each_chunk_mut(&mut self.data, CHUNK * cap, |_, chunk| {
            let mut tmp = vec![0.0; keep];
            for row in chunk.chunks_mut(cap) {
                for (i, t) in tmp.iter_mut().enumerate() {
                    let col = &coeffs[i * p..(i + 1) * p];
                    *t = row[..p].iter().zip(col).map(|(v, s)| v * s).sum();
                }
                row.copy_within(p..len, keep);
                row[..keep].copy_from_slice(&tmp);
            }
        });
        self.len = keep + (len - p);
    }

    fn combine(&self, p: usize, coeffs: &[f64], exec: Execution) -> Vec<f64> {
        let cap = self.cap;
        let mut y = vec![0.0; self.n];
        exec.for_each_chunk_mut(&mut y, CHUNK, |start, chunk| {
            for (k, yi) in chunk.iter_mut().enumerate() {
                let row = &self.data[(start + k) * cap..(start + k) * cap + p];
                *yi = row.iter().zip(coeffs).map(|(v, s)| v * s).sum();
            }
        });
        y
    }
}

/// Dense symmetric projected matrix, `cap × cap`, row-major.
struct Projected {
    cap: usize,
    h: Vec<f64>,
}

impl Projected {
    fn get(&self, i: usize, j: usize) -> f64 {
        self.h[i * self.cap + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.h[i * self.cap + j] = v;
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// The `k` algebraically smallest eigenpairs of a symmetric operator.
pub fn lowest_eigenpairs<A: LinearOperator>(
    op: &A,
    k: usize,
    opts: &LanczosOptions,
) -> Result<LanczosOutcome, LanczosError> {
    let n = op.dim();
    let b = opts.block_size;
    let m = opts.max_basis.min(n.saturating_sub(b));
    if k == 0 || b == 0 {
        return Err(LanczosError::InvalidRequest(format!(
            "need k >= 1 and block size >= 1 (k={k}, block={b})"
        )));
    }
    if m < k + 2 * b {
        return Err(LanczosError::InvalidRequest(format!(
            "basis of {m} vectors is too small for k={k} with block size {b} (dimension {n})"
        )));
    }
    let exec = opts.exec;
    let cap = m + b;
    let mut basis = Basis::new(n, cap);
    let mut proj = Projected {
        cap,
        h: vec![0.0; cap * cap],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    while basis.len < b {
        let mut w = random_vector(&mut rng, n);
        basis.orthogonalize(&mut w, exec);
        let norm = exec.norm(&w);
        basis.push(&w, 1.0 / norm, exec);
    }

    let mut processed = 0;
    let mut matvecs = 0;
    let mut history = Vec::new();
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];

    for restart in 0..=opts.max_restarts {
        while processed < m {
            let j = processed;
            basis.column(j, &mut x, exec);
            op.apply(&x, &mut w, exec);
            matvecs += 1;
            let before = exec.norm(&w);
            let c = basis.orthogonalize(&mut w, exec);
            for (i, ci) in c.iter().enumerate() {
                proj.set(i, j, *ci);
            }
            let beta = exec.norm(&w);
            let row = basis.len;
            if beta > 1e-10 * before.max(f64::MIN_POSITIVE) {
                basis.push(&w, 1.0 / beta, exec);
                proj.set(row, j, beta);
            } else {
                // invariant subspace: continue with a fresh direction
                let mut fresh = random_vector(&mut rng, n);
                basis.orthogonalize(&mut fresh, exec);
                let norm = exec.norm(&fresh);
                basis.push(&fresh, 1.0 / norm, exec);
                proj.set(row, j, 0.0);
            }
            processed += 1;
        }

        let p = processed;
        let q = basis.len;
        let hpp = DMatrix::from_fn(p, p, |i, j| 0.5 * (proj.get(i, j) + proj.get(j, i)));
        let eig = hpp.symmetric_eigen();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &c| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[c]));
        let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        // column-major p × p, sorted ascending
        let mut s = vec![0.0; p * p];
        for (dst, &src) in order.iter().enumerate() {
            for r in 0..p {
                s[dst * p + r] = eig.eigenvectors[(r, src)];
            }
        }
        let coupling =
            |r: usize, i: usize| -> f64 { (0..p).map(|jj| proj.get(r, jj) * s[i * p + jj]).sum() };
        let residual =
            |i: usize| -> f64 { (p..q).map(|r| coupling(r, i).powi(2)).sum::<f64>().sqrt() };
        history.push(theta[0]);

        let residuals: Vec<f64> = (0..k).map(residual).collect();
        let converged = residuals
            .iter()
            .zip(&theta)
            .all(|(r, t)| *r <= opts.tol * t.abs().max(1.0));

        if converged {
            let eigenvectors = opts.want_vectors.then(|| {
                (0..k)
                    .map(|i| basis.combine(p, &s[i * p..(i + 1) * p], exec))
                    .collect()
            });
            return Ok(LanczosOutcome {
                eigenvalues: theta[..k].to_vec(),
                residuals,
                eigenvectors,
                matvecs,
                restarts: restart,
                lowest_ritz_history: history,
            });
        }
        if restart == opts.max_restarts {
            let worst = residuals.iter().cloned().fold(0.0, f64::max);
            return Err(LanczosError::NotConverged {
                residual: worst,
                restarts: restart,
            });
        }

        let keep = (k + b).max(m / 2).min(m - b);
        let couplings: Vec<Vec<f64>> = (p..q)
            .map(|r| (0..keep).map(|i| coupling(r, i)).collect())
            .collect();
        basis.restart(p, &s[..keep * p], keep, exec);
        proj.h.iter_mut().for_each(|v| *v = 0.0);
        for (i, t) in theta.iter().take(keep).enumerate() {
            proj.set(i, i, *t);
        }
        for (r, row) in couplings.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                proj.set(keep + r, i, *c);
                proj.set(i, keep + r, *c);
            }
        }
        processed = keep;
    }
    unreachable!("loop returns on the final restart")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsolve::tridiag::{eigen_tridiag, TridiagonalMatrix};

    impl LinearOperator for TridiagonalMatrix {
        fn dim(&self) -> usize {
            TridiagonalMatrix::dim(self)
        }

        fn apply(&self, x: &[f64], y: &mut [f64], _exec: Execution) {
            y.copy_from_slice(&self.matvec(x));
        }
    }

    struct Diagonal(Vec<f64>);

    impl LinearOperator for Diagonal {
        fn dim(&self) -> usize {
            self.0.len()
        }

        fn apply(&self, x: &[f64], y: &mut [f64], _exec: Execution) {
            for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.0) {
                *yi = d * xi;
            }
        }
    }

    fn laplacian_chain(n: usize) -> TridiagonalMatrix {
        let d = (0..n).map(|i| 2.0 + 0.01 * (i as f64).sin()).collect();
        TridiagonalMatrix::new(d, vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn matches_tridiagonal_bisection() {
        let t = laplacian_chain(400);
        let exact = eigen_tridiag(&t, 4, false).unwrap().eigenvalues;
        let opts = LanczosOptions {
            max_restarts: 2000,
            ..LanczosOptions::default()
        };
        let out = lowest_eigenpairs(&t, 4, &opts).unwrap();
        for (a, b) in out.eigenvalues.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn finds_every_copy_of_degenerate_eigenvalues() {
        let mut d: Vec<f64> = (0..500).map(|i| 1.0 + i as f64 * 0.01).collect();
        d[0] = 0.5;
        d[1] = 0.5;
        d[2] = 0.5;
        d[3] = 0.7;
        let op = Diagonal(d);
        let out = lowest_eigenpairs(&op, 4, &LanczosOptions::default()).unwrap();
        let want = [0.5, 0.5, 0.5, 0.7];
        for (a, b) in out.eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-10, "{:?}", out.eigenvalues);
        }
    }

    #[test]
    fn lowest_ritz_value_never_increases() {
        let t = laplacian_chain(2000);
        let opts = LanczosOptions {
            max_basis: 24,
            block_size: 2,
            max_restarts: 5000,
            ..LanczosOptions::default()
        };
        let out = lowest_eigenpairs(&t, 1, &opts).unwrap();
        assert!(out.restarts > 2);
        for pair in out.lowest_ritz_history.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12 * pair[0].abs(), "{pair:?}");
        }
    }

    #[test]
    fn eigenvectors_have_small_residual() {
        let t = laplacian_chain(300);
        let opts = LanczosOptions {
            want_vectors: true,
            max_restarts: 2000,
            ..LanczosOptions::default()
        };
        let out = lowest_eigenpairs(&t, 2, &opts).unwrap();
        for (v, lambda) in out.eigenvectors.unwrap().iter().zip(&out.eigenvalues) {
            let av = t.matvec(v);
            let r: f64 = av
                .iter()
                .zip(v)
                .map(|(a, x)| (a - lambda * x).powi(2))
                .sum();
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-10);
            assert!(r.sqrt() < 1e-6);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let t = laplacian_chain(3000);
        let opts = LanczosOptions {
            max_restarts: 1,
            max_basis: 12,
            block_size: 1,
            ..LanczosOptions::default()
        };
        assert!(matches!(
            lowest_eigenpairs(&t, 1, &opts),
            Err(LanczosError::NotConverged { .. })
        ));
    }

    #[test]
    fn rejects_bad_requests() {
        let t = laplacian_chain(10);
        assert!(lowest_eigenpairs(&t, 0, &LanczosOptions::default()).is_err());
        assert!(lowest_eigenpairs(&t, 9, &LanczosOptions::default()).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let t = laplacian_chain(9000);
        let run = |exec| {
            let opts = LanczosOptions {
                exec,
                max_restarts: 3,
                max_basis: 20,
                tol: 0.0,
                ..LanczosOptions::default()
            };
            match lowest_eigenpairs(&t, 1, &opts) {
                Err(LanczosError::NotConverged { residual, .. }) => residual,
                other => panic!("{other:?}"),
            }
        };
        assert_eq!(
            run(Execution::Sequential).to_bits(),
            run(Execution::Parallel).to_bits()
        );
    }
}
