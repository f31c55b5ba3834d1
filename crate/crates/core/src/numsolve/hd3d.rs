//! Direct diagonalization of the internal Hamiltonian
//! `H_d = -½∇² + ½ω²|X|² + g₁²/(6X2²)` on a cubic grid.
//!
//! The X1 and X3 axes are vertex grids on `(-E/2, E/2)`; they contain
//! `X = 0` when the node count is odd. The X2 axis uses an even node count
//! at the same spacing so that its nodes sit at `(j + ½)h` and never on the
//! singular plane. The grid keeps the X2 mirror symmetry, so every level of
//! the half-line problem shows up as a near-degenerate pair.

use thiserror::Error;

use super::grid::Grid1D;
use super::lanczos::{lowest_eigenpairs, LanczosError, LanczosOptions, LinearOperator};
use crate::exec::Execution;
use crate::model::ModelParams;

pub const MIN_POINTS_PER_AXIS: usize = 16;
pub const MAX_LEVELS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HdError {
    #[error("need at least {MIN_POINTS_PER_AXIS} points per axis, got {0}")]
    TooCoarse(usize),
    #[error("box edge must be finite and positive, got {0}")]
    InvalidExtent(f64),
    #[error("can target 1..={MAX_LEVELS} levels, got {0}")]
    InvalidLevelCount(usize),
    #[error(transparent)]
    Lanczos(#[from] LanczosError),
}

/// Matrix-free 7-point operator. Index layout `(i1 · n2 + i2) · n3 + i3`.
#[derive(Debug, Clone)]
pub struct HdOperator {
    axis: Grid1D,
    mirror_axis: Grid1D,
    potential: Vec<f64>,
    diag_kinetic: f64,
    off: f64,
}

impl HdOperator {
    /// Box of edge `extent` with `n_per_axis` nodes on X1 and X3.
    pub fn new(params: &ModelParams, n_per_axis: usize, extent: f64) -> Result<Self, HdError> {
        if n_per_axis < MIN_POINTS_PER_AXIS {
            return Err(HdError::TooCoarse(n_per_axis));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(HdError::InvalidExtent(extent));
        }
        let half = 0.5 * extent;
        let axis = Grid1D::new(-half, half, n_per_axis).expect("validated above");
        let h = axis.spacing();
        let n_mirror = n_per_axis + n_per_axis % 2;
        let mirror_half = 0.5 * (n_mirror + 1) as f64 * h;
        let mirror_axis =
            Grid1D::new(-mirror_half, mirror_half, n_mirror).expect("validated above");

        let xs = axis.nodes();
        let ys = mirror_axis.nodes();
        let w2 = params.omega() * params.omega();
        let g = params.g1_squared();
        let mut potential = Vec::with_capacity(xs.len() * ys.len() * xs.len());
        for &x1 in &xs {
            for &x2 in &ys {
                let base = 0.5 * w2 * (x1 * x1 + x2 * x2) + g / (6.0 * x2 * x2);
                for &x3 in &xs {
                    potential.push(base + 0.5 * w2 * x3 * x3);
                }
            }
        }
        Ok(Self {
            axis,
            mirror_axis,
            potential,
            diag_kinetic: 3.0 / (h * h),
            off: -0.5 / (h * h),
        })
    }

    pub fn axis(&self) -> &Grid1D {
        &self.axis
    }

    pub fn mirror_axis(&self) -> &Grid1D {
        &self.mirror_axis
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (
            self.axis.n_points(),
            self.mirror_axis.n_points(),
            self.axis.n_points(),
        )
    }
}

impl LinearOperator for HdOperator {
    fn dim(&self) -> usize {
        self.potential.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64], exec: Execution) {
        let (n1, n2, n3) = self.shape();
        let slab = n2 * n3;
        let off = self.off;
        exec.for_each_chunk_mut(y, slab, |start, out| {
            let i1 = start / slab;
            for i2 in 0..n2 {
                for i3 in 0..n3 {
                    let local = i2 * n3 + i3;
                    let idx = start + local;
                    let mut neighbors = 0.0;
                    if i3 > 0 {
                        neighbors += x[idx - 1];
                    }
                    if i3 + 1 < n3 {
                        neighbors += x[idx + 1];
                    }
                    if i2 > 0 {
                        neighbors += x[idx - n3];
                    }
                    if i2 + 1 < n2 {
                        neighbors += x[idx + n3];
                    }
                    if i1 > 0 {
                        neighbors += x[idx - slab];
                    }
                    if i1 + 1 < n1 {
                        neighbors += x[idx + slab];
                    }
                    out[local] =
                        (self.diag_kinetic + self.potential[idx]) * x[idx] + off * neighbors;
                }
            }
        });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HdSpectrum {
    pub eigenvalues: Vec<f64>,
    pub residual_bound: f64,
    /// X1 (and X3) axis.
    pub grid: Grid1D,
    pub mirror_grid: Grid1D,
    pub matvecs: usize,
    pub restarts: usize,
    pub lowest_ritz_history: Vec<f64>,
}

/// Solver settings sized for `k` levels: the ground pair needs only a
/// small block, while excited levels come in exactly degenerate X1/X3 pairs
/// that are each split by the mirror sectors.
pub fn default_lanczos_options(k: usize) -> LanczosOptions {
    let (block_size, max_basis) = if k <= 2 { (2, 30) } else { (4, 48) };
    LanczosOptions {
        block_size,
        max_basis,
        max_restarts: 1000,
        tol: 1e-6,
        ..LanczosOptions::default()
    }
}

pub fn solve_hd_3d(
    params: &ModelParams,
    n_per_axis: usize,
    extent: f64,
    k: usize,
) -> Result<HdSpectrum, HdError> {
    solve_hd_3d_with(params, n_per_axis, extent, k, &default_lanczos_options(k))
}

pub fn solve_hd_3d_with(
    params: &ModelParams,
    n_per_axis: usize,
    extent: f64,
    k: usize,
    opts: &LanczosOptions,
) -> Result<HdSpectrum, HdError> {
    if k == 0 || k > MAX_LEVELS {
        return Err(HdError::InvalidLevelCount(k));
    }
    let op = HdOperator::new(params, n_per_axis, extent)?;
    let out = lowest_eigenpairs(&op, k, opts)?;
    let residual_bound = out.residuals.iter().cloned().fold(0.0, f64::max);
    Ok(HdSpectrum {
        eigenvalues: out.eigenvalues,
        residual_bound,
        grid: op.axis,
        mirror_grid: op.mirror_axis,
        matvecs: out.matvecs,
        restarts: out.restarts,
        lowest_ritz_history: out.lowest_ritz_history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsolve::channel::discretize;
    use crate::numsolve::tridiag::eigen_tridiag;

    #[test]
    fn mirror_axis_avoids_the_plane() {
        let params = ModelParams::new(1.0, 3.0).unwrap();
        for n in [16, 17, 61] {
            let op = HdOperator::new(&params, n, 7.0).unwrap();
            let ys = op.mirror_axis().nodes();
            assert_eq!(ys.len() % 2, 0);
            let h = op.axis().spacing();
            assert!((op.mirror_axis().spacing() - h).abs() < 1e-15);
            for (a, b) in ys.iter().zip(ys.iter().rev()) {
                assert!((a + b).abs() < 1e-12);
            }
            let nearest = ys.iter().map(|y| y.abs()).fold(f64::INFINITY, f64::min);
            assert!((nearest - 0.5 * h).abs() < 1e-12);
            if n % 2 == 1 {
                assert!(op.axis().node(n / 2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let params = ModelParams::new(1.0, 3.0).unwrap();
        assert!(matches!(
            HdOperator::new(&params, 15, 7.0),
            Err(HdError::TooCoarse(15))
        ));
        assert!(HdOperator::new(&params, 20, 0.0).is_err());
        assert!(matches!(
            solve_hd_3d(&params, 20, 7.0, 11),
            Err(HdError::InvalidLevelCount(11))
        ));
    }

    #[test]
    fn apply_matches_kronecker_sum() {
        // apply to a separable product: A(u⊗v⊗w) = (T1u)⊗v⊗w + u⊗(T2v)⊗w + u⊗v⊗(T3w)
        let params = ModelParams::new(1.3, 2.0).unwrap();
        let op = HdOperator::new(&params, 17, 6.0).unwrap();
        let (n1, n2, n3) = op.shape();
        let w2 = params.omega().powi(2);
        let t1 = discretize(|x| 0.5 * w2 * x * x, op.axis()).unwrap();
        let t2 = discretize(|x| 0.5 * w2 * x * x + 2.0 / (6.0 * x * x), op.mirror_axis()).unwrap();
        let u: Vec<f64> = (0..n1).map(|i| (i as f64 * 0.37).sin()).collect();
        let v: Vec<f64> = (0..n2).map(|i| (i as f64 * 0.11).cos()).collect();
        let w: Vec<f64> = (0..n3).map(|i| 1.0 + i as f64 * 0.05).collect();
        let (tu, tv, tw) = (t1.matvec(&u), t2.matvec(&v), t1.matvec(&w));
        let mut x = Vec::new();
        let mut want = Vec::new();
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    x.push(u[i] * v[j] * w[k]);
                    want.push(tu[i] * v[j] * w[k] + u[i] * tv[j] * w[k] + u[i] * v[j] * tw[k]);
                }
            }
        }
        let mut y = vec![0.0; x.len()];
        op.apply(&x, &mut y, Execution::default());
        for (a, b) in y.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn small_grid_matches_separable_sums() {
        // the grid operator is a Kronecker sum, so its spectrum is all sums
        // of 1D tridiagonal eigenvalues
        let params = ModelParams::new(1.0, 3.0).unwrap();
        let n = 20;
        let extent = 7.0;
        let spectrum = solve_hd_3d(&params, n, extent, 4).unwrap();
        let op = HdOperator::new(&params, n, extent).unwrap();
        let ho = discretize(|x| 0.5 * x * x, op.axis()).unwrap();
        let sho = discretize(|x| 0.5 * x * x + 3.0 / (6.0 * x * x), op.mirror_axis()).unwrap();
        let a = eigen_tridiag(&ho, 3, false).unwrap().eigenvalues;
        let b = eigen_tridiag(&sho, 3, false).unwrap().eigenvalues;
        let mut sums = Vec::new();
        for i in &a {
            for j in &b {
                for k in &a {
                    sums.push(i + j + k);
                }
            }
        }
        sums.sort_by(f64::total_cmp);
        for (got, want) in spectrum.eigenvalues.iter().zip(&sums) {
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
        for pair in spectrum.lowest_ritz_history.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12 * pair[0].abs());
        }
    }
}
