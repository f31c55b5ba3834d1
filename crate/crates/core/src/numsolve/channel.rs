//! One-dimensional channel operators of the two separation schemes.
//!
//! | kind            | operator                                         | domain  |
//! |-----------------|--------------------------------------------------|---------|
//! | `Ho`            | `-½ d²/dX² + ½ω²X²`                              | (-L, L) |
//! | `Sho`           | `-½ d²/dX² + ½ω²X² + g₁²/(6X²)`                  | (0, L)  |
//! | `Radial`        | `-½ u'' + [½ω²r² + k²/(2r²)] u`, `u = rR`        | (0, L)  |
//! | `AngularPhi`    | `-d²/dφ² + (g₁²/3)/sin²φ`                        | (0, π)  |
//! | `AngularTheta`  | `-(1/sinθ) d/dθ sinθ d/dθ + f²/sin²θ`            | (0, π)  |
//!
//! The angular operators carry no ½ on the second derivative.
//!
//! The θ operator is discretized in flux form on a cell-centered grid,
//! `-(s_{i+½}(Θ_{i+1}-Θ_i) - s_{i-½}(Θ_i-Θ_{i-1}))/h² + f²Θ_i/s_i = k² s_i Θ_i`
//! with `s = sinθ`, and symmetrized by `w_i = sqrt(s_i) Θ_i`. The face
//! weights vanish at the poles, so no boundary value is imposed there; this
//! keeps the scheme second order even for f = 0, where Θ does not vanish at
//! the poles.

use std::f64::consts::PI;

use thiserror::Error;

use super::grid::{Centering, Grid1D};
use super::tridiag::{eigen_tridiag, EigenError, TridiagonalMatrix};
use crate::exec::Execution;
use crate::model::ModelParams;

/// Half-widths at ω = 1; scaled by `1/sqrt(ω)`.
pub const HO_HALF_WIDTH: f64 = 12.0;
pub const HALF_LINE_EXTENT: f64 = 14.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("grid [{lower}, {upper}] ({centering:?}) does not match the {kind:?} channel domain")]
    DomainMismatch {
        kind: ChannelKind,
        lower: f64,
        upper: f64,
        centering: Centering,
    },
    #[error("non-finite {what} at x = {x}")]
    NonFinite { what: &'static str, x: f64 },
    #[error("channel coefficient must be finite and nonnegative, got {0}")]
    InvalidCoefficient(f64),
    #[error("eigenvector length {got} does not match grid size {expected}")]
    VectorLength { got: usize, expected: usize },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Ho,
    Sho,
    Radial,
    AngularPhi,
    AngularTheta,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 5] = [
        ChannelKind::Ho,
        ChannelKind::Sho,
        ChannelKind::Radial,
        ChannelKind::AngularPhi,
        ChannelKind::AngularTheta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Ho => "HO",
            ChannelKind::Sho => "SHO",
            ChannelKind::Radial => "RADIAL",
            ChannelKind::AngularPhi => "ANGULAR_PHI",
            ChannelKind::AngularTheta => "ANGULAR_THETA",
        }
    }

    /// Default grid with `n_points` unknowns, scaled to the oscillator length.
    pub fn default_grid(self, params: &ModelParams, n_points: usize) -> Grid1D {
        self.default_grid_with_extents(params, n_points, HO_HALF_WIDTH, HALF_LINE_EXTENT)
    }

    /// Like [`default_grid`](Self::default_grid) with explicit extents (at ω = 1)
    /// for the full-line and half-line channels.
    pub fn default_grid_with_extents(
        self,
        params: &ModelParams,
        n_points: usize,
        ho_half_width: f64,
        half_line_extent: f64,
    ) -> Grid1D {
        let length = 1.0 / params.omega().sqrt();
        let grid = match self {
            ChannelKind::Ho => {
                let l = ho_half_width * length;
                Grid1D::new(-l, l, n_points)
            }
            ChannelKind::Sho | ChannelKind::Radial => {
                Grid1D::new(0.0, half_line_extent * length, n_points)
            }
            ChannelKind::AngularPhi => Grid1D::new(0.0, PI, n_points),
            ChannelKind::AngularTheta => Grid1D::cell_centered(0.0, PI, n_points),
        };
        grid.expect("default grids are valid for n_points >= 3")
    }

    fn accepts(self, grid: &Grid1D) -> bool {
        let near = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        let (lo, hi, c) = (grid.lower(), grid.upper(), grid.centering());
        match self {
            ChannelKind::Ho => c == Centering::Vertex && near(lo, -hi),
            ChannelKind::Sho | ChannelKind::Radial => c == Centering::Vertex && lo == 0.0,
            ChannelKind::AngularPhi => c == Centering::Vertex && lo == 0.0 && near(hi, PI),
            ChannelKind::AngularTheta => c == Centering::Cell && lo == 0.0 && near(hi, PI),
        }
    }
}

/// A channel and its coupling: k² for `Radial`, f² for `AngularTheta`,
/// g₁²/3 for `AngularPhi`. `Ho` and `Sho` read [`ModelParams`] instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    coefficient: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, coefficient: f64) -> Result<Self, ChannelError> {
        if !(coefficient.is_finite() && coefficient >= 0.0) {
            return Err(ChannelError::InvalidCoefficient(coefficient));
        }
        Ok(Self { kind, coefficient })
    }

    pub fn ho() -> Self {
        Self {
            kind: ChannelKind::Ho,
            coefficient: 0.0,
        }
    }

    pub fn sho() -> Self {
        Self {
            kind: ChannelKind::Sho,
            coefficient: 0.0,
        }
    }

    pub fn radial(k_squared: f64) -> Result<Self, ChannelError> {
        Self::new(ChannelKind::Radial, k_squared)
    }

    pub fn angular_phi(params: &ModelParams) -> Self {
        Self {
            kind: ChannelKind::AngularPhi,
            coefficient: params.g1_squared() / 3.0,
        }
    }

    pub fn angular_theta(f_squared: f64) -> Result<Self, ChannelError> {
        Self::new(ChannelKind::AngularTheta, f_squared)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }
}

/// Eigenpairs of a channel operator on a grid. Eigenvectors, when present,
/// are normalized so that `Σ v_i² h = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub grid: Grid1D,
    pub residual_bound: f64,
}

/// Three-point stencil for `-½ d²/dx² + V`.
pub fn discretize<V>(potential: V, grid: &Grid1D) -> Result<TridiagonalMatrix, ChannelError>
where
    V: Fn(f64) -> f64,
{
    discretize_scaled(potential, grid, 0.5)
}

/// Three-point stencil for `-c d²/dx² + V`: diagonal `2c/h² + V(x_i)`,
/// off-diagonal `-c/h²`.
pub fn discretize_scaled<V>(
    potential: V,
    grid: &Grid1D,
    prefactor: f64,
) -> Result<TridiagonalMatrix, ChannelError>
where
    V: Fn(f64) -> f64,
{
    let h2 = grid.spacing() * grid.spacing();
    let kinetic = prefactor / h2;
    let mut diag = Vec::with_capacity(grid.n_points());
    for x in grid.nodes() {
        let v = potential(x);
        if !v.is_finite() {
            return Err(ChannelError::NonFinite {
                what: "potential",
                x,
            });
        }
        diag.push(2.0 * kinetic + v);
    }
    let offdiag = vec![-kinetic; grid.n_points() - 1];
    Ok(TridiagonalMatrix::new(diag, offdiag)?)
}

/// Flux-form θ operator, symmetrized; see the module docs.
fn discretize_polar(f_squared: f64, grid: &Grid1D) -> Result<TridiagonalMatrix, ChannelError> {
    let n = grid.n_points();
    let h = grid.spacing();
    let h2 = h * h;
    let centers: Vec<f64> = grid.nodes().iter().map(|t| t.sin()).collect();
    // interior faces between cells i and i+1; the polar faces have weight 0
    let faces: Vec<f64> = (1..n)
        .map(|i| (grid.lower() + i as f64 * h).sin())
        .collect();

    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let left = if i > 0 { faces[i - 1] } else { 0.0 };
        let right = if i + 1 < n { faces[i] } else { 0.0 };
        let s = centers[i];
        diag.push((left + right) / (h2 * s) + f_squared / (s * s));
    }
    let offdiag = (0..n - 1)
        .map(|i| -faces[i] / (h2 * (centers[i] * centers[i + 1]).sqrt()))
        .collect();
    Ok(TridiagonalMatrix::new(diag, offdiag)?)
}

fn channel_matrix(
    spec: &ChannelSpec,
    params: &ModelParams,
    grid: &Grid1D,
) -> Result<TridiagonalMatrix, ChannelError> {
    let w2 = params.omega() * params.omega();
    let c = spec.coefficient;
    match spec.kind {
        ChannelKind::Ho => discretize(|x| 0.5 * w2 * x * x, grid),
        ChannelKind::Sho => {
            let g = params.g1_squared();
            discretize(|x| 0.5 * w2 * x * x + g / (6.0 * x * x), grid)
        }
        ChannelKind::Radial => discretize(|r| 0.5 * w2 * r * r + c / (2.0 * r * r), grid),
        ChannelKind::AngularPhi => discretize_scaled(
            |phi| {
                let s = phi.sin();
                c / (s * s)
            },
            grid,
            1.0,
        ),
        ChannelKind::AngularTheta => discretize_polar(c, grid),
    }
}

/// Lowest `k` eigenvalues (and optionally eigenvectors) of a channel.
pub fn solve_channel(
    spec: &ChannelSpec,
    params: &ModelParams,
    grid: &Grid1D,
    k: usize,
    want_vectors: bool,
) -> Result<EigenResult, ChannelError> {
    if !spec.kind.accepts(grid) {
        return Err(ChannelError::DomainMismatch {
            kind: spec.kind,
            lower: grid.lower(),
            upper: grid.upper(),
            centering: grid.centering(),
        });
    }
    let matrix = channel_matrix(spec, params, grid)?;
    let solved = eigen_tridiag(&matrix, k, want_vectors)?;
    let scale = 1.0 / grid.spacing().sqrt();
    let eigenvectors = solved.eigenvectors.map(|vs| {
        vs.into_iter()
            .map(|v| v.into_iter().map(|x| x * scale).collect())
            .collect()
    });
    let residual_bound = if eigenvectors.is_some() {
        solved.residual_bound * scale
    } else {
        solved.residual_bound
    };
    Ok(EigenResult {
        eigenvalues: solved.eigenvalues,
        eigenvectors,
        grid: *grid,
        residual_bound,
    })
}

/// Fourth-order extrapolant from spacings h and h/2 of a second-order scheme.
pub fn richardson(e_h: f64, e_half: f64) -> f64 {
    (4.0 * e_half - e_h) / 3.0
}

/// `Σ v_i² O(x_i) h`, the same quadrature used for normalization.
pub fn expectation<O>(v: &[f64], observable: O, grid: &Grid1D) -> Result<f64, ChannelError>
where
    O: Fn(f64) -> f64,
{
    if v.len() != grid.n_points() {
        return Err(ChannelError::VectorLength {
            got: v.len(),
            expected: grid.n_points(),
        });
    }
    let h = grid.spacing();
    let mut total = 0.0;
    for (i, vi) in v.iter().enumerate() {
        let x = grid.node(i);
        let o = observable(x);
        if !o.is_finite() {
            return Err(ChannelError::NonFinite {
                what: "observable",
                x,
            });
        }
        total += vi * vi * o * h;
    }
    Ok(total)
}

/// Solutions on a grid and on its refinement, with Richardson-combined
/// eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolated {
    pub coarse: EigenResult,
    pub fine: EigenResult,
    pub values: Vec<f64>,
}

pub fn solve_extrapolated(
    spec: &ChannelSpec,
    params: &ModelParams,
    grid: &Grid1D,
    k: usize,
    want_vectors: bool,
    exec: Execution,
) -> Result<Extrapolated, ChannelError> {
    let fine_grid = grid.refined();
    let (coarse, fine) = exec.join(
        || solve_channel(spec, params, grid, k, want_vectors),
        || solve_channel(spec, params, &fine_grid, k, want_vectors),
    );
    let (coarse, fine) = (coarse?, fine?);
    let values = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(a, b)| richardson(*a, *b))
        .collect();
    Ok(Extrapolated {
        coarse,
        fine,
        values,
    })
}
