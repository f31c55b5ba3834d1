//! Cross-validation of the closed forms against independent numerics.
//!
//! Every operation returns a [`VerificationReport`] whose checks appear in a
//! fixed order, independent of how the underlying solves were scheduled.

mod audit;
mod hf;
mod identities;
mod report;
mod resolve;
mod routes;
mod threed;

use thiserror::Error;

use crate::exec::Execution;
use crate::model::ModelParams;
use crate::numsolve::{
    solve_extrapolated, ChannelError, ChannelKind, ChannelSpec, Extrapolated, Grid1D, HdError,
    HALF_LINE_EXTENT, HO_HALF_WIDTH,
};

pub use audit::bk_audit;
pub use hf::{default_hf_step, hellmann_feynman_check};
pub use identities::{transform_identities, IDENTITY_TOLERANCE, ORTHONORMALITY_TOLERANCE};
pub use report::{Check, CheckStatus, ObservedLevel, Relation, Resolution, VerificationReport};
pub use resolve::{
    resolve_formula_offsets, standard_sweep, DiscrepancyRow, DiscrepancyTable, ResolutionOutcome,
    ANCHOR_TOLERANCE, RADIAL_COUPLINGS, RESOLUTION_LEVELS, STANDARD_SWEEP,
};
pub use routes::{
    verify_jacobi_route, verify_spherical_route, JacobiRoute, SphericalRanges, SphericalRoute,
    ROUTE_COMPARE_COUNT,
};
pub use threed::{verify_3d, ThreeDConfig, ThreeDOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Hd(#[from] HdError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Grid budget and tolerance shared by the 1D verification suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Unknowns on the coarse grid; Richardson adds one refinement.
    pub grid_points: usize,
    /// Full-line channel half-width at ω = 1.
    pub ho_half_width: f64,
    /// Half-line channel length at ω = 1.
    pub half_line_extent: f64,
    /// Absolute energy tolerance at ω ≤ 1; scaled by ω above that.
    pub tol: f64,
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid_points: 2001,
            ho_half_width: HO_HALF_WIDTH,
            half_line_extent: HALF_LINE_EXTENT,
            tol: 1e-4,
            exec: Execution::default(),
        }
    }
}

impl VerifyConfig {
    pub fn grid(&self, kind: ChannelKind, params: &ModelParams) -> Grid1D {
        kind.default_grid_with_extents(
            params,
            self.grid_points,
            self.ho_half_width,
            self.half_line_extent,
        )
    }

    /// Energy tolerance for `params`: energies are linear in ω.
    pub fn energy_tolerance(&self, params: &ModelParams) -> f64 {
        self.tol * params.omega().max(1.0)
    }

    /// Tolerance for a dimensionless channel eigenvalue of size `reference`.
    pub fn relative_tolerance(&self, reference: f64) -> f64 {
        self.tol * reference.abs().max(1.0)
    }

    pub(crate) fn solve(
        &self,
        spec: &ChannelSpec,
        params: &ModelParams,
        k: usize,
        want_vectors: bool,
    ) -> Result<Extrapolated, ChannelError> {
        // channel solves are already run concurrently by the callers
        let grid = self.grid(spec.kind(), params);
        solve_extrapolated(spec, params, &grid, k, want_vectors, self.exec)
    }

    pub(crate) fn levels(
        &self,
        spec: &ChannelSpec,
        params: &ModelParams,
        k: usize,
    ) -> Result<Vec<f64>, ChannelError> {
        Ok(self.solve(spec, params, k, false)?.values)
    }
}

/// `scaled[i] ≈ factor · base[i]` for every index.
pub fn scaling_checks(
    prefix: &str,
    base: &[f64],
    scaled: &[f64],
    factor: f64,
    tol: f64,
    provenance: &str,
) -> Vec<Check> {
    let mut checks: Vec<Check> = base
        .iter()
        .zip(scaled)
        .enumerate()
        .map(|(i, (b, s))| Check::within(format!("{prefix}[{i}]"), *s, factor * b, tol, provenance))
        .collect();
    checks.push(Check::within(
        format!("{prefix}.count"),
        scaled.len() as f64,
        base.len() as f64,
        0.0,
        provenance,
    ));
    checks
}
