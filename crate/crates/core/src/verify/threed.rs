//! Direct 3D diagonalization against the closed-form spectrum with both
//! mirror sectors counted.

use super::report::{Check, ObservedLevel, Resolution, VerificationReport};
use super::VerifyError;
use crate::exec::Execution;
use crate::model::{enumerate_spectrum, ModelParams, SectorMultiplicity};
use crate::numsolve::{default_lanczos_options, solve_hd_3d_with, HdSpectrum, MAX_3D_LEVELS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeDConfig {
    pub n_per_axis: usize,
    /// Box edge at ω = 1; scaled by `1/sqrt(ω)`.
    pub extent: f64,
    pub levels: usize,
    pub tol: f64,
    pub exec: Execution,
}

impl Default for ThreeDConfig {
    fn default() -> Self {
        Self {
            n_per_axis: 61,
            extent: 7.0,
            levels: 2,
            tol: 5e-3,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeDOutcome {
    pub report: VerificationReport,
    pub spectrum: HdSpectrum,
}

/// The ground energy is compared absolutely; higher levels through their
/// gap to the computed ground, which cancels the shared O(h²) shift.
pub fn verify_3d(
    params: &ModelParams,
    resolution: Resolution,
    cfg: &ThreeDConfig,
) -> Result<ThreeDOutcome, VerifyError> {
    if cfg.levels == 0 || cfg.levels > MAX_3D_LEVELS {
        return Err(VerifyError::Precondition(format!(
            "3D level count must be 1..={MAX_3D_LEVELS}, got {}",
            cfg.levels
        )));
    }
    let edge = cfg.extent / params.omega().sqrt();
    let opts = crate::numsolve::LanczosOptions {
        exec: cfg.exec,
        ..default_lanczos_options(cfg.levels)
    };
    let spectrum = solve_hd_3d_with(params, cfg.n_per_axis, edge, cfg.levels, &opts)?;
    let e = &spectrum.eigenvalues;

    // cutoff 4 holds 2 x 35 states, more than the 10 levels allowed
    let reference = enumerate_spectrum(params, 4, resolution.offset, SectorMultiplicity::Double)
        .expanded_values();
    let tol = cfg.tol * params.omega().max(1.0);
    let grid = format!(
        "{0}x{1}x{0}",
        cfg.n_per_axis,
        spectrum.mirror_grid.n_points()
    );
    let provenance = format!("matrix-free Lanczos on {grid}, box edge {edge}");

    let mut report = VerificationReport::new(*params);
    report.push(Check::within(
        "3d.E[0]",
        e[0],
        reference[0],
        tol,
        &provenance,
    ));
    if e.len() > 1 {
        report.push(Check::within(
            "3d.E[1]",
            e[1],
            reference[1],
            tol,
            &provenance,
        ));
        report.push(Check::within(
            "3d.mirror_splitting",
            e[1] - e[0],
            0.0,
            tol,
            "ground level appears twice, once per X2 sector",
        ));
    }
    for i in 2..e.len() {
        report.push(Check::within(
            format!("3d.gap[{i}]"),
            e[i] - e[0],
            reference[i] - reference[0],
            tol,
            "excitation gap vs closed form",
        ));
    }
    let rise = spectrum
        .lowest_ritz_history
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    report.push(Check::within(
        "3d.ritz_monotone",
        rise,
        0.0,
        1e-10 * e[0].abs().max(1.0),
        "lowest Ritz value never increases across restarts",
    ));
    for (i, v) in e.iter().enumerate() {
        report.levels.push(ObservedLevel {
            label: format!("3d level {i}"),
            energy: *v,
            multiplicity: 1,
        });
    }
    Ok(ThreeDOutcome { report, spectrum })
}
