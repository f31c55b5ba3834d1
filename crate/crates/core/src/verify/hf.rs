//! dE/d(g₁²) of an SHO level three ways: central difference of channel
//! numerics, eigenvector expectation of `1/(6X²)`, and `ω/(6δ)`.

use super::report::{Check, ObservedLevel, VerificationReport};
use super::{VerifyConfig, VerifyError};
use crate::model::{hf_derivative_closed_form, ModelParams};
use crate::numsolve::{expectation, richardson, ChannelSpec};

/// `1e-3 · max(1, g₁²)`.
pub fn default_hf_step(g1_squared: f64) -> f64 {
    1e-3 * g1_squared.max(1.0)
}

pub fn hellmann_feynman_check(
    params: &ModelParams,
    n2: u32,
    step: Option<f64>,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let g = params.g1_squared();
    let step = step.unwrap_or_else(|| default_hf_step(g));
    if !(step.is_finite() && step > 0.0) {
        return Err(VerifyError::Precondition(format!(
            "coupling step must be positive, got {step}"
        )));
    }
    if g - step < 0.0 {
        return Err(VerifyError::Precondition(format!(
            "central difference needs g1^2 - step >= 0, got g1^2 = {g}, step = {step}"
        )));
    }
    let level = n2 as usize;
    let tol = cfg.energy_tolerance(params);
    let sho = ChannelSpec::sho();

    let offsets = [step, -step, 0.5 * step, -0.5 * step];
    let energies = cfg.exec.map(&offsets, |d| -> Result<f64, VerifyError> {
        let p = params
            .with_g1_squared(g + d)
            .expect("shifted coupling stays valid");
        Ok(cfg.levels(&sho, &p, level + 1)?[level])
    });
    let e: Vec<f64> = energies.into_iter().collect::<Result<_, _>>()?;
    let derivative = (e[0] - e[1]) / (2.0 * step);
    let derivative_half = (e[2] - e[3]) / step;

    let solved = cfg.solve(&sho, params, level + 1, true)?;
    let barrier = |x: f64| 1.0 / (6.0 * x * x);
    let vector = |r: &crate::numsolve::EigenResult| -> Result<f64, VerifyError> {
        let v = &r.eigenvectors.as_ref().expect("vectors requested")[level];
        Ok(expectation(v, barrier, &r.grid)?)
    };
    let expect = richardson(vector(&solved.coarse)?, vector(&solved.fine)?);
    let closed = hf_derivative_closed_form(n2, params);

    let mut report = VerificationReport::new(*params);
    let tag = format!("hf[n2={n2}]");
    report.push(Check::within(
        format!("{tag}.derivative_vs_closed_form"),
        derivative,
        closed,
        tol,
        "central difference of SHO numerics vs omega/(6 delta)",
    ));
    report.push(Check::within(
        format!("{tag}.expectation_vs_closed_form"),
        expect,
        closed,
        tol,
        "<1/(6X^2)> from the SHO eigenvector vs omega/(6 delta)",
    ));
    report.push(Check::within(
        format!("{tag}.derivative_vs_expectation"),
        derivative,
        expect,
        tol,
        "Hellmann-Feynman: two independent numerics",
    ));
    report.push(Check::within(
        format!("{tag}.step_halving"),
        derivative_half,
        derivative,
        tol,
        "central difference is O(step^2): halving the step changes little",
    ));
    report.push(Check::above(
        format!("{tag}.derivative_positive"),
        derivative,
        0.0,
        "levels rise with g1^2; a g1-independent spectrum would give 0",
    ));
    report.push(Check::above(
        format!("{tag}.expectation_positive"),
        expect,
        0.0,
        "the barrier term is positive definite",
    ));
    for (label, value) in [
        ("finite difference", derivative),
        ("expectation", expect),
        ("closed form", closed),
    ] {
        report.levels.push(ObservedLevel {
            label: format!("dE/dg1^2 n2={n2} {label}"),
            energy: value,
            multiplicity: 1,
        });
    }
    Ok(report)
}
