//! Measured evidence against three claims of an earlier treatment of the
//! same model: a g₁-independent spectrum, equal φ-channel eigenvalues, and
//! θ-channel eigenvalues equal to `l(l + 1)`.

use super::report::{Check, ObservedLevel, VerificationReport};
use super::{VerifyConfig, VerifyError};
use crate::model::ModelParams;
use crate::numsolve::ChannelSpec;

/// Second coupling for the g₁-dependence comparison: `g₁² ∓ 2`, staying
/// nonnegative.
fn companion_coupling(g: f64) -> f64 {
    if g >= 2.0 {
        g - 2.0
    } else {
        g + 2.0
    }
}

fn numeric_ground(params: &ModelParams, cfg: &VerifyConfig) -> Result<f64, VerifyError> {
    let (ho, sho) = cfg.exec.join(
        || cfg.levels(&ChannelSpec::ho(), params, 1),
        || cfg.levels(&ChannelSpec::sho(), params, 1),
    );
    Ok(2.0 * ho?[0] + sho?[0])
}

/// Always produces a report; a failing check means the claim it refutes
/// unexpectedly held.
pub fn bk_audit(
    params: &ModelParams,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let tol = cfg.energy_tolerance(params);
    let other = params
        .with_g1_squared(companion_coupling(params.g1_squared()))
        .expect("companion coupling is nonnegative");
    let (e_here, e_other) = cfg.exec.join(
        || numeric_ground(params, cfg),
        || numeric_ground(&other, cfg),
    );
    let (e_here, e_other) = (e_here?, e_other?);

    let f2 = cfg.levels(&ChannelSpec::angular_phi(params), params, 2)?;
    let k2 = cfg.levels(&ChannelSpec::angular_theta(f2[0].max(0.0))?, params, 1)?;
    let delta = params.delta();

    let mut report = VerificationReport::new(*params);
    report.push(Check::exceeds(
        format!(
            "audit.spectrum_depends_on_g1[{}vs{}]",
            params.g1_squared(),
            other.g1_squared()
        ),
        e_here,
        e_other,
        tol,
        "numeric ground energies at two couplings must differ",
    ));
    report.push(Check::within(
        "audit.ground_shift",
        (e_here - e_other).abs(),
        params.omega() * (delta - other.delta()).abs(),
        tol,
        "numeric shift vs omega |delta(g) - delta(g')|",
    ));
    report.push(Check::exceeds(
        "audit.f2_not_all_equal",
        f2[1],
        f2[0],
        1.0,
        "phi-channel: f2_1 and f2_0 must be separated by more than 1",
    ));
    report.push(Check::within(
        "audit.f2_gap",
        f2[1] - f2[0],
        2.0 + 2.0 * delta,
        cfg.relative_tolerance(2.0 + 2.0 * delta),
        "phi-channel gap vs (3/2 + delta)^2 - (1/2 + delta)^2",
    ));
    report.push(Check::exceeds(
        "audit.k2_not_l(l+1)[l=0,m=0]",
        k2[0],
        0.0,
        1.0,
        "theta-channel: k2_00 must differ from l(l+1) = 0 by more than 1",
    ));
    let f = 0.5 + delta;
    report.push(Check::within(
        "audit.k2_closed_form[l=0,m=0]",
        k2[0],
        f * (f + 1.0),
        cfg.relative_tolerance(f * (f + 1.0)),
        "theta-channel vs f(f + 1) with f = 1/2 + delta",
    ));

    for (label, value) in [
        (format!("ground g1^2={}", params.g1_squared()), e_here),
        (format!("ground g1^2={}", other.g1_squared()), e_other),
        ("f2_0".to_string(), f2[0]),
        ("f2_1".to_string(), f2[1]),
        ("k2_00".to_string(), k2[0]),
    ] {
        report.levels.push(ObservedLevel {
            label,
            energy: value,
            multiplicity: 1,
        });
    }
    Ok(report)
}
