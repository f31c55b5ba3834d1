//! The two separation routes: Jacobi (HO ⊕ SHO ⊕ HO) and the spherical
//! chain φ → θ → r.

use super::report::{Check, ObservedLevel, Resolution, VerificationReport};
use super::{VerifyConfig, VerifyError};
use crate::model::{
    composite_energy, enumerate_spectrum, radial_energy, triples_up_to, ModelParams, QuantumTriple,
    SectorMultiplicity, SphericalQuantum,
};
use crate::numsolve::ChannelSpec;

/// Number of lowest energies compared between the two routes.
pub const ROUTE_COMPARE_COUNT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRoute {
    pub report: VerificationReport,
    /// Numerical sums `E_{n1} + E_{n2} + E_{n3}`, ascending.
    pub states: Vec<(QuantumTriple, f64)>,
}

impl JacobiRoute {
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        self.states.iter().take(count).map(|s| s.1).collect()
    }
}

pub fn verify_jacobi_route(
    params: &ModelParams,
    resolution: Resolution,
    cutoff: u32,
    sectors: SectorMultiplicity,
    cfg: &VerifyConfig,
) -> Result<JacobiRoute, VerifyError> {
    let tol = cfg.energy_tolerance(params);
    let (ho, sho) = cfg.exec.join(
        || cfg.levels(&ChannelSpec::ho(), params, cutoff as usize + 1),
        || cfg.levels(&ChannelSpec::sho(), params, cutoff as usize / 2 + 1),
    );
    let (ho, sho) = (ho?, sho?);

    let triples = triples_up_to(cutoff);
    let mut report = VerificationReport::new(*params);
    let mut states = Vec::with_capacity(triples.len());
    for t in triples {
        let numeric = ho[t.n1 as usize] + sho[t.n2 as usize] + ho[t.n3 as usize];
        report.push(Check::within(
            format!("jacobi.E{t}"),
            numeric,
            composite_energy(t, params, resolution.offset),
            tol,
            "HO and SHO channel numerics vs resolved closed form",
        ));
        states.push((t, numeric));
    }
    states.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let table = enumerate_spectrum(params, cutoff, resolution.offset, sectors);
    for level in &table.levels {
        let members: Vec<f64> = states
            .iter()
            .filter(|s| (s.1 - level.value).abs() <= tol)
            .map(|s| s.1)
            .collect();
        let count = members.len() as u32 * sectors.factor();
        report.push(Check::within(
            format!("jacobi.degeneracy[N={}]", level.total_quanta),
            f64::from(count),
            f64::from(level.degeneracy),
            0.0,
            "numeric states within tol of the level vs enumerated degeneracy",
        ));
        let mean = members.iter().sum::<f64>() / members.len().max(1) as f64;
        report.levels.push(ObservedLevel {
            label: format!("jacobi N={}", level.total_quanta),
            energy: mean,
            multiplicity: count,
        });
    }
    Ok(JacobiRoute { report, states })
}

/// Highest φ, θ and radial quantum numbers solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphericalRanges {
    pub m_max: u32,
    pub l_max: u32,
    pub n_max: u32,
}

impl Default for SphericalRanges {
    fn default() -> Self {
        Self {
            m_max: 4,
            l_max: 4,
            n_max: 2,
        }
    }
}

impl SphericalRanges {
    /// Largest N = 2n + l + m for which every (n, l, m) is inside the ranges.
    pub fn complete_shells(&self) -> u32 {
        self.m_max.min(self.l_max).min(2 * self.n_max + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalRoute {
    pub report: VerificationReport,
    /// Chained energies `E_{nlm}`, ascending.
    pub states: Vec<(SphericalQuantum, f64)>,
    /// φ-channel eigenvalues `f²_m`.
    pub f_squared: Vec<f64>,
    /// θ-channel eigenvalues, indexed `[m][l]`.
    pub k_squared: Vec<Vec<f64>>,
}

impl SphericalRoute {
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        self.states.iter().take(count).map(|s| s.1).collect()
    }
}

pub fn verify_spherical_route(
    params: &ModelParams,
    resolution: Resolution,
    ranges: SphericalRanges,
    cfg: &VerifyConfig,
) -> Result<SphericalRoute, VerifyError> {
    let shells = ranges.complete_shells();
    let covered = triples_up_to(shells).len();
    if covered < ROUTE_COMPARE_COUNT {
        return Err(VerifyError::Precondition(format!(
            "ranges {ranges:?} cover {covered} states, need {ROUTE_COMPARE_COUNT}"
        )));
    }
    let tol = cfg.energy_tolerance(params);
    let delta = params.delta();

    let f_squared = cfg.levels(
        &ChannelSpec::angular_phi(params),
        params,
        ranges.m_max as usize + 1,
    )?;
    let k_squared = cfg
        .exec
        .map(&f_squared, |f2| -> Result<Vec<f64>, VerifyError> {
            let spec = ChannelSpec::angular_theta(f2.max(0.0))?;
            Ok(cfg.levels(&spec, params, ranges.l_max as usize + 1)?)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let pairs: Vec<(u32, u32, f64)> = k_squared
        .iter()
        .enumerate()
        .flat_map(|(m, ks)| {
            ks.iter()
                .enumerate()
                .map(move |(l, k2)| (l as u32, m as u32, *k2))
        })
        .collect();
    let radial = cfg
        .exec
        .map(&pairs, |(_, _, k2)| -> Result<Vec<f64>, VerifyError> {
            let spec = ChannelSpec::radial(k2.max(0.0))?;
            Ok(cfg.levels(&spec, params, ranges.n_max as usize + 1)?)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut states = Vec::new();
    for ((l, m, _), energies) in pairs.iter().zip(&radial) {
        for (n, e) in energies.iter().enumerate() {
            states.push((SphericalQuantum::new(n as u32, *l, *m), *e));
        }
    }
    states.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut report = VerificationReport::new(*params);
    for (m, f2) in f_squared.iter().enumerate() {
        let f = m as f64 + 0.5 + delta;
        report.push(Check::within(
            format!("spherical.f2[m={m}]"),
            *f2,
            f * f,
            cfg.relative_tolerance(f * f),
            "phi-channel numerics vs (m + 1/2 + delta)^2",
        ));
    }
    for (m, ks) in k_squared.iter().enumerate() {
        let f = m as f64 + 0.5 + delta;
        for (l, k2) in ks.iter().enumerate() {
            let s = l as f64 + f;
            report.push(Check::within(
                format!("spherical.k2[l={l},m={m}]"),
                *k2,
                s * (s + 1.0),
                cfg.relative_tolerance(s * (s + 1.0)),
                "theta-channel numerics vs (l + f)(l + f + 1)",
            ));
        }
    }

    let origin = QuantumTriple::new(0, 0, 0);
    report.push(Check::within(
        "spherical.ground",
        states[0].1,
        composite_energy(origin, params, resolution.offset),
        tol,
        "chained phi -> theta -> radial numerics vs resolved closed form",
    ));
    report.push(Check::within(
        "spherical.ground_radial_rule",
        states[0].1,
        radial_energy(0, k_squared[0][0].max(0.0), params, resolution.radial_rule),
        tol,
        "radial numerics vs resolved radial rule at the chained k^2",
    ));

    let jacobi = verify_jacobi_route(params, resolution, shells, SectorMultiplicity::Single, cfg)?;
    // greedy pairing in sorted order
    let paired = states.iter().zip(&jacobi.states).take(ROUTE_COMPARE_COUNT);
    for (i, ((q, e), (t, j))) in paired.enumerate() {
        report.push(Check::within(
            format!("spherical.E[{i}]{q}"),
            *e,
            *j,
            tol,
            format!("Jacobi-route numerics, triple {t}"),
        ));
        report.levels.push(ObservedLevel {
            label: format!("spherical {q}"),
            energy: *e,
            multiplicity: 1,
        });
    }
    report.push(Check::within(
        "spherical.compared",
        states
            .len()
            .min(jacobi.states.len())
            .min(ROUTE_COMPARE_COUNT) as f64,
        ROUTE_COMPARE_COUNT as f64,
        0.0,
        "number of paired levels",
    ));

    let table = enumerate_spectrum(
        params,
        shells,
        resolution.offset,
        SectorMultiplicity::Single,
    );
    for level in &table.levels {
        let observed = states
            .iter()
            .filter(|s| (s.1 - level.value).abs() <= tol)
            .count();
        report.push(Check::within(
            format!("spherical.count[N={}]", level.total_quanta),
            observed as f64,
            f64::from(level.degeneracy),
            0.0,
            "observed (n,l,m) states at the level vs (n1,n2,n3) degeneracy",
        ));
    }

    Ok(SphericalRoute {
        report,
        states,
        f_squared,
        k_squared,
    })
}
