//! Subcommand bodies. Each builds a [`Document`], emits it, then maps the
//! check verdicts to an exit status.

use std::fs;

use wolfes::model::enumerate_spectrum;
use wolfes::numsolve::{HALF_LINE_EXTENT, HO_HALF_WIDTH};
use wolfes::verify::{
    bk_audit, hellmann_feynman_check, resolve_formula_offsets, verify_3d, verify_jacobi_route,
    verify_spherical_route, Resolution, SphericalRanges, ThreeDConfig, VerificationReport,
    VerifyConfig, VerifyError, STANDARD_SWEEP,
};
use wolfes::{ModelParams, ShoOffset};

use crate::config::{Format, RunConfig, MAX_3D_POINTS};
use crate::output::{render_csv, render_json, CsvBody, Document, Table};
use crate::{state, CliError, Suite};

const MIN_3D_POINTS: usize = 16;
const HF_STATES: u32 = 3;

fn emit(cfg: &RunConfig, doc: &Document) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Json => render_json(doc),
        Format::Csv => render_csv(doc),
    };
    match &cfg.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify_error(e: VerifyError) -> CliError {
    match e {
        VerifyError::Precondition(m) => CliError::Usage(m),
        other => CliError::Failure(other.to_string()),
    }
}

fn gate(report: &VerificationReport) -> Result<(), CliError> {
    let failed = report.failures().count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{failed} check(s) failed")))
    }
}

fn verify_config(cfg: &RunConfig) -> VerifyConfig {
    VerifyConfig {
        grid_points: cfg
            .grid_points
            .unwrap_or(VerifyConfig::default().grid_points),
        ho_half_width: cfg.domain_extent.unwrap_or(HO_HALF_WIDTH),
        half_line_extent: cfg.domain_extent.unwrap_or(HALF_LINE_EXTENT),
        tol: cfg.tol.unwrap_or(VerifyConfig::default().tol),
        ..VerifyConfig::default()
    }
}

fn level_table(report: &VerificationReport) -> Table {
    Table {
        columns: vec!["label", "energy", "multiplicity"],
        rows: report
            .levels
            .iter()
            .map(|l| {
                vec![
                    l.label.as_str().into(),
                    l.energy.into(),
                    l.multiplicity.into(),
                ]
            })
            .collect(),
    }
}

fn report_document(
    report: VerificationReport,
    resolved: Option<(Resolution, &'static str)>,
) -> Document {
    Document {
        params: report.params,
        resolved,
        levels: Some(level_table(&report)),
        checks: Some(report.checks),
        csv_body: CsvBody::Checks,
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let (offset, resolved) = match state::load(&cfg.state_dir)? {
        Some(r) => (r.offset, (r, "state file")),
        None => {
            eprintln!(
                "warning: no {} found; listing the published oscillator offset 1/2. \
                 Run `wolfes resolve` first.",
                state::STATE_FILE
            );
            (
                ShoOffset::Half,
                (Resolution::PUBLISHED, "unresolved fallback"),
            )
        }
    };
    let table = enumerate_spectrum(&cfg.params, cfg.max_quanta, offset, cfg.sector_multiplicity);
    let rows = table
        .levels
        .iter()
        .map(|l| {
            let triples: Vec<String> = l.members.iter().map(ToString::to_string).collect();
            vec![
                l.total_quanta.into(),
                l.value.into(),
                l.degeneracy.into(),
                triples.join(" ").into(),
            ]
        })
        .collect();
    emit(
        cfg,
        &Document {
            params: cfg.params,
            resolved: Some(resolved),
            checks: None,
            levels: Some(Table {
                columns: vec!["N", "energy", "degeneracy", "triples"],
                rows,
            }),
            csv_body: CsvBody::Levels,
        },
    )
}

/// The stored resolution, or a fresh in-process one whose checks join `report`.
fn resolution_for(
    cfg: &RunConfig,
    vcfg: &VerifyConfig,
    report: &mut VerificationReport,
) -> Result<(Resolution, &'static str), CliError> {
    if let Some(r) = state::load(&cfg.state_dir)? {
        return Ok((r, "state file"));
    }
    let sweep = sweep_params(cfg)?;
    let outcome = resolve_formula_offsets(&sweep, vcfg).map_err(verify_error)?;
    let resolution = outcome.resolution();
    report.merge(outcome.report);
    match resolution {
        Some(r) => Ok((r, "resolved in-process")),
        None => Ok((
            Resolution::EXPECTED,
            "unresolved; expected constants assumed",
        )),
    }
}

fn three_d_config(cfg: &RunConfig, explicit_grid: bool) -> Result<ThreeDConfig, CliError> {
    let defaults = ThreeDConfig::default();
    let n = if explicit_grid {
        cfg.grid_points.unwrap_or(defaults.n_per_axis)
    } else {
        defaults.n_per_axis
    };
    if !(MIN_3D_POINTS..=MAX_3D_POINTS).contains(&n) {
        return Err(CliError::Usage(format!(
            "3D grid-points must be in {MIN_3D_POINTS}..={MAX_3D_POINTS}, got {n}"
        )));
    }
    Ok(ThreeDConfig {
        n_per_axis: n,
        extent: cfg.domain_extent.unwrap_or(defaults.extent),
        tol: cfg.tol.unwrap_or(defaults.tol),
        ..defaults
    })
}

pub fn verify(cfg: &RunConfig, suite: Suite) -> Result<(), CliError> {
    let mut vcfg = verify_config(cfg);
    // in the 3D-only suite, --grid-points counts nodes per axis
    if suite == Suite::ThreeD {
        vcfg.grid_points = VerifyConfig::default().grid_points;
    }
    let three_d = match suite {
        Suite::ThreeD => Some(three_d_config(cfg, true)?),
        Suite::All => Some(three_d_config(cfg, false)?),
        _ => None,
    };

    let mut report = VerificationReport::new(cfg.params);
    let (resolution, source) = resolution_for(cfg, &vcfg, &mut report)?;
    report.resolved = Some(resolution);

    if matches!(suite, Suite::Jacobi | Suite::All) {
        let route = verify_jacobi_route(
            &cfg.params,
            resolution,
            cfg.max_quanta,
            cfg.sector_multiplicity,
            &vcfg,
        )
        .map_err(verify_error)?;
        report.merge(route.report);
    }
    if matches!(suite, Suite::Spherical | Suite::All) {
        let route =
            verify_spherical_route(&cfg.params, resolution, SphericalRanges::default(), &vcfg)
                .map_err(verify_error)?;
        report.merge(route.report);
    }
    if let Some(tcfg) = three_d {
        let outcome = verify_3d(&cfg.params, resolution, &tcfg).map_err(verify_error)?;
        report.merge(outcome.report);
    }

    let verdict = gate(&report);
    emit(cfg, &report_document(report, Some((resolution, source))))?;
    verdict
}

pub fn hf_check(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.params.g1_squared() == 0.0 {
        return Err(CliError::Usage(
            "hf-check needs g1sq > 0: the finite-difference sweep steps below g1sq".into(),
        ));
    }
    let vcfg = verify_config(cfg);
    let mut report = VerificationReport::new(cfg.params);
    for n2 in 0..HF_STATES {
        report.merge(hellmann_feynman_check(&cfg.params, n2, None, &vcfg).map_err(verify_error)?);
    }
    let verdict = gate(&report);
    emit(cfg, &report_document(report, None))?;
    verdict
}

fn sweep_params(cfg: &RunConfig) -> Result<Vec<ModelParams>, CliError> {
    let values = cfg.sweep.clone().unwrap_or_else(|| STANDARD_SWEEP.to_vec());
    values
        .into_iter()
        .map(|g| {
            cfg.params
                .with_g1_squared(g)
                .map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect()
}

pub fn resolve(cfg: &RunConfig) -> Result<(), CliError> {
    let vcfg = verify_config(cfg);
    let outcome = resolve_formula_offsets(&sweep_params(cfg)?, &vcfg).map_err(verify_error)?;
    if outcome.reduced_sweep {
        eprintln!(
            "warning: resolution used a reduced sweep; the standard sweep is g1sq in {STANDARD_SWEEP:?}"
        );
    }
    let resolution = outcome.resolution();
    let rows = outcome
        .table
        .rows
        .iter()
        .map(|r| {
            vec![
                r.channel.name().into(),
                r.omega.into(),
                r.coupling.into(),
                r.level.into(),
                r.numeric.into(),
                r.published.into(),
                r.candidate.into(),
            ]
        })
        .collect();
    let doc = Document {
        params: cfg.params,
        resolved: resolution.map(|r| (r, "resolve")),
        checks: Some(outcome.report.checks.clone()),
        levels: Some(Table {
            columns: vec![
                "channel",
                "omega",
                "coupling",
                "n",
                "numeric",
                "published",
                "candidate",
            ],
            rows,
        }),
        csv_body: CsvBody::Levels,
    };
    emit(cfg, &doc)?;
    match resolution {
        Some(r) => {
            let path = state::store(&cfg.state_dir, &r)?;
            eprintln!(
                "recorded sho_offset = {}, radial_rule = {} in {}",
                r.offset.value(),
                r.radial_rule,
                path.display()
            );
            Ok(())
        }
        None => Err(CliError::Failure(
            "resolution is ambiguous or matched no candidate; state file left unchanged".into(),
        )),
    }
}

pub fn audit(cfg: &RunConfig) -> Result<(), CliError> {
    let report = bk_audit(&cfg.params, &verify_config(cfg)).map_err(verify_error)?;
    emit(cfg, &report_document(report, None))
}
