//! Run configuration: defaults, `key = value` config files, flag overrides.

use std::fs;
use std::path::{Path, PathBuf};

use wolfes::{ModelParams, SectorMultiplicity};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Largest 3D grid accepted per axis.
pub const MAX_3D_POINTS: usize = 81;
const MAX_1D_POINTS: usize = 200_000;
const MAX_QUANTA_LIMIT: u32 = 60;

/// Every field a config file or flag can set; `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub g1_squared: Option<f64>,
    pub max_quanta: Option<u32>,
    pub grid_points: Option<usize>,
    pub domain_extent: Option<f64>,
    pub tol: Option<f64>,
    pub sector_multiplicity: Option<u32>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub sweep: Option<Vec<f64>>,
}

impl Overrides {
    /// Fields set in `top` win.
    pub fn layered_over(self, base: Overrides) -> Overrides {
        Overrides {
            omega: self.omega.or(base.omega),
            g1_squared: self.g1_squared.or(base.g1_squared),
            max_quanta: self.max_quanta.or(base.max_quanta),
            grid_points: self.grid_points.or(base.grid_points),
            domain_extent: self.domain_extent.or(base.domain_extent),
            tol: self.tol.or(base.tol),
            sector_multiplicity: self.sector_multiplicity.or(base.sector_multiplicity),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            sweep: self.sweep.or(base.sweep),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub max_quanta: u32,
    /// Explicit grid size; commands pick their own default when absent.
    pub grid_points: Option<usize>,
    pub domain_extent: Option<f64>,
    pub tol: Option<f64>,
    pub sector_multiplicity: SectorMultiplicity,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub sweep: Option<Vec<f64>>,
    /// Directory holding the config file, or the working directory.
    pub state_dir: PathBuf,
}

impl RunConfig {
    pub fn build(flags: Overrides, config_path: Option<&Path>) -> Result<Self, CliError> {
        let (file, state_dir) = match config_path {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                let dir = path
                    .parent()
                    .filter(|d| !d.as_os_str().is_empty())
                    .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
                (parse_config(&text)?, dir)
            }
            None => (Overrides::default(), PathBuf::from(".")),
        };
        let merged = flags.layered_over(file);

        let params = ModelParams::new(
            merged.omega.unwrap_or(1.0),
            merged.g1_squared.unwrap_or(3.0),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let max_quanta = merged.max_quanta.unwrap_or(6);
        if max_quanta > MAX_QUANTA_LIMIT {
            return Err(CliError::Usage(format!(
                "max-quanta must be at most {MAX_QUANTA_LIMIT}, got {max_quanta}"
            )));
        }
        if let Some(n) = merged.grid_points {
            if !(3..=MAX_1D_POINTS).contains(&n) {
                return Err(CliError::Usage(format!(
                    "grid-points must be in 3..={MAX_1D_POINTS}, got {n}"
                )));
            }
        }
        if let Some(e) = merged.domain_extent {
            if !(e.is_finite() && e > 0.0) {
                return Err(CliError::Usage(format!(
                    "domain-extent must be positive, got {e}"
                )));
            }
        }
        if let Some(t) = merged.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("tol must be positive, got {t}")));
            }
        }
        let sector_multiplicity =
            SectorMultiplicity::try_from(merged.sector_multiplicity.unwrap_or(1))
                .map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(sweep) = &merged.sweep {
            if sweep.is_empty() || sweep.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
                return Err(CliError::Usage(
                    "sweep must be a nonempty list of nonnegative g1^2 values".into(),
                ));
            }
        }
        Ok(Self {
            params,
            max_quanta,
            grid_points: merged.grid_points,
            domain_extent: merged.domain_extent,
            tol: merged.tol,
            sector_multiplicity,
            format: merged.format.unwrap_or(Format::Json),
            out: merged.out,
            sweep: merged.sweep,
            state_dir,
        })
    }
}

pub fn parse_sweep(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad sweep value `{s}`: {e}"))
        })
        .collect()
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("config line {line}: bad value for {key}: {e}")))
}

pub fn parse_config(text: &str) -> Result<Overrides, CliError> {
    let mut o = Overrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {line_no}: expected key = value"))
        })?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "omega" => o.omega = Some(parse_value(&key, value, line_no)?),
            "g1sq" | "g1_squared" => o.g1_squared = Some(parse_value(&key, value, line_no)?),
            "max_quanta" => o.max_quanta = Some(parse_value(&key, value, line_no)?),
            "grid_points" => o.grid_points = Some(parse_value(&key, value, line_no)?),
            "domain_extent" => o.domain_extent = Some(parse_value(&key, value, line_no)?),
            "tol" => o.tol = Some(parse_value(&key, value, line_no)?),
            "sector_mult" | "sector_multiplicity" => {
                o.sector_multiplicity = Some(parse_value(&key, value, line_no)?)
            }
            "format" => {
                o.format = Some(match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => {
                        return Err(CliError::Usage(format!(
                            "config line {line_no}: unknown format `{other}`"
                        )))
                    }
                })
            }
            "out" => o.out = Some(PathBuf::from(value)),
            "sweep" => {
                o.sweep = Some(
                    parse_sweep(value)
                        .map_err(|e| CliError::Usage(format!("config line {line_no}: {e}")))?,
                )
            }
            other => {
                return Err(CliError::Usage(format!(
                    "config line {line_no}: unknown key `{other}`"
                )))
            }
        }
    }
    Ok(o)
}
