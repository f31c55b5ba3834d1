//! The resolved-constants state file, `wolfes.state`.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use wolfes::verify::Resolution;
use wolfes::ShoOffset;

use crate::CliError;

pub const STATE_FILE: &str = "wolfes.state";

pub fn path_in(dir: &Path) -> PathBuf {
    dir.join(STATE_FILE)
}

pub fn render(r: &Resolution) -> String {
    format!(
        "# written by `wolfes resolve`\nsho_offset = {}\nradial_rule = {}\n",
        r.offset.value(),
        r.radial_rule
    )
}

pub fn parse(text: &str) -> Result<Resolution, String> {
    let mut offset = None;
    let mut rule = None;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("expected key = value, got `{line}`"))?;
        match k.trim() {
            "sho_offset" => {
                let value: f64 = v.trim().parse().map_err(|e| format!("sho_offset: {e}"))?;
                offset = Some(ShoOffset::try_from(value).map_err(|e| e.to_string())?);
            }
            "radial_rule" => rule = Some(v.trim().parse()?),
            other => return Err(format!("unknown key `{other}`")),
        }
    }
    Ok(Resolution {
        offset: offset.ok_or("missing sho_offset")?,
        radial_rule: rule.ok_or("missing radial_rule")?,
    })
}

/// `Ok(None)` when no state file exists yet.
pub fn load(dir: &Path) -> Result<Option<Resolution>, CliError> {
    let path = path_in(dir);
    match fs::read_to_string(&path) {
        Ok(text) => parse(&text)
            .map(Some)
            .map_err(|e| CliError::Usage(format!("corrupt state file {}: {e}", path.display()))),
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(CliError::Usage(format!(
            "cannot read {}: {e}",
            path.display()
        ))),
    }
}

pub fn store(dir: &Path, r: &Resolution) -> Result<PathBuf, CliError> {
    let path = path_in(dir);
    fs::write(&path, render(r))
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
