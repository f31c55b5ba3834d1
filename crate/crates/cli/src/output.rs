//! Deterministic JSON and CSV rendering.
//!
//! Floats carry 12 significant digits: fixed notation for
//! `1e-3 ≤ |x| < 1e6`, scientific otherwise, `0` for zero.

use std::fmt::Write as _;

use wolfes::verify::{Check, Resolution};
use wolfes::ModelParams;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Which section becomes the CSV body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvBody {
    Checks,
    Levels,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub params: ModelParams,
    pub resolved: Option<(Resolution, &'static str)>,
    pub checks: Option<Vec<Check>>,
    pub levels: Option<Table>,
    pub csv_body: CsvBody,
}

pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        }
        .into();
    }
    let sci = format!("{x:.11e}");
    let exponent: i32 = sci[sci.find('e').expect("exponent present") + 1..]
        .parse()
        .expect("integer exponent");
    // the exponent after rounding decides the notation, so 999999.9999999 stays consistent
    if !(-3..6).contains(&exponent) {
        sci
    } else {
        let decimals = (11 - exponent) as usize;
        format!("{x:.decimals$}")
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_cell(c: &Cell) -> String {
    match c {
        Cell::Num(x) if x.is_finite() => format_float(*x),
        Cell::Num(_) => "null".into(),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => json_string(s),
    }
}

fn json_object(pairs: &[(&str, String)]) -> String {
    let body: Vec<String> = pairs
        .iter()
        .map(|(k, v)| format!("{}: {v}", json_string(k)))
        .collect();
    format!("{{{}}}", body.join(", "))
}

fn params_object(p: &ModelParams) -> String {
    json_object(&[
        ("omega", json_cell(&Cell::Num(p.omega()))),
        ("g1_squared", json_cell(&Cell::Num(p.g1_squared()))),
        ("delta", json_cell(&Cell::Num(p.delta()))),
    ])
}

fn check_cells(c: &Check) -> Vec<(&'static str, Cell)> {
    vec![
        ("name", Cell::Text(c.name.clone())),
        ("status", Cell::Text(c.status.to_string())),
        ("measured", Cell::Num(c.measured)),
        ("reference", Cell::Num(c.reference)),
        ("tolerance", Cell::Num(c.tolerance)),
        ("provenance", Cell::Text(c.provenance.clone())),
    ]
}

fn json_array(items: Vec<String>) -> String {
    if items.is_empty() {
        "[]".into()
    } else {
        format!("[\n    {}\n  ]", items.join(",\n    "))
    }
}

pub fn render_json(doc: &Document) -> String {
    let mut fields = vec![("params", params_object(&doc.params))];
    if let Some((r, source)) = &doc.resolved {
        fields.push((
            "resolved",
            json_object(&[
                ("sho_offset", json_cell(&Cell::Num(r.offset.value()))),
                ("radial_rule", json_string(r.radial_rule.name())),
                ("source", json_string(source)),
            ]),
        ));
    }
    if let Some(checks) = &doc.checks {
        let items = checks
            .iter()
            .map(|c| {
                let cells = check_cells(c);
                let pairs: Vec<(&str, String)> =
                    cells.iter().map(|(k, v)| (*k, json_cell(v))).collect();
                json_object(&pairs)
            })
            .collect();
        fields.push(("checks", json_array(items)));
    }
    if let Some(table) = &doc.levels {
        let items = table
            .rows
            .iter()
            .map(|row| {
                let pairs: Vec<(&str, String)> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (*k, json_cell(v)))
                    .collect();
                json_object(&pairs)
            })
            .collect();
        fields.push(("levels", json_array(items)));
    }
    let mut out = String::from("{\n");
    for (i, (k, v)) in fields.iter().enumerate() {
        let sep = if i + 1 == fields.len() { "" } else { "," };
        let _ = writeln!(out, "  {}: {v}{sep}", json_string(k));
    }
    out.push_str("}\n");
    out
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_float(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

pub fn render_csv(doc: &Document) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: Vec<String>| {
        w.write_record(rec)
            .expect("in-memory CSV writes cannot fail")
    };
    match doc.csv_body {
        CsvBody::Checks => {
            write(
                &mut writer,
                [
                    "name",
                    "status",
                    "measured",
                    "reference",
                    "tolerance",
                    "provenance",
                ]
                .map(String::from)
                .to_vec(),
            );
            for c in doc.checks.iter().flatten() {
                write(
                    &mut writer,
                    check_cells(c).iter().map(|(_, v)| csv_cell(v)).collect(),
                );
            }
        }
        CsvBody::Levels => {
            let empty = Table::default();
            let table = doc.levels.as_ref().unwrap_or(&empty);
            write(
                &mut writer,
                table.columns.iter().map(|c| c.to_string()).collect(),
            );
            for row in &table.rows {
                write(&mut writer, row.iter().map(csv_cell).collect());
            }
        }
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(3.118033988749895), "3.11803398875");
        assert_eq!(format_float(1.5), "1.50000000000");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1e-4), "1.00000000000e-4");
        assert_eq!(format_float(0.001), "0.00100000000000");
        assert_eq!(format_float(123456.0), "123456.000000");
        assert_eq!(format_float(1e6), "1.00000000000e6");
        assert_eq!(format_float(999999.99999999), "1.00000000000e6");
        assert_eq!(format_float(-2.5), "-2.50000000000");
    }

    #[test]
    fn json_shape() {
        let doc = Document {
            params: ModelParams::new(1.0, 3.0).unwrap(),
            resolved: Some((Resolution::EXPECTED, "state file")),
            checks: Some(vec![Check::within(
                "a \"quoted\" name",
                1.0,
                1.0,
                1e-4,
                "p",
            )]),
            levels: Some(Table {
                columns: vec!["N", "energy"],
                rows: vec![vec![Cell::Int(0), Cell::Num(f64::NAN)]],
            }),
            csv_body: CsvBody::Checks,
        };
        let json = render_json(&doc);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&String> = parsed.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 4);
        assert_eq!(parsed["checks"][0]["name"], "a \"quoted\" name");
        assert_eq!(parsed["resolved"]["radial_rule"], "candidate");
        assert!(parsed["levels"][0]["energy"].is_null());
    }

    #[test]
    fn csv_quotes_commas() {
        let doc = Document {
            params: ModelParams::new(1.0, 3.0).unwrap(),
            resolved: None,
            checks: Some(vec![Check::within("x", 1.0, 1.0, 0.0, "a, b")]),
            levels: None,
            csv_body: CsvBody::Checks,
        };
        let csv = render_csv(&doc);
        assert_eq!(
            csv,
            "name,status,measured,reference,tolerance,provenance\nx,pass,1.00000000000,1.00000000000,0,\"a, b\"\n"
        );
    }
}
