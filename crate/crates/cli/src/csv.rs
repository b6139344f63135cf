//! CSV output with a fixed schema per experiment and a JSON sidecar holding
//! the full configuration.
//!
//! Floats are serialized with 17 significant digits so identical runs emit
//! identical bytes. The trailing `runtime_ms` column is the one quantity
//! excluded from the determinism contract.

use crate::config::Options;
use crate::CliError;
use std::io::Write;
use std::path::Path;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
    Str(String),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::UInt(v) => v.to_string(),
            Field::Float(v) => format_float(*v),
            Field::Bool(v) => if *v { "1" } else { "0" }.to_string(),
            Field::Str(v) => v.clone(),
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Renders header plus rows; every row must match the header width.
pub fn render_csv(header: &[&str], rows: &[Vec<Field>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        assert_eq!(row.len(), header.len(), "row width mismatch");
        let cells: Vec<String> = row.iter().map(Field::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Strips a named column from rendered CSV text; used to compare runs under
/// the determinism contract.
pub fn strip_column(csv: &str, column: &str) -> String {
    let mut lines = csv.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let names: Vec<&str> = header.split(',').collect();
    let Some(drop_idx) = names.iter().position(|n| *n == column) else {
        return csv.to_string();
    };
    let keep = |cells: Vec<&str>| -> String {
        cells
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != drop_idx)
            .map(|(_, c)| c)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = keep(names);
    out.push('\n');
    for line in lines {
        out.push_str(&keep(line.split(',').collect()));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Field>]) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    file.write_all(render_csv(header, rows).as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Writes `<out>.json` next to the CSV with every resolved option.
pub fn write_sidecar(csv_path: &Path, options: &Options) -> Result<(), CliError> {
    let mut body = String::from("{\n");
    let entries: Vec<(&str, &str)> = options.entries().collect();
    for (i, (k, v)) in entries.iter().enumerate() {
        body.push_str(&format!(
            "  {}: {}{}\n",
            json_string(k),
            json_string(v),
            if i + 1 < entries.len() { "," } else { "" }
        ));
    }
    body.push_str("}\n");
    let path = sidecar_path(csv_path);
    std::fs::write(&path, body)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn sidecar_path(csv_path: &Path) -> std::path::PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".json");
    std::path::PathBuf::from(s)
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_17_significant_digits() {
        let s = format_float(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn render_and_strip() {
        let header = ["a", "b", "runtime_ms"];
        let rows = vec![
            vec![Field::UInt(1), Field::Float(0.5), Field::Float(12.3)],
            vec![Field::UInt(2), Field::Float(1.5), Field::Float(45.6)],
        ];
        let csv = render_csv(&header, &rows);
        let stripped = strip_column(&csv, "runtime_ms");
        assert_eq!(
            stripped,
            "a,b\n1,5.0000000000000000e-1\n2,1.5000000000000000e0\n"
        );
        // stripping a missing column is the identity
        assert_eq!(strip_column(&csv, "zzz"), csv);
    }

    #[test]
    fn json_escaping() {
        assert_eq!(json_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
    }
}
