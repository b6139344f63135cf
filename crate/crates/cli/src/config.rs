//! Flag and config-file parsing.
//!
//! Options come from `key=value` lines in an optional config file plus
//! `--key value` flags; flags override the file. Grids accept `a:b:s`
//! (inclusive start:end:step), a comma list, or a single value.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;

/// Merged option map with file values overridden by flags.
#[derive(Debug, Default, Clone)]
pub struct Options {
    values: BTreeMap<String, String>,
    consumed: std::cell::RefCell<Vec<String>>,
}

impl Options {
    /// Parses `--key value` pairs, loading `--config <path>` first so that
    /// explicit flags win.
    pub fn from_args(args: &[String]) -> Result<Self, CliError> {
        let mut flags = BTreeMap::new();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            let key = arg
                .strip_prefix("--")
                .ok_or_else(|| CliError::Usage(format!("expected --flag, got '{arg}'")))?;
            if key.is_empty() {
                return Err(CliError::Usage("empty flag name".into()));
            }
            // --out consumes values until the next flag (it may take two paths)
            let mut vals = Vec::new();
            while i + 1 < args.len() && !args[i + 1].starts_with("--") {
                vals.push(args[i + 1].clone());
                i += 1;
            }
            if vals.is_empty() {
                return Err(CliError::Usage(format!("flag --{key} needs a value")));
            }
            flags.insert(key.to_string(), vals.join(" "));
            i += 1;
        }

        let mut values = BTreeMap::new();
        if let Some(path) = flags.get("config") {
            values.extend(load_config_file(Path::new(path))?);
        }
        values.extend(flags);
        Ok(Self {
            values,
            consumed: std::cell::RefCell::new(vec!["config".into()]),
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.consumed.borrow_mut().push(key.to_string());
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Usage(format!("missing required option --{key}")))
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid value '{raw}' for --{key}"))),
        }
    }

    pub fn parse_required<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| CliError::Usage(format!("invalid value '{raw}' for --{key}")))
    }

    /// Rejects options that no code path consumed; catches typos.
    pub fn reject_unknown(&self) -> Result<(), CliError> {
        let consumed = self.consumed.borrow();
        for key in self.values.keys() {
            if !consumed.iter().any(|c| c == key) {
                return Err(CliError::Usage(format!("unknown option --{key}")));
            }
        }
        Ok(())
    }

    /// Every key/value pair, for the JSON sidecar.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Parses `a:b:s`, `v1,v2,...`, or a single value into a grid.
pub fn parse_grid_f64(raw: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let bad = |_| CliError::Usage(format!("invalid grid '{raw}' for --{flag}"));
    if let Some((start, rest)) = raw.split_once(':') {
        let (end, step) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("grid '{raw}' needs start:end:step")))?;
        let (start, end, step): (f64, f64, f64) = (
            start.parse().map_err(bad)?,
            end.parse().map_err(bad)?,
            step.parse().map_err(bad)?,
        );
        if step <= 0.0 || end < start {
            return Err(CliError::Usage(format!(
                "grid '{raw}' must have positive step and end >= start"
            )));
        }
        let mut out = Vec::new();
        let mut i = 0usize;
        loop {
            let v = start + step * i as f64;
            if v > end + 1e-12 * step {
                break;
            }
            out.push(v);
            i += 1;
        }
        return Ok(out);
    }
    raw.split(',')
        .map(|s| s.trim().parse().map_err(bad))
        .collect()
}

/// Integer grids with the same syntax.
pub fn parse_grid_usize(raw: &str, flag: &str) -> Result<Vec<usize>, CliError> {
    let bad = |_| CliError::Usage(format!("invalid grid '{raw}' for --{flag}"));
    if let Some((start, rest)) = raw.split_once(':') {
        let (end, step) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("grid '{raw}' needs start:end:step")))?;
        let (start, end, step): (usize, usize, usize) = (
            start.parse().map_err(bad)?,
            end.parse().map_err(bad)?,
            step.parse().map_err(bad)?,
        );
        if step == 0 || end < start {
            return Err(CliError::Usage(format!(
                "grid '{raw}' must have positive step and end >= start"
            )));
        }
        return Ok((start..=end).step_by(step).collect());
    }
    raw.split(',')
        .map(|s| s.trim().parse().map_err(bad))
        .collect()
}
