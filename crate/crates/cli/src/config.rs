//! Settings resolution: command-line flags over config file over defaults.
//!
//! Config files are `key = value` lines. `#` starts a comment. Keys are the
//! global flag names without dashes: `ud-root`, `priority-table`,
//! `drop-punct`, `binary2-order`, `n-max`, `seed`, `format`, `out`.
//! Relative paths are taken relative to the config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use strahler_core::binarize::Binary2Order;
use strahler_core::stats::ExportFormat;

use crate::CliError;

pub const KEYS: [&str; 8] = [
    "ud-root",
    "priority-table",
    "drop-punct",
    "binary2-order",
    "n-max",
    "seed",
    "format",
    "out",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub ud_root: Option<PathBuf>,
    pub priority_table: Option<PathBuf>,
    pub drop_punct: Option<bool>,
    pub binary2_order: Option<Binary2Order>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<ExportFormat>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            ud_root: self.ud_root.or(lower.ud_root),
            priority_table: self.priority_table.or(lower.priority_table),
            drop_punct: self.drop_punct.or(lower.drop_punct),
            binary2_order: self.binary2_order.or(lower.binary2_order),
            n_max: self.n_max.or(lower.n_max),
            seed: self.seed.or(lower.seed),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
        }
    }
}

pub fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("expected true or false, got {s:?}")),
    }
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    raw.parse().map_err(|e| format!("{key}: {e}"))
}

/// Parses config text. `base` anchors relative paths.
pub fn parse_config(text: &str, base: &Path) -> Result<Overrides, String> {
    let mut seen = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, raw)) = content.split_once('=') else {
            return Err(format!("line {}: expected key = value", i + 1));
        };
        let (key, raw) = (key.trim(), raw.trim());
        if !KEYS.contains(&key) {
            return Err(format!("line {}: unknown key {key:?}", i + 1));
        }
        if seen.insert(key.to_string(), raw.to_string()).is_some() {
            return Err(format!("line {}: duplicate key {key:?}", i + 1));
        }
    }
    let path = |k: &str| seen.get(k).map(|v| base.join(v));
    let parsed = |k: &str| seen.get(k).map(String::as_str);
    Ok(Overrides {
        ud_root: path("ud-root"),
        priority_table: path("priority-table"),
        drop_punct: parsed("drop-punct").map(parse_bool).transpose().map_err(|e| format!("drop-punct: {e}"))?,
        binary2_order: parsed("binary2-order").map(|v| value("binary2-order", v)).transpose()?,
        n_max: parsed("n-max").map(|v| value("n-max", v)).transpose()?,
        seed: parsed("seed").map(|v| value("seed", v)).transpose()?,
        format: parsed("format").map(|v| value("format", v)).transpose()?,
        out: path("out"),
    })
}

pub fn load_config(path: &Path) -> Result<Overrides, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, base).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub ud_root: Option<PathBuf>,
    pub priority_table: Option<PathBuf>,
    pub drop_punct: bool,
    pub binary2_order: Binary2Order,
    pub n_max: Option<usize>,
    pub seed: u64,
    pub format: Option<ExportFormat>,
    pub out: Option<PathBuf>,
}

impl From<Overrides> for Settings {
    fn from(o: Overrides) -> Self {
        Settings {
            ud_root: o.ud_root,
            priority_table: o.priority_table,
            drop_punct: o.drop_punct.unwrap_or(false),
            binary2_order: o.binary2_order.unwrap_or_default(),
            n_max: o.n_max,
            seed: o.seed.unwrap_or(0),
            format: o.format,
            out: o.out,
        }
    }
}

impl Settings {
    pub fn format(&self) -> ExportFormat {
        self.format.unwrap_or(ExportFormat::Csv)
    }
}
