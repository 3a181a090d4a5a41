use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use metaplectic_core::catalog::{load_catalog, load_catalog_value, RankinSelbergEntry};
use metaplectic_core::{fixtures, Bits, Catalog, Error, Member, Sign, Summand};
use serde::Deserialize;

use crate::CliError;

/// A scenario file. Catalog paths are resolved relative to the file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub catalogs: Vec<String>,
    #[serde(default)]
    pub catalog: Option<serde_json::Value>,
    #[serde(default)]
    pub command: Option<String>,
    #[serde(default)]
    pub parameter: Option<Vec<Summand>>,
    #[serde(default)]
    pub global_parameter: Option<Vec<Summand>>,
    #[serde(default)]
    pub places: Vec<String>,
    #[serde(default)]
    pub larger_places: Option<Vec<String>>,
    #[serde(default)]
    pub packets: BTreeMap<String, Vec<Member>>,
    #[serde(default)]
    pub rankin_selberg: Vec<RankinSelbergEntry>,
    #[serde(default)]
    pub epsilon_art: Option<Bits>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Scenario, CliError> {
        let text = read(path)?;
        let mut s: Scenario =
            serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        s.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(s)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Built-in catalogs addressable as `builtin:<name>`.
pub fn builtin(name: &str) -> Option<Catalog> {
    Some(match name {
        "f1" => fixtures::f1(),
        "f1-extended" => fixtures::f1_extended(),
        "principal-global" => fixtures::principal_global(),
        "mp4-global" => fixtures::mp4_global(Sign::Minus),
        "aux-global" => fixtures::aux_global(),
        _ => return None,
    })
}

pub const BUILTIN_NAMES: [&str; 5] = ["f1", "f1-extended", "principal-global", "mp4-global", "aux-global"];

fn load_one(spec: &str, base: &Path) -> Result<Catalog, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin(name).ok_or_else(|| {
            CliError::Usage(format!("unknown built-in catalog `{name}` (known: {})", BUILTIN_NAMES.join(", ")))
        });
    }
    let path = base.join(spec);
    Ok(load_catalog(&read(&path)?).map_err(|e| match e {
        Error::Schema(m) => Error::Schema(format!("{}: {m}", path.display())),
        other => other,
    })?)
}

/// Merges `--catalog` arguments with the scenario's catalogs; F1-extended when none is given.
pub fn resolve_catalog(cli: &[String], scenario: Option<&Scenario>) -> Result<Catalog, CliError> {
    let mut parts = Vec::new();
    for c in cli {
        parts.push(load_one(c, Path::new("."))?);
    }
    if let Some(s) = scenario {
        for c in &s.catalogs {
            parts.push(load_one(c, &s.base_dir)?);
        }
        if let Some(v) = &s.catalog {
            parts.push(load_catalog_value(v.clone())?);
        }
    }
    let mut cat = match parts.len() {
        0 => fixtures::f1_extended(),
        _ => {
            let mut it = parts.into_iter();
            let first = it.next().expect("nonempty");
            it.try_fold(first, |acc, c| acc.merge(c))?
        }
    };
    if let Some(s) = scenario {
        if !s.rankin_selberg.is_empty() {
            cat = cat.with_rankin_selberg(s.rankin_selberg.clone())?;
        }
    }
    Ok(cat)
}

/// Parses `rho2:1, chi_a:2` or `2*chi_a:2 + rho2:1`; a JSON array of summands is accepted too.
pub fn parse_parameter(text: &str) -> Result<Vec<Summand>, CliError> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| CliError::Core(Error::Schema(e.to_string())));
    }
    t.split([',', '+'])
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let bad = || CliError::Usage(format!("cannot parse summand `{p}` (expected [m*]id:b)"));
            let (mult, rest) = match p.split_once('*') {
                Some((m, r)) => (m.trim().parse::<u32>().map_err(|_| bad())?, r.trim()),
                None => (1, p),
            };
            let (id, b) = rest.rsplit_once(':').ok_or_else(bad)?;
            let b = b.trim().parse::<u32>().map_err(|_| bad())?;
            Ok(Summand::new(id.trim(), b, mult))
        })
        .collect()
}
