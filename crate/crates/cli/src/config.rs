//! Flag/environment resolution.
//!
//! `FROBDESC_CONFIG` may point to a JSON file providing defaults; explicit
//! flags always win. Everything is validated before any computation starts.

use serde::Deserialize;

use frobdesc_core::ring::{Limits, RingContext};

use crate::{CliError, CommonArgs};

/// Optional defaults loaded from the file named by `FROBDESC_CONFIG`.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileConfig {
    pub p: Option<u64>,
    pub vars: Option<Vec<String>>,
    pub e: Option<u32>,
    pub e_max: Option<u32>,
    pub n_max: Option<u64>,
    pub seed: Option<u64>,
    pub size_guard: Option<u64>,
    pub max_spairs: Option<usize>,
    pub max_degree: Option<u64>,
    pub json: Option<bool>,
}

impl FileConfig {
    pub fn load() -> Result<FileConfig, CliError> {
        match std::env::var("FROBDESC_CONFIG") {
            Ok(path) if !path.is_empty() => {
                let text = std::fs::read_to_string(&path).map_err(|err| {
                    CliError::Usage(format!("cannot read FROBDESC_CONFIG file `{path}`: {err}"))
                })?;
                serde_json::from_str(&text).map_err(|err| {
                    CliError::Usage(format!("invalid FROBDESC_CONFIG file `{path}`: {err}"))
                })
            }
            _ => Ok(FileConfig::default()),
        }
    }
}

/// Fully resolved settings for one command invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub ctx: RingContext,
    pub json: bool,
    pub seed: u64,
    pub e: u32,
    pub e_max: u32,
    pub n_max: u64,
}

pub fn resolve(
    common: &CommonArgs,
    file: &FileConfig,
    e: Option<u32>,
    e_max: Option<u32>,
    n_max: Option<u64>,
    fallback_vars: Option<Vec<String>>,
) -> Result<Settings, CliError> {
    let p = common
        .p
        .or(file.p)
        .ok_or_else(|| CliError::Usage("missing --p".into()))?;
    let vars = common
        .vars
        .clone()
        .or_else(|| file.vars.clone())
        .or(fallback_vars)
        .ok_or_else(|| CliError::Usage("missing --vars".into()))?;
    let defaults = Limits::default();
    let limits = Limits {
        max_spairs: common.max_spairs.or(file.max_spairs).unwrap_or(defaults.max_spairs),
        max_degree: common.max_degree.or(file.max_degree).unwrap_or(defaults.max_degree),
        size_guard: common.size_guard.or(file.size_guard).unwrap_or(defaults.size_guard),
    };
    let ctx = RingContext::with_limits(p, vars, limits)?;
    let e = e.or(file.e).unwrap_or(1);
    if e < 1 {
        return Err(CliError::Usage("--e must be at least 1".into()));
    }
    let e_max = e_max.or(file.e_max).unwrap_or(6);
    if e_max < 1 {
        return Err(CliError::Usage("--e-max must be at least 1".into()));
    }
    Ok(Settings {
        ctx,
        json: common.json || file.json.unwrap_or(false),
        seed: common.seed.or(file.seed).unwrap_or(0),
        e,
        e_max,
        n_max: n_max.or(file.n_max).unwrap_or(12),
    })
}

/// Default variable names for `verify --n`.
pub fn auto_vars(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}
