//! Run configuration: a JSON file, overridden field by field by flags.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use soergel_core::coxeter::SystemSpec;
use soergel_core::CoxeterSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
    Pretty,
}

fn default_system() -> SystemSpec {
    SystemSpec { generators: vec!["s".into(), "r".into()], bond: vec![vec![1, 4], vec![4, 1]], field: None }
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_system")]
    pub system: SystemSpec,
    /// Refuse systems with a bond of 2 or 3.
    #[serde(default = "yes")]
    pub extra_large: bool,
    /// Degree budget; `None` means `2·length + 8` per word.
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
    /// Worker threads; `None` lets rayon decide.
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            system: default_system(),
            extra_large: true,
            truncation: None,
            cache_dir: None,
            format: None,
            jobs: None,
            seed: 0,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Config> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Builds the Coxeter system; any config error surfaces here, before work starts.
    pub fn validate(&self) -> anyhow::Result<Arc<CoxeterSystem>> {
        if self.jobs == Some(0) {
            bail!("jobs must be positive");
        }
        if self.truncation == Some(0) {
            bail!("truncation must be positive");
        }
        Ok(CoxeterSystem::from_spec(&self.system, self.extra_large)?)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Pretty)
    }
}
