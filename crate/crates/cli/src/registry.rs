//! Named dataset manifest: a TOML file mapping dataset names to their CSV
//! location, candidate cluster counts, and load/normalization options.
//!
//! The manifest lives at `datasets/registry.toml` by default; the
//! `CLUSTER_REGISTRY` environment variable overrides the location. Dataset
//! paths inside the manifest are resolved relative to the manifest file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qmts_core::NormalizeMode;
use serde::Deserialize;
use thiserror::Error;

use crate::loader::CsvOptions;

pub const REGISTRY_ENV_VAR: &str = "CLUSTER_REGISTRY";
pub const DEFAULT_REGISTRY_PATH: &str = "datasets/registry.toml";

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("cannot read registry {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("registry {path} is not valid TOML: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("registry entry {name:?}: delimiter must be a single byte")]
    BadDelimiter { name: String },
    #[error("registry entry {name:?}: unknown normalization {value:?} (use none, zscore or minmax)")]
    BadNormalize { name: String, value: String },
    #[error("registry entry {name:?}: k must contain at least one value")]
    EmptyK { name: String },
    #[error("dataset {name:?} is not in the registry (available: {available})")]
    UnknownDataset { name: String, available: String },
}

#[derive(Debug, Deserialize)]
struct RawRegistry {
    #[serde(default)]
    datasets: BTreeMap<String, RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    path: String,
    k: OneOrMany,
    normalize: Option<String>,
    has_header: Option<bool>,
    label_column: Option<usize>,
    delimiter: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<usize> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

/// One dataset known to the registry, with fully resolved options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub name: String,
    pub path: PathBuf,
    /// Cluster counts this dataset is normally run with; the first is the
    /// default when the CLI gets no explicit k.
    pub k: Vec<usize>,
    pub normalize: NormalizeMode,
    pub options: CsvOptions,
}

impl RegistryEntry {
    pub fn default_k(&self) -> usize {
        self.k[0]
    }
}

#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, RegistryEntry>,
}

pub fn parse_normalize_mode(value: &str) -> Option<NormalizeMode> {
    match value {
        "none" => Some(NormalizeMode::None),
        "zscore" => Some(NormalizeMode::ZScore),
        "minmax" => Some(NormalizeMode::MinMax),
        _ => None,
    }
}

impl Registry {
    /// Reads and validates a manifest file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, RegistryError> {
        let path = path.as_ref();
        let path_str = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
            path: path_str.clone(),
            source,
        })?;
        let raw: RawRegistry = toml::from_str(&text).map_err(|source| RegistryError::Parse {
            path: path_str.clone(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));

        let mut entries = BTreeMap::new();
        for (name, raw) in raw.datasets {
            let k = raw.k.into_vec();
            if k.is_empty() {
                return Err(RegistryError::EmptyK { name });
            }
            let normalize = match raw.normalize.as_deref() {
                None => NormalizeMode::None,
                Some(value) => parse_normalize_mode(value).ok_or_else(|| {
                    RegistryError::BadNormalize {
                        name: name.clone(),
                        value: value.to_string(),
                    }
                })?,
            };
            let delimiter = match raw.delimiter.as_deref() {
                None => b',',
                Some(s) if s.len() == 1 => s.as_bytes()[0],
                Some(_) => return Err(RegistryError::BadDelimiter { name }),
            };
            let entry = RegistryEntry {
                name: name.clone(),
                path: base.join(raw.path),
                k,
                normalize,
                options: CsvOptions {
                    delimiter,
                    has_header: raw.has_header.unwrap_or(true),
                    label_column: raw.label_column,
                },
            };
            entries.insert(name, entry);
        }
        Ok(Self { entries })
    }

    /// Resolves the manifest location: `CLUSTER_REGISTRY` when set, else
    /// `datasets/registry.toml` under the current directory.
    pub fn default_path() -> PathBuf {
        std::env::var_os(REGISTRY_ENV_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_REGISTRY_PATH))
    }

    pub fn load_default() -> Result<Self, RegistryError> {
        Self::load(Self::default_path())
    }

    pub fn get(&self, name: &str) -> Result<&RegistryEntry, RegistryError> {
        self.entries
            .get(name)
            .ok_or_else(|| RegistryError::UnknownDataset {
                name: name.to_string(),
                available: self
                    .entries
                    .keys()
                    .cloned()
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
