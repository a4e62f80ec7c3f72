use std::path::{Path, PathBuf};

use pq_census::{GroupFile, PermGroup, Permutation};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pq_census::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write(path, &text)
}

/// Loads a group file. Generators may be image arrays or cycle strings such as
/// `"(0 1 2)(3 4)"`.
pub fn load_group(path: &Path) -> CliResult<PermGroup> {
    let mut value: Value = read_json(path)?;
    let degree = value.get("degree").and_then(Value::as_u64);
    if let Some(gens) = value.get_mut("generators").and_then(Value::as_array_mut) {
        for gen in gens.iter_mut() {
            if let Value::String(text) = gen {
                let degree = degree.ok_or_else(|| {
                    CliError::Usage(format!("{}: cycle notation needs a \"degree\" field", path.display()))
                })?;
                let perm = Permutation::parse_cycles(degree as usize, text)?;
                *gen = serde_json::to_value(&perm).expect("serializable");
            }
        }
    }
    let file: GroupFile = serde_json::from_value(value).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })?;
    Ok(file.group()?)
}
