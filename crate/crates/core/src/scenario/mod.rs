//! Scenario configuration and the artifact producers behind the
//! command-line tool. Every command returns its files in memory; they are
//! schema-checked before anything touches the disk.

mod commands;
mod config;

pub use commands::{analyze, control, export_dinn, simulate, strategies, CommandOutput, Status};
pub use config::{default_initial_state, ExportConfig, ScenarioConfig, StrategyChoice};

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("artifact `{name}` failed validation: {reason}")]
    Schema { name: String, reason: String },
}

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
    pub kind: ArtifactKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArtifactKind {
    /// Header must match exactly; the first `text_columns` fields of a row
    /// may be free text, the rest must parse as finite numbers.
    Csv {
        header: Vec<String>,
        text_columns: usize,
    },
    /// Must parse as a JSON object containing these keys.
    Json { required: Vec<&'static str> },
}

impl Artifact {
    pub(crate) fn csv(name: &str, header: &[&str], text_columns: usize, contents: Vec<u8>) -> Self {
        Self {
            name: name.into(),
            contents: String::from_utf8(contents).expect("writers emit UTF-8"),
            kind: ArtifactKind::Csv {
                header: header.iter().map(|s| s.to_string()).collect(),
                text_columns,
            },
        }
    }

    pub(crate) fn json<T: serde::Serialize>(
        name: &str,
        required: &[&'static str],
        value: &T,
    ) -> Self {
        let mut contents = serde_json::to_string_pretty(value).expect("serialisable report");
        contents.push('\n');
        Self {
            name: name.into(),
            contents,
            kind: ArtifactKind::Json {
                required: required.to_vec(),
            },
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let fail = |reason: String| ScenarioError::Schema {
            name: self.name.clone(),
            reason,
        };
        match &self.kind {
            ArtifactKind::Csv {
                header,
                text_columns,
            } => {
                if self.contents.contains('\r') {
                    return Err(fail("carriage return in CSV".into()));
                }
                if !self.contents.ends_with('\n') {
                    return Err(fail("missing final newline".into()));
                }
                let mut lines = self.contents.lines();
                let head: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
                if head != *header {
                    return Err(fail(format!("header {head:?}, expected {header:?}")));
                }
                for (i, line) in lines.enumerate() {
                    let fields: Vec<&str> = line.split(',').collect();
                    if fields.len() != header.len() {
                        return Err(fail(format!(
                            "row {} has {} fields, expected {}",
                            i + 1,
                            fields.len(),
                            header.len()
                        )));
                    }
                    for f in &fields[*text_columns..] {
                        match f.parse::<f64>() {
                            Ok(x) if x.is_finite() => {}
                            _ => {
                                return Err(fail(format!(
                                    "row {}: `{f}` is not a finite number",
                                    i + 1
                                )))
                            }
                        }
                    }
                }
                Ok(())
            }
            ArtifactKind::Json { required } => {
                let v: serde_json::Value =
                    serde_json::from_str(&self.contents).map_err(|e| fail(e.to_string()))?;
                let obj = v
                    .as_object()
                    .ok_or_else(|| fail("not a JSON object".into()))?;
                match required.iter().find(|k| !obj.contains_key(**k)) {
                    Some(k) => Err(fail(format!("missing key `{k}`"))),
                    None => Ok(()),
                }
            }
        }
    }
}

/// Validates every artifact, then writes them all into `dir`.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, ScenarioError> {
    for a in artifacts {
        a.validate()?;
    }
    fs::create_dir_all(dir).map_err(|source| ScenarioError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            fs::write(&path, &a.contents).map_err(|source| ScenarioError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(path)
        })
        .collect()
}
