//! TOML documents: run configuration, model, training and evaluation reports.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::meta::MetaHeader;
use super::{read_text, write_text};
use crate::datagen::GenConfig;
use crate::error::{Error, Result};
use crate::filter::FilterConfig;
use crate::ma::MaConfig;
use crate::model::Model;
use crate::report::EvalReport;
use crate::train::{TrainConfig, TrainReport};

pub const DOC_VERSION: u32 = 1;
const CONFIG_FORMAT: &str = "swd-config";
const MODEL_FORMAT: &str = "swd-model";
const TRAIN_FORMAT: &str = "swd-train-report";
const EVAL_FORMAT: &str = "swd-eval-report";

/// Where an artifact came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    /// Full command line, flags included.
    pub command: String,
    /// SHA-256 of the run configuration's TOML form.
    pub config_digest: String,
}

impl Provenance {
    pub fn new(command: impl Into<String>, config: &RunConfig) -> Self {
        Provenance {
            tool: format!("swd {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            config_digest: config_digest(config),
        }
    }

    pub(crate) fn push_to(&self, meta: &mut MetaHeader) {
        meta.push("tool", self.tool.clone());
        meta.push("command", self.command.clone());
        meta.push("config_digest", self.config_digest.clone());
    }

    pub(crate) fn from_meta(meta: &MetaHeader) -> Option<Self> {
        Some(Provenance {
            tool: meta.get("tool")?.to_string(),
            command: meta.get("command")?.to_string(),
            config_digest: meta.get("config_digest")?.to_string(),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Paths {
    pub corpus: Option<String>,
    pub features: Option<String>,
    pub model: Option<String>,
    pub report: Option<String>,
}

/// All tunables of a run. Missing sections take their defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub ma: MaConfig,
    pub filter: FilterConfig,
    pub train: TrainConfig,
    pub gen: GenConfig,
    pub paths: Paths,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.ma.validate()?;
        self.filter.validate(self.gen.fs)?;
        self.train.validate()?;
        self.gen.validate()
    }
}

pub fn config_digest(config: &RunConfig) -> String {
    let text = toml::to_string(config).expect("run config serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format: String,
    version: u32,
    #[serde(flatten)]
    body: T,
}

fn write_doc<T: Serialize>(path: &Path, format: &str, body: &T) -> Result<()> {
    let env = Envelope {
        format: format.to_string(),
        version: DOC_VERSION,
        body,
    };
    let text = toml::to_string(&env).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    write_text(path, &text)
}

fn read_doc<T: DeserializeOwned>(path: &Path, format: &str) -> Result<T> {
    let text = read_text(path)?;
    let shown = path.display().to_string();
    let parse_err = |e: toml::de::Error| Error::Parse {
        path: shown.clone(),
        reason: e.to_string(),
    };
    let table: toml::Table = toml::from_str(&text).map_err(parse_err)?;
    match table.get("format").and_then(|v| v.as_str()) {
        Some(f) if f == format => {}
        Some(f) => {
            return Err(Error::MalformedHeader {
                path: shown,
                reason: format!("expected format {format:?}, found {f:?}"),
            })
        }
        None => return Err(Error::MissingHeader { path: shown }),
    }
    match table.get("version").and_then(|v| v.as_integer()) {
        Some(v) if v == DOC_VERSION as i64 => {}
        other => {
            return Err(Error::UnsupportedVersion {
                path: shown,
                found: other.map_or("none".into(), |v| v.to_string()),
                expected: DOC_VERSION.to_string(),
            })
        }
    }
    let env: Envelope<T> = toml::from_str(&text).map_err(parse_err)?;
    Ok(env.body)
}

pub fn write_config(path: &Path, config: &RunConfig) -> Result<()> {
    write_doc(path, CONFIG_FORMAT, config)
}

/// Reads a run configuration; `format`/`version` keys may be omitted in
/// hand-written files.
pub fn read_config(path: &Path) -> Result<RunConfig> {
    let text = read_text(path)?;
    let shown = path.display().to_string();
    let mut table: toml::Table = toml::from_str(&text).map_err(|e| Error::Parse {
        path: shown.clone(),
        reason: e.to_string(),
    })?;
    if let Some(f) = table.remove("format") {
        if f.as_str() != Some(CONFIG_FORMAT) {
            return Err(Error::MalformedHeader {
                path: shown,
                reason: format!("expected format {CONFIG_FORMAT:?}, found {f}"),
            });
        }
    }
    if let Some(v) = table.remove("version") {
        if v.as_integer() != Some(DOC_VERSION as i64) {
            return Err(Error::UnsupportedVersion {
                path: shown,
                found: v.to_string(),
                expected: DOC_VERSION.to_string(),
            });
        }
    }
    let cfg: RunConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| Error::Parse {
            path: shown.clone(),
            reason: e.to_string(),
        })?;
    cfg.validate().map_err(|e| e.context(shown))?;
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub provenance: Provenance,
    pub model: Model,
}

pub fn write_model(path: &Path, doc: &ModelDocument) -> Result<()> {
    write_doc(path, MODEL_FORMAT, doc)
}

pub fn read_model(path: &Path) -> Result<ModelDocument> {
    let doc: ModelDocument = read_doc(path, MODEL_FORMAT)?;
    doc.model
        .network
        .validate()
        .map_err(|e| e.context(path.display().to_string()))?;
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainDocument {
    pub provenance: Provenance,
    pub report: TrainReport,
}

pub fn write_train_report(path: &Path, doc: &TrainDocument) -> Result<()> {
    write_doc(path, TRAIN_FORMAT, doc)
}

pub fn read_train_report(path: &Path) -> Result<TrainDocument> {
    read_doc(path, TRAIN_FORMAT)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalDocument {
    pub provenance: Provenance,
    pub report: EvalReport,
}

pub fn write_eval_report(path: &Path, doc: &EvalDocument) -> Result<()> {
    write_doc(path, EVAL_FORMAT, doc)
}

pub fn read_eval_report(path: &Path) -> Result<EvalDocument> {
    read_doc(path, EVAL_FORMAT)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        let cfg = RunConfig::default();
        write_config(&p, &cfg).unwrap();
        assert_eq!(read_config(&p).unwrap(), cfg);

        let mut off = cfg.clone();
        off.filter = FilterConfig::off();
        off.paths.corpus = Some("c.csv".into());
        write_config(&p, &off).unwrap();
        assert_eq!(read_config(&p).unwrap(), off);
    }

    #[test]
    fn partial_config_takes_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        std::fs::write(&p, "[ma]\nh1 = 3\nh2 = 30\n\n[train]\nseed = 7\n").unwrap();
        let cfg = read_config(&p).unwrap();
        assert_eq!(cfg.ma, MaConfig { h1: 3, h2: 30 });
        assert_eq!(cfg.train.seed, 7);
        assert_eq!(cfg.train.n_hidden, 10);
        assert_eq!(cfg.gen, GenConfig::default());

        std::fs::write(&p, "[ma]\nh1 = 3\nh2 = 3\n").unwrap();
        assert!(read_config(&p).is_err());
        std::fs::write(&p, "version = 3\n").unwrap();
        assert!(matches!(
            read_config(&p),
            Err(Error::UnsupportedVersion { .. })
        ));
    }

    #[test]
    fn digest_tracks_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.train.seed += 1;
        assert_eq!(config_digest(&a), config_digest(&a.clone()));
        assert_ne!(config_digest(&a), config_digest(&b));
        assert_eq!(config_digest(&a).len(), 64);
    }
}
