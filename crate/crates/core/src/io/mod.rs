//! On-disk formats.
//!
//! Tabular artifacts (corpus, features, detections, ROC points) are CSV
//! preceded by `# key: value` metadata lines whose first two keys are always
//! `format` and `version`. Structured artifacts (run config, model, training
//! and evaluation reports) are TOML documents with top-level `format` and
//! `version` keys. Floats are written in shortest round-trip form, so every
//! value reads back bit-identically.

mod corpus;
mod doc;
mod features;
mod meta;
mod tables;

pub use corpus::{read_corpus, write_corpus, CorpusHeader, CORPUS_FORMAT, CORPUS_VERSION};
pub use doc::{
    config_digest, read_config, read_eval_report, read_model, read_train_report, write_config,
    write_eval_report, write_model, write_train_report, EvalDocument, ModelDocument, Paths,
    Provenance, RunConfig, TrainDocument, DOC_VERSION,
};
pub use features::{read_features, write_features, FeaturesHeader, FEATURES_FORMAT};
pub use meta::MetaHeader;
pub use tables::{write_detections, write_roc_csv};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Shortest decimal that parses back to the same `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}
