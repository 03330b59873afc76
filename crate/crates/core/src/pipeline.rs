//! Batch glue: pre-filtering, corpus feature extraction and windowed detection.

use crate::error::Result;
use crate::features::{extract, extract_raw, FeatureVector};
use crate::filter::FilterConfig;
use crate::ma::MaConfig;
use crate::model::Model;
use crate::par::{self, Execution};
use crate::signal::{segment, Label, Signal};

/// Filtered copy of `signal`.
pub fn preprocess(signal: &Signal, filter: &FilterConfig) -> Result<Signal> {
    if filter.is_identity() {
        return Ok(signal.clone());
    }
    Ok(Signal {
        samples: filter.apply(&signal.samples, signal.fs)?,
        ..signal.clone()
    })
}

/// Residual features and raw-sample features of the same window.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord {
    pub post: FeatureVector,
    pub pre: FeatureVector,
}

impl FeatureRecord {
    pub fn id(&self) -> &str {
        &self.post.source_id
    }

    pub fn label(&self) -> Option<Label> {
        self.post.label
    }
}

/// Features of a whole signal taken as one window, tagged with the signal id.
pub fn extract_signal(
    signal: &Signal,
    ma: MaConfig,
    filter: &FilterConfig,
) -> Result<FeatureRecord> {
    let filtered = preprocess(signal, filter)?;
    let window = filtered.full_window()?;
    let mut post = extract(&window, ma)?;
    let mut pre = extract_raw(&window)?;
    post.source_id = signal.id.clone();
    pre.source_id = signal.id.clone();
    Ok(FeatureRecord { post, pre })
}

pub fn extract_corpus(
    signals: &[Signal],
    ma: MaConfig,
    filter: &FilterConfig,
    exec: Execution,
) -> Result<Vec<FeatureRecord>> {
    par::try_map(signals, exec, |s| {
        extract_signal(s, ma, filter).map_err(|e| e.context(format!("signal {}", s.id)))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub signal_id: String,
    pub start_index: usize,
    pub start_s: f64,
    pub score: f64,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectConfig {
    pub window_s: f64,
    pub hop_s: f64,
    pub threshold: f64,
}

/// Scores every window of every signal; output follows signal then window order.
pub fn detect(
    model: &Model,
    signals: &[Signal],
    cfg: &DetectConfig,
    exec: Execution,
) -> Result<Vec<Detection>> {
    let filtered = par::try_map(signals, exec, |s| preprocess(s, &model.filter))?;
    let mut jobs = Vec::new();
    for sig in &filtered {
        jobs.extend(segment(sig, cfg.window_s, cfg.hop_s)?);
    }
    par::try_map(&jobs, exec, |w| {
        let fv = extract(w, model.ma)?;
        let p = model.predict_at(&fv, cfg.threshold)?;
        Ok(Detection {
            signal_id: w.parent.id.clone(),
            start_index: w.start_index,
            start_s: w.start_s(),
            score: p.score,
            label: p.label,
        })
    })
}
