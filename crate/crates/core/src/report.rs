//! Full evaluation of a trained model over a labelled feature set.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{
    confusion, descriptive_stats, effect_size, error_histogram, metrics, roc, ConfusionMatrix,
    DescriptiveStats, EffectSize, Histogram, MetricsReport, RocCurve, DEFAULT_BINS,
};
use crate::features::FeatureVector;
use crate::model::Model;
use crate::pipeline::FeatureRecord;
use crate::signal::Label;
use crate::train::{split_indices, SplitName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitSelection {
    Train,
    Validation,
    Test,
    All,
}

impl SplitSelection {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitSelection::Train => "train",
            SplitSelection::Validation => "validation",
            SplitSelection::Test => "test",
            SplitSelection::All => "all",
        }
    }
}

impl fmt::Display for SplitSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(SplitSelection::Train),
            "validation" | "val" => Ok(SplitSelection::Validation),
            "test" => Ok(SplitSelection::Test),
            "all" => Ok(SplitSelection::All),
            other => Err(format!(
                "unknown split {other:?} (train, validation, test, all)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitEval {
    pub n: usize,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
    /// Absent when the split holds a single class.
    pub auc: Option<f64>,
    pub error_histogram: Histogram,
}

/// Class summaries and effect sizes of one feature variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub descriptive: DescriptiveStats,
    pub effect_mu: EffectSize,
    pub effect_sigma: EffectSize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub threshold: f64,
    pub selected_split: SplitSelection,
    /// Keyed by `train`, `validation`, `test` and `all`.
    pub splits: BTreeMap<String, SplitEval>,
    /// ROC of the selected split.
    pub roc: RocCurve,
    /// Features of the raw windows, over every record.
    pub pre_ma: FeatureSummary,
    /// Residual features, over every record.
    pub post_ma: FeatureSummary,
}

impl EvalReport {
    pub fn selected(&self) -> &SplitEval {
        &self.splits[self.selected_split.as_str()]
    }
}

pub fn summarize(features: &[FeatureVector]) -> Result<FeatureSummary> {
    let by = |label: Label, f: fn(&FeatureVector) -> f64| -> Vec<f64> {
        features
            .iter()
            .filter(|v| v.label == Some(label))
            .map(f)
            .collect()
    };
    Ok(FeatureSummary {
        descriptive: descriptive_stats(features)?,
        effect_mu: effect_size(&by(Label::Swd, |v| v.mu), &by(Label::NonSwd, |v| v.mu))?,
        effect_sigma: effect_size(
            &by(Label::Swd, |v| v.sigma),
            &by(Label::NonSwd, |v| v.sigma),
        )?,
    })
}

struct Scored {
    score: f64,
    label: Label,
}

fn split_eval(scored: &[&Scored], threshold: f64) -> Result<(SplitEval, Option<RocCurve>)> {
    let labels: Vec<Label> = scored.iter().map(|s| s.label).collect();
    let scores: Vec<f64> = scored.iter().map(|s| s.score).collect();
    let preds: Vec<Label> = scores
        .iter()
        .map(|&s| crate::train::classify(s, threshold))
        .collect();
    let cm = confusion(&preds, &labels)?;
    let targets: Vec<f64> = labels.iter().map(|l| l.target()).collect();
    let curve = match roc(&scores, &labels) {
        Ok(c) => Some(c),
        Err(Error::SingleClass(_)) => None,
        Err(e) => return Err(e),
    };
    Ok((
        SplitEval {
            n: scored.len(),
            confusion: cm,
            metrics: metrics(&cm)?,
            auc: curve.as_ref().map(|c| c.auc),
            error_histogram: error_histogram(&scores, &targets, DEFAULT_BINS)?,
        },
        curve,
    ))
}

/// Scores every record with `model` and evaluates per split and overall.
///
/// Splits are recomputed from the model's training seed and fractions, so
/// passing the training feature set reproduces the training partition.
pub fn evaluate(
    model: &Model,
    records: &[FeatureRecord],
    selected: SplitSelection,
) -> Result<EvalReport> {
    let mut scored = Vec::with_capacity(records.len());
    for r in records {
        let label = r.label().ok_or_else(|| {
            Error::InvalidConfig(format!(
                "record {} has no label; evaluation needs labels",
                r.id()
            ))
        })?;
        scored.push(Scored {
            score: model.predict(&r.post)?.score,
            label,
        });
    }
    let splits = split_indices(records.len(), model.train.seed, model.train.split);

    let mut out = BTreeMap::new();
    let mut selected_roc = None;
    let all: Vec<usize> = (0..records.len()).collect();
    let names = SplitName::ALL
        .iter()
        .map(|&n| (n.as_str(), splits.get(n)))
        .chain(std::iter::once(("all", all.as_slice())));
    for (name, idx) in names {
        if idx.is_empty() {
            continue;
        }
        let subset: Vec<&Scored> = idx.iter().map(|&i| &scored[i]).collect();
        let (eval, curve) = split_eval(&subset, model.threshold)?;
        if name == selected.as_str() {
            selected_roc = curve;
        }
        out.insert(name.to_string(), eval);
    }
    let roc = selected_roc.ok_or_else(|| {
        Error::SingleClass(format!("split {selected} lacks one of the classes; no ROC"))
    })?;

    let post: Vec<FeatureVector> = records.iter().map(|r| r.post.clone()).collect();
    let pre: Vec<FeatureVector> = records.iter().map(|r| r.pre.clone()).collect();
    Ok(EvalReport {
        threshold: model.threshold,
        selected_split: selected,
        splits: out,
        roc,
        pre_ma: summarize(&pre)?,
        post_ma: summarize(&post)?,
    })
}
