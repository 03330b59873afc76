//! Seeded split, full-batch gradient descent with validation early stopping,
//! and thresholded prediction.

use serde::{Deserialize, Serialize};

use crate::ann::{Network, Sample};
use crate::error::{Error, Result};
use crate::features::{fit_normalizer, FeatureVector, NormKind, Normalizer};
use crate::rng::SeededRng;
use crate::signal::Label;

/// ChaCha stream ids reserved for training draws.
const SPLIT_STREAM: u64 = 0x5350_4c49_5400_0000;
const INIT_STREAM: u64 = 0x494e_4954_0000_0000;

pub const MIN_EXAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub n_hidden: usize,
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Consecutive validation-loss increases tolerated before stopping.
    pub patience: usize,
    pub gradient_floor: f64,
    pub seed: u64,
    /// Train, validation and test fractions.
    pub split: [f64; 3],
    pub normalization: NormKind,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n_hidden: 10,
            learning_rate: 2.0,
            max_epochs: 100,
            patience: 6,
            gradient_floor: 1e-7,
            seed: 42,
            split: [0.70, 0.15, 0.15],
            normalization: NormKind::ZScore,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_hidden == 0 {
            return bad("n_hidden must be at least 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            ));
        }
        if self.split.iter().any(|f| f.is_nan() || *f <= 0.0) {
            return bad(format!(
                "split fractions must be positive, got {:?}",
                self.split
            ));
        }
        let total: f64 = self.split.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return bad(format!("split fractions sum to {total}, not 1"));
        }
        if self.gradient_floor.is_nan() || self.gradient_floor < 0.0 {
            return bad("gradient_floor must be non-negative".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitName {
    Train,
    Validation,
    Test,
}

impl SplitName {
    pub const ALL: [SplitName; 3] = [SplitName::Train, SplitName::Validation, SplitName::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            SplitName::Train => "train",
            SplitName::Validation => "validation",
            SplitName::Test => "test",
        }
    }
}

/// Example indices per split, each list in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splits {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

impl Splits {
    pub fn get(&self, name: SplitName) -> &[usize] {
        match name {
            SplitName::Train => &self.train,
            SplitName::Validation => &self.validation,
            SplitName::Test => &self.test,
        }
    }
}

/// Shuffles `0..n` and cuts it into train/validation/test.
///
/// The train and validation sizes are `round(n * fraction)`; test takes the rest.
pub fn split_indices(n: usize, seed: u64, fractions: [f64; 3]) -> Splits {
    let mut order: Vec<usize> = (0..n).collect();
    SeededRng::new(seed, SPLIT_STREAM).shuffle(&mut order);
    let n_train = ((n as f64 * fractions[0]).round() as usize).min(n);
    let n_val = ((n as f64 * fractions[1]).round() as usize).min(n - n_train);
    let cut = |range: std::ops::Range<usize>| {
        let mut v = order[range].to_vec();
        v.sort_unstable();
        v
    };
    Splits {
        train: cut(0..n_train),
        validation: cut(n_train..n_train + n_val),
        test: cut(n_train + n_val..n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Patience,
    MaxEpochs,
    GradientFloor,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::Patience => "patience",
            StopReason::MaxEpochs => "max_epochs",
            StopReason::GradientFloor => "gradient_floor",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub test_loss: f64,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub stop_reason: StopReason,
}

impl TrainReport {
    pub fn best(&self) -> &EpochRecord {
        &self.epochs[self.best_epoch]
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub network: Network,
    pub normalizer: Normalizer,
    pub report: TrainReport,
    pub splits: Splits,
}

fn labelled(features: &[FeatureVector]) -> Result<Vec<Label>> {
    features
        .iter()
        .map(|f| {
            f.label.ok_or_else(|| {
                Error::InvalidConfig(format!("feature {} has no label", f.source_id))
            })
        })
        .collect()
}

pub fn to_samples(
    nz: &Normalizer,
    features: &[FeatureVector],
    labels: &[Label],
    idx: &[usize],
) -> Vec<Sample> {
    idx.iter()
        .map(|&i| {
            let (a, b) = nz.normalize(&features[i]);
            Sample::new([a, b], labels[i].target())
        })
        .collect()
}

/// Trains on a seeded 70/15/15 split and returns the best-validation snapshot.
///
/// Epoch 0 records the initial network. After each update the three split
/// losses and the training-gradient norm are logged. Training halts after
/// `patience` consecutive validation-loss increases, when the gradient norm
/// drops below `gradient_floor`, or at `max_epochs`.
pub fn train(features: &[FeatureVector], cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    if features.len() < MIN_EXAMPLES {
        return Err(Error::DegenerateSplit {
            split: "all".into(),
            reason: format!(
                "has {} examples, need at least {MIN_EXAMPLES}",
                features.len()
            ),
        });
    }
    let labels = labelled(features)?;
    let splits = split_indices(features.len(), cfg.seed, cfg.split);
    for name in SplitName::ALL {
        let idx = splits.get(name);
        let pos = idx.iter().filter(|&&i| labels[i].is_positive()).count();
        if pos == 0 || pos == idx.len() {
            return Err(Error::DegenerateSplit {
                split: name.as_str().into(),
                reason: format!("contains a single class ({} examples)", idx.len()),
            });
        }
    }

    let train_feats: Vec<FeatureVector> =
        splits.train.iter().map(|&i| features[i].clone()).collect();
    let normalizer = fit_normalizer(&train_feats, cfg.normalization)?;
    let train_set = to_samples(&normalizer, features, &labels, &splits.train);
    let val_set = to_samples(&normalizer, features, &labels, &splits.validation);
    let test_set = to_samples(&normalizer, features, &labels, &splits.test);

    let mut net = Network::random(cfg.n_hidden, &mut SeededRng::new(cfg.seed, INIT_STREAM))?;
    let mut epochs = Vec::new();
    let mut best = (0usize, f64::INFINITY, net.clone());
    let mut rises = 0usize;
    let stop_reason = loop {
        let epoch = epochs.len();
        let grad = net.backprop_grad(&train_set)?;
        let record = EpochRecord {
            epoch,
            train_loss: net.loss(&train_set)?,
            val_loss: net.loss(&val_set)?,
            test_loss: net.loss(&test_set)?,
            gradient_norm: grad.norm(),
        };
        if let Some(prev) = epochs.last().map(|r: &EpochRecord| r.val_loss) {
            rises = if record.val_loss > prev { rises + 1 } else { 0 };
        }
        if record.val_loss < best.1 {
            best = (epoch, record.val_loss, net.clone());
        }
        epochs.push(record);

        if cfg.patience > 0 && rises >= cfg.patience {
            break StopReason::Patience;
        }
        if record.gradient_norm < cfg.gradient_floor {
            break StopReason::GradientFloor;
        }
        if epoch >= cfg.max_epochs {
            break StopReason::MaxEpochs;
        }
        net.step(&grad, cfg.learning_rate);
    };

    Ok(TrainOutcome {
        network: best.2,
        normalizer,
        report: TrainReport {
            epochs,
            best_epoch: best.0,
            stop_reason,
        },
        splits,
    })
}

/// Plain gradient descent on a fixed batch; returns the final loss.
pub fn descend(net: &mut Network, batch: &[Sample], rate: f64, steps: usize) -> Result<f64> {
    for _ in 0..steps {
        let g = net.backprop_grad(batch)?;
        net.step(&g, rate);
    }
    net.loss(batch)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub score: f64,
    pub label: Label,
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Scores a feature vector; SWD when `score >= threshold`.
pub fn predict(
    net: &Network,
    nz: &Normalizer,
    fv: &FeatureVector,
    threshold: f64,
) -> Result<Prediction> {
    let (a, b) = nz.normalize(fv);
    let score = net.forward([a, b])?;
    Ok(Prediction {
        score,
        label: classify(score, threshold),
    })
}

pub fn classify(score: f64, threshold: f64) -> Label {
    if score >= threshold {
        Label::Swd
    } else {
        Label::NonSwd
    }
}
