use serde::{Deserialize, Serialize};

use crate::ann::Network;
use crate::error::Result;
use crate::features::{FeatureVector, Normalizer};
use crate::filter::FilterConfig;
use crate::ma::MaConfig;
use crate::train::{predict, Prediction, TrainConfig, TrainOutcome, DEFAULT_THRESHOLD};

/// Everything needed to score new signals the way the training data was scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    pub threshold: f64,
    pub ma: MaConfig,
    pub filter: FilterConfig,
    pub train: TrainConfig,
    pub normalizer: Normalizer,
    pub network: Network,
}

impl Model {
    pub fn from_outcome(
        outcome: &TrainOutcome,
        ma: MaConfig,
        filter: FilterConfig,
        train: TrainConfig,
    ) -> Self {
        Model {
            threshold: DEFAULT_THRESHOLD,
            ma,
            filter,
            train,
            normalizer: outcome.normalizer,
            network: outcome.network.clone(),
        }
    }

    pub fn predict(&self, fv: &FeatureVector) -> Result<Prediction> {
        predict(&self.network, &self.normalizer, fv, self.threshold)
    }

    pub fn predict_at(&self, fv: &FeatureVector, threshold: f64) -> Result<Prediction> {
        predict(&self.network, &self.normalizer, fv, threshold)
    }
}
