//! Classifier evaluation: confusion counts and rates, ROC/AUC, error
//! histograms, per-class descriptive statistics and effect sizes.

mod confusion;
mod histogram;
mod roc;
mod stats;

pub use confusion::{confusion, metrics, ConfusionMatrix, MetricsReport};
pub use histogram::{error_histogram, Histogram, DEFAULT_BINS};
pub use roc::{roc, RocCurve, RocPoint};
pub use stats::{descriptive_stats, effect_size, ClassStats, DescriptiveStats, EffectSize};
