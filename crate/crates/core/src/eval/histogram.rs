use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 20;

/// Equal-width bins: `edges.len() == counts.len() + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_of(&self, x: f64) -> usize {
        let n = self.counts.len();
        let lo = self.edges[0];
        let width = (self.edges[n] - lo) / n as f64;
        (((x - lo) / width).floor().max(0.0) as usize).min(n - 1)
    }
}

/// Histogram of `targets - outputs` over `[min, max]` of the errors.
///
/// When every error is equal the range is widened to one unit centred on
/// that value, so all mass lands in the middle bin.
pub fn error_histogram(outputs: &[f64], targets: &[f64], n_bins: usize) -> Result<Histogram> {
    if outputs.len() != targets.len() {
        return Err(Error::LengthMismatch {
            left: outputs.len(),
            right: targets.len(),
        });
    }
    if outputs.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if n_bins == 0 {
        return Err(Error::InvalidConfig(
            "histogram needs at least one bin".into(),
        ));
    }
    let errors: Vec<f64> = targets.iter().zip(outputs).map(|(t, o)| t - o).collect();
    if let Some(i) = errors.iter().position(|e| !e.is_finite()) {
        return Err(Error::NonFiniteSample { index: i });
    }
    let mut lo = errors.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = errors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / n_bins as f64;
    let edges: Vec<f64> = (0..=n_bins)
        .map(|i| {
            if i == n_bins {
                hi
            } else {
                lo + width * i as f64
            }
        })
        .collect();
    let mut hist = Histogram {
        edges,
        counts: vec![0; n_bins],
    };
    for e in errors {
        let b = hist.bin_of(e);
        hist.counts[b] += 1;
    }
    Ok(hist)
}
