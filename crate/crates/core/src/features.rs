//! Gaussian maximum-likelihood features of the moving-average residual.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ma::{ma_residual, MaConfig};
use crate::signal::{Label, Window};

/// Location and scale of one window's residual.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub mu: f64,
    /// Biased (1/n) maximum-likelihood standard deviation.
    pub sigma: f64,
    pub source_id: String,
    pub label: Option<Label>,
}

impl FeatureVector {
    pub fn new(mu: f64, sigma: f64, source_id: impl Into<String>, label: Option<Label>) -> Self {
        FeatureVector {
            mu,
            sigma,
            source_id: source_id.into(),
            label,
        }
    }

    pub fn pair(&self) -> (f64, f64) {
        (self.mu, self.sigma)
    }
}

/// Maximum-likelihood `(mu, sigma)` of a normal sample.
///
/// `sigma` uses the 1/n divisor. Accumulation is Welford's single pass.
pub fn gaussian_mle(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::InsufficientSamples {
            required: 2,
            available: values.len(),
        });
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFiniteSample { index: i });
        }
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    Ok((mean, (m2 / values.len() as f64).sqrt()))
}

/// Sum of normal log-densities of `values` under `(mu, sigma)`.
pub fn log_likelihood(values: &[f64], mu: f64, sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    let log_norm = (sigma * (2.0 * PI).sqrt()).ln();
    Ok(values
        .iter()
        .map(|&p| {
            let z = (p - mu) / sigma;
            -log_norm - 0.5 * z * z
        })
        .sum())
}

/// Provenance tag for a window: `<signal id>@<start sample>`.
pub fn window_source_id(window: &Window<'_>) -> String {
    format!("{}@{}", window.parent.id, window.start_index)
}

/// Features of the moving-average residual of `window`.
pub fn extract(window: &Window<'_>, config: MaConfig) -> Result<FeatureVector> {
    let residual = ma_residual(window, config)?;
    let (mu, sigma) = gaussian_mle(&residual.values)?;
    Ok(FeatureVector::new(
        mu,
        sigma,
        window_source_id(window),
        window.parent.label,
    ))
}

/// Features of the window samples themselves, without the residual transform.
pub fn extract_raw(window: &Window<'_>) -> Result<FeatureVector> {
    let (mu, sigma) = gaussian_mle(window.samples())?;
    Ok(FeatureVector::new(
        mu,
        sigma,
        window_source_id(window),
        window.parent.label,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    /// `(x - mean) / std` with the 1/n standard deviation.
    #[default]
    ZScore,
    /// `(x - min) / (max - min)`.
    MinMax,
}

/// Per-coordinate affine map fitted on training features only.
///
/// For z-scoring `*_center` is the mean and `*_scale` the standard deviation;
/// for min-max they are the minimum and the range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Normalizer {
    pub kind: NormKind,
    pub mu_center: f64,
    pub mu_scale: f64,
    pub sigma_center: f64,
    pub sigma_scale: f64,
}

fn affine_fit(kind: NormKind, values: &[f64], name: &str) -> Result<(f64, f64)> {
    let (center, scale) = match kind {
        NormKind::ZScore => gaussian_mle(values)?,
        NormKind::MinMax => {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi - lo)
        }
    };
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::DegenerateFeatures(format!(
            "{name} has no spread across the training features"
        )));
    }
    Ok((center, scale))
}

pub fn fit_normalizer(train: &[FeatureVector], kind: NormKind) -> Result<Normalizer> {
    if train.len() < 2 {
        return Err(Error::DegenerateFeatures(format!(
            "need at least 2 training features, have {}",
            train.len()
        )));
    }
    let mus: Vec<f64> = train.iter().map(|f| f.mu).collect();
    let sigmas: Vec<f64> = train.iter().map(|f| f.sigma).collect();
    let (mu_center, mu_scale) = affine_fit(kind, &mus, "mu")?;
    let (sigma_center, sigma_scale) = affine_fit(kind, &sigmas, "sigma")?;
    Ok(Normalizer {
        kind,
        mu_center,
        mu_scale,
        sigma_center,
        sigma_scale,
    })
}

impl Normalizer {
    pub fn normalize(&self, fv: &FeatureVector) -> (f64, f64) {
        self.normalize_pair(fv.mu, fv.sigma)
    }

    pub fn normalize_pair(&self, mu: f64, sigma: f64) -> (f64, f64) {
        (
            (mu - self.mu_center) / self.mu_scale,
            (sigma - self.sigma_center) / self.sigma_scale,
        )
    }
}
