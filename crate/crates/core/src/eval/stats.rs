use serde::{Deserialize, Serialize};
use statrs::function::beta::checked_beta_reg;

use crate::error::{Error, Result};
use crate::features::{gaussian_mle, FeatureVector};
use crate::signal::Label;

/// Mean and 1/n standard deviation of each feature within one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub n: usize,
    pub mu_mean: f64,
    pub mu_std: f64,
    pub sigma_mean: f64,
    pub sigma_std: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub swd: ClassStats,
    pub nswd: ClassStats,
}

fn class_stats(features: &[&FeatureVector], label: Label) -> Result<ClassStats> {
    if features.len() < 2 {
        return Err(Error::DegenerateClass(format!(
            "{label} has {} features, need at least 2",
            features.len()
        )));
    }
    let mus: Vec<f64> = features.iter().map(|f| f.mu).collect();
    let sigmas: Vec<f64> = features.iter().map(|f| f.sigma).collect();
    let (mu_mean, mu_std) = gaussian_mle(&mus)?;
    let (sigma_mean, sigma_std) = gaussian_mle(&sigmas)?;
    Ok(ClassStats {
        n: features.len(),
        mu_mean,
        mu_std,
        sigma_mean,
        sigma_std,
    })
}

/// Per-class summaries; unlabelled features are ignored.
pub fn descriptive_stats(features: &[FeatureVector]) -> Result<DescriptiveStats> {
    let pick = |l: Label| -> Vec<&FeatureVector> {
        features.iter().filter(|f| f.label == Some(l)).collect()
    };
    Ok(DescriptiveStats {
        swd: class_stats(&pick(Label::Swd), Label::Swd)?,
        nswd: class_stats(&pick(Label::NonSwd), Label::NonSwd)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    /// Mean difference over the pooled (n - 1) standard deviation.
    pub cohens_d: f64,
    /// Two-sided Welch t-test.
    pub p_value: f64,
    pub t: f64,
    pub df: f64,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let ss: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
    (m, ss / (n - 1.0))
}

/// Cohen's d of `class1` against `class0` with a Welch p-value.
///
/// The p-value is `I_{df/(df+t^2)}(df/2, 1/2)`, the regularised incomplete
/// beta form of the two-sided Student tail, floored at the smallest positive
/// normal double.
pub fn effect_size(class1: &[f64], class0: &[f64]) -> Result<EffectSize> {
    for (name, xs) in [("class 1", class1), ("class 0", class0)] {
        if xs.len() < 2 {
            return Err(Error::DegenerateClass(format!(
                "{name} has {} values, need at least 2",
                xs.len()
            )));
        }
        if let Some(i) = xs.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index: i });
        }
    }
    let (n1, n0) = (class1.len() as f64, class0.len() as f64);
    let (m1, v1) = mean_var(class1);
    let (m0, v0) = mean_var(class0);
    let pooled = (((n1 - 1.0) * v1 + (n0 - 1.0) * v0) / (n1 + n0 - 2.0)).sqrt();
    if pooled.is_nan() || pooled <= 0.0 {
        return Err(Error::ZeroPooledStd);
    }
    let cohens_d = (m1 - m0) / pooled;

    let (a, b) = (v1 / n1, v0 / n0);
    let se = (a + b).sqrt();
    let t = (m1 - m0) / se;
    let df = (a + b).powi(2) / (a * a / (n1 - 1.0) + b * b / (n0 - 1.0));
    let x = df / (df + t * t);
    let p = checked_beta_reg(df / 2.0, 0.5, x)
        .map_err(|e| Error::Domain(format!("incomplete beta at t={t}, df={df}: {e}")))?;
    Ok(EffectSize {
        cohens_d,
        p_value: p.clamp(f64::MIN_POSITIVE, 1.0),
        t,
        df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(mu: f64, sigma: f64, l: Label) -> FeatureVector {
        FeatureVector::new(mu, sigma, "x", Some(l))
    }

    #[test]
    fn hand_cohens_d() {
        let e = effect_size(&[2.0, 4.0], &[0.0, 2.0]).unwrap();
        assert!((e.cohens_d - 2.0 / 2f64.sqrt()).abs() < 1e-15);
        // reference: scipy.stats.ttest_ind(equal_var=False)
        assert!((e.p_value - 0.29289321881345254).abs() < 1e-10);
    }

    #[test]
    fn welch_reference_value() {
        let a = [2.1, 3.4, 1.9, 5.6, 4.4, 3.3];
        let b = [1.0, 0.4, 2.2, 1.1, 0.9, 1.7, 0.3, 1.2];
        let e = effect_size(&a, &b).unwrap();
        assert!((e.t - 3.836924942983573).abs() < 1e-12);
        assert!((e.p_value - 0.007327454005448567).abs() < 1e-10);
    }

    #[test]
    fn identical_classes() {
        let x = [1.0, 2.0, 4.0];
        let e = effect_size(&x, &x).unwrap();
        assert_eq!(e.cohens_d, 0.0);
        assert_eq!(e.p_value, 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            effect_size(&[1.0, 1.0], &[1.0, 1.0]),
            Err(Error::ZeroPooledStd)
        ));
        assert!(effect_size(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn extreme_separation_keeps_p_positive() {
        let a: Vec<f64> = (0..400).map(|i| 100.0 + (i % 7) as f64).collect();
        let b: Vec<f64> = (0..400).map(|i| (i % 5) as f64).collect();
        let e = effect_size(&a, &b).unwrap();
        assert!(e.p_value > 0.0 && e.p_value < 1e-200);
    }

    #[test]
    fn descriptive() {
        let f = [
            fv(0.0, 0.0, Label::Swd),
            fv(2.0, 2.0, Label::Swd),
            fv(5.0, 1.0, Label::NonSwd),
            fv(5.0, 1.0, Label::NonSwd),
        ];
        let d = descriptive_stats(&f).unwrap();
        assert_eq!(
            (
                d.swd.mu_mean,
                d.swd.sigma_mean,
                d.swd.mu_std,
                d.swd.sigma_std
            ),
            (1.0, 1.0, 1.0, 1.0)
        );
        assert_eq!((d.nswd.mu_std, d.nswd.sigma_std), (0.0, 0.0));
        assert!(descriptive_stats(&f[..3]).is_err());
    }
}
