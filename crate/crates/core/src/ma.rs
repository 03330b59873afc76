//! Two-sided moving averages and the short-minus-long residual.
//!
//! A two-sided average of half-width `h` covers `2h + 1` samples centred on
//! each index. Edges are truncated, never padded, so an input of length `n`
//! yields `n - 2h` averages. The residual subtracts the long average from the
//! short one after trimming both to the long one's valid range, keeping every
//! residual sample aligned with the raw sample at the same centre.
//!
//! Sums run over deviations from the first sample of the series. The
//! reference cancels in the residual, so an additive offset never reaches the
//! arithmetic and a constant input gives exactly zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Window;

/// Half-widths of the short and long moving averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaConfig {
    pub h1: usize,
    pub h2: usize,
}

impl Default for MaConfig {
    /// 5-sample (about 20 ms at 256 Hz) and 85-sample (about one 3 Hz period).
    fn default() -> Self {
        MaConfig { h1: 2, h2: 42 }
    }
}

impl MaConfig {
    pub fn new(h1: usize, h2: usize) -> Result<Self> {
        let cfg = MaConfig { h1, h2 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h1 >= self.h2 {
            return Err(Error::InvalidConfig(format!(
                "moving-average half-widths need h1 < h2, got h1={} h2={}",
                self.h1, self.h2
            )));
        }
        Ok(())
    }

    /// Checks the config and that the long window fits in `len` samples.
    pub fn validate_for(&self, len: usize) -> Result<()> {
        self.validate()?;
        let k2 = 2 * self.h2 + 1;
        if k2 > len {
            return Err(Error::WindowExceedsSeries { window: k2, len });
        }
        Ok(())
    }

    pub fn short_len(&self) -> usize {
        2 * self.h1 + 1
    }

    pub fn long_len(&self) -> usize {
        2 * self.h2 + 1
    }

    pub fn residual_len(&self, n: usize) -> usize {
        n.saturating_sub(2 * self.h2)
    }
}

/// Residual of one window. `values[i]` is centred on window sample `h2 + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub values: Vec<f64>,
    pub config: MaConfig,
    pub start_index: usize,
}

/// Running sum with Neumaier compensation.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Window sums of `2h + 1` deviations `values[j] - reference`, one per centre.
fn deviation_sums(values: &[f64], h: usize, reference: f64) -> Vec<f64> {
    let k = 2 * h + 1;
    let n = values.len();
    let mut out = Vec::with_capacity(n + 1 - k);
    let mut acc = CompensatedSum::default();
    for &x in &values[..k] {
        acc.add(x - reference);
    }
    out.push(acc.value());
    for t in k..n {
        acc.add(values[t] - reference);
        acc.add(-(values[t - k] - reference));
        out.push(acc.value());
    }
    out
}

/// Centred moving average with half-width `h`; returns `values.len() - 2h` points.
pub fn moving_average(values: &[f64], h: usize) -> Result<Vec<f64>> {
    let k = 2 * h + 1;
    if values.is_empty() || k > values.len() {
        return Err(Error::WindowExceedsSeries {
            window: k,
            len: values.len(),
        });
    }
    let reference = values[0];
    let kf = k as f64;
    Ok(deviation_sums(values, h, reference)
        .into_iter()
        .map(|s| reference + s / kf)
        .collect())
}

/// Short-minus-long moving-average residual of a raw sample slice.
pub fn residual_values(values: &[f64], config: MaConfig) -> Result<Vec<f64>> {
    config.validate_for(values.len())?;
    let reference = values[0];
    let short = deviation_sums(values, config.h1, reference);
    let long = deviation_sums(values, config.h2, reference);
    let trim = config.h2 - config.h1;
    let k1 = config.short_len() as f64;
    let k2 = config.long_len() as f64;
    Ok(short[trim..trim + long.len()]
        .iter()
        .zip(&long)
        .map(|(s1, s2)| s1 / k1 - s2 / k2)
        .collect())
}

pub fn ma_residual(window: &Window<'_>, config: MaConfig) -> Result<Residual> {
    Ok(Residual {
        values: residual_values(window.samples(), config)?,
        config,
        start_index: window.start_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_ma(x: &[f64], h: usize) -> Vec<f64> {
        (h..x.len() - h)
            .map(|t| x[t - h..=t + h].iter().sum::<f64>() / (2 * h + 1) as f64)
            .collect()
    }

    #[test]
    fn hand_example() {
        assert_eq!(
            moving_average(&[1.0, 2.0, 3.0, 4.0, 5.0], 1).unwrap(),
            vec![2.0, 3.0, 4.0]
        );
    }

    #[test]
    fn identity_at_zero_half_width() {
        let x = [0.3, -1.7, 2.25, 9.0];
        assert_eq!(moving_average(&x, 0).unwrap(), x.to_vec());
    }

    #[test]
    fn constants_stay_constant() {
        for c in [0.1, -7.3, 1e6 + 0.7] {
            let x = vec![c; 40];
            for h in 0..=19 {
                assert!(moving_average(&x, h).unwrap().iter().all(|&m| m == c));
            }
        }
    }

    #[test]
    fn too_wide() {
        assert!(matches!(
            moving_average(&[1.0, 2.0], 1),
            Err(Error::WindowExceedsSeries { window: 3, len: 2 })
        ));
        assert!(moving_average(&[], 0).is_err());
    }

    #[test]
    fn alternating_residual_matches_brute_force() {
        let x = [0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0];
        let cfg = MaConfig::new(1, 2).unwrap();
        let r = residual_values(&x, cfg).unwrap();
        let m1 = brute_ma(&x, 1);
        let m2 = brute_ma(&x, 2);
        let expect: Vec<f64> = m2.iter().enumerate().map(|(i, b)| m1[i + 1] - b).collect();
        assert_eq!(r.len(), 5);
        for (a, b) in r.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn constant_residual_is_zero() {
        let x = vec![-42.125; 100];
        let r = residual_values(&x, MaConfig::default()).unwrap();
        assert_eq!(r.len(), 100 - 84);
        assert!(r.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn config_rules() {
        assert!(MaConfig::new(3, 3).is_err());
        assert!(MaConfig::new(4, 3).is_err());
        let cfg = MaConfig::new(1, 5).unwrap();
        assert!(cfg.validate_for(10).is_err());
        assert!(cfg.validate_for(11).is_ok());
    }
}
