//! Acquisition-style pre-filtering: a second-order Butterworth low-pass and an
//! optional first-order high-pass, both discretised with the bilinear
//! transform and run causally from a zero state.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Low-pass cutoff in Hz; `None` disables the stage.
    pub lowpass_hz: Option<f64>,
    /// First-order high-pass cutoff in Hz; off unless set.
    pub highpass_hz: Option<f64>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            lowpass_hz: Some(30.0),
            highpass_hz: None,
        }
    }
}

impl FilterConfig {
    pub fn off() -> Self {
        FilterConfig {
            lowpass_hz: None,
            highpass_hz: None,
        }
    }

    pub fn validate(&self, fs: f64) -> Result<()> {
        let nyquist = fs / 2.0;
        for (name, cutoff) in [
            ("low-pass", self.lowpass_hz),
            ("high-pass", self.highpass_hz),
        ] {
            if let Some(fc) = cutoff {
                if !(fc.is_finite() && fc > 0.0 && fc < nyquist) {
                    return Err(Error::InvalidConfig(format!(
                        "{name} cutoff {fc} Hz must lie in (0, {nyquist}) at fs = {fs} Hz"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.lowpass_hz.is_none() && self.highpass_hz.is_none()
    }

    /// Runs the enabled stages over `samples` (low-pass first).
    pub fn apply(&self, samples: &[f64], fs: f64) -> Result<Vec<f64>> {
        self.validate(fs)?;
        let mut out = samples.to_vec();
        if let Some(fc) = self.lowpass_hz {
            Biquad::lowpass(fc, fs, FRAC_1_SQRT_2).run(&mut out);
        }
        if let Some(fc) = self.highpass_hz {
            Biquad::highpass_first_order(fc, fs).run(&mut out);
        }
        Ok(out)
    }
}

/// Normalised biquad coefficients (`a0 = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    pub fn lowpass(fc: f64, fs: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let (sin, cos) = w0.sin_cos();
        let alpha = sin / (2.0 * q);
        let a0 = 1.0 + alpha;
        let b1 = (1.0 - cos) / a0;
        Biquad {
            b: [b1 / 2.0, b1, b1 / 2.0],
            a: [-2.0 * cos / a0, (1.0 - alpha) / a0],
        }
    }

    /// First-order section stored in biquad form with zero second-order taps.
    pub fn highpass_first_order(fc: f64, fs: f64) -> Self {
        let k = (PI * fc / fs).tan();
        let norm = 1.0 / (1.0 + k);
        Biquad {
            b: [norm, -norm, 0.0],
            a: [(k - 1.0) * norm, 0.0],
        }
    }

    /// Transposed direct form II, in place.
    pub fn run(&self, x: &mut [f64]) {
        let (mut z1, mut z2) = (0.0, 0.0);
        for v in x.iter_mut() {
            let input = *v;
            let y = self.b[0] * input + z1;
            z1 = self.b[1] * input - self.a[0] * y + z2;
            z2 = self.b[2] * input - self.a[1] * y;
            *v = y;
        }
    }

    /// Magnitude of the frequency response at `f` Hz.
    pub fn gain(&self, f: f64, fs: f64) -> f64 {
        let w = 2.0 * PI * f / fs;
        let (s1, c1) = w.sin_cos();
        let (s2, c2) = (2.0 * w).sin_cos();
        let num_re = self.b[0] + self.b[1] * c1 + self.b[2] * c2;
        let num_im = -(self.b[1] * s1 + self.b[2] * s2);
        let den_re = 1.0 + self.a[0] * c1 + self.a[1] * c2;
        let den_im = -(self.a[0] * s1 + self.a[1] * s2);
        (num_re.hypot(num_im)) / (den_re.hypot(den_im))
    }
}
