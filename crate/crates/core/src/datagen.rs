//! Seeded synthetic EEG windows standing in for a clinical SWD corpus.
//!
//! Each signal draws from independent ChaCha20 streams keyed by the corpus
//! seed. Instance `s` uses stream `4s + c` for component `c`:
//! 0 background noise and drift, 1 spike-and-wave burst, 2 artifact.
//! [`gen_corpus`] gives the `i`-th SWD signal instance `2i` and the `i`-th
//! background signal instance `2i + 1`. An SWD signal and a background signal
//! with the same instance seed share identical background activity.
//!
//! Background activity is 1/f-like noise built from independent one-pole
//! low-pass stages, plus a slow baseline drift. Spike-and-wave bursts repeat a
//! positive biphasic spike and a negative half-sine slow wave near 3 Hz.

use std::f64::consts::PI;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rng::SeededRng;
use crate::signal::{Label, Signal};

/// Channel names of the 10-20 montage, attached to generated signals as metadata.
pub const MONTAGE: [&str; 22] = [
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "T3", "C3", "Cz", "C4", "T4", "T5", "P3", "Pz",
    "P4", "T6", "O1", "O2", "Oz", "FT10", "FT9",
];

pub const SYNTHETIC_PATIENTS: usize = 12;

const NOISE: u64 = 0;
const BURST: u64 = 1;
const ARTIFACT: u64 = 2;

/// One-pole corner frequencies (Hz) of the 1/f noise; stage gains scale as `1/sqrt(f)`.
const PINK_CORNERS_HZ: [f64; 5] = [0.25, 1.0, 4.0, 16.0, 64.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenConfig {
    pub seed: u64,
    pub fs: f64,
    pub duration_s: f64,
    pub n_per_class: usize,
    pub swd_rate_hz: f64,
    pub spike_amp_uv: f64,
    pub wave_amp_uv: f64,
    /// Standard deviation of the background noise.
    pub background_amp_uv: f64,
    /// Upper bound of the per-signal baseline drift amplitude.
    pub drift_amp_uv: f64,
    pub artifact_prob: f64,
    /// Relative amplitude and frequency jitter.
    pub jitter: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 42,
            fs: 256.0,
            duration_s: 20.0,
            n_per_class: 390,
            swd_rate_hz: 3.0,
            spike_amp_uv: 300.0,
            wave_amp_uv: 150.0,
            background_amp_uv: 30.0,
            drift_amp_uv: 150.0,
            artifact_prob: 0.3,
            jitter: 0.1,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.fs > 0.0 && self.fs.is_finite()) {
            return bad(format!("fs must be positive, got {}", self.fs));
        }
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return bad(format!(
                "duration_s must be positive, got {}",
                self.duration_s
            ));
        }
        if !(self.swd_rate_hz > 0.0 && self.swd_rate_hz < self.fs / 4.0) {
            return bad(format!("swd_rate_hz {} out of range", self.swd_rate_hz));
        }
        if !(self.spike_amp_uv > 0.0 && self.wave_amp_uv > 0.0) {
            return bad("spike and wave amplitudes must be positive".into());
        }
        if !(self.background_amp_uv >= 0.0 && self.drift_amp_uv >= 0.0) {
            return bad("background and drift amplitudes must be non-negative".into());
        }
        if !(0.0..=1.0).contains(&self.artifact_prob) {
            return bad(format!(
                "artifact_prob {} not in [0, 1]",
                self.artifact_prob
            ));
        }
        if !(0.0..1.0).contains(&self.jitter) {
            return bad(format!("jitter {} not in [0, 1)", self.jitter));
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        (self.duration_s * self.fs).round() as usize
    }

    /// Hard limit on the magnitude of any generated sample.
    pub fn amplitude_bound(&self) -> f64 {
        self.spike_amp_uv + self.wave_amp_uv + 6.0 * self.background_amp_uv
    }

    fn jittered(&self, rng: &mut SeededRng, value: f64) -> f64 {
        value * (1.0 + self.jitter * rng.uniform_in(-1.0, 1.0))
    }
}

fn stream(instance: u64, component: u64) -> u64 {
    instance.wrapping_mul(4).wrapping_add(component)
}

/// 1/f-like noise with standard deviation `amp` plus slow drift.
fn background(cfg: &GenConfig, instance: u64) -> Vec<f64> {
    let n = cfg.n_samples();
    let mut rng = SeededRng::new(cfg.seed, stream(instance, NOISE));
    let amp = cfg.jittered(&mut rng, cfg.background_amp_uv);

    let stages: Vec<(f64, f64, f64)> = PINK_CORNERS_HZ
        .iter()
        .map(|&fc| {
            let a = (-2.0 * PI * fc / cfg.fs).exp();
            let gain = 1.0 / fc.sqrt();
            let stationary_sd = ((1.0 - a) / (1.0 + a)).sqrt();
            (a, gain, stationary_sd)
        })
        .collect();
    let total_var: f64 = stages.iter().map(|(_, g, sd)| (g * sd).powi(2)).sum();
    let scale = if total_var > 0.0 {
        amp / total_var.sqrt()
    } else {
        0.0
    };
    let mut state: Vec<f64> = stages.iter().map(|&(_, _, sd)| rng.normal() * sd).collect();

    let drift_amp = cfg.drift_amp_uv * rng.uniform();
    let drift: Vec<(f64, f64, f64)> = (0..2)
        .map(|_| {
            let f = rng.uniform_in(0.05, 0.5);
            let phase = rng.uniform_in(0.0, 2.0 * PI);
            (f, phase, drift_amp / 2.0)
        })
        .collect();

    (0..n)
        .map(|i| {
            let mut v = 0.0;
            for (s, &(a, g, _)) in state.iter_mut().zip(&stages) {
                *s = a * *s + (1.0 - a) * rng.normal();
                v += g * *s;
            }
            let t = i as f64 / cfg.fs;
            let slow: f64 = drift
                .iter()
                .map(|(f, ph, a)| a * (2.0 * PI * f * t + ph).sin())
                .sum();
            v * scale + slow
        })
        .collect()
}

fn half_sine(t: f64, width: f64) -> f64 {
    if (0.0..width).contains(&t) {
        (PI * t / width).sin()
    } else {
        0.0
    }
}

/// Adds a spike-and-wave burst to `x`; returns the burst's sample range.
fn add_burst(cfg: &GenConfig, instance: u64, x: &mut [f64]) -> Range<usize> {
    let n = x.len();
    let fs = cfg.fs;
    let mut rng = SeededRng::new(cfg.seed, stream(instance, BURST));
    let frac = rng.uniform_in(0.3, 0.8);
    let burst_len = ((n as f64) * frac).round() as usize;
    let start = (rng.uniform() * (n - burst_len) as f64) as usize;
    let end = start + burst_len;
    let rate = cfg.jittered(&mut rng, cfg.swd_rate_hz);

    let mut onset = start as f64 / fs;
    let stop = end as f64 / fs;
    while onset < stop {
        let period = cfg.jittered(&mut rng, 1.0 / rate);
        let spike_w = rng.uniform_in(0.020, 0.070);
        let wave_w = rng.uniform_in(0.200, 0.300).min(period - spike_w);
        let spike_a = cfg.jittered(&mut rng, cfg.spike_amp_uv);
        let wave_a = cfg.jittered(&mut rng, cfg.wave_amp_uv);
        let up = 0.6 * spike_w;
        let down = spike_w - up;

        let first = (onset * fs).ceil() as usize;
        let last = (((onset + period) * fs).ceil() as usize).min(end);
        for (i, v) in x.iter_mut().enumerate().take(last).skip(first) {
            let t = i as f64 / fs - onset;
            *v += spike_a * half_sine(t, up)
                - 0.3 * spike_a * half_sine(t - up, down)
                - wave_a * half_sine(t - spike_w, wave_w);
        }
        onset += period;
    }
    start..end
}

/// Adds at most one transient: an electrode pop, a blink lobe or a muscle burst.
fn add_artifact(cfg: &GenConfig, instance: u64, x: &mut [f64]) {
    let mut rng = SeededRng::new(cfg.seed, stream(instance, ARTIFACT));
    if !rng.bernoulli(cfg.artifact_prob) {
        return;
    }
    let fs = cfg.fs;
    let n = x.len();
    let bg = cfg.background_amp_uv;
    let sign = if rng.bernoulli(0.5) { 1.0 } else { -1.0 };
    let at = rng.below(n as u64) as usize;
    match rng.below(3) {
        0 => {
            let amp = sign * bg * rng.uniform_in(1.5, 3.0);
            let tau = rng.uniform_in(0.5, 2.0) * fs;
            for (k, v) in x[at..].iter_mut().enumerate() {
                *v += amp * (-(k as f64) / tau).exp();
            }
        }
        1 => {
            let amp = sign * bg * rng.uniform_in(1.5, 3.0);
            let width = rng.uniform_in(0.4, 1.0) * fs;
            for (k, v) in x[at..].iter_mut().enumerate() {
                *v += amp * half_sine(k as f64, width);
            }
        }
        _ => {
            let amp = bg * rng.uniform_in(1.0, 2.0);
            let len = (rng.uniform_in(0.5, 2.0) * fs) as usize;
            let f = rng.uniform_in(40.0, 100.0_f64.min(0.45 * fs));
            for (k, v) in x[at..(at + len).min(n)].iter_mut().enumerate() {
                let t = k as f64 / fs;
                *v += amp * rng.uniform_in(0.5, 1.0) * (2.0 * PI * f * t).sin();
            }
        }
    }
}

fn finish(cfg: &GenConfig, id: String, mut x: Vec<f64>, label: Label, instance: u64) -> Signal {
    let bound = cfg.amplitude_bound();
    for v in x.iter_mut() {
        *v = v.clamp(-bound, bound);
    }
    Signal {
        id,
        samples: x,
        fs: cfg.fs,
        channel: MONTAGE[(instance / 2) as usize % MONTAGE.len()].to_string(),
        label: Some(label),
        patient_id: Some(format!(
            "synthetic-{:02}",
            (instance / 2) as usize % SYNTHETIC_PATIENTS
        )),
    }
}

/// SWD signal and the sample range its burst occupies.
pub fn gen_swd_with_burst(cfg: &GenConfig, instance: u64) -> Result<(Signal, Range<usize>)> {
    cfg.validate()?;
    let mut x = background(cfg, instance);
    let burst = add_burst(cfg, instance, &mut x);
    let sig = finish(cfg, format!("swd-{instance:06}"), x, Label::Swd, instance);
    Ok((sig, burst))
}

pub fn gen_swd(cfg: &GenConfig, instance: u64) -> Result<Signal> {
    Ok(gen_swd_with_burst(cfg, instance)?.0)
}

pub fn gen_background(cfg: &GenConfig, instance: u64) -> Result<Signal> {
    cfg.validate()?;
    let mut x = background(cfg, instance);
    add_artifact(cfg, instance, &mut x);
    Ok(finish(
        cfg,
        format!("nswd-{instance:06}"),
        x,
        Label::NonSwd,
        instance,
    ))
}

/// `n_per_class` SWD signals followed by `n_per_class` background signals.
pub fn gen_corpus(cfg: &GenConfig) -> Result<Vec<Signal>> {
    gen_corpus_with(cfg, Execution::default())
}

pub fn gen_corpus_with(cfg: &GenConfig, exec: Execution) -> Result<Vec<Signal>> {
    cfg.validate()?;
    let jobs: Vec<(Label, u64)> = (0..cfg.n_per_class as u64)
        .map(|i| (Label::Swd, 2 * i))
        .chain((0..cfg.n_per_class as u64).map(|i| (Label::NonSwd, 2 * i + 1)))
        .collect();
    par::try_map(&jobs, exec, |&(label, instance)| match label {
        Label::Swd => gen_swd(cfg, instance),
        Label::NonSwd => gen_background(cfg, instance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let cfg = GenConfig {
            n_per_class: 1,
            ..Default::default()
        };
        let c = gen_corpus(&cfg).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].label, Some(Label::Swd));
        assert_eq!(c[1].label, Some(Label::NonSwd));
        assert!(c.iter().all(|s| s.len() == 5120 && s.fs == 256.0));
    }

    #[test]
    fn silent_background() {
        let cfg = GenConfig {
            artifact_prob: 0.0,
            background_amp_uv: 0.0,
            drift_amp_uv: 0.0,
            ..Default::default()
        };
        let s = gen_background(&cfg, 3).unwrap();
        assert!(s.samples.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn deterministic() {
        let cfg = GenConfig {
            jitter: 0.0,
            artifact_prob: 0.0,
            ..Default::default()
        };
        assert_eq!(gen_swd(&cfg, 5).unwrap(), gen_swd(&cfg, 5).unwrap());
        assert_eq!(
            gen_background(&cfg, 5).unwrap(),
            gen_background(&cfg, 5).unwrap()
        );
        assert_ne!(
            gen_swd(&cfg, 5).unwrap().samples,
            gen_swd(&cfg, 6).unwrap().samples
        );
    }

    #[test]
    fn burst_occupies_bounded_fraction() {
        let cfg = GenConfig::default();
        for i in 0..50 {
            let (s, burst) = gen_swd_with_burst(&cfg, i).unwrap();
            let frac = burst.len() as f64 / s.len() as f64;
            assert!((0.3..=0.8).contains(&frac), "{frac}");
            assert!(burst.end <= s.len());
        }
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            GenConfig {
                artifact_prob: 1.5,
                ..Default::default()
            },
            GenConfig {
                spike_amp_uv: 0.0,
                ..Default::default()
            },
            GenConfig {
                fs: 0.0,
                ..Default::default()
            },
            GenConfig {
                jitter: 1.0,
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(gen_corpus(&c).is_err(), "{c:?}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = GenConfig {
            n_per_class: 8,
            ..Default::default()
        };
        assert_eq!(
            gen_corpus_with(&cfg, Execution::Sequential).unwrap(),
            gen_corpus_with(&cfg, Execution::Parallel).unwrap()
        );
    }
}
