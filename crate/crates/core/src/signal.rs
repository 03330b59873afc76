//! Raw single-channel recordings and fixed-length windows over them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Window length used throughout when none is given.
pub const DEFAULT_WINDOW_S: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Spike-and-wave discharge, the positive class.
    #[serde(rename = "SWD")]
    Swd,
    /// Background activity, possibly with artifacts.
    #[serde(rename = "nSWD")]
    NonSwd,
}

impl Label {
    /// Network target: 1 for SWD, 0 otherwise.
    pub fn target(self) -> f64 {
        match self {
            Label::Swd => 1.0,
            Label::NonSwd => 0.0,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Swd
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Swd => "SWD",
            Label::NonSwd => "nSWD",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "SWD" => Ok(Label::Swd),
            "nSWD" => Ok(Label::NonSwd),
            other => Err(other.to_string()),
        }
    }
}

/// One channel of samples in microvolts.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub id: String,
    pub samples: Vec<f64>,
    pub fs: f64,
    pub channel: String,
    pub label: Option<Label>,
    pub patient_id: Option<String>,
}

impl Signal {
    pub fn new(id: impl Into<String>, samples: Vec<f64>, fs: f64) -> Result<Self> {
        if !(fs.is_finite() && fs > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sampling rate must be positive, got {fs}"
            )));
        }
        Ok(Signal {
            id: id.into(),
            samples,
            fs,
            channel: String::new(),
            label: None,
            patient_id: None,
        })
    }

    pub fn with_channel(mut self, channel: impl Into<String>) -> Self {
        self.channel = channel.into();
        self
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = Some(label);
        self
    }

    pub fn with_patient(mut self, patient: impl Into<String>) -> Self {
        self.patient_id = Some(patient.into());
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// The whole signal as one window.
    pub fn full_window(&self) -> Result<Window<'_>> {
        if self.samples.is_empty() {
            return Err(Error::SignalTooShort {
                required: 1,
                available: 0,
            });
        }
        Ok(Window {
            parent: self,
            start_index: 0,
            length_samples: self.samples.len(),
        })
    }
}

/// A contiguous view into a [`Signal`].
#[derive(Debug, Clone, Copy)]
pub struct Window<'a> {
    pub parent: &'a Signal,
    pub start_index: usize,
    pub length_samples: usize,
}

impl<'a> Window<'a> {
    pub fn samples(&self) -> &'a [f64] {
        &self.parent.samples[self.start_index..self.start_index + self.length_samples]
    }

    pub fn duration_s(&self) -> f64 {
        self.length_samples as f64 / self.parent.fs
    }

    pub fn start_s(&self) -> f64 {
        self.start_index as f64 / self.parent.fs
    }
}

fn samples_for(seconds: f64, fs: f64, what: &str) -> Result<usize> {
    if !(seconds.is_finite() && seconds > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "{what} must be positive, got {seconds}"
        )));
    }
    let n = (seconds * fs).round();
    if n < 1.0 {
        return Err(Error::InvalidConfig(format!(
            "{what} of {seconds} s is shorter than one sample at {fs} Hz"
        )));
    }
    Ok(n as usize)
}

/// Tiles `signal` with windows of `duration_s`, advancing by `hop_s`.
///
/// A trailing partial window is dropped.
pub fn segment(signal: &Signal, duration_s: f64, hop_s: f64) -> Result<Vec<Window<'_>>> {
    let len = samples_for(duration_s, signal.fs, "window duration")?;
    let hop = samples_for(hop_s, signal.fs, "hop")?;
    if signal.len() < len {
        return Err(Error::SignalTooShort {
            required: len,
            available: signal.len(),
        });
    }
    let count = (signal.len() - len) / hop + 1;
    Ok((0..count)
        .map(|i| Window {
            parent: signal,
            start_index: i * hop,
            length_samples: len,
        })
        .collect())
}
