//! Spike-and-wave discharge (SWD) detection in single-channel EEG.
//!
//! Each window is reduced to the Gaussian maximum-likelihood location and
//! scale of a short-minus-long moving-average residual; a small sigmoid
//! network trained by backpropagation classifies the `(mu, sigma)` pair.
//! The crate also carries the evaluation battery (confusion rates, ROC/AUC,
//! error histograms, Cohen's d with Welch p-values) and a seeded generator
//! of synthetic SWD and background windows.
//!
//! Batch stages run on rayon when the default `parallel` feature is enabled
//! and fall back to a sequential loop otherwise; see [`par::Execution`].

pub mod ann;
pub mod datagen;
pub mod error;
pub mod eval;
pub mod features;
pub mod filter;
pub mod io;
pub mod ma;
pub mod model;
pub mod par;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod signal;
pub mod train;

pub use error::{Error, ErrorKind, Result};
