//! Two-input, single-hidden-layer sigmoid network with a squared-error cost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

pub const INPUTS: usize = 2;

#[inline]
pub fn sigmoid(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

/// One labelled, already normalised input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub input: [f64; INPUTS],
    /// 1 for SWD, 0 otherwise.
    pub target: f64,
}

impl Sample {
    pub fn new(input: [f64; INPUTS], target: f64) -> Self {
        Sample { input, target }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Network {
    pub n_hidden: usize,
    /// Row `j` holds the input weights of hidden unit `j`.
    pub w_in: Vec<[f64; INPUTS]>,
    pub b_in: Vec<f64>,
    pub w_out: Vec<f64>,
    pub b_out: f64,
}

/// Partial derivatives laid out like [`Network`].
pub type Gradient = Network;

impl Network {
    pub fn zeros(n_hidden: usize) -> Self {
        Network {
            n_hidden,
            w_in: vec![[0.0; INPUTS]; n_hidden],
            b_in: vec![0.0; n_hidden],
            w_out: vec![0.0; n_hidden],
            b_out: 0.0,
        }
    }

    /// Every parameter uniform in `[-0.5, 0.5)`, drawn in [`Network::params`] order.
    pub fn random(n_hidden: usize, rng: &mut SeededRng) -> Result<Self> {
        if n_hidden == 0 {
            return Err(Error::InvalidConfig("n_hidden must be at least 1".into()));
        }
        let count = Self::param_count(n_hidden);
        let flat: Vec<f64> = (0..count).map(|_| rng.uniform_in(-0.5, 0.5)).collect();
        Self::from_params(n_hidden, &flat)
    }

    pub fn param_count(n_hidden: usize) -> usize {
        n_hidden * (INPUTS + 2) + 1
    }

    /// Flattened as `w_in` (row-major), `b_in`, `w_out`, `b_out`.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(Self::param_count(self.n_hidden));
        out.extend(self.w_in.iter().flatten());
        out.extend(&self.b_in);
        out.extend(&self.w_out);
        out.push(self.b_out);
        out
    }

    pub fn from_params(n_hidden: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != Self::param_count(n_hidden) {
            return Err(Error::LengthMismatch {
                left: flat.len(),
                right: Self::param_count(n_hidden),
            });
        }
        let (w_in, rest) = flat.split_at(n_hidden * INPUTS);
        let (b_in, rest) = rest.split_at(n_hidden);
        let (w_out, rest) = rest.split_at(n_hidden);
        Ok(Network {
            n_hidden,
            w_in: w_in.chunks(INPUTS).map(|c| [c[0], c[1]]).collect(),
            b_in: b_in.to_vec(),
            w_out: w_out.to_vec(),
            b_out: rest[0],
        })
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.n_hidden;
        if h == 0 || self.w_in.len() != h || self.b_in.len() != h || self.w_out.len() != h {
            return Err(Error::InvalidConfig(format!(
                "network shape inconsistent with n_hidden = {h}"
            )));
        }
        if self.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig(
                "network has non-finite parameters".into(),
            ));
        }
        Ok(())
    }

    #[inline]
    fn hidden_into(&self, p: [f64; INPUTS], hidden: &mut [f64]) {
        for ((h, w), b) in hidden.iter_mut().zip(&self.w_in).zip(&self.b_in) {
            *h = sigmoid(w[0] * p[0] + w[1] * p[1] + b);
        }
    }

    #[inline]
    fn output_from(&self, hidden: &[f64]) -> f64 {
        let eta: f64 = hidden
            .iter()
            .zip(&self.w_out)
            .map(|(h, w)| h * w)
            .sum::<f64>()
            + self.b_out;
        sigmoid(eta)
    }

    /// Network output in `(0, 1)` for finite inputs.
    pub fn forward(&self, p: [f64; INPUTS]) -> Result<f64> {
        if let Some(i) = p.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index: i });
        }
        let mut hidden = vec![0.0; self.n_hidden];
        self.hidden_into(p, &mut hidden);
        Ok(self.output_from(&hidden))
    }

    /// Mean squared error over `batch`.
    pub fn loss(&self, batch: &[Sample]) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let mut hidden = vec![0.0; self.n_hidden];
        let mut total = 0.0;
        for s in batch {
            check_sample(s)?;
            self.hidden_into(s.input, &mut hidden);
            let e = self.output_from(&hidden) - s.target;
            total += e * e;
        }
        Ok(total / batch.len() as f64)
    }

    /// Exact gradient of [`Network::loss`] by backpropagation.
    pub fn backprop_grad(&self, batch: &[Sample]) -> Result<Gradient> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let n = batch.len() as f64;
        let mut grad = Network::zeros(self.n_hidden);
        let mut hidden = vec![0.0; self.n_hidden];
        for s in batch {
            check_sample(s)?;
            self.hidden_into(s.input, &mut hidden);
            let out = self.output_from(&hidden);
            let d_out = 2.0 * (out - s.target) / n * out * (1.0 - out);
            grad.b_out += d_out;
            #[allow(clippy::needless_range_loop)]
            for j in 0..self.n_hidden {
                let h = hidden[j];
                grad.w_out[j] += d_out * h;
                let d_hidden = d_out * self.w_out[j] * h * (1.0 - h);
                grad.b_in[j] += d_hidden;
                grad.w_in[j][0] += d_hidden * s.input[0];
                grad.w_in[j][1] += d_hidden * s.input[1];
            }
        }
        Ok(grad)
    }

    /// `self -= rate * grad`.
    pub fn step(&mut self, grad: &Gradient, rate: f64) {
        for (w, g) in self.w_in.iter_mut().zip(&grad.w_in) {
            w[0] -= rate * g[0];
            w[1] -= rate * g[1];
        }
        for (b, g) in self.b_in.iter_mut().zip(&grad.b_in) {
            *b -= rate * g;
        }
        for (w, g) in self.w_out.iter_mut().zip(&grad.w_out) {
            *w -= rate * g;
        }
        self.b_out -= rate * grad.b_out;
    }

    /// Euclidean norm over all parameters.
    pub fn norm(&self) -> f64 {
        self.params().iter().map(|g| g * g).sum::<f64>().sqrt()
    }
}

fn check_sample(s: &Sample) -> Result<()> {
    if let Some(i) = s.input.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample { index: i });
    }
    Ok(())
}
