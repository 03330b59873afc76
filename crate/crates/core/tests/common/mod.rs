//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use swd_core::ann::{Network, Sample};
use swd_core::rng::SeededRng;

/// Direct windowed mean, centred, truncated at the edges.
pub fn brute_ma(x: &[f64], h: usize) -> Vec<f64> {
    let k = 2 * h + 1;
    (0..x.len() + 1 - k)
        .map(|s| {
            let mut acc = 0.0;
            for v in &x[s..s + k] {
                acc += v;
            }
            acc / k as f64
        })
        .collect()
}

/// Short-minus-long residual from two independent brute-force averages.
pub fn brute_residual(x: &[f64], h1: usize, h2: usize) -> Vec<f64> {
    let m1 = brute_ma(x, h1);
    let m2 = brute_ma(x, h2);
    let off = h2 - h1;
    m2.iter()
        .enumerate()
        .map(|(i, b)| m1[i + off] - b)
        .collect()
}

/// Two-pass mean and 1/n variance.
pub fn two_pass(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (m, x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n)
}

/// Central finite-difference gradient of the batch loss.
pub fn fd_grad(net: &Network, batch: &[Sample], step: f64) -> Vec<f64> {
    let p = net.params();
    (0..p.len())
        .map(|i| {
            let mut up = p.clone();
            let mut dn = p.clone();
            up[i] += step;
            dn[i] -= step;
            let lu = Network::from_params(net.n_hidden, &up)
                .unwrap()
                .loss(batch)
                .unwrap();
            let ld = Network::from_params(net.n_hidden, &dn)
                .unwrap()
                .loss(batch)
                .unwrap();
            (lu - ld) / (2.0 * step)
        })
        .collect()
}

/// Mann-Whitney U / (n_pos * n_neg) by enumerating all pairs; ties earn half.
pub fn u_statistic_auc(scores: &[f64], positive: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if !positive[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if positive[j] {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                wins += 1.0;
            } else if si == sj {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

pub fn random_case(seed: u64) -> (Network, Vec<Sample>) {
    let mut rng = SeededRng::new(seed, 77);
    let hidden = 1 + rng.below(8) as usize;
    let net = Network::from_params(
        hidden,
        &(0..Network::param_count(hidden))
            .map(|_| rng.normal())
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let n = 5 + rng.below(26) as usize;
    let batch = (0..n)
        .map(|_| {
            Sample::new(
                [rng.normal() * 1.5, rng.normal() * 1.5],
                rng.below(2) as f64,
            )
        })
        .collect();
    (net, batch)
}

pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
