use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Scores `>= threshold` are called SWD.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// ROC curve swept over every distinct score, from `+inf` down to `-inf`.
///
/// Tied scores move both rates in one step, which the trapezoid rule credits
/// as half a win, so the area equals the Mann-Whitney statistic.
pub fn roc(scores: &[f64], labels: &[Label]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    if let Some(i) = scores.iter().position(|s| s.is_nan()) {
        return Err(Error::NonFiniteSample { index: i });
    }
    let n_pos = labels.iter().filter(|l| l.is_positive()).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass(format!(
            "ROC needs both classes, got {n_pos} SWD and {n_neg} nSWD"
        )));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let (pos_f, neg_f) = (n_pos as f64, n_neg as f64);
    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        let (tp0, fp0) = (tp, fp);
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]].is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        auc += (fp - fp0) as f64 * (tp + tp0) as f64 / 2.0;
        points.push(RocPoint {
            fpr: fp as f64 / neg_f,
            tpr: tp as f64 / pos_f,
            threshold,
        });
    }
    points.push(RocPoint {
        fpr: 1.0,
        tpr: 1.0,
        threshold: f64::NEG_INFINITY,
    });
    Ok(RocCurve {
        points,
        auc: auc / (pos_f * neg_f),
    })
}
