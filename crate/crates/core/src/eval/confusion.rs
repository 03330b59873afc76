use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Label;

/// Counts with SWD as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn add(&mut self, predicted: Label, actual: Label) {
        match (predicted.is_positive(), actual.is_positive()) {
            (true, true) => self.tp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
        }
    }
}

pub fn confusion(predictions: &[Label], labels: &[Label]) -> Result<ConfusionMatrix> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &a) in predictions.iter().zip(labels) {
        cm.add(p, a);
    }
    Ok(cm)
}

/// Rates derived from a confusion matrix. `None` marks a rate whose
/// denominator is zero; it is written as the string `"undefined"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(with = "undefined_rate")]
    pub tpr: Option<f64>,
    #[serde(with = "undefined_rate")]
    pub tnr: Option<f64>,
    #[serde(with = "undefined_rate")]
    pub fpr: Option<f64>,
    #[serde(with = "undefined_rate")]
    pub fnr: Option<f64>,
    pub misclassification: f64,
    #[serde(with = "undefined_rate")]
    pub precision: Option<f64>,
    pub prevalence: f64,
    pub accuracy: f64,
}

mod undefined_rate {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Rate(f64),
        Marker(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => Repr::Rate(*x),
            None => Repr::Marker("undefined".into()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Rate(x) => Ok(Some(x)),
            Repr::Marker(m) if m == "undefined" => Ok(None),
            Repr::Marker(m) => Err(serde::de::Error::custom(format!("unexpected rate {m:?}"))),
        }
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyConfusion);
    }
    let pos = cm.tp + cm.fn_;
    let neg = cm.tn + cm.fp;
    let accuracy = (cm.tp + cm.tn) as f64 / total as f64;
    Ok(MetricsReport {
        tpr: ratio(cm.tp, pos),
        tnr: ratio(cm.tn, neg),
        fpr: ratio(cm.fp, neg),
        fnr: ratio(cm.fn_, pos),
        misclassification: (cm.fp + cm.fn_) as f64 / total as f64,
        precision: ratio(cm.tp, cm.tp + cm.fp),
        prevalence: pos as f64 / total as f64,
        accuracy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{NonSwd as N, Swd as S};

    #[test]
    fn enumeration() {
        let cm = confusion(&[S, N, N, S], &[S, S, N, N]).unwrap();
        assert_eq!(
            cm,
            ConfusionMatrix {
                tp: 1,
                tn: 1,
                fp: 1,
                fn_: 1
            }
        );
        let perfect = confusion(&[S, N, S], &[S, N, S]).unwrap();
        assert_eq!((perfect.fp, perfect.fn_), (0, 0));
        assert!(confusion(&[S], &[S, N]).is_err());
        assert!(confusion(&[], &[]).is_err());
    }

    #[test]
    fn perfect_rates() {
        let m = metrics(&ConfusionMatrix {
            tp: 1,
            tn: 1,
            fp: 0,
            fn_: 0,
        })
        .unwrap();
        assert_eq!(
            (m.tpr, m.tnr, m.precision),
            (Some(1.0), Some(1.0), Some(1.0))
        );
        assert_eq!((m.accuracy, m.misclassification), (1.0, 0.0));
    }

    #[test]
    fn empty_positive_class_is_undefined() {
        let m = metrics(&ConfusionMatrix {
            tp: 0,
            tn: 3,
            fp: 1,
            fn_: 0,
        })
        .unwrap();
        assert_eq!(m.tpr, None);
        assert_eq!(m.fnr, None);
        assert_eq!(m.precision, Some(0.0));
        assert!(metrics(&ConfusionMatrix::default()).is_err());
    }
}
