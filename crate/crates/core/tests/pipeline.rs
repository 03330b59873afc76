use std::sync::OnceLock;

use swd_core::datagen::{gen_corpus, GenConfig};
use swd_core::features::FeatureVector;
use swd_core::filter::FilterConfig;
use swd_core::io::{
    read_eval_report, read_model, read_train_report, write_eval_report, write_model,
    write_train_report, EvalDocument, ModelDocument, Provenance, RunConfig, TrainDocument,
};
use swd_core::ma::MaConfig;
use swd_core::model::Model;
use swd_core::par::Execution;
use swd_core::pipeline::{detect, extract_corpus, DetectConfig, FeatureRecord};
use swd_core::report::{evaluate, SplitSelection};
use swd_core::rng::SeededRng;
use swd_core::signal::Label;
use swd_core::train::{train, TrainConfig, TrainOutcome};

struct Fixture {
    records: Vec<FeatureRecord>,
    outcome: TrainOutcome,
    model: Model,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let corpus = gen_corpus(&GenConfig::default()).unwrap();
        let records = extract_corpus(
            &corpus,
            MaConfig::default(),
            &FilterConfig::default(),
            Execution::default(),
        )
        .unwrap();
        let cfg = TrainConfig::default();
        let outcome = train(&post(&records), &cfg).unwrap();
        let model =
            Model::from_outcome(&outcome, MaConfig::default(), FilterConfig::default(), cfg);
        Fixture {
            records,
            outcome,
            model,
        }
    })
}

fn post(records: &[FeatureRecord]) -> Vec<FeatureVector> {
    records.iter().map(|r| r.post.clone()).collect()
}

#[test]
fn training_loss_falls_over_first_epochs() {
    let epochs = &fixture().outcome.report.epochs;
    assert!(epochs.len() > 5);
    for w in epochs[..6].windows(2) {
        assert!(
            w[1].train_loss < w[0].train_loss,
            "{} -> {}",
            w[0].train_loss,
            w[1].train_loss
        );
    }
}

#[test]
fn best_epoch_has_minimal_validation_loss() {
    let report = &fixture().outcome.report;
    let best = report.best().val_loss;
    assert!(report
        .epochs
        .iter()
        .all(|e| e.val_loss >= best && e.train_loss >= 0.0));
}

#[test]
fn model_round_trip_is_bit_exact() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.toml");
    let prov = Provenance::new("test", &RunConfig::default());
    write_model(
        &path,
        &ModelDocument {
            provenance: prov.clone(),
            model: f.model.clone(),
        },
    )
    .unwrap();
    let back = read_model(&path).unwrap();
    assert_eq!(back.provenance, prov);
    assert_eq!(back.model, f.model);
    let mut rng = SeededRng::new(100, 0);
    for i in 0..100 {
        let fv = FeatureVector::new(
            rng.normal() * 5.0,
            10.0 + rng.uniform() * 80.0,
            format!("p{i}"),
            None,
        );
        let a = f.model.predict(&fv).unwrap();
        let b = back.model.predict(&fv).unwrap();
        assert_eq!(a.score.to_bits(), b.score.to_bits());
        assert_eq!(a.label, b.label);
    }
}

#[test]
fn reports_round_trip() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    let prov = Provenance::new("test", &RunConfig::default());
    let tr = TrainDocument {
        provenance: prov.clone(),
        report: f.outcome.report.clone(),
    };
    write_train_report(&dir.path().join("t.toml"), &tr).unwrap();
    assert_eq!(read_train_report(&dir.path().join("t.toml")).unwrap(), tr);
    let ev = EvalDocument {
        provenance: prov,
        report: evaluate(&f.model, &f.records, SplitSelection::All).unwrap(),
    };
    write_eval_report(&dir.path().join("e.toml"), &ev).unwrap();
    assert_eq!(read_eval_report(&dir.path().join("e.toml")).unwrap(), ev);
}

#[test]
fn raising_threshold_never_adds_true_positives() {
    let f = fixture();
    let test = &f.outcome.splits.test;
    let tp = |t: f64| {
        test.iter()
            .filter(|&&i| {
                let r = &f.records[i];
                r.label() == Some(Label::Swd)
                    && f.model.predict_at(&r.post, t).unwrap().label == Label::Swd
            })
            .count()
    };
    assert!(tp(0.9) <= tp(0.5));
}

#[test]
fn error_histogram_concentrates_near_zero() {
    let report = evaluate(&fixture().model, &fixture().records, SplitSelection::Test).unwrap();
    let h = &report.selected().error_histogram;
    assert_eq!(h.counts.len(), 20);
    let central: u64 = h
        .counts
        .iter()
        .zip(h.edges.windows(2))
        .filter(|(_, e)| e[0] >= -0.2 - 1e-12 && e[1] <= 0.2 + 1e-12)
        .map(|(c, _)| *c)
        .sum();
    assert!(
        central as f64 > 0.8 * h.total() as f64,
        "{central}/{}",
        h.total()
    );
}

#[test]
fn detection_order_is_schedule_independent() {
    let f = fixture();
    let corpus = gen_corpus(&GenConfig {
        n_per_class: 8,
        ..GenConfig::default()
    })
    .unwrap();
    let cfg = DetectConfig {
        window_s: 5.0,
        hop_s: 2.5,
        threshold: 0.5,
    };
    let seq = detect(&f.model, &corpus, &cfg, Execution::Sequential).unwrap();
    let par = detect(&f.model, &corpus, &cfg, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.len(), 16 * 7);
}

#[test]
fn training_is_deterministic() {
    let f = fixture();
    let again = train(&post(&f.records), &TrainConfig::default()).unwrap();
    assert_eq!(again.report, f.outcome.report);
    assert_eq!(again.network, f.outcome.network);
}
