use std::path::PathBuf;
use std::time::Instant;

use swd_core::datagen::gen_corpus;
use swd_core::filter::FilterConfig;
use swd_core::io::{
    read_config, read_corpus, read_features, read_model, write_corpus, write_detections,
    write_eval_report, write_features, write_model, write_roc_csv, write_train_report,
    CorpusHeader, EvalDocument, FeaturesHeader, ModelDocument, Provenance, RunConfig,
    TrainDocument,
};
use swd_core::ma::MaConfig;
use swd_core::model::Model;
use swd_core::par::Execution;
use swd_core::pipeline::{detect, extract_corpus, DetectConfig, FeatureRecord};
use swd_core::report::{evaluate, EvalReport, SplitSelection};
use swd_core::signal::Label;
use swd_core::train::train;
use swd_core::{Error, Result};

use crate::{
    Command, ConfigArg, DataSource, DetectArgs, EvalArgs, ExtractArgs, MaArgs, RocArgs,
    SimulateArgs, TrainArgs,
};

pub fn run(command: Command, command_line: &str) -> Result<()> {
    match command {
        Command::Simulate(a) => simulate(a, command_line),
        Command::Extract(a) => extract(a, command_line),
        Command::Train(a) => train_cmd(a, command_line),
        Command::Eval(a) => eval(a, command_line),
        Command::Detect(a) => detect_cmd(a, command_line),
        Command::Roc(a) => roc_cmd(a, command_line),
    }
}

fn load_config(arg: &ConfigArg) -> Result<RunConfig> {
    match &arg.config {
        Some(p) => read_config(p),
        None => Ok(RunConfig::default()),
    }
}

fn output(flag: Option<PathBuf>, configured: &Option<String>, fallback: &str) -> PathBuf {
    flag.or_else(|| configured.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(fallback))
}

fn input(flag: Option<PathBuf>, configured: &Option<String>, flag_name: &str) -> Result<PathBuf> {
    flag.or_else(|| configured.as_ref().map(PathBuf::from))
        .ok_or_else(|| {
            Error::InvalidConfig(format!(
                "no input given; pass {flag_name} or set it under [paths]"
            ))
        })
}

fn apply_ma(base: MaConfig, flags: &MaArgs) -> Result<MaConfig> {
    MaConfig::new(flags.h1.unwrap_or(base.h1), flags.h2.unwrap_or(base.h2))
}

fn class_counts(labels: impl Iterator<Item = Option<Label>>) -> (usize, usize) {
    labels.fold((0, 0), |(s, n), l| match l {
        Some(Label::Swd) => (s + 1, n),
        Some(Label::NonSwd) => (s, n + 1),
        None => (s, n),
    })
}

fn fmt_rate(r: Option<f64>) -> String {
    r.map_or_else(|| "undefined".into(), |v| format!("{:.2}%", 100.0 * v))
}

fn simulate(a: SimulateArgs, command_line: &str) -> Result<()> {
    let mut cfg = load_config(&a.config)?;
    if let Some(s) = a.seed {
        cfg.gen.seed = s;
    }
    if let Some(n) = a.n_per_class {
        cfg.gen.n_per_class = n;
    }
    cfg.validate()?;
    let out = output(a.out, &cfg.paths.corpus, "corpus.csv");
    let corpus = gen_corpus(&cfg.gen)?;
    let header = CorpusHeader {
        fs: cfg.gen.fs,
        duration_s: cfg.gen.duration_s,
        source: "synthetic".into(),
        provenance: Some(Provenance::new(command_line, &cfg)),
    };
    write_corpus(&out, &corpus, &header)?;
    let (swd, nswd) = class_counts(corpus.iter().map(|s| s.label));
    println!(
        "simulate: {} signals ({swd} SWD, {nswd} nSWD), {} s at {} Hz, seed {} -> {}",
        corpus.len(),
        cfg.gen.duration_s,
        cfg.gen.fs,
        cfg.gen.seed,
        out.display()
    );
    Ok(())
}

fn extract(a: ExtractArgs, command_line: &str) -> Result<()> {
    let mut cfg = load_config(&a.config)?;
    cfg.ma = apply_ma(cfg.ma, &a.ma)?;
    let corpus_path = input(a.corpus, &cfg.paths.corpus, "--corpus")?;
    let out = output(a.out, &cfg.paths.features, "features.csv");
    let (header, signals) = read_corpus(&corpus_path)?;
    cfg.filter.validate(header.fs)?;
    let records = extract_corpus(&signals, cfg.ma, &cfg.filter, Execution::default())?;
    let fh = FeaturesHeader {
        ma: cfg.ma,
        filter: cfg.filter,
        provenance: Some(Provenance::new(command_line, &cfg)),
    };
    write_features(&out, &records, &fh)?;
    println!(
        "extract: {} feature records (h1 {}, h2 {}) -> {}",
        records.len(),
        cfg.ma.h1,
        cfg.ma.h2,
        out.display()
    );
    print_sigma_means(&records);
    Ok(())
}

fn print_sigma_means(records: &[FeatureRecord]) {
    let mean = |label: Label, post: bool| {
        let v: Vec<f64> = records
            .iter()
            .filter(|r| r.label() == Some(label))
            .map(|r| if post { r.post.sigma } else { r.pre.sigma })
            .collect();
        if v.is_empty() {
            f64::NAN
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    println!(
        "  mean sigma  raw: SWD {:.3} nSWD {:.3}   residual: SWD {:.3} nSWD {:.3}",
        mean(Label::Swd, false),
        mean(Label::NonSwd, false),
        mean(Label::Swd, true),
        mean(Label::NonSwd, true)
    );
}

/// Feature records from `--features` or `--corpus`, plus the residual and filter
/// settings they were made with. A corpus is extracted with `ma` and `filter`.
fn load_records(
    source: DataSource,
    cfg: &RunConfig,
    ma: MaConfig,
    filter: FilterConfig,
) -> Result<(Vec<FeatureRecord>, MaConfig, FilterConfig)> {
    let (features, corpus) = match (source.features, source.corpus) {
        (None, None) => (
            cfg.paths.features.as_ref().map(PathBuf::from),
            cfg.paths.corpus.as_ref().map(PathBuf::from),
        ),
        explicit => explicit,
    };
    if let Some(p) = features {
        let (header, records) = read_features(&p)?;
        return Ok((records, header.ma, header.filter));
    }
    let p = corpus.ok_or_else(|| {
        Error::InvalidConfig("no input given; pass --features or --corpus".into())
    })?;
    let (header, signals) = read_corpus(&p)?;
    filter.validate(header.fs)?;
    let records = extract_corpus(&signals, ma, &filter, Execution::default())?;
    Ok((records, ma, filter))
}

fn train_cmd(a: TrainArgs, command_line: &str) -> Result<()> {
    let mut cfg = load_config(&a.config)?;
    cfg.ma = apply_ma(cfg.ma, &a.ma)?;
    if let Some(s) = a.seed {
        cfg.train.seed = s;
    }
    cfg.validate()?;
    let model_out = output(a.model_out, &cfg.paths.model, "model.toml");
    let report_out = a
        .report_out
        .unwrap_or_else(|| PathBuf::from("train_report.toml"));

    let explicit_ma = a.ma.h1.is_some() || a.ma.h2.is_some();
    let (records, ma, filter) = load_records(a.source, &cfg, cfg.ma, cfg.filter)?;
    if explicit_ma && ma != cfg.ma {
        return Err(Error::InvalidConfig(format!(
            "--ma-h1/--ma-h2 ask for ({}, {}) but the features were extracted with ({}, {})",
            cfg.ma.h1, cfg.ma.h2, ma.h1, ma.h2
        )));
    }
    cfg.ma = ma;
    cfg.filter = filter;

    let post: Vec<_> = records.iter().map(|r| r.post.clone()).collect();
    let outcome = train(&post, &cfg.train)?;
    let model = Model::from_outcome(&outcome, cfg.ma, cfg.filter, cfg.train.clone());
    let provenance = Provenance::new(command_line, &cfg);
    write_model(
        &model_out,
        &ModelDocument {
            provenance: provenance.clone(),
            model,
        },
    )?;
    write_train_report(
        &report_out,
        &TrainDocument {
            provenance,
            report: outcome.report.clone(),
        },
    )?;

    let best = outcome.report.best();
    println!(
        "train: {} examples (train {}, validation {}, test {}), {} epochs, stopped by {}",
        post.len(),
        outcome.splits.train.len(),
        outcome.splits.validation.len(),
        outcome.splits.test.len(),
        outcome.report.epochs.len() - 1,
        outcome.report.stop_reason
    );
    println!(
        "  best epoch {}: loss train {:.6} validation {:.6} test {:.6}",
        best.epoch, best.train_loss, best.val_loss, best.test_loss
    );
    println!(
        "  model -> {}, report -> {}",
        model_out.display(),
        report_out.display()
    );
    Ok(())
}

fn load_model(flag: Option<PathBuf>, cfg: &RunConfig) -> Result<Model> {
    Ok(read_model(&input(flag, &cfg.paths.model, "--model")?)?.model)
}

/// Evaluates with features consistent with the model's residual settings.
fn model_report(
    model: &Model,
    source: DataSource,
    cfg: &RunConfig,
    split: SplitSelection,
) -> Result<EvalReport> {
    let (records, ma, filter) = load_records(source, cfg, model.ma, model.filter)?;
    if ma != model.ma || filter != model.filter {
        return Err(Error::InvalidConfig(format!(
            "features were extracted with h1 {} h2 {} and filter {:?}, the model expects h1 {} h2 {} and filter {:?}",
            ma.h1, ma.h2, filter, model.ma.h1, model.ma.h2, model.filter
        )));
    }
    evaluate(model, &records, split)
}

fn effective_config(mut cfg: RunConfig, model: &Model) -> RunConfig {
    cfg.ma = model.ma;
    cfg.filter = model.filter;
    cfg.train = model.train.clone();
    cfg
}

fn eval(a: EvalArgs, command_line: &str) -> Result<()> {
    let cfg = load_config(&a.config)?;
    let model = load_model(a.model, &cfg)?;
    let out = output(a.out, &cfg.paths.report, "eval_report.toml");
    let report = model_report(&model, a.source, &cfg, a.split)?;
    let cfg = effective_config(cfg, &model);
    write_eval_report(
        &out,
        &EvalDocument {
            provenance: Provenance::new(command_line, &cfg),
            report: report.clone(),
        },
    )?;

    println!(
        "eval: threshold {}, report -> {}",
        report.threshold,
        out.display()
    );
    for (name, s) in &report.splits {
        let marker = if name == report.selected_split.as_str() {
            "*"
        } else {
            " "
        };
        println!(
            "{marker} {name:<10} n {:>4}  acc {}  tpr {}  tnr {}  auc {}  (tp {} fn {} tn {} fp {})",
            s.n,
            fmt_rate(Some(s.metrics.accuracy)),
            fmt_rate(s.metrics.tpr),
            fmt_rate(s.metrics.tnr),
            s.auc.map_or_else(|| "undefined".into(), |v| format!("{v:.4}")),
            s.confusion.tp,
            s.confusion.fn_,
            s.confusion.tn,
            s.confusion.fp
        );
    }
    for (name, f) in [("raw", &report.pre_ma), ("residual", &report.post_ma)] {
        println!(
            "  {name:<8} Cohen's d  mu {:+.3} (p {:.3e})  sigma {:+.3} (p {:.3e})",
            f.effect_mu.cohens_d,
            f.effect_mu.p_value,
            f.effect_sigma.cohens_d,
            f.effect_sigma.p_value
        );
    }
    Ok(())
}

fn detect_cmd(a: DetectArgs, command_line: &str) -> Result<()> {
    let cfg = load_config(&a.config)?;
    let model = load_model(a.model, &cfg)?;
    let corpus_path = input(a.corpus, &cfg.paths.corpus, "--corpus")?;
    let out = a.out.unwrap_or_else(|| PathBuf::from("detections.csv"));
    let (_, signals) = read_corpus(&corpus_path)?;
    let dc = DetectConfig {
        window_s: a.window_s,
        hop_s: a.hop_s.unwrap_or(a.window_s),
        threshold: a.threshold.unwrap_or(model.threshold),
    };
    if !(0.0..=1.0).contains(&dc.threshold) {
        return Err(Error::InvalidConfig(format!(
            "threshold {} outside [0, 1]",
            dc.threshold
        )));
    }

    let exec = if a.bench {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let t = Instant::now();
    let detections = detect(&model, &signals, &dc, exec)?;
    let elapsed = t.elapsed();

    let cfg = effective_config(cfg, &model);
    write_detections(
        &out,
        &detections,
        dc.threshold,
        Some(&Provenance::new(command_line, &cfg)),
    )?;
    let hits = detections.iter().filter(|d| d.label == Label::Swd).count();
    println!(
        "detect: {} windows over {} signals, {hits} flagged SWD at threshold {} -> {}",
        detections.len(),
        signals.len(),
        dc.threshold,
        out.display()
    );
    if a.bench {
        let samples: usize = signals.iter().map(|s| s.len()).sum();
        let recorded: f64 = signals.iter().map(|s| s.duration_s()).sum();
        let secs = elapsed.as_secs_f64();
        println!(
            "  bench: {samples} samples ({recorded:.1} s of signal) in {secs:.4} s on one thread, {:.0}x real time",
            recorded / secs
        );
    }
    Ok(())
}

fn roc_cmd(a: RocArgs, command_line: &str) -> Result<()> {
    let cfg = load_config(&a.config)?;
    let model = load_model(a.model, &cfg)?;
    let out = a.out.unwrap_or_else(|| PathBuf::from("roc.csv"));
    let report = model_report(&model, a.source, &cfg, a.split)?;
    let cfg = effective_config(cfg, &model);
    write_roc_csv(
        &out,
        &report.roc,
        Some(&Provenance::new(command_line, &cfg)),
    )?;
    println!(
        "roc: {} points on the {} split, AUC {:.6} -> {}",
        report.roc.points.len(),
        report.selected_split,
        report.roc.auc,
        out.display()
    );
    Ok(())
}
