//! Corpus CSV: one signal per record, samples `;`-separated in one field.
//!
//! ```text
//! # format: swd-corpus
//! # version: 1
//! # fs: 256.0
//! # duration_s: 20.0
//! # source: <free text>
//! id,patient_id,channel,label,fs,n_samples,samples
//! swd-000000,synthetic-00,Fp1,SWD,256.0,5120,1.5;-3.25;...
//! ```

use std::path::Path;

use super::meta::MetaHeader;
use super::{fmt_f64, read_text, write_text, Provenance};
use crate::error::{Error, Result};
use crate::signal::{Label, Signal};

pub const CORPUS_FORMAT: &str = "swd-corpus";
pub const CORPUS_VERSION: u32 = 1;
const COLUMNS: [&str; 7] = [
    "id",
    "patient_id",
    "channel",
    "label",
    "fs",
    "n_samples",
    "samples",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusHeader {
    pub fs: f64,
    pub duration_s: f64,
    pub source: String,
    pub provenance: Option<Provenance>,
}

pub fn write_corpus(path: &Path, signals: &[Signal], header: &CorpusHeader) -> Result<()> {
    let mut meta = MetaHeader::new(CORPUS_FORMAT, CORPUS_VERSION);
    meta.push("fs", fmt_f64(header.fs));
    meta.push("duration_s", fmt_f64(header.duration_s));
    meta.push("source", header.source.clone());
    if let Some(p) = &header.provenance {
        p.push_to(&mut meta);
    }

    let mut body = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Parse {
        path: path.display().to_string(),
        reason: e.to_string(),
    };
    body.write_record(COLUMNS).map_err(csv_err)?;
    for s in signals {
        if s.fs != header.fs {
            return Err(Error::InvalidConfig(format!(
                "signal {} has fs {} but the corpus header says {}",
                s.id, s.fs, header.fs
            )));
        }
        let samples = s
            .samples
            .iter()
            .map(|&v| fmt_f64(v))
            .collect::<Vec<_>>()
            .join(";");
        body.write_record([
            s.id.as_str(),
            s.patient_id.as_deref().unwrap_or(""),
            s.channel.as_str(),
            s.label.map(Label::as_str).unwrap_or(""),
            &fmt_f64(s.fs),
            &s.samples.len().to_string(),
            &samples,
        ])
        .map_err(csv_err)?;
    }
    let body = body
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?;
    let text = meta.render() + &String::from_utf8(body).expect("csv output is utf-8");
    write_text(path, &text)
}

pub fn read_corpus(path: &Path) -> Result<(CorpusHeader, Vec<Signal>)> {
    let text = read_text(path)?;
    let (meta, body, header_lines) = MetaHeader::parse(&text, path, CORPUS_FORMAT, CORPUS_VERSION)?;
    let fs: f64 = meta.require("fs", path)?;
    let duration_s: f64 = meta.require("duration_s", path)?;
    let shown = path.display().to_string();
    if !(fs > 0.0 && fs.is_finite()) {
        return Err(Error::MalformedHeader {
            path: shown,
            reason: format!("fs must be positive, got {fs}"),
        });
    }
    let expected_n = (duration_s * fs).round() as usize;

    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(true)
        .from_reader(body.as_bytes());
    let cols = reader.headers().map_err(|e| Error::MalformedHeader {
        path: shown.clone(),
        reason: e.to_string(),
    })?;
    if cols.iter().ne(COLUMNS) {
        return Err(Error::MalformedHeader {
            path: shown,
            reason: format!("expected columns {}", COLUMNS.join(",")),
        });
    }

    let mut signals = Vec::new();
    for (record, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::MalformedRecord {
            path: shown.clone(),
            record,
            line: header_lines + e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = header_lines + row.position().map_or(0, |p| p.line());
        let truncated = |reason: String| Error::TruncatedRecord {
            path: shown.clone(),
            record,
            line,
            reason,
        };
        let malformed = |reason: String| Error::MalformedRecord {
            path: shown.clone(),
            record,
            line,
            reason,
        };
        if row.len() < COLUMNS.len() {
            return Err(truncated(format!(
                "{} of {} fields",
                row.len(),
                COLUMNS.len()
            )));
        }
        if row.len() > COLUMNS.len() {
            return Err(malformed(format!(
                "{} fields, expected {}",
                row.len(),
                COLUMNS.len()
            )));
        }
        let label = match &row[3] {
            "" => None,
            raw => Some(raw.parse::<Label>().map_err(|l| Error::UnknownLabel {
                path: shown.clone(),
                record,
                line,
                label: l,
            })?),
        };
        let rec_fs: f64 = row[4]
            .parse()
            .map_err(|_| malformed(format!("bad fs {:?}", &row[4])))?;
        if rec_fs != fs {
            return Err(Error::InconsistentFs {
                path: shown.clone(),
                record,
                line,
                found: rec_fs,
                expected: fs,
            });
        }
        let n: usize = row[5]
            .parse()
            .map_err(|_| malformed(format!("bad n_samples {:?}", &row[5])))?;
        let samples: Vec<f64> = if row[6].is_empty() {
            Vec::new()
        } else {
            row[6]
                .split(';')
                .enumerate()
                .map(|(i, v)| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| malformed(format!("bad sample {i}: {v:?}")))
                })
                .collect::<Result<_>>()?
        };
        if samples.len() < n {
            return Err(truncated(format!("{} of {n} samples", samples.len())));
        }
        if samples.len() > n {
            return Err(malformed(format!(
                "{} samples, n_samples says {n}",
                samples.len()
            )));
        }
        if n != expected_n {
            return Err(truncated(format!(
                "{n} samples, but {duration_s} s at {fs} Hz needs {expected_n}"
            )));
        }
        signals.push(Signal {
            id: row[0].to_string(),
            samples,
            fs,
            channel: row[2].to_string(),
            label,
            patient_id: (!row[1].is_empty()).then(|| row[1].to_string()),
        });
    }
    Ok((
        CorpusHeader {
            fs,
            duration_s,
            source: meta.get("source").unwrap_or_default().to_string(),
            provenance: Provenance::from_meta(&meta),
        },
        signals,
    ))
}
