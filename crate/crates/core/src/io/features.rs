//! Feature CSV: residual features next to raw-window features.
//!
//! ```text
//! # format: swd-features
//! # version: 1
//! # ma_h1: 2
//! # ma_h2: 42
//! # lowpass_hz: 30.0
//! # highpass_hz: off
//! id,label,mu,sigma,mu_pre,sigma_pre
//! ```

use std::path::Path;

use super::meta::MetaHeader;
use super::{fmt_f64, read_text, write_text, Provenance};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::filter::FilterConfig;
use crate::ma::MaConfig;
use crate::pipeline::FeatureRecord;
use crate::signal::Label;

pub const FEATURES_FORMAT: &str = "swd-features";
const VERSION: u32 = 1;
const COLUMNS: [&str; 6] = ["id", "label", "mu", "sigma", "mu_pre", "sigma_pre"];

#[derive(Debug, Clone, PartialEq)]
pub struct FeaturesHeader {
    pub ma: MaConfig,
    pub filter: FilterConfig,
    pub provenance: Option<Provenance>,
}

fn cutoff_text(c: Option<f64>) -> String {
    c.map_or_else(|| "off".to_string(), fmt_f64)
}

fn parse_cutoff(meta: &MetaHeader, key: &str, path: &Path) -> Result<Option<f64>> {
    match meta.get(key) {
        None | Some("off") => Ok(None),
        Some(_) => meta.require(key, path).map(Some),
    }
}

pub fn write_features(
    path: &Path,
    records: &[FeatureRecord],
    header: &FeaturesHeader,
) -> Result<()> {
    let mut meta = MetaHeader::new(FEATURES_FORMAT, VERSION);
    meta.push("ma_h1", header.ma.h1.to_string());
    meta.push("ma_h2", header.ma.h2.to_string());
    meta.push("lowpass_hz", cutoff_text(header.filter.lowpass_hz));
    meta.push("highpass_hz", cutoff_text(header.filter.highpass_hz));
    if let Some(p) = &header.provenance {
        p.push_to(&mut meta);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Parse {
        path: path.display().to_string(),
        reason: e.to_string(),
    };
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.id(),
            r.label().map(Label::as_str).unwrap_or(""),
            &fmt_f64(r.post.mu),
            &fmt_f64(r.post.sigma),
            &fmt_f64(r.pre.mu),
            &fmt_f64(r.pre.sigma),
        ])
        .map_err(csv_err)?;
    }
    let body = w
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?;
    write_text(
        path,
        &(meta.render() + &String::from_utf8(body).expect("utf-8")),
    )
}

pub fn read_features(path: &Path) -> Result<(FeaturesHeader, Vec<FeatureRecord>)> {
    let text = read_text(path)?;
    let (meta, body, header_lines) = MetaHeader::parse(&text, path, FEATURES_FORMAT, VERSION)?;
    let shown = path.display().to_string();
    let header = FeaturesHeader {
        ma: MaConfig {
            h1: meta.require("ma_h1", path)?,
            h2: meta.require("ma_h2", path)?,
        },
        filter: FilterConfig {
            lowpass_hz: parse_cutoff(&meta, "lowpass_hz", path)?,
            highpass_hz: parse_cutoff(&meta, "highpass_hz", path)?,
        },
        provenance: Provenance::from_meta(&meta),
    };
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
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
    let mut out = Vec::new();
    for (record, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::MalformedRecord {
            path: shown.clone(),
            record,
            line: header_lines,
            reason: e.to_string(),
        })?;
        let line = header_lines + row.position().map_or(0, |p| p.line());
        if row.len() != COLUMNS.len() {
            return Err(Error::TruncatedRecord {
                path: shown.clone(),
                record,
                line,
                reason: format!("{} of {} fields", row.len(), COLUMNS.len()),
            });
        }
        let label = match &row[1] {
            "" => None,
            raw => Some(raw.parse::<Label>().map_err(|l| Error::UnknownLabel {
                path: shown.clone(),
                record,
                line,
                label: l,
            })?),
        };
        let num = |i: usize| -> Result<f64> {
            row[i].parse().map_err(|_| Error::MalformedRecord {
                path: shown.clone(),
                record,
                line,
                reason: format!("bad {} value {:?}", COLUMNS[i], &row[i]),
            })
        };
        let id = row[0].to_string();
        out.push(FeatureRecord {
            post: FeatureVector::new(num(2)?, num(3)?, id.clone(), label),
            pre: FeatureVector::new(num(4)?, num(5)?, id, label),
        });
    }
    Ok((header, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let recs = vec![
            FeatureRecord {
                post: FeatureVector::new(-0.1, 71.25, "a", Some(Label::Swd)),
                pre: FeatureVector::new(1.0 / 3.0, 120.0, "a", Some(Label::Swd)),
            },
            FeatureRecord {
                post: FeatureVector::new(1e-17, 0.0, "b", None),
                pre: FeatureVector::new(2.0, 5e-300, "b", None),
            },
        ];
        let header = FeaturesHeader {
            ma: MaConfig::default(),
            filter: FilterConfig::default(),
            provenance: None,
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        write_features(&p, &recs, &header).unwrap();
        let (h, back) = read_features(&p).unwrap();
        assert_eq!(h, header);
        assert_eq!(back, recs);
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains("id,label,mu,sigma,mu_pre,sigma_pre\n"));
    }

    #[test]
    fn bad_label() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        std::fs::write(
            &p,
            "# format: swd-features\n# version: 1\n# ma_h1: 2\n# ma_h2: 42\n\
             id,label,mu,sigma,mu_pre,sigma_pre\na,maybe,0,1,0,1\n",
        )
        .unwrap();
        assert!(matches!(read_features(&p), Err(Error::UnknownLabel { .. })));
    }
}
