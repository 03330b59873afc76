use std::fmt::Write as _;
use std::path::Path;

use super::meta::MetaHeader;
use super::{fmt_f64, write_text, Provenance};
use crate::error::Result;
use crate::eval::RocCurve;
use crate::pipeline::Detection;

fn with_meta(
    format: &str,
    provenance: Option<&Provenance>,
    extra: &[(&str, String)],
) -> MetaHeader {
    let mut meta = MetaHeader::new(format, 1);
    for (k, v) in extra {
        meta.push(k, v.clone());
    }
    if let Some(p) = provenance {
        p.push_to(&mut meta);
    }
    meta
}

/// `id,window_start,window_start_s,score,class`, one row per window.
pub fn write_detections(
    path: &Path,
    detections: &[Detection],
    threshold: f64,
    provenance: Option<&Provenance>,
) -> Result<()> {
    let meta = with_meta(
        "swd-detections",
        provenance,
        &[("threshold", fmt_f64(threshold))],
    );
    let mut text = meta.render();
    text.push_str("id,window_start,window_start_s,score,class\n");
    for d in detections {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            d.signal_id,
            d.start_index,
            fmt_f64(d.start_s),
            fmt_f64(d.score),
            d.label
        );
    }
    write_text(path, &text)
}

/// `fpr,tpr,threshold`, from the `+inf` threshold down to `-inf`.
pub fn write_roc_csv(path: &Path, roc: &RocCurve, provenance: Option<&Provenance>) -> Result<()> {
    let meta = with_meta("swd-roc", provenance, &[("auc", fmt_f64(roc.auc))]);
    let mut text = meta.render();
    text.push_str("fpr,tpr,threshold\n");
    for p in &roc.points {
        let _ = writeln!(
            text,
            "{},{},{}",
            fmt_f64(p.fpr),
            fmt_f64(p.tpr),
            fmt_f64(p.threshold)
        );
    }
    write_text(path, &text)
}
