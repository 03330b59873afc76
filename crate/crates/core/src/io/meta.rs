use std::path::Path;

use crate::error::{Error, Result};

/// Ordered `# key: value` lines at the top of a tabular file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetaHeader {
    pub entries: Vec<(String, String)>,
}

impl MetaHeader {
    pub fn new(format: &str, version: u32) -> Self {
        let mut h = MetaHeader::default();
        h.push("format", format);
        h.push("version", version.to_string());
        h
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        let value: String = value.into();
        self.entries
            .push((key.to_string(), value.replace(['\n', '\r'], " ")));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("# {k}: {v}\n"))
            .collect()
    }

    /// Splits `text` into its header and the body that follows it, checking
    /// the format name and version.
    pub fn parse<'t>(
        text: &'t str,
        path: &Path,
        format: &str,
        version: u32,
    ) -> Result<(MetaHeader, &'t str, u64)> {
        let shown = path.display().to_string();
        let mut header = MetaHeader::default();
        let mut consumed = 0usize;
        let mut lines = 0u64;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            consumed += line.len();
            lines += 1;
            let rest = rest.trim();
            let (k, v) = rest.split_once(':').ok_or_else(|| Error::MalformedHeader {
                path: shown.clone(),
                reason: format!("line {lines} is not `# key: value`"),
            })?;
            header
                .entries
                .push((k.trim().to_string(), v.trim().to_string()));
        }
        match header.entries.first() {
            None => {
                return Err(Error::MissingHeader { path: shown });
            }
            Some((k, v)) if k != "format" || v != format => {
                return Err(Error::MalformedHeader {
                    path: shown,
                    reason: format!("expected `format: {format}`, found `{k}: {v}`"),
                });
            }
            _ => {}
        }
        let found = header
            .get("version")
            .ok_or_else(|| Error::MalformedHeader {
                path: shown.clone(),
                reason: "missing version".into(),
            })?;
        if found != version.to_string() {
            return Err(Error::UnsupportedVersion {
                path: shown,
                found: found.to_string(),
                expected: version.to_string(),
            });
        }
        Ok((header, &text[consumed..], lines))
    }

    pub fn require<T: std::str::FromStr>(&self, key: &str, path: &Path) -> Result<T> {
        let raw = self.get(key).ok_or_else(|| Error::MalformedHeader {
            path: path.display().to_string(),
            reason: format!("missing `{key}`"),
        })?;
        raw.parse().map_err(|_| Error::MalformedHeader {
            path: path.display().to_string(),
            reason: format!("cannot parse `{key}` value {raw:?}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render_round_trip() {
        let mut h = MetaHeader::new("x", 1);
        h.push("note", "a: b\nc");
        let text = format!("{}body\n", h.render());
        let (back, body, n) = MetaHeader::parse(&text, Path::new("f"), "x", 1).unwrap();
        assert_eq!(back.get("note"), Some("a: b c"));
        assert_eq!(body, "body\n");
        assert_eq!(n, 3);
    }

    #[test]
    fn header_errors() {
        let p = Path::new("f");
        assert!(matches!(
            MetaHeader::parse("", p, "x", 1),
            Err(Error::MissingHeader { .. })
        ));
        assert!(matches!(
            MetaHeader::parse("a,b\n", p, "x", 1),
            Err(Error::MissingHeader { .. })
        ));
        assert!(matches!(
            MetaHeader::parse("# format: y\n# version: 1\n", p, "x", 1),
            Err(Error::MalformedHeader { .. })
        ));
        assert!(matches!(
            MetaHeader::parse("# format: x\n# version: 9\n", p, "x", 1),
            Err(Error::UnsupportedVersion { .. })
        ));
    }
}
