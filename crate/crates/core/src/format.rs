//! Shared text-file conventions: `#`-prefixed provenance headers followed by
//! a CSV body. Reals are written with 17 significant digits, which is enough
//! to round-trip every `f64`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt_real(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

/// Ordered `key = value` header written as `# key = value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header {
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn new(kind: &str) -> Self {
        let mut h = Header::default();
        h.push("generator", format!("qwalk3 {VERSION}"));
        h.push("kind", kind);
        h
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
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
            .map(|(k, v)| format!("# {k} = {v}\n"))
            .collect()
    }

    pub fn map(&self) -> BTreeMap<String, String> {
        self.entries.iter().cloned().collect()
    }
}

/// A parsed CSV file: header, column names and raw body rows with their
/// 1-based line numbers.
pub struct CsvDocument {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<(usize, Vec<String>)>,
}

impl CsvDocument {
    pub fn parse(kind: &'static str, text: &str) -> Result<Self> {
        let mut header = Header::default();
        let mut columns = None;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if let Some(rest) = line.strip_prefix('#') {
                if columns.is_none() {
                    if let Some((k, v)) = rest.split_once('=') {
                        header.push(k.trim(), v.trim());
                    }
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
            if columns.is_none() {
                columns = Some(fields);
            } else {
                rows.push((line_no, fields));
            }
        }
        let columns = columns.ok_or(Error::Parse {
            kind,
            line: text.lines().count(),
            message: "missing column header".into(),
        })?;
        if let Some(found) = header.get("kind") {
            if found != kind {
                return Err(Error::Parse {
                    kind,
                    line: 1,
                    message: format!("file kind is '{found}'"),
                });
            }
        }
        Ok(CsvDocument {
            header,
            columns,
            rows,
        })
    }

    pub fn expect_columns(&self, kind: &'static str, expected: &[&str]) -> Result<()> {
        if self.columns.iter().map(String::as_str).ne(expected.iter().copied()) {
            return Err(Error::Parse {
                kind,
                line: 0,
                message: format!(
                    "columns {:?}, expected {:?}",
                    self.columns, expected
                ),
            });
        }
        for (line, fields) in &self.rows {
            if fields.len() != expected.len() {
                return Err(Error::Parse {
                    kind,
                    line: *line,
                    message: format!("{} fields, expected {}", fields.len(), expected.len()),
                });
            }
        }
        Ok(())
    }

    pub fn header_value<V: std::str::FromStr>(&self, kind: &'static str, key: &str) -> Result<V> {
        let raw = self.header.get(key).ok_or_else(|| Error::Parse {
            kind,
            line: 0,
            message: format!("missing header key '{key}'"),
        })?;
        raw.parse().map_err(|_| Error::Parse {
            kind,
            line: 0,
            message: format!("bad value '{raw}' for header key '{key}'"),
        })
    }
}

pub fn field<V: std::str::FromStr>(kind: &'static str, line: usize, raw: &str) -> Result<V> {
    raw.parse().map_err(|_| Error::Parse {
        kind,
        line,
        message: format!("cannot parse '{raw}'"),
    })
}

pub fn opt_field<V: std::str::FromStr>(
    kind: &'static str,
    line: usize,
    raw: &str,
) -> Result<Option<V>> {
    if raw.is_empty() {
        Ok(None)
    } else {
        field(kind, line, raw).map(Some)
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
