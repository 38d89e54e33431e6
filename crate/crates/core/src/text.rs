//! Line-oriented text input shared by every file format in the crate.
//!
//! Blank lines and lines starting with `#` are skipped. The field separator
//! is detected once per file from the first data line that contains a tab,
//! comma, or space, in that priority order.

use std::io::BufRead;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Separator {
    Tab,
    Comma,
    Whitespace,
}

impl Separator {
    fn detect(line: &str) -> Option<Self> {
        if line.contains('\t') {
            Some(Separator::Tab)
        } else if line.contains(',') {
            Some(Separator::Comma)
        } else if line.contains(' ') {
            Some(Separator::Whitespace)
        } else {
            None
        }
    }

    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Separator::Tab => line.split('\t').map(str::trim).collect(),
            Separator::Comma => line.split(',').map(str::trim).collect(),
            Separator::Whitespace => line.split_whitespace().collect(),
        }
    }
}

/// A data line split into fields, tagged with its 1-based line number.
pub(crate) struct Record {
    pub line: usize,
    pub fields: Vec<String>,
}

/// Reads all data lines of `reader`, splitting fields with the detected separator.
pub(crate) fn records<R: BufRead>(reader: R) -> Result<Vec<Record>> {
    let mut separator = None;
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if separator.is_none() {
            separator = Separator::detect(trimmed);
        }
        let fields = match separator {
            Some(sep) => sep.split(trimmed),
            None => vec![trimmed],
        };
        out.push(Record {
            line: idx + 1,
            fields: fields.into_iter().map(str::to_owned).collect(),
        });
    }
    Ok(out)
}
