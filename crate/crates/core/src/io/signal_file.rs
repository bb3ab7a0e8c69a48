use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Reads a text signal file: one decimal sample per line, blank lines and
/// lines starting with `#` ignored.
pub fn read_signal_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::InvalidData => Error::Format {
            path: path.display().to_string(),
            line: None,
            message: "file is not valid UTF-8".into(),
        },
        _ => Error::io(path, e),
    })?;
    parse_signal_text(&text, &path.display().to_string())
}

pub fn parse_signal_text(text: &str, origin: &str) -> Result<Vec<f64>> {
    let mut samples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Format {
            path: origin.to_string(),
            line: Some(i + 1),
            message: format!("'{line}' is not a decimal number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Format {
                path: origin.to_string(),
                line: Some(i + 1),
                message: format!("'{line}' is not finite"),
            });
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(Error::Format {
            path: origin.to_string(),
            line: None,
            message: "no samples".into(),
        });
    }
    Ok(samples)
}

/// Renders samples one per line in shortest round-trip form.
pub fn format_signal(samples: &[f64]) -> String {
    let mut out = String::with_capacity(samples.len() * 24);
    for v in samples {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn write_signal_file(path: impl AsRef<Path>, samples: &[f64]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_signal(samples)).map_err(|e| Error::io(path, e))
}
