//! CSV and report formatting. Numbers use the shortest representation that
//! round-trips, switching to exponent form for very small or large magnitudes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// In-memory CSV: optional `#` comment lines, a header row, then rows.
#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self::with_comments(&[], header)
    }

    pub fn with_comments(comments: &[String], header: &[&str]) -> Self {
        let mut text = String::new();
        for c in comments {
            text.push_str("# ");
            text.push_str(c);
            text.push('\n');
        }
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(&fmt_num(*v));
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write_to(&self, path: &Path) -> Result<PathBuf, CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        }
        fs::write(path, &self.text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Ok(path.to_path_buf())
    }
}

/// `key = value` report lines.
#[derive(Debug, Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Self { text: format!("# {title}\n") }
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, &fmt_num(value))
    }

    pub fn int(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.text(key, &value.to_string())
    }

    pub fn text(&mut self, key: &str, value: &str) -> &mut Self {
        let _ = writeln!(self.text, "{key} = {value}");
        self
    }

    pub fn finish(&self) -> String {
        self.text.clone()
    }
}
