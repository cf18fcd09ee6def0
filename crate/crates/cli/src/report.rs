//! Sectioned key/value reports in plain or `key<TAB>value` form.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Machine,
}

#[derive(Debug, Default)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
    /// Verbatim lines (state lines, certificates) printed after the sections.
    lines: Vec<String>,
}

impl Report {
    pub fn section(&mut self, title: &str) -> &mut Self {
        self.sections.push((title.to_string(), Vec::new()));
        self
    }

    pub fn row(&mut self, key: &str, value: impl ToString) -> &mut Self {
        if self.sections.is_empty() {
            self.section("report");
        }
        let (_, rows) = self.sections.last_mut().expect("section exists");
        rows.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&mut self, line: impl Into<String>) -> &mut Self {
        self.lines.push(line.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Plain => {
                let width = self
                    .sections
                    .iter()
                    .flat_map(|(_, rows)| rows.iter().map(|(k, _)| k.len()))
                    .max()
                    .unwrap_or(0);
                for (i, (title, rows)) in self.sections.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "[{title}]");
                    for (k, v) in rows {
                        let _ = writeln!(out, "  {k:<width$}  {v}");
                    }
                }
                if !self.lines.is_empty() && !self.sections.is_empty() {
                    out.push('\n');
                }
            }
            Format::Machine => {
                for (title, rows) in &self.sections {
                    for (k, v) in rows {
                        let _ = writeln!(out, "{title}.{k}\t{v}");
                    }
                }
            }
        }
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

/// Fixed six-digit rendering for distances and residuals.
pub fn fixed(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Scientific rendering for values near rounding level.
pub fn sci(v: f64) -> String {
    format!("{v:.3e}")
}
