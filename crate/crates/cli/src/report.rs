use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Every validated parameter of a run, echoed at the top of its report.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    entries: Map<String, Value>,
}

impl RunConfig {
    pub fn new(command: &str, format: Format) -> Self {
        let mut c = RunConfig::default();
        c.set("command", command);
        c.set("format", format.name());
        c
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.entries.insert(key.to_string(), value.into());
        self
    }

    fn lines(&self) -> impl Iterator<Item = String> + '_ {
        self.entries.iter().map(|(k, v)| match v {
            Value::String(s) => format!("# {k}: {s}"),
            other => format!("# {k}: {other}"),
        })
    }
}

/// A finished report in all three output formats.
pub struct Report {
    pub config: RunConfig,
    /// Human-readable body, printed after the config echo.
    pub text: String,
    /// Rows including a header row.
    pub csv: Vec<Vec<String>>,
    pub result: Value,
    /// `None` for reports that verify nothing.
    pub passed: Option<bool>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                for line in self.config.lines() {
                    writeln!(out, "{line}").unwrap();
                }
                out.push_str(&self.text);
                if let Some(ok) = self.passed {
                    writeln!(out, "{}", if ok { "PASS" } else { "FAIL" }).unwrap();
                }
                out
            }
            Format::Json => {
                let mut doc = json!({
                    "config": Value::Object(self.config.entries.clone()),
                    "result": self.result,
                });
                if let Some(ok) = self.passed {
                    doc["status"] = Value::from(if ok { "pass" } else { "fail" });
                }
                // serde_json's default map keeps keys sorted
                let mut s = serde_json::to_string_pretty(&doc).expect("values are serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut out = String::new();
                for line in self.config.lines() {
                    writeln!(out, "{line}").unwrap();
                }
                for row in &self.csv {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    writeln!(out, "{}", cells.join(",")).unwrap();
                }
                if let Some(ok) = self.passed {
                    writeln!(out, "# status: {}", if ok { "pass" } else { "fail" }).unwrap();
                }
                out
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..rows.iter().map(Vec::len).max().unwrap_or(0))
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(|c| c.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i + 1 == row.len() {
                line.push_str(cell);
            } else {
                let pad = widths[i] - cell.chars().count();
                write!(line, "{cell}{}  ", " ".repeat(pad)).unwrap();
            }
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_table() {
        let rows = vec![
            vec!["degree".to_string(), "dim".to_string()],
            vec!["0".to_string(), "1".to_string()],
            vec!["12".to_string(), "3".to_string()],
        ];
        assert_eq!(table(&rows), "degree  dim\n0       1\n12      3\n");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_cell("a,b"), "\"a,b\"");
        assert_eq!(csv_cell("(1,3)"), "\"(1,3)\"");
        assert_eq!(csv_cell("x"), "x");
    }
}
