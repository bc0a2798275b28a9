//! Rendering of command results as JSON, CSV or plain text, and the
//! mapping from outcomes to exit codes.

use clap::ValueEnum;
use permx_core::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A search stopped at its budget or cap; the report holds the best so far.
    Incomplete,
    /// A check ran to completion and found a violated inequality.
    CheckFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::CheckFailed => 1,
            Status::Incomplete => 3,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Usage(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_resource_limit() => 3,
            Failure::Core(_) | Failure::Usage(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub struct Report {
    pub json: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub text: String,
    pub status: Status,
}

impl Report {
    pub fn new<T: Serialize>(value: &T) -> Result<Self, Failure> {
        let json = serde_json::to_value(value).map_err(|e| Failure::Internal(e.to_string()))?;
        Ok(Report {
            json,
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
            text: String::new(),
            status: Status::Success,
        })
    }

    pub fn csv(mut self, header: &[&'static str], rows: Vec<Vec<String>>) -> Self {
        self.csv_header = header.to_vec();
        self.csv_rows = rows;
        self
    }

    /// One-row CSV.
    pub fn csv_row(self, header: &[&'static str], row: Vec<String>) -> Self {
        self.csv(header, vec![row])
    }

    pub fn text(mut self, text: impl Into<String>) -> Self {
        self.text = text.into();
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn fail_unless(self, ok: bool) -> Self {
        if ok {
            self
        } else {
            self.status(Status::CheckFailed)
        }
    }

    pub fn render(&self, format: Format, wall_ms: Option<f64>) -> String {
        match format {
            Format::Json => {
                let mut json = self.json.clone();
                if let Some(ms) = wall_ms {
                    json = match json {
                        Value::Object(mut map) => {
                            map.insert("wall_ms".into(), ms.into());
                            Value::Object(map)
                        }
                        other => serde_json::json!({"result": other, "wall_ms": ms}),
                    };
                }
                format!("{json}\n")
            }
            Format::Csv => {
                let mut out = csv_line(self.csv_header.iter().copied());
                for row in &self.csv_rows {
                    out += &csv_line(row.iter().map(String::as_str));
                }
                if let Some(ms) = wall_ms {
                    eprintln!("wall_ms,{ms:.3}");
                }
                out
            }
            Format::Text => {
                let mut out = self.text.clone();
                if !out.ends_with('\n') {
                    out.push('\n');
                }
                if let Some(ms) = wall_ms {
                    out += &format!("wall_ms: {ms:.3}\n");
                }
                out
            }
        }
    }
}

fn csv_line<'a>(fields: impl Iterator<Item = &'a str>) -> String {
    let mut line = fields
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}
