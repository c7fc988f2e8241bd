use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const TOOL: &str = concat!("adiabat ", env!("CARGO_PKG_VERSION"));

/// 17 significant digits, enough to round-trip any double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Sink {
    path: Option<PathBuf>,
    inner: Box<dyn Write>,
}

impl Sink {
    fn open(path: Option<&Path>) -> CliResult<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
                CliError::Io {
                    path: p.to_path_buf(),
                    source,
                }
            })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self {
            path: path.map(Path::to_path_buf),
            inner,
        })
    }

    fn fail(&self, source: io::Error) -> CliError {
        CliError::Io {
            path: self
                .path
                .clone()
                .unwrap_or_else(|| PathBuf::from("<stdout>")),
            source,
        }
    }
}

/// CSV table preceded by `#` comment lines.
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Self {
            comments: vec![format!("{TOOL} {command}")],
            columns,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn write_to(&self, path: Option<&Path>) -> CliResult<()> {
        let mut sink = Sink::open(path)?;
        let result = self.write(&mut sink.inner);
        result.map_err(|e| sink.fail(e))
    }

    fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        for line in &self.comments {
            writeln!(out, "# {line}")?;
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()
    }
}

/// One JSON object and a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult<()> {
    let mut sink = Sink::open(path)?;
    let text = serde_json::to_string(value).expect("report types serialize");
    let result = writeln!(sink.inner, "{text}").and_then(|_| sink.inner.flush());
    result.map_err(|e| sink.fail(e))
}

pub fn write_text(text: &str, path: Option<&Path>) -> CliResult<()> {
    let mut sink = Sink::open(path)?;
    let result = sink
        .inner
        .write_all(text.as_bytes())
        .and_then(|_| sink.inner.flush());
    result.map_err(|e| sink.fail(e))
}
