//! Record emission as json-lines or csv.

use std::io::{self, Write};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

pub const SCHEMA_VERSION: &str = "1";

/// Envelope around every payload.
#[derive(Debug, Serialize)]
pub struct OutputRecord<'a, T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'a str,
    pub payload: &'a T,
    pub elapsed_ms: u64,
}

/// Payloads with only scalar fields; `Default` supplies the csv header.
pub trait FlatRecord: Serialize + Default {}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("field {0:?} is nested and cannot be written as csv")]
    Nested(String),
}

pub struct Sink<W: Write> {
    format: Format,
    command: String,
    start: Instant,
    json: Option<W>,
    csv: Option<csv::Writer<W>>,
}

impl<W: Write> Sink<W> {
    pub fn new(format: Format, command: &str, out: W) -> Self {
        let (json, csv) = match format {
            Format::JsonLines => (Some(out), None),
            Format::Csv => (None, Some(csv::WriterBuilder::new().has_headers(false).from_writer(out))),
        };
        Sink { format, command: command.to_owned(), start: Instant::now(), json, csv }
    }

    fn elapsed_ms(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }

    /// Writes the csv header for records of type `T`; nothing for json-lines.
    pub fn begin<T: FlatRecord>(&mut self) -> Result<(), EmitError> {
        if let Some(w) = self.csv.as_mut() {
            let mut header = vec!["schema_version".to_owned(), "command".to_owned()];
            header.extend(flat_fields(&T::default())?.into_iter().map(|(k, _)| k));
            header.push("elapsed_ms".to_owned());
            w.write_record(&header)?;
        }
        Ok(())
    }

    pub fn emit<T: Serialize>(&mut self, payload: &T) -> Result<(), EmitError> {
        let elapsed_ms = self.elapsed_ms();
        match self.format {
            Format::JsonLines => {
                let w = self.json.as_mut().expect("json writer");
                let record = OutputRecord { schema_version: SCHEMA_VERSION, command: &self.command, payload, elapsed_ms };
                serde_json::to_writer(&mut *w, &record)?;
                w.write_all(b"\n")?;
            }
            Format::Csv => {
                let w = self.csv.as_mut().expect("csv writer");
                let mut row = vec![SCHEMA_VERSION.to_owned(), self.command.clone()];
                row.extend(flat_fields(payload)?.into_iter().map(|(_, v)| v));
                row.push(elapsed_ms.to_string());
                w.write_record(&row)?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(), EmitError> {
        if let Some(mut w) = self.json {
            w.flush()?;
        }
        if let Some(mut w) = self.csv {
            w.flush()?;
        }
        Ok(())
    }
}

fn flat_fields<T: Serialize>(payload: &T) -> Result<Vec<(String, String)>, EmitError> {
    let Value::Object(map) = serde_json::to_value(payload)? else {
        return Err(EmitError::Nested("payload".to_owned()));
    };
    map.into_iter()
        .map(|(k, v)| {
            let cell = match v {
                Value::Null => String::new(),
                Value::Bool(b) => b.to_string(),
                Value::Number(n) => n.to_string(),
                Value::String(s) => s,
                Value::Array(_) | Value::Object(_) => return Err(EmitError::Nested(k)),
            };
            Ok((k, cell))
        })
        .collect()
}
