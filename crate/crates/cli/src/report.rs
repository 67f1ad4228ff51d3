use std::io::Write;

use ghk_core::potential::ConfigurationFile;
use ghk_core::{BarrierSurface, Sampling};
use serde::Serialize;
use serde_json::Value;

use crate::args::{ConfigArg, Expect, Format, OutputArgs};

/// The resolved inputs of a run, embedded in every report.
#[derive(Debug, Serialize)]
pub struct RunSpec {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    configuration: Option<ConfigurationFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    surface: Option<BarrierSurface>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<Sampling>,
    #[serde(skip_serializing_if = "Value::is_null")]
    params: Value,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
    format: Format,
    expect: Option<Expect>,
}

impl RunSpec {
    pub fn new(command: &'static str, output: &OutputArgs) -> Self {
        RunSpec {
            command,
            config: None,
            configuration: None,
            surface: None,
            k: None,
            sampling: None,
            params: Value::Null,
            seed: output.seed,
            out: output.out.as_ref().map(|p| p.display().to_string()),
            format: output.format,
            expect: output.expect,
        }
    }

    pub fn config(mut self, arg: &ConfigArg, file: ConfigurationFile) -> Self {
        self.config = Some(arg.config.display().to_string());
        self.configuration = Some(file);
        self
    }

    pub fn surface(mut self, surface: BarrierSurface) -> Self {
        self.surface = Some(surface);
        self
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = Some(sampling);
        self
    }

    pub fn params(mut self, params: Value) -> Self {
        self.params = params;
        self
    }
}

/// Sign of the headline quantity, compared against `--expect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Neither,
}

pub struct Report {
    spec: RunSpec,
    body: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    sign: Sign,
}

impl Report {
    pub fn new(spec: RunSpec, body: Value, header: &[&str], rows: Vec<Vec<String>>, sign: Sign) -> Self {
        Report {
            spec,
            body,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            sign,
        }
    }

    fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        match format {
            Format::Json => {
                let mut doc = serde_json::Map::new();
                doc.insert("run".into(), serde_json::to_value(&self.spec).map_err(|e| e.to_string())?);
                if let Value::Object(fields) = &self.body {
                    doc.extend(fields.clone());
                }
                let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| e.to_string())?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let run = serde_json::to_string(&self.spec).map_err(|e| e.to_string())?;
                let mut out = format!("# run: {run}\n").into_bytes();
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&self.header).map_err(|e| e.to_string())?;
                for row in &self.rows {
                    w.write_record(row).map_err(|e| e.to_string())?;
                }
                w.flush().map_err(|e| e.to_string())?;
                drop(w);
                Ok(out)
            }
        }
    }

    pub fn write(&self, output: &OutputArgs) -> Result<(), String> {
        let bytes = self.render(output.format)?;
        match &output.out {
            Some(path) => std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
        }
    }

    pub fn check(&self, expect: Option<Expect>) -> Result<(), String> {
        match (expect, self.sign) {
            (None, _) | (Some(Expect::Positive), Sign::Positive) | (Some(Expect::Negative), Sign::Negative) => Ok(()),
            (Some(e), s) => Err(format!("expected {e:?}, observed {s:?}").to_lowercase()),
        }
    }
}
