//! Command results, their rendering as CSV, JSON or text, and run manifests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::args::{Command, Format};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command produced.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub summary: Map<String, Value>,
    pub tables: Vec<Table>,
    /// Set for "nothing found within budget" outcomes.
    pub not_found: bool,
    pub counters: BTreeMap<String, u64>,
}

impl Report {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.into(), value.into());
    }

    pub fn count(&mut self, key: &str, value: u64) {
        self.counters.insert(key.into(), value);
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The configuration a run is identified by: the command with its
/// arguments and the digests of the files it read.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: BTreeMap<String, String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command, format: Format) -> CliResult<Self> {
        let mut inputs = BTreeMap::new();
        for path in command.input_files() {
            let bytes = std::fs::read(&path).map_err(|e| CliError::io(Path::new(&path), e))?;
            inputs.insert(path, sha256_hex(&bytes));
        }
        Ok(RunConfig { command, inputs, format })
    }

    pub fn hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("config serializes").as_bytes())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub argv: Vec<String>,
    pub wall_time_ms: u128,
    pub exit_code: i32,
    pub counters: BTreeMap<String, u64>,
    pub outputs: Vec<String>,
}

fn header_line(config: &RunConfig, hash: &str) -> String {
    let seed = config.command.seed().map_or("none".to_string(), |s| s.to_string());
    format!("# ehrlab {} seed={seed} config_hash={hash}", config.command.name())
}

fn csv_text(table: &Table, header: &str) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).map_err(|e| CliError::Parse(e.to_string()))?;
    for row in &table.rows {
        w.write_record(row).map_err(|e| CliError::Parse(e.to_string()))?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Parse(e.to_string()))?).expect("utf-8");
    Ok(format!("{header}\n{body}"))
}

fn json_doc(report: &Report, config: &RunConfig, hash: &str, with_tables: bool) -> Value {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(config.command.name()));
    doc.insert("seed".into(), json!(config.command.seed()));
    doc.insert("config_hash".into(), json!(hash));
    doc.insert("status".into(), json!(if report.not_found { "not_found" } else { "ok" }));
    doc.insert("summary".into(), Value::Object(report.summary.clone()));
    if with_tables {
        let tables: Map<String, Value> = report
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| Value::Object(t.header.iter().cloned().zip(r.iter().map(|x| json!(x))).collect()))
                    .collect();
                (t.name.clone(), Value::Array(rows))
            })
            .collect();
        doc.insert("tables".into(), Value::Object(tables));
    }
    Value::Object(doc)
}

fn text(report: &Report, header: &str) -> String {
    let mut out = format!("{header}\n");
    let width = report.summary.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in &report.summary {
        let v = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    for t in &report.tables {
        let mut widths: Vec<usize> = t.header.iter().map(String::len).collect();
        for row in &t.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
        };
        let _ = writeln!(out, "\n[{}]", t.name);
        let _ = writeln!(out, "{}", line(&t.header));
        for row in &t.rows {
            let _ = writeln!(out, "{}", line(row));
        }
    }
    out
}

/// Rendered output files as `(file name, contents)`.
pub fn render(report: &Report, config: &RunConfig, hash: &str) -> CliResult<Vec<(String, String)>> {
    let header = header_line(config, hash);
    let name = config.command.name();
    Ok(match config.format {
        Format::Json => {
            let doc = json_doc(report, config, hash, true);
            vec![(format!("{name}.json"), serde_json::to_string_pretty(&doc).expect("json") + "\n")]
        }
        Format::Csv => {
            let mut files = vec![(
                "summary.json".to_string(),
                serde_json::to_string_pretty(&json_doc(report, config, hash, false)).expect("json") + "\n",
            )];
            for t in &report.tables {
                files.push((format!("{}.csv", t.name), csv_text(t, &header)?));
            }
            files
        }
        Format::Table => vec![(format!("{name}.txt"), text(report, &header))],
    })
}

pub fn write_outputs(dir: &Path, files: &[(String, String)]) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

/// Stdout rendering: CSV tables are separated by blank lines and the summary
/// becomes comment lines.
pub fn stdout_text(report: &Report, config: &RunConfig, hash: &str) -> CliResult<String> {
    let header = header_line(config, hash);
    Ok(match config.format {
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in &report.summary {
                let _ = writeln!(out, "# {k}={v}");
            }
            let parts = report.tables.iter().map(|t| csv_text(t, &header)).collect::<CliResult<Vec<_>>>()?;
            if parts.is_empty() {
                out.push_str(&header);
                out.push('\n');
            }
            out + &parts.join("\n")
        }
        _ => render(report, config, hash)?.into_iter().map(|(_, b)| b).collect(),
    })
}
