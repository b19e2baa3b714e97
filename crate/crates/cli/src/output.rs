use std::io::Write;

use bornlab::{tol, Error, Result};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

/// Rows for the CSV form of a result.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
}

impl Output {
    pub fn json(result: Value) -> Self {
        Output { result, table: None }
    }
}

pub fn metadata(command: &str, cfg: &RunConfig, theory: Option<String>) -> Value {
    json!({
        "tool": "bornlab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "theory": theory,
        "config": cfg,
        "seed": cfg.seed,
        "tolerances": {
            "verdict": cfg.tol,
            "structural": tol::STRUCT,
            "cluster": tol::CLUSTER,
            "cluster_gap": tol::CLUSTER_GAP,
            "effect": tol::EFFECT,
            "lp_feasible": tol::LP_FEASIBLE,
            "gradient": tol::GRADIENT,
        },
    })
}

pub fn render(command: &str, cfg: &RunConfig, meta: Value, out: Output) -> Result<Vec<u8>> {
    match cfg.format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&json!({ "metadata": meta, "result": out.result })).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            text.push('\n');
            Ok(text.into_bytes())
        }
        Format::Csv => {
            let table = out.table.ok_or_else(|| Error::InvalidArgument(format!("{command} has no CSV form; use --format json")))?;
            let mut buf = Vec::new();
            if let Value::Object(map) = &meta {
                for (k, v) in map {
                    writeln!(buf, "# {k}: {v}").unwrap();
                }
            }
            let mut w = csv::Writer::from_writer(buf);
            let csv_err = |e: csv::Error| Error::InvalidArgument(e.to_string());
            w.write_record(&table.header).map_err(csv_err)?;
            for row in &table.rows {
                w.write_record(row).map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))
        }
    }
}

pub fn emit(command: &str, cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        None => {
            std::io::stdout().write_all(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", dir.display())))?;
            let ext = match cfg.format {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            let path = dir.join(format!("{command}.{ext}"));
            std::fs::write(&path, bytes).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(())
}
