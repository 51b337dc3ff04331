//! Deterministic JSON and CSV writers; every number is an exact string.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::Value;

use toprec_core::exact_algebra::Scalar;

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn json<T: serde::Serialize + ?Sized>(value: &T) -> Result<()> {
    let v: Value = serde_json::to_value(value)?;
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &v)?;
    writeln!(out)?;
    Ok(())
}

/// Rows `(g, n, indices…, value)`, padded to the widest index list.
pub struct Table {
    rows: Vec<(u32, usize, Vec<String>, String)>,
}

impl Table {
    pub fn new() -> Self {
        Table { rows: Vec::new() }
    }

    pub fn push(&mut self, g: u32, n: usize, idx: Vec<String>, value: &Scalar) {
        self.rows.push((g, n, idx, value.to_string()));
    }

    pub fn write(&self) -> Result<()> {
        let width = self.rows.iter().map(|r| r.2.len()).max().unwrap_or(0);
        let mut w = csv::Writer::from_writer(std::io::stdout().lock());
        let mut header = vec!["g".to_string(), "n".to_string()];
        header.extend((1..=width).map(|i| format!("k{i}")));
        header.push("value".into());
        w.write_record(&header)?;
        for (g, n, idx, value) in &self.rows {
            let mut rec = vec![g.to_string(), n.to_string()];
            rec.extend(idx.iter().cloned());
            rec.extend(std::iter::repeat_n(String::new(), width - idx.len()));
            rec.push(value.clone());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}
