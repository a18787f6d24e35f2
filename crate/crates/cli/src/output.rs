use std::io::{self, Write};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::Outcome;

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub step: String,
    pub ms: u64,
}

/// Wall-clock steps of one run.
#[derive(Debug)]
pub struct Timings {
    last: Instant,
    steps: Vec<Timing>,
}

impl Timings {
    pub fn start() -> Self {
        Self { last: Instant::now(), steps: Vec::new() }
    }

    /// Time since the previous lap.
    pub fn lap(&mut self, step: &str) {
        let ms = self.last.elapsed().as_millis() as u64;
        self.last = Instant::now();
        self.steps.push(Timing { step: step.to_string(), ms });
    }

    /// A step timed elsewhere.
    pub fn record(&mut self, step: &str, ms: u64) {
        self.last = Instant::now();
        self.steps.push(Timing { step: step.to_string(), ms });
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Value,
    pub params: Value,
    pub seed: u64,
    pub cache: Option<CacheStats>,
    pub version: &'static str,
    pub timings: Vec<Timing>,
}

impl RunManifest {
    pub fn new(command: Value, params: Value, seed: u64, cache: Option<CacheStats>, timings: Timings) -> Self {
        Self { command, params, seed, cache, version: env!("CARGO_PKG_VERSION"), timings: timings.steps }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn emit(outcome: &Outcome, manifest: &RunManifest, csv: bool) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let summary = json!({
        "summary": { "claim": outcome.claim, "status": outcome.status, "records": outcome.records.len(), "reports": outcome.reports },
        "manifest": manifest,
    });
    if csv {
        let header: Vec<String> = match outcome.records.first() {
            Some(Value::Object(map)) => map.keys().cloned().collect(),
            _ => Vec::new(),
        };
        let mut writer = csv::Writer::from_writer(&mut out);
        if !header.is_empty() {
            writer.write_record(&header)?;
            for record in &outcome.records {
                writer.write_record(header.iter().map(|h| csv_cell(&record[h])))?;
            }
        }
        writer.flush()?;
        drop(writer);
        eprintln!("{summary}");
    } else {
        for record in &outcome.records {
            writeln!(out, "{record}")?;
        }
        writeln!(out, "{summary}")?;
    }
    out.flush()
}
