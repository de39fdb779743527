//! Report files. CSV output opens with `#` lines carrying the tool version,
//! the resolved arguments as JSON and the seed; JSON output carries the
//! same fields at the top level next to `result`.

use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Format};

pub const TOOL: &str = "skewshift";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Version of the layout of both output formats.
pub const OUTPUT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Rows as objects keyed by column name, values kept as strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.clone(), Value::String(v.clone())))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// What a command hands back for writing.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub table: Table,
    /// Structured result for JSON output; the table is used when absent.
    pub json: Option<Value>,
    pub notes: Vec<String>,
    /// Some hypothesis regime was left; data is still written.
    pub regime_violation: bool,
}

impl Outcome {
    pub fn from_table(table: Table) -> Self {
        Outcome {
            table,
            ..Outcome::default()
        }
    }

    pub fn with_json(mut self, v: impl Serialize) -> Result<Self> {
        self.json = Some(serde_json::to_value(v)?);
        Ok(self)
    }
}

/// Shortest round-trip form, in exponent notation when far from one.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `x` rounded to `digits` significant digits, in positional notation.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn spec_echo(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(&cli.command).expect("arguments serialize");
    if let Value::Object(m) = &mut v {
        m.insert("format".into(), json!(format_of(cli)));
    }
    v
}

pub fn format_of(cli: &Cli) -> Format {
    cli.format.unwrap_or_else(|| cli.command.default_format())
}

pub fn render(cli: &Cli, outcome: &Outcome) -> Result<Vec<u8>> {
    let spec = spec_echo(cli);
    match format_of(cli) {
        Format::Json => {
            let doc = json!({
                "tool": TOOL,
                "version": VERSION,
                "schema": OUTPUT_SCHEMA,
                "seed": cli.seed,
                "spec": spec,
                "notes": outcome.notes,
                "regime_violation": outcome.regime_violation,
                "result": outcome.json.clone().unwrap_or_else(|| outcome.table.to_json()),
            });
            let mut bytes = serde_json::to_vec_pretty(&doc)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut bytes = Vec::new();
            writeln!(bytes, "# {TOOL} {VERSION} schema {OUTPUT_SCHEMA}")?;
            writeln!(bytes, "# spec: {}", serde_json::to_string(&spec)?)?;
            writeln!(bytes, "# seed: {}", cli.seed)?;
            for note in &outcome.notes {
                writeln!(bytes, "# note: {note}")?;
            }
            let mut w = csv::Writer::from_writer(bytes);
            w.write_record(&outcome.table.columns)?;
            for r in &outcome.table.rows {
                w.write_record(r)?;
            }
            Ok(w.into_inner().context("flushing CSV")?)
        }
    }
}

pub fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let bytes = render(cli, outcome)?;
    match &cli.output {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            Ok(out.flush()?)
        }
    }
}

/// Header fields of a CSV written by [`render`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvHeader {
    pub spec: Value,
    pub seed: Option<u64>,
}

/// Splits a CSV report into its header and its table.
pub fn read_csv(text: &str) -> Result<(CsvHeader, Table)> {
    let mut spec = Value::Null;
    let mut seed = None;
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some(s) = line.strip_prefix("# spec: ") {
            spec = serde_json::from_str(s).context("malformed spec line")?;
        } else if let Some(s) = line.strip_prefix("# seed: ") {
            seed = Some(s.trim().parse().context("malformed seed line")?);
        }
    }
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let columns = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(str::to_string).collect());
    }
    Ok((CsvHeader { spec, seed }, Table { columns, rows }))
}
