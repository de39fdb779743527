use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use skewshift_core::sublinear::{psi, psi_improves, theoretical_delta, vino_exponent, weyl_exponent};

use crate::args::ReportArgs;
use crate::output::{num, read_csv, Outcome, Table};

pub const TABLE_B: std::ops::RangeInclusive<u32> = 2..=8;
pub const TABLE_TAU: [f64; 2] = [1.001, 2.0];

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ExponentRow {
    pub b: u32,
    pub tau: f64,
    pub psi: u64,
    /// `b 2^(b-1)` and `2^b - 1`, the factors of the earlier exponents.
    pub classical: u64,
    pub other: u64,
    pub improves: bool,
    pub delta: f64,
    pub weyl_exponent: f64,
    pub vino_exponent: f64,
}

pub fn exponent_table() -> Result<Vec<ExponentRow>> {
    let mut rows = Vec::new();
    for b in TABLE_B {
        for tau in TABLE_TAU {
            rows.push(ExponentRow {
                b,
                tau,
                psi: psi(b)?,
                classical: (b as u64) << (b - 1),
                other: (1u64 << b) - 1,
                improves: psi_improves(b)?,
                delta: theoretical_delta(b, tau)?,
                weyl_exponent: weyl_exponent(b, b, tau),
                vino_exponent: vino_exponent(b, b, tau),
            });
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct InputSummary {
    path: String,
    command: Value,
    seed: Value,
    regime_violation: Option<bool>,
    pass: Option<bool>,
    fitted_slope: Option<f64>,
    theoretical_exponent: Option<f64>,
    max_ratio: Option<f64>,
    growth_exponent: Option<f64>,
    rows: usize,
}

fn max_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.filter(|v| v.is_finite()).reduce(f64::max)
}

fn summarize_json(path: &str, doc: &Value) -> Result<InputSummary> {
    let result = doc
        .get("result")
        .with_context(|| format!("{path}: no `result` field; not a skewshift report"))?;
    let as_f = |v: &Value| v.as_f64().or_else(|| v.as_str().and_then(|s| s.parse().ok()));
    let rows: Vec<&Value> = match result {
        Value::Array(a) => a.iter().collect(),
        Value::Object(o) => o
            .get("rows")
            .and_then(Value::as_array)
            .map(|a| a.iter().collect())
            .unwrap_or_default(),
        _ => Vec::new(),
    };
    let max_ratio = max_of(
        rows.iter()
            .filter_map(|r| r.get("ratio").or_else(|| r.get("bdg_ratio")))
            .filter_map(as_f),
    );
    let command = doc["spec"]["command"].clone();
    let growth_exponent = if command == "transport" {
        result.get("fit").and_then(|f| f.get("slope")).and_then(as_f)
    } else {
        None
    };
    Ok(InputSummary {
        path: path.to_string(),
        command,
        seed: doc["seed"].clone(),
        regime_violation: doc["regime_violation"].as_bool(),
        pass: result.get("pass").and_then(Value::as_bool),
        fitted_slope: result.get("fitted_slope").and_then(as_f),
        theoretical_exponent: result.get("theoretical_exponent").and_then(as_f),
        max_ratio,
        growth_exponent,
        rows: rows.len(),
    })
}

fn summarize_csv(path: &str, text: &str) -> Result<InputSummary> {
    let (header, table) = read_csv(text).with_context(|| format!("{path}: not a skewshift CSV report"))?;
    if header.spec.is_null() {
        bail!("{path}: missing `# spec:` header line; not a skewshift CSV report");
    }
    let col = table.columns.iter().position(|c| c == "ratio" || c == "bdg_ratio");
    let max_ratio = col.and_then(|i| max_of(table.rows.iter().filter_map(|r| r[i].parse().ok())));
    Ok(InputSummary {
        path: path.to_string(),
        command: header.spec["command"].clone(),
        seed: header.seed.map_or(Value::Null, |s| json!(s)),
        regime_violation: None,
        pass: None,
        fitted_slope: None,
        theoretical_exponent: None,
        max_ratio,
        growth_exponent: None,
        rows: table.rows.len(),
    })
}

pub fn run(a: &ReportArgs) -> Result<Outcome> {
    if a.inputs.is_empty() {
        bail!(
            "report needs at least one run output: JSON or CSV files written by another command, \
             for example `skewshift sublinear -o run.json` then `skewshift report run.json`"
        );
    }
    let missing: Vec<String> = a
        .inputs
        .iter()
        .filter(|p| !p.is_file())
        .map(|p| p.display().to_string())
        .collect();
    if !missing.is_empty() {
        bail!("missing input files: {}", missing.join(", "));
    }
    let mut inputs = Vec::new();
    for p in &a.inputs {
        let path = p.display().to_string();
        let text = std::fs::read_to_string(Path::new(p)).with_context(|| format!("reading {path}"))?;
        let s = if text.trim_start().starts_with('{') {
            let doc: Value = serde_json::from_str(&text).with_context(|| format!("{path}: invalid JSON"))?;
            summarize_json(&path, &doc)?
        } else {
            summarize_csv(&path, &text)?
        };
        inputs.push(s);
    }
    let table_rows = exponent_table()?;
    let all_pass = inputs
        .iter()
        .all(|s| s.pass != Some(false) && s.regime_violation != Some(true));
    let mut table = Table::new(&[
        "b",
        "tau",
        "psi",
        "classical",
        "other",
        "improves",
        "delta",
        "weyl_exponent",
        "vino_exponent",
    ]);
    for r in &table_rows {
        table.push(vec![
            r.b.to_string(),
            num(r.tau),
            r.psi.to_string(),
            r.classical.to_string(),
            r.other.to_string(),
            r.improves.to_string(),
            num(r.delta),
            num(r.weyl_exponent),
            num(r.vino_exponent),
        ]);
    }
    let out = Outcome::from_table(table).with_json(json!({
        "inputs": inputs,
        "all_pass": all_pass,
        "exponent_table": table_rows,
    }))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_exact() {
        let t = exponent_table().unwrap();
        assert_eq!(t.len(), 14);
        let b6 = t.iter().find(|r| r.b == 6 && r.tau == 2.0).unwrap();
        assert_eq!((b6.psi, b6.classical, b6.other), (30, 192, 63));
        assert_eq!(b6.delta, 1.0 / (2.0 * 6.0 * 30.0));
        assert!(t.iter().all(|r| r.improves));
    }
}
