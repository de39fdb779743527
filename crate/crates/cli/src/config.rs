//! Flat key-value config files.
//!
//! ```text
//! # comment
//! global.seed = 7
//! sublinear.mode = weyl
//! sublinear.n-grid = 1024,2048,4096,8192,16384,32768
//! transport.averaged = true
//! ```
//!
//! An entry `cmd.key = value` becomes `--key=value` right after the
//! subcommand, so flags given on the command line override it. `true`
//! turns into a bare switch and `false` drops the entry. `report.inputs`
//! lists positional paths, comma-separated.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::args::NAMES;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub section: String,
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let (lhs, value) = line
            .split_once('=')
            .with_context(|| format!("line {lineno}: expected `section.key = value`, got `{line}`"))?;
        let (section, key) = lhs
            .trim()
            .split_once('.')
            .with_context(|| format!("line {lineno}: key `{}` has no section prefix", lhs.trim()))?;
        if section != "global" && !NAMES.contains(&section) {
            bail!(
                "line {lineno}: unknown section `{section}`; use `global` or one of {}",
                NAMES.join(", ")
            );
        }
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            bail!("line {lineno}: empty key");
        }
        out.push(Entry {
            section: section.to_string(),
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

/// Command-line arguments for the entries that apply to `command`.
pub fn to_args(entries: &[Entry], command: &str) -> Vec<OsString> {
    let mut args = Vec::new();
    for e in entries.iter().filter(|e| e.section == "global" || e.section == command) {
        match (e.key.as_str(), e.value.as_str()) {
            ("config", _) | (_, "false") => {}
            ("inputs", v) => args.extend(v.split(',').map(|p| OsString::from(p.trim()))),
            (k, "true") => args.push(format!("--{k}").into()),
            (k, v) => args.push(format!("--{k}={v}").into()),
        }
    }
    args
}

const GLOBAL_WITH_VALUE: [&str; 5] = ["--config", "--seed", "--format", "--output", "-o"];

/// Position of the subcommand token, skipping global options before it.
fn subcommand_index(argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let a = argv[i].to_str()?;
        if GLOBAL_WITH_VALUE.contains(&a) {
            i += 2;
        } else if a.starts_with('-') {
            i += 1;
        } else {
            return NAMES.contains(&a).then_some(i);
        }
    }
    None
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some(p.into());
        }
    }
    None
}

/// `argv` with the config entries for its subcommand spliced in.
pub fn inject(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let Some(at) = subcommand_index(&argv) else {
        // let clap report the missing subcommand
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .with_context(|| format!("reading config file {}", Path::new(&path).display()))?;
    let entries = parse(&text)?;
    let command = argv[at].to_str().expect("checked in subcommand_index").to_string();
    let mut out = argv[..=at].to_vec();
    out.extend(to_args(&entries, &command));
    out.extend_from_slice(&argv[at + 1..]);
    Ok(out)
}
