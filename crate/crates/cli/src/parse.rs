//! Parsing of command-line values and set-definition files.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use skewshift_core::setgeom::{Constraint, SemiAlgebraicSet};
use skewshift_core::skewshift::{SkewShiftSystem, TorusPoint};
use skewshift_core::transport::{TrigPoly, TrigTerm};
use skewshift_core::{Frequency, TorusScalar};

use crate::args::SystemArgs;

/// A frequency descriptor; bare decimals are read as `dec:`.
pub fn frequency(s: &str) -> Result<Frequency> {
    let s = s.trim();
    let desc = if s.contains(':') {
        s.to_string()
    } else {
        format!("dec:{s}")
    };
    Ok(Frequency::parse(&desc)?)
}

pub fn frequencies(s: &str) -> Result<Vec<TorusScalar>> {
    s.split(',').map(|p| frequency(p).map(|f| f.value)).collect()
}

pub fn point(s: Option<&str>, b: usize) -> Result<TorusPoint> {
    let coords = match s {
        Some(s) => frequencies(s)?,
        None => vec![TorusScalar::ZERO; b],
    };
    ensure!(
        coords.len() == b,
        "point has {} coordinates, expected {b}",
        coords.len()
    );
    Ok(TorusPoint::new(coords)?)
}

/// A strictly increasing list of positive integers.
pub fn grid(s: &str) -> Result<Vec<u64>> {
    let v: Vec<u64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .with_context(|| format!("`{p}` in grid `{s}` is not a non-negative integer"))
        })
        .collect::<Result<_>>()?;
    ensure!(!v.is_empty(), "empty grid");
    ensure!(v[0] > 0, "grid values must be positive");
    ensure!(
        v.windows(2).all(|w| w[0] < w[1]),
        "grid `{s}` must be strictly increasing"
    );
    Ok(v)
}

pub fn floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().with_context(|| format!("`{p}` is not a number"))?;
            ensure!(v.is_finite(), "`{p}` is not finite");
            Ok(v)
        })
        .collect()
}

pub fn ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .with_context(|| format!("`{p}` is not an integer"))
        })
        .collect()
}

pub fn system(a: &SystemArgs) -> Result<(SkewShiftSystem, TorusPoint)> {
    let omega = frequency(&a.omega)?;
    let sys = SkewShiftSystem::new(a.b, omega.value)?;
    let x = point(a.x.as_deref(), a.b)?;
    Ok((sys, x))
}

/// `k_1,...,k_b:cos:sin` terms separated by `;`.
pub fn potential(s: &str, b: usize) -> Result<TrigPoly> {
    let mut terms = Vec::new();
    for term in s.split(';').filter(|t| !t.trim().is_empty()) {
        let parts: Vec<&str> = term.split(':').collect();
        ensure!(
            parts.len() == 3,
            "potential term `{term}` must read `k_1,...,k_b:cos:sin`"
        );
        let k = ints(parts[0])?;
        ensure!(
            k.len() == b,
            "potential term `{term}` has {} frequencies, expected {b}",
            k.len()
        );
        let cos = floats(parts[1])?[0];
        let sin = floats(parts[2])?[0];
        terms.push(TrigTerm { k, cos, sin });
    }
    ensure!(!terms.is_empty(), "empty potential");
    Ok(TrigPoly { terms })
}

/// `site:amp` pairs separated by `;`.
pub fn amplitudes(s: &str) -> Result<Vec<(i64, f64)>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (site, amp) = t
                .split_once(':')
                .with_context(|| format!("initial amplitude `{t}` must read `site:amp`"))?;
            Ok((ints(site)?[0], floats(amp)?[0]))
        })
        .collect()
}

/// On-disk form of a semi-algebraic set.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SetFile {
    pub schema: u32,
    pub dim: usize,
    pub clauses: Vec<Vec<Constraint>>,
}

pub const SET_SCHEMA: u32 = 1;

impl SetFile {
    pub fn into_set(self) -> Result<SemiAlgebraicSet> {
        if self.schema != SET_SCHEMA {
            bail!("set schema {} is not supported (expected {SET_SCHEMA})", self.schema);
        }
        let set = SemiAlgebraicSet {
            dim: self.dim,
            clauses: self.clauses,
        };
        set.validate()?;
        Ok(set)
    }
}

pub fn set_file(path: &Path) -> Result<SemiAlgebraicSet> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading set file {}", path.display()))?;
    let file: SetFile =
        serde_json::from_str(&text).with_context(|| format!("{} is not a valid set definition", path.display()))?;
    file.into_set()
        .with_context(|| format!("in set file {}", path.display()))
}
