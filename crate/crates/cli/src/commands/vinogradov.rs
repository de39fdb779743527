use anyhow::{Context, Result};
use serde::Serialize;
use skewshift_core::vinogradov::{bdg_ratio, vinogradov_count, R2Table};

use crate::args::VinogradovArgs;
use crate::output::{num, Outcome, Table};
use crate::parallel::try_ordered_map;
use crate::parse;

#[derive(Serialize)]
struct JRow {
    b: u32,
    rho: u32,
    n: u64,
    j: String,
    bdg_ratio: f64,
}

#[derive(Serialize)]
struct R2Row {
    b: u32,
    rho: u32,
    n: u64,
    h: i64,
    r2: String,
    /// `J_{b-1}(3N; rho)`, equal to `R_2(0)`.
    j_reduced: String,
}

pub fn run(a: &VinogradovArgs) -> Result<Outcome> {
    let grid = parse::grid(&a.n_grid)?;
    if a.r2 {
        return run_r2(a, &grid);
    }
    let rows = try_ordered_map(&grid, |&n| {
        let c = vinogradov_count(n, a.b, a.rho).with_context(|| format!("at N = {n}"))?;
        anyhow::Ok(JRow {
            b: a.b,
            rho: a.rho,
            n,
            j: c.j.to_string(),
            bdg_ratio: bdg_ratio(&c, a.eps),
        })
    })?;
    let mut table = Table::new(&["b", "rho", "N", "J", "bdg_ratio"]);
    for r in &rows {
        table.push(vec![
            r.b.to_string(),
            r.rho.to_string(),
            r.n.to_string(),
            r.j.clone(),
            num(r.bdg_ratio),
        ]);
    }
    Outcome::from_table(table).with_json(&rows)
}

fn run_r2(a: &VinogradovArgs, grid: &[u64]) -> Result<Outcome> {
    let h_max = i64::try_from(a.h_max).context("--h-max too large")?;
    let per_n = try_ordered_map(grid, |&n| {
        let table = R2Table::new(n, a.b, a.rho).with_context(|| format!("R_2 table at N = {n}"))?;
        let reduced = vinogradov_count(3 * n, a.b - 1, a.rho)?.j.to_string();
        let rows: Vec<R2Row> = (-h_max..=h_max)
            .map(|h| R2Row {
                b: a.b,
                rho: a.rho,
                n,
                h,
                r2: table.count(h as i128).to_string(),
                j_reduced: reduced.clone(),
            })
            .collect();
        anyhow::Ok(rows)
    })?;
    let rows: Vec<R2Row> = per_n.into_iter().flatten().collect();
    let mut table = Table::new(&["b", "rho", "N", "h", "R2", "J_reduced"]);
    for r in &rows {
        table.push(vec![
            r.b.to_string(),
            r.rho.to_string(),
            r.n.to_string(),
            r.h.to_string(),
            r.r2.clone(),
            r.j_reduced.clone(),
        ]);
    }
    Outcome::from_table(table).with_json(&rows)
}
