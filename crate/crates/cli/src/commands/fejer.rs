use anyhow::{Context, Result};
use serde::Serialize;
use skewshift_core::setgeom::{grid_cover, EpsBall, HitReport, Region};
use skewshift_core::skewshift::TorusPoint;

use crate::args::FejerArgs;
use crate::output::{num, Outcome, Table};
use crate::parallel;
use crate::parse;

#[derive(Serialize)]
struct FejerResult {
    cover_size: Option<usize>,
    rows: Vec<HitReport>,
}

pub fn run(a: &FejerArgs) -> Result<Outcome> {
    let grid = parse::grid(&a.n_grid)?;
    let (sys, x) = parse::system(&a.system)?;
    let n_max = *grid.last().expect("grid is non-empty");
    let points: Vec<TorusPoint> = sys.orbit(&x, n_max)?.collect();
    let mut rows = Vec::with_capacity(grid.len());
    let mut notes = Vec::new();
    let cover_size = match &a.set {
        None => {
            let center = parse::point(a.center.as_deref(), sys.dim())?;
            let ball = EpsBall::new(center.clone(), a.eps)?;
            for &n in &grid {
                let pts = &points[..n as usize];
                let count = pts.iter().filter(|p| ball.contains(p)).count() as u64;
                let bound = parallel::fejer_bound(pts, &center, a.eps)?;
                rows.push(report(n, count, bound));
            }
            None
        }
        Some(path) => {
            let set = parse::set_file(path)?;
            anyhow::ensure!(
                set.dim == sys.dim(),
                "set has dimension {}, orbit has {}",
                set.dim,
                sys.dim()
            );
            let cover = grid_cover(&set, a.eps).context("covering the set")?;
            notes.push(format!(
                "bound sums the Fejer majorant over {} covering balls",
                cover.len()
            ));
            for &n in &grid {
                let pts = &points[..n as usize];
                let count = pts.iter().filter(|p| set.contains(p)).count() as u64;
                let mut bound = 0.0;
                for ball in &cover {
                    bound += parallel::fejer_bound(pts, &ball.center, a.eps)?;
                }
                rows.push(report(n, count, bound));
            }
            Some(cover.len())
        }
    };
    let mut table = Table::new(&["N", "count", "bound", "ratio"]);
    for r in &rows {
        table.push(vec![
            r.n.to_string(),
            r.count.to_string(),
            r.bound.map_or(String::new(), num),
            r.ratio.map_or(String::new(), num),
        ]);
    }
    let mut out = Outcome::from_table(table).with_json(FejerResult { cover_size, rows })?;
    out.notes = notes;
    Ok(out)
}

fn report(n: u64, count: u64, bound: f64) -> HitReport {
    HitReport {
        n,
        count,
        bound: None,
        ratio: None,
    }
    .with_bound(bound)
}
