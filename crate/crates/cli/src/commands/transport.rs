use anyhow::{ensure, Result};
use serde::Serialize;
use skewshift_core::transport::{growth_fit, GrowthFit, GrowthModel, Kernel, MomentSeries, Spectral, TransportConfig};

use crate::args::{FitArg, KernelArg, TransportArgs};
use crate::output::{num, Outcome, Table};
use crate::parallel::ordered_map;
use crate::parse;

#[derive(Serialize)]
struct Report {
    series: MomentSeries,
    fit: Option<GrowthFit>,
    fit_model: GrowthModel,
    max_eigen_residual: f64,
}

fn time_grid(a: &TransportArgs) -> Result<Vec<f64>> {
    if let Some(s) = &a.t_grid {
        let g = parse::floats(s)?;
        ensure!(g.iter().all(|&t| t >= 0.0), "times must be non-negative");
        return Ok(g);
    }
    ensure!(a.t_min > 0.0 && a.t_max > a.t_min, "need 0 < --t-min < --t-max");
    ensure!(a.t_count >= 2, "--t-count must be at least 2");
    let (lo, hi) = (a.t_min.ln(), a.t_max.ln());
    let step = (hi - lo) / (a.t_count - 1) as f64;
    Ok((0..a.t_count).map(|i| (lo + step * i as f64).exp()).collect())
}

pub fn run(a: &TransportArgs) -> Result<Outcome> {
    let (system, x0) = parse::system(&a.system)?;
    let b = system.dim();
    let mut cfg = TransportConfig::new(a.l, a.lambda, system, x0);
    cfg.kernel = match a.kernel {
        KernelArg::Nn => Kernel::NearestNeighbor,
        KernelArg::Exp => Kernel::Exponential { c: a.c, decay: a.decay },
    };
    if let Some(v) = &a.potential {
        cfg.potential = parse::potential(v, b)?;
    }
    if let Some(phi) = &a.phi {
        cfg.phi = parse::amplitudes(phi)?;
    }
    ensure!(a.p >= 0.0, "--p must be non-negative");
    let grid = time_grid(a)?;
    let sp = Spectral::new(&cfg)?;
    let series = if a.averaged {
        sp.series(&grid, a.p, true)?
    } else {
        let values = ordered_map(&grid, |&t| sp.moment(t, a.p));
        MomentSeries {
            t_grid: grid.clone(),
            values: values.iter().map(|v| v.value).collect(),
            boundary_mass: values.iter().map(|v| v.boundary_mass).collect(),
            p: a.p,
            averaged: false,
        }
    };
    let model = match a.fit {
        FitArg::Poly => GrowthModel::Poly,
        FitArg::Loglog => GrowthModel::LogLog,
    };
    let mut notes = Vec::new();
    let fit = match growth_fit(&series, model) {
        Ok(f) => Some(f),
        Err(e) => {
            notes.push(format!("no growth fit: {e}"));
            None
        }
    };
    if let Some(f) = &fit {
        notes.push(format!("growth exponent {} over {} points", num(f.slope), f.points));
        if f.truncated {
            notes.push("the wavepacket reached the box edge; later times were left out of the fit".into());
        }
    }
    if a.lambda != 0.0 {
        notes.push("growth at this coupling is descriptive: whether lambda exceeds the localization threshold cannot be certified".into());
    }
    let mut table = Table::new(&["T", "value", "p", "averaged", "boundary_mass"]);
    for i in 0..series.t_grid.len() {
        table.push(vec![
            num(series.t_grid[i]),
            num(series.values[i]),
            num(series.p),
            series.averaged.to_string(),
            num(series.boundary_mass[i]),
        ]);
    }
    let mut out = Outcome::from_table(table).with_json(Report {
        series,
        fit,
        fit_model: model,
        max_eigen_residual: sp.max_residual,
    })?;
    out.notes = notes;
    Ok(out)
}
