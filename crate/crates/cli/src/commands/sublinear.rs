use anyhow::{bail, Result};
use serde::Serialize;
use skewshift_core::setgeom::{EpsBall, MeasureEstimate, Region};
use skewshift_core::sublinear::{run_experiment, ExperimentConfig, ExponentReport, Mode, OrbitSource, Target};

use crate::args::{ModeArg, SublinearArgs, TargetArg};
use crate::output::{num, Outcome, Table};
use crate::parallel;
use crate::parse;

#[derive(Serialize)]
struct Report {
    #[serde(flatten)]
    report: ExponentReport,
    measure: Option<MeasureEstimate>,
}

pub fn run(a: &SublinearArgs, seed: u64) -> Result<Outcome> {
    let grid = parse::grid(&a.n_grid)?;
    let (system, x) = parse::system(&a.system)?;
    let b = system.dim();
    let source = OrbitSource::Skew { system, x };
    let config = ExperimentConfig {
        mode: match a.mode {
            ModeArg::Weyl => Mode::Weyl,
            ModeArg::Vino => Mode::Vino,
            ModeArg::Auto => Mode::Auto,
        },
        tau: a.tau,
        slack: a.slack,
        c0: a.c0,
    };
    if !(a.tau > 1.0) {
        bail!("--tau must exceed 1");
    }
    let mut notes = Vec::new();
    let center = parse::point(a.center.as_deref(), b)?;
    let mut measure = None;
    let report = match a.target {
        TargetArg::Coupled => run_experiment(&source, &Target::CoupledBall { center }, &grid, &config)?,
        TargetArg::Ball => {
            let ball = EpsBall::new(center, a.eps)?;
            let eta = ball.exact_measure().expect("balls have a closed-form measure");
            let target = Target::Fixed {
                region: &ball,
                degree: 2 * b as u64,
                eta,
            };
            run_experiment(&source, &target, &grid, &config)?
        }
        TargetArg::Set => {
            let Some(path) = &a.set else {
                bail!("--target set needs --set <file>");
            };
            let set = parse::set_file(path)?;
            let eta = match set.exact_measure() {
                Some(m) => m,
                None => {
                    let est = parallel::measure(&set, a.samples, seed)?;
                    notes.push(format!(
                        "measure estimated by Monte Carlo: {} +- {} ({} samples)",
                        num(est.value),
                        num(est.std_error),
                        a.samples
                    ));
                    measure = Some(est);
                    est.value
                }
            };
            let target = Target::Fixed {
                region: &set,
                degree: set.degree(),
                eta,
            };
            run_experiment(&source, &target, &grid, &config)?
        }
    };
    let mut table = Table::new(&["N", "count", "eps", "regime_ok"]);
    for i in 0..report.n_grid.len() {
        table.push(vec![
            report.n_grid[i].to_string(),
            report.counts[i].to_string(),
            report.eps[i].map_or(String::new(), num),
            report.regime_ok[i].to_string(),
        ]);
    }
    let flagged = report.any_regime_flag();
    if flagged {
        let bad = report.regime_ok.iter().filter(|ok| !**ok).count();
        notes.push(if report.regime_violation {
            format!("regime violated: {bad} of {} N fail log N < w tau log(1/eta) or log B <= c0 log N; the fit uses every N and carries no claim", grid.len())
        } else {
            format!("regime violated at {bad} of {} N; those points were left out of the fit", grid.len())
        });
    }
    notes.push(format!(
        "fitted slope {} against exponent {} + slack {}: {}",
        num(report.fitted_slope),
        num(report.theoretical_exponent),
        num(report.slack),
        if report.pass { "pass" } else { "fail" }
    ));
    let mut out = Outcome::from_table(table).with_json(Report { report, measure })?;
    out.notes = notes;
    out.regime_violation = flagged;
    Ok(out)
}
