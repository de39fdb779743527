use anyhow::Result;
use serde::Serialize;
use skewshift_core::diophantine::{find_denominator, DiophantineProfile};
use skewshift_core::Error;

use crate::args::DiophArgs;
use crate::output::{num, Outcome, Table};
use crate::parse;

#[derive(Serialize)]
struct Denominator {
    n: u64,
    q: Option<u64>,
    /// `(gamma N)^(1/tau)`.
    lower: f64,
    error: Option<String>,
}

#[derive(Serialize)]
struct Report {
    omega: String,
    #[serde(flatten)]
    profile: DiophantineProfile,
    denominators: Vec<Denominator>,
}

pub fn run(a: &DiophArgs) -> Result<Outcome> {
    let omega = parse::frequency(&a.omega)?;
    let grid = parse::grid(&a.n_grid)?;
    let profile = DiophantineProfile::compute(omega.value, a.tau, a.search_depth, a.depth)?;
    let mut violated = false;
    let mut denominators = Vec::new();
    for &n in &grid {
        let lower = (profile.gamma_emp * n as f64).powf(1.0 / profile.tau);
        let (q, error) = match find_denominator(&profile, n) {
            Ok(q) => (Some(q), None),
            Err(e @ Error::BoundViolated(_)) => {
                violated = true;
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        denominators.push(Denominator { n, q, lower, error });
    }
    let mut table = Table::new(&["index", "p", "q", "err", "near_exact"]);
    for (i, c) in profile.approximants.iter().enumerate() {
        table.push(vec![
            (i + 1).to_string(),
            c.p.to_string(),
            c.q.to_string(),
            num(c.err),
            c.near_exact.to_string(),
        ]);
    }
    let mut out = Outcome::from_table(table).with_json(Report {
        omega: omega.descriptor().to_string(),
        profile,
        denominators,
    })?;
    if violated {
        out.regime_violation = true;
        out.notes.push(
            "some denominator fell below (gamma N)^(1/tau): the Diophantine hypothesis fails at this depth".into(),
        );
    }
    Ok(out)
}
