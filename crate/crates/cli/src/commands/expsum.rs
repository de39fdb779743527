use anyhow::{bail, ensure, Result};
use serde::Serialize;
use skewshift_core::expsum::{exp_sum, lattice_shells, vector_exp_sum, ExpSumResult};
use skewshift_core::skewshift::RealPolynomial;

use crate::args::ExpsumArgs;
use crate::output::{num, Outcome, Table};
use crate::parallel::{ordered_map, try_ordered_map};
use crate::parse;

/// Largest `N` accepted; sums cost `O(N)` each.
const MAX_N: u64 = 100_000_000;

#[derive(Serialize)]
struct Row {
    k: Option<Vec<i64>>,
    n: u64,
    re: f64,
    im: f64,
    magnitude: f64,
}

fn row(k: Option<Vec<i64>>, s: ExpSumResult) -> Row {
    Row {
        k,
        n: s.n,
        re: s.value.re,
        im: s.value.im,
        magnitude: s.magnitude,
    }
}

pub fn run(a: &ExpsumArgs) -> Result<Outcome> {
    let grid = parse::grid(&a.n_grid)?;
    ensure!(*grid.last().unwrap() <= MAX_N, "N must be at most {MAX_N}");
    let rows: Vec<Row> = if let Some(c) = &a.coeffs {
        ensure!(
            a.k.is_none() && a.radius.is_none(),
            "--coeffs cannot be combined with --k or --radius"
        );
        let p = RealPolynomial::from_monomial(parse::frequencies(c)?)?;
        ordered_map(&grid, |&n| row(None, exp_sum(&p, n)))
    } else {
        let (sys, x) = parse::system(&a.system)?;
        let pv = sys.as_poly_vector(&x)?;
        let ks: Vec<Vec<i64>> = match (&a.k, a.radius) {
            (Some(k), None) => vec![parse::ints(k)?],
            (None, Some(r)) => lattice_shells(r, sys.dim())?
                .iter()
                .skip(1)
                .flat_map(|s| s.iter())
                .collect(),
            (None, None) => bail!("give --k, --radius or --coeffs"),
            (Some(_), Some(_)) => bail!("--k and --radius are exclusive"),
        };
        let jobs: Vec<(Vec<i64>, u64)> = ks
            .iter()
            .flat_map(|k| grid.iter().map(move |&n| (k.clone(), n)))
            .collect();
        try_ordered_map(&jobs, |(k, n)| {
            vector_exp_sum(k, &pv, *n).map(|s| row(Some(k.clone()), s))
        })?
    };
    let keyed = rows.iter().any(|r| r.k.is_some());
    let mut table = Table::new(if keyed {
        &["k", "N", "re", "im", "magnitude"]
    } else {
        &["N", "re", "im", "magnitude"]
    });
    for r in &rows {
        let mut line = Vec::new();
        if let Some(k) = &r.k {
            line.push(k.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
        }
        line.extend([r.n.to_string(), num(r.re), num(r.im), num(r.magnitude)]);
        table.push(line);
    }
    Outcome::from_table(table).with_json(&rows)
}
