use anyhow::{ensure, Context, Result};
use serde::Serialize;
use skewshift_core::expsum::{weyl_ratio, WeylRatio};
use skewshift_core::skewshift::RealPolynomial;

use crate::args::WeylArgs;
use crate::output::{num, Outcome, Table};
use crate::parallel::try_ordered_map;
use crate::parse;

#[derive(Serialize)]
struct Row {
    n: u64,
    #[serde(flatten)]
    ratio: WeylRatio,
}

pub fn run(a: &WeylArgs) -> Result<Outcome> {
    let grid = parse::grid(&a.n_grid)?;
    let p = match &a.coeffs {
        Some(c) => RealPolynomial::from_monomial(parse::frequencies(c)?)?,
        None => {
            let (sys, x) = parse::system(&a.system)?;
            let i = a.coord.unwrap_or(sys.dim());
            ensure!((1..=sys.dim()).contains(&i), "--coord must lie in 1..={}", sys.dim());
            sys.as_poly_vector(&x)?.polys.swap_remove(i - 1)
        }
    };
    let rows = try_ordered_map(&grid, |&n| {
        weyl_ratio(&p, n)
            .map(|ratio| Row { n, ratio })
            .with_context(|| format!("at N = {n}"))
    })?;
    let mut table = Table::new(&["N", "magnitude", "rhs", "ratio", "non_diophantine"]);
    for r in &rows {
        table.push(vec![
            r.n.to_string(),
            num(r.ratio.magnitude),
            num(r.ratio.rhs),
            num(r.ratio.ratio),
            r.ratio.non_diophantine.to_string(),
        ]);
    }
    let mut out = Outcome::from_table(table).with_json(&rows)?;
    if rows.iter().any(|r| r.ratio.non_diophantine) {
        out.notes
            .push("leading coefficient is degenerate; ratios carry no claim".into());
    }
    Ok(out)
}
