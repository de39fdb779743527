use anyhow::{ensure, Result};

use crate::args::OrbitArgs;
use crate::output::{sig, Outcome, Table};
use crate::parse;

/// Largest orbit written in one run.
const MAX_POINTS: u64 = 10_000_000;

pub fn run(a: &OrbitArgs) -> Result<Outcome> {
    ensure!(
        a.n <= MAX_POINTS,
        "--n {} exceeds the dump limit of {MAX_POINTS} points",
        a.n
    );
    let (sys, x) = parse::system(&a.system)?;
    let mut cols = vec!["n".to_string()];
    cols.extend((1..=sys.dim()).map(|i| format!("x_{i}")));
    let mut table = Table {
        columns: cols,
        rows: Vec::with_capacity(a.n as usize),
    };
    for (i, p) in sys.orbit(&x, a.n)?.enumerate() {
        let mut row = vec![(i + 1).to_string()];
        row.extend(p.coords().iter().map(|c| sig(c.to_f64(), 10)));
        table.push(row);
    }
    Ok(Outcome::from_table(table))
}
