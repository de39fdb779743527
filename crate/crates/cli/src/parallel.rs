//! The worker pool. Parallel sections map over an indexed input and collect
//! in input order; sums are taken afterwards, sequentially.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use skewshift_core::setgeom::{
    fejer_bound_from_magnitudes, fejer_frequencies, fejer_magnitude, fejer_radius, measure_chunk, measure_from_hits,
    MeasureEstimate, Region, MEASURE_CHUNK,
};
use skewshift_core::skewshift::TorusPoint;

pub const WORKERS_VAR: &str = "SKEWSHIFT_WORKERS";

/// Worker count from the environment; all cores when unset.
pub fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_VAR) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{WORKERS_VAR} must be a positive integer, got `{v}`"))?;
            if n == 0 {
                bail!("{WORKERS_VAR} must be at least 1");
            }
            Ok(n)
        }
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        Err(e) => bail!("{WORKERS_VAR}: {e}"),
    }
}

pub fn install<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(f))
}

/// `f` over `items`, results in input order.
pub fn ordered_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

/// [`ordered_map`] for fallible `f`; the first error in input order wins.
pub fn try_ordered_map<T: Sync, U: Send, E: Send>(
    items: &[T],
    f: impl Fn(&T) -> std::result::Result<U, E> + Sync + Send,
) -> std::result::Result<Vec<U>, E> {
    ordered_map(items, f).into_iter().collect()
}

/// Fejer majorant with the frequency sweep spread over the pool.
pub fn fejer_bound(points: &[TorusPoint], center: &TorusPoint, eps: f64) -> Result<f64> {
    let b = center.dim();
    let r = fejer_radius(eps)?;
    let ks = fejer_frequencies(r, b)?;
    let mags = ordered_map(&ks, |k| fejer_magnitude(k, points, Some(center)));
    Ok(fejer_bound_from_magnitudes(r, b, &mags))
}

/// Monte-Carlo measure with one generator stream per chunk.
pub fn measure<R: Region + Sync + ?Sized>(region: &R, samples: u64, seed: u64) -> Result<MeasureEstimate> {
    if samples < 1000 {
        bail!("at least 1000 Monte-Carlo samples are needed, got {samples}");
    }
    let chunks: Vec<u64> = (0..samples.div_ceil(MEASURE_CHUNK)).collect();
    let hits: Vec<u64> = ordered_map(&chunks, |&c| {
        let count = MEASURE_CHUNK.min(samples - c * MEASURE_CHUNK);
        measure_chunk(region, seed, c, count)
    });
    Ok(measure_from_hits(hits.iter().sum(), samples))
}
