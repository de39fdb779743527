//! Sublinear hit-count experiments: exponent arithmetic, regime checks,
//! and log-log slope fits of `#{1 <= n <= N : P(n) in S}`.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::setgeom::{EpsBall, Region};
use crate::skewshift::{DifferenceEngine, PolyVector, SkewShiftSystem, TorusPoint};
use crate::stats::{least_squares, LinearFit};
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

/// `psi(b) = 2^(b-1)` for `2 <= b <= 5`, `b(b-1)` for `b >= 6`.
pub fn psi(b: u32) -> Result<u64> {
    match b {
        0 | 1 => Err(invalid("psi needs b >= 2")),
        2..=5 => Ok(1 << (b - 1)),
        _ => Ok(b as u64 * (b as u64 - 1)),
    }
}

/// `delta = 1 / (tau b psi(b))`. `tau <= 1` is computed but outside the
/// hypotheses of the theorems.
pub fn theoretical_delta(b: u32, tau: f64) -> Result<f64> {
    Ok(1.0 / (tau * b as f64 * psi(b)? as f64))
}

/// `1 - 1/(tau b 2^(m-1))`.
pub fn weyl_exponent(m: u32, b: u32, tau: f64) -> f64 {
    1.0 - 1.0 / (tau * b as f64 * (1u64 << (m - 1)) as f64)
}

/// `1 - 1/(tau b m(m-1))`.
pub fn vino_exponent(m: u32, b: u32, tau: f64) -> f64 {
    1.0 - 1.0 / (tau * b as f64 * (m as f64 * (m as f64 - 1.0)))
}

/// `psi(b) <= min(b 2^(b-1), 2^b - 1)`, i.e. the exponent from `psi` is at
/// least as good as both earlier ones.
pub fn psi_improves(b: u32) -> Result<bool> {
    let classical = (b as u64) << (b - 1);
    let other = (1u64 << b) - 1;
    Ok(psi(b)? <= classical.min(other))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Weyl,
    Vino,
    /// Whichever of the two gives the smaller exponent.
    Auto,
}

impl Mode {
    /// `2^(m-1)` or `m(m-1)`.
    fn weight(self, m: u32) -> f64 {
        match self.resolve(m) {
            Mode::Vino => m as f64 * (m as f64 - 1.0),
            _ => (1u64 << (m - 1)) as f64,
        }
    }

    pub fn resolve(self, m: u32) -> Mode {
        match self {
            Mode::Auto => {
                if m >= 2 && m * (m - 1) < 1 << (m - 1) {
                    Mode::Vino
                } else {
                    Mode::Weyl
                }
            }
            other => other,
        }
    }

    pub fn exponent(self, m: u32, b: u32, tau: f64) -> f64 {
        1.0 - 1.0 / (tau * b as f64 * self.weight(m))
    }

    /// `eps = N^(-1/(tau b w))`, the ball radius coupled to `N`.
    pub fn coupled_eps(self, m: u32, b: u32, tau: f64, n: u64) -> f64 {
        (n as f64).powf(-1.0 / (tau * b as f64 * self.weight(m)))
    }
}

/// `log N < w tau log(1/eta)` and `log B <= c0 log N`, with `w = 2^(m-1)`
/// or `m(m-1)`. A null target (`eta <= 0`) satisfies the first condition.
pub fn regime_check(degree: u64, n: u64, eta: f64, mode: Mode, m: u32, tau: f64, c0: f64) -> bool {
    let ln_n = (n as f64).ln();
    let measure_ok = eta <= 0.0 || ln_n < mode.weight(m) * tau * (1.0 / eta).ln();
    let degree_ok = degree == 0 || (degree as f64).ln() <= c0 * ln_n;
    measure_ok && degree_ok
}

/// Where orbit points come from.
#[derive(Clone, Debug)]
pub enum OrbitSource {
    /// `P(1), P(2), ...`
    Poly(PolyVector),
    /// `f x, f^2 x, ...`
    Skew { system: SkewShiftSystem, x: TorusPoint },
}

impl OrbitSource {
    pub fn dim(&self) -> usize {
        match self {
            OrbitSource::Poly(p) => p.dim(),
            OrbitSource::Skew { system, .. } => system.dim(),
        }
    }

    /// Maximal degree of the generating polynomials.
    pub fn max_degree(&self) -> u32 {
        match self {
            OrbitSource::Poly(p) => p.degrees().into_iter().max().unwrap_or(0) as u32,
            OrbitSource::Skew { system, .. } => system.dim() as u32,
        }
    }

    /// The first `n` points.
    pub fn points(&self, n: u64) -> Result<Vec<TorusPoint>> {
        match self {
            OrbitSource::Poly(p) => {
                let mut engines: Vec<DifferenceEngine> = p.polys.iter().map(|q| q.differences(1)).collect();
                (0..n)
                    .map(|_| TorusPoint::new(engines.iter_mut().map(|e| e.next().expect("unbounded")).collect()))
                    .collect()
            }
            OrbitSource::Skew { system, x } => Ok(system.orbit(x, n)?.collect()),
        }
    }
}

/// What the hits are counted in.
pub enum Target<'a> {
    /// A set independent of `N` with measure at most `eta`.
    Fixed {
        region: &'a dyn Region,
        degree: u64,
        eta: f64,
    },
    /// The ball of radius `N^(-1/(tau b w))` around `center`.
    CoupledBall { center: TorusPoint },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub tau: f64,
    pub slack: f64,
    /// Constant in `log B <= c0 log N`.
    pub c0: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Auto,
            tau: 1.001,
            slack: 0.1,
            c0: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentReport {
    pub n_grid: Vec<u64>,
    pub counts: Vec<u64>,
    /// Ball radius per `N` for coupled targets.
    pub eps: Vec<Option<f64>>,
    /// Whether each `N` satisfied the regime and entered the fit.
    pub regime_ok: Vec<bool>,
    pub fit: LinearFit,
    pub fitted_slope: f64,
    pub theoretical_exponent: f64,
    pub slack: f64,
    pub mode: Mode,
    pub tau: f64,
    pub degree: u64,
    pub eta: Option<f64>,
    /// Fewer than two `N` satisfied the regime; the fit then used all `N`.
    pub regime_violation: bool,
    pub pass: bool,
}

impl ExponentReport {
    pub fn any_regime_flag(&self) -> bool {
        self.regime_violation || self.regime_ok.iter().any(|ok| !ok)
    }
}

/// Fewest grid points accepted by [`run_experiment`].
pub const MIN_GRID: usize = 6;

/// Counts hits for every `N` in the grid and fits `log max(count, 1)`
/// against `log N`.
pub fn run_experiment(
    source: &OrbitSource,
    target: &Target<'_>,
    n_grid: &[u64],
    config: &ExperimentConfig,
) -> Result<ExponentReport> {
    if n_grid.len() < MIN_GRID || n_grid.windows(2).any(|w| w[0] >= w[1]) || n_grid[0] == 0 {
        return Err(invalid(alloc::format!(
            "N grid needs at least {MIN_GRID} strictly increasing positive values"
        )));
    }
    let b = source.dim();
    let m = source.max_degree().max(1);
    if let Target::Fixed { region, .. } = target {
        if region.dim() != b {
            return Err(crate::Error::DimensionMismatch {
                expected: b,
                found: region.dim(),
            });
        }
    }
    let mode = config.mode.resolve(m);
    let exponent = mode.exponent(m, b as u32, config.tau);
    let n_max = *n_grid.last().expect("checked non-empty");
    let fixed_points = match target {
        Target::Fixed { .. } => Some(source.points(n_max)?),
        Target::CoupledBall { .. } => None,
    };

    let mut counts = Vec::with_capacity(n_grid.len());
    let mut eps = Vec::with_capacity(n_grid.len());
    let mut regime_ok = Vec::with_capacity(n_grid.len());
    let (degree, eta) = match target {
        Target::Fixed { degree, eta, .. } => (*degree, Some(*eta)),
        Target::CoupledBall { .. } => (2 * b as u64, None),
    };
    for &n in n_grid {
        match target {
            Target::Fixed { region, eta, .. } => {
                let pts = fixed_points.as_ref().expect("materialized for fixed targets");
                counts.push(pts[..n as usize].iter().filter(|p| region.contains(p)).count() as u64);
                eps.push(None);
                regime_ok.push(regime_check(degree, n, *eta, mode, m, config.tau, config.c0));
            }
            Target::CoupledBall { center } => {
                let e = mode.coupled_eps(m, b as u32, config.tau, n);
                let ball = EpsBall::new(center.clone(), e)?;
                let hits = source.points(n)?.iter().filter(|p| ball.contains(p)).count() as u64;
                counts.push(hits);
                eps.push(Some(e));
                // log N = w tau log(1/eps) holds with equality by construction
                regime_ok.push(true);
            }
        }
    }

    let used: Vec<usize> = (0..n_grid.len()).filter(|&i| regime_ok[i]).collect();
    let regime_violation = used.len() < 2;
    let idx: Vec<usize> = if regime_violation {
        (0..n_grid.len()).collect()
    } else {
        used
    };
    let x: Vec<f64> = idx.iter().map(|&i| (n_grid[i] as f64).ln()).collect();
    let y: Vec<f64> = idx.iter().map(|&i| (counts[i].max(1) as f64).ln()).collect();
    let fit = least_squares(&x, &y)?;
    let pass = !regime_violation && fit.slope <= exponent + config.slack;
    Ok(ExponentReport {
        n_grid: n_grid.to_vec(),
        counts,
        eps,
        regime_ok,
        fit,
        fitted_slope: fit.slope,
        theoretical_exponent: exponent,
        slack: config.slack,
        mode,
        tau: config.tau,
        degree,
        eta,
        regime_violation,
        pass,
    })
}

/// `2^lo, 2^(lo+1), ..., 2^hi`.
pub fn dyadic_grid(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}
