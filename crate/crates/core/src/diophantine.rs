//! Continued fractions, empirical Diophantine constants and the classical
//! estimates for `sum_{k <= H} min(N, 1/||k alpha||)`.
//!
//! A frequency `alpha` satisfies `DC(gamma, tau)` when
//! `||k alpha|| >= gamma / |k|^tau` for every nonzero integer `k`. Here the
//! constant is measured, not assumed: [`dc_constant`] returns
//! `min_{1 <= k <= K} k^tau ||k alpha||` for a finite search depth `K`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::stats::CompensatedSum;
use crate::torus::TorusScalar;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

/// Largest continued-fraction depth accepted by [`continued_fraction`].
pub const MAX_CF_DEPTH: usize = 40;

/// Approximation errors below this are treated as "rational to working
/// precision".
pub const NEAR_EXACT_TOLERANCE: f64 = 7.888_609_052_210_118e-31; // 2^-100

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A convergent `p / q` of `alpha` with `err = |alpha - p/q|`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RationalApproximant {
    pub p: u64,
    pub q: u64,
    pub err: f64,
    /// Set on the last convergent when `alpha` equals it to working
    /// precision; the expansion stops there.
    pub near_exact: bool,
}

/// Continued-fraction convergents `p_n / q_n`, `n >= 1`, of a frequency in
/// `(0, 1)`. The zeroth convergent `0/1` is not listed, so denominators
/// strictly increase.
pub fn continued_fraction(alpha: TorusScalar, depth: usize) -> Result<Vec<RationalApproximant>> {
    if depth == 0 || depth > MAX_CF_DEPTH {
        return Err(invalid(alloc::format!(
            "continued fraction depth must be in 1..={MAX_CF_DEPTH}, got {depth}"
        )));
    }
    let a = alpha.raw();
    if a <= 1 {
        return Err(invalid("alpha must lie strictly inside (0, 1)"));
    }

    // Euclid on (a, 2^128). The first quotient is taken by hand since 2^128
    // does not fit.
    let mut quotient = u128::MAX / a;
    let mut rem = u128::MAX % a + 1;
    if rem == a {
        quotient += 1;
        rem = 0;
    }
    let (mut num, mut den) = (rem, a);

    let (mut p_prev, mut q_prev): (u128, u128) = (1, 0);
    let (mut p, mut q): (u128, u128) = (0, 1);
    let mut out = Vec::with_capacity(depth);
    while let (Some(p_next), Some(q_next)) = (
        quotient.checked_mul(p).and_then(|v| v.checked_add(p_prev)),
        quotient.checked_mul(q).and_then(|v| v.checked_add(q_prev)),
    ) {
        if q_next > u64::MAX as u128 {
            break;
        }
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);

        let err = alpha.mul_wrapping(q).centered_raw().unsigned_abs() as f64 / TWO_POW_128 / q as f64;
        let terminal = num == 0 || err < NEAR_EXACT_TOLERANCE;
        out.push(RationalApproximant {
            p: p as u64,
            q: q as u64,
            err,
            near_exact: terminal,
        });
        if terminal || out.len() == depth {
            break;
        }
        quotient = den / num;
        (num, den) = (den % num, num);
    }
    Ok(out)
}

/// `min_{1 <= k <= K} k^tau ||k alpha||`, the empirical `gamma` at depth `K`.
pub fn dc_constant(alpha: TorusScalar, tau: f64, k_max: u64) -> Result<f64> {
    check_dc_args(tau, k_max)?;
    let mut acc = TorusScalar::ZERO;
    let mut best = f64::INFINITY;
    for k in 1..=k_max {
        acc += alpha;
        best = best.min((k as f64).powf(tau) * acc.norm());
    }
    Ok(best)
}

/// Running minima of `k^tau ||k alpha||`: entry `K - 1` equals
/// `dc_constant(alpha, tau, K)`.
pub fn dc_prefix_minima(alpha: TorusScalar, tau: f64, k_max: u64) -> Result<Vec<f64>> {
    check_dc_args(tau, k_max)?;
    let mut acc = TorusScalar::ZERO;
    let mut best = f64::INFINITY;
    let mut out = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        acc += alpha;
        best = best.min((k as f64).powf(tau) * acc.norm());
        out.push(best);
    }
    Ok(out)
}

fn check_dc_args(tau: f64, k_max: u64) -> Result<()> {
    if k_max == 0 {
        return Err(invalid("search depth K must be at least 1"));
    }
    if !tau.is_finite() {
        return Err(Error::NonFinite("dc_constant tau"));
    }
    Ok(())
}

/// Convergents and empirical constant of one frequency.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiophantineProfile {
    #[cfg_attr(feature = "serde", serde(skip))]
    pub alpha: TorusScalar,
    pub tau: f64,
    pub gamma_emp: f64,
    pub approximants: Vec<RationalApproximant>,
    pub search_depth: u64,
}

impl DiophantineProfile {
    pub fn compute(alpha: TorusScalar, tau: f64, search_depth: u64, cf_depth: usize) -> Result<Self> {
        if !(tau > 1.0) {
            return Err(invalid("tau must exceed 1"));
        }
        Ok(DiophantineProfile {
            alpha,
            tau,
            gamma_emp: dc_constant(alpha, tau, search_depth)?,
            approximants: continued_fraction(alpha, cf_depth)?,
            search_depth,
        })
    }
}

/// The largest convergent denominator `q_n <= N`, checked against
/// `(gamma N)^(1/tau) < q_n`.
pub fn find_denominator(profile: &DiophantineProfile, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    let apx = &profile.approximants;
    let best = apx.iter().rev().find(|a| a.q <= n).ok_or(Error::DepthTooSmall { n })?;
    let bracketed = apx.iter().any(|a| a.q > n) || apx.last().is_some_and(|a| a.near_exact);
    if !bracketed {
        return Err(Error::DepthTooSmall { n });
    }
    let lower = (profile.gamma_emp * n as f64).powf(1.0 / profile.tau);
    if !(best.q as f64 > lower) {
        return Err(Error::BoundViolated(alloc::format!(
            "q = {} is not above (gamma N)^(1/tau) = {lower}",
            best.q
        )));
    }
    Ok(best.q)
}

/// `sum_{k=1}^{H} min(N, 1/||k alpha||)`; a term with `k alpha` integral
/// contributes `N`.
pub fn min_sum(alpha: TorusScalar, h: u64, n: u64) -> f64 {
    let cap = n as f64;
    let mut acc = TorusScalar::ZERO;
    let mut sum = CompensatedSum::default();
    for _ in 0..h {
        acc += alpha;
        sum.add(clamped_reciprocal(acc, cap));
    }
    sum.value()
}

/// `min(cap, 1/||x||)` with `1/0 = infinity`.
pub(crate) fn clamped_reciprocal(x: TorusScalar, cap: f64) -> f64 {
    let d = x.norm();
    if d * cap <= 1.0 {
        cap
    } else {
        1.0 / d
    }
}

/// `gamma^(-1/tau) H N^(1-1/tau) + H log N + N + N log N`.
pub fn dcweyl_bound(gamma: f64, tau: f64, h: u64, n: u64) -> f64 {
    let (h, n) = (h as f64, n as f64);
    gamma.powf(-1.0 / tau) * h * n.powf(1.0 - 1.0 / tau) + h * n.ln() + n + n * n.ln()
}

/// `HN/q + H log q + N + q log q`, valid whenever `|alpha - p/q| <= 1/q^2`.
pub fn rational_min_sum_bound(h: u64, n: u64, q: u64) -> f64 {
    let (h, n, q) = (h as f64, n as f64, q as f64);
    h * n / q + h * q.ln() + n + q * q.ln()
}

/// `alpha * p / q` as a point of the torus, taking `alpha` in `[0, 1)`.
pub fn scaled_frequency(alpha: TorusScalar, p: i64, q: u64) -> Result<TorusScalar> {
    if q == 0 {
        return Err(invalid("q must be positive"));
    }
    if p == 0 {
        return Err(invalid("p = 0 makes the scaled frequency rational"));
    }
    if (p.unsigned_abs()).gcd(&q) != 1 {
        return Err(invalid("p and q must be coprime"));
    }
    let scaled = (BigInt::from(alpha.raw()) * BigInt::from(p)).div_floor(&BigInt::from(q));
    Ok(TorusScalar::from_bigint_floor(&scaled))
}

/// Empirical `gamma` of the scaled frequency `alpha p / q`.
pub fn scaled_dc_check(alpha: TorusScalar, p: i64, q: u64, tau: f64, k_max: u64) -> Result<f64> {
    dc_constant(scaled_frequency(alpha, p, q)?, tau, k_max)
}
