//! Target sets on `T^b`: semi-algebraic sets in disjunctive normal form and
//! sup-norm balls, together with hit counting and the Fejer-kernel majorant
//! of the number of orbit points in a small ball.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{invalid, Error, Result};
use crate::expsum::{lattice_shells, unit_phasor};
use crate::skewshift::TorusPoint;
use crate::stats::{CompensatedComplexSum, CompensatedSum};
use crate::torus::{circle_distance, TorusScalar};
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

/// Sign tests accept values within this distance of zero.
pub const SIGN_TOLERANCE: f64 = 1e-12;
/// Samples drawn from one generator stream by [`measure_estimate`].
pub const MEASURE_CHUNK: u64 = 4096;
/// Largest number of cells [`grid_cover`] will visit.
pub const GRID_LIMIT: f64 = 1e8;

/// `F_R(x) = (1/R) (sin(pi R x) / sin(pi x))^2`, equal to `R` at integers.
pub fn fejer_kernel(x: f64, r: u32) -> f64 {
    if r == 0 {
        return 0.0;
    }
    let y = x - x.round();
    if y == 0.0 {
        return r as f64;
    }
    let pi = core::f64::consts::PI;
    let q = libm::sin(pi * r as f64 * y) / libm::sin(pi * y);
    q * q / r as f64
}

/// Anything hit counts can be taken against.
pub trait Region {
    fn dim(&self) -> usize;
    fn contains(&self, x: &TorusPoint) -> bool;
    /// Lebesgue measure when it is known in closed form.
    fn exact_measure(&self) -> Option<f64>;
}

/// `{x : ||x_j - c_j||_T < eps for all j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsBall {
    pub center: TorusPoint,
    pub eps: f64,
}

impl EpsBall {
    pub fn new(center: TorusPoint, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.5) {
            return Err(invalid(alloc::format!("ball radius must lie in (0, 1/2), got {eps}")));
        }
        Ok(EpsBall { center, eps })
    }
}

impl Region for EpsBall {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn contains(&self, x: &TorusPoint) -> bool {
        x.dim() == self.dim()
            && x.coords()
                .iter()
                .zip(self.center.coords())
                .all(|(&a, &c)| circle_distance(a, c) < self.eps)
    }

    fn exact_measure(&self) -> Option<f64> {
        Some((2.0 * self.eps).powi(self.dim() as i32))
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiPolynomial {
    pub monomials: Vec<Monomial>,
}

impl MultiPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut sum = CompensatedSum::default();
        for m in &self.monomials {
            let term = m
                .exponents
                .iter()
                .zip(x)
                .fold(m.coefficient, |acc, (&e, &v)| acc * v.powi(e as i32));
            sum.add(term);
        }
        sum.value()
    }

    pub fn degree(&self) -> u32 {
        self.monomials
            .iter()
            .filter(|m| m.coefficient != 0.0)
            .map(|m| m.exponents.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Bound on `|p(x) - p(y)| / max_j |x_j - y_j|` over `[0, 1]^b`.
    pub fn lipschitz(&self) -> f64 {
        self.monomials
            .iter()
            .map(|m| m.coefficient.abs() * m.exponents.iter().sum::<u32>() as f64)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Constraint {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub poly: MultiPolynomial,
    pub relation: Relation,
}

impl Constraint {
    /// `p(x) rel 0` with the sign band widened by `slack`.
    fn holds(&self, x: &[f64], slack: f64) -> bool {
        let v = self.poly.eval(x);
        match self.relation {
            Relation::Ge => v >= -slack,
            Relation::Le => v <= slack,
            Relation::Eq => v.abs() <= slack,
        }
    }
}

/// A finite union of finite intersections of polynomial sign conditions,
/// evaluated at the representative of each point in `[0, 1)^b`.
///
/// No clauses is the empty set; a clause without constraints is the whole
/// torus.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SemiAlgebraicSet {
    pub dim: usize,
    pub clauses: Vec<Vec<Constraint>>,
}

impl SemiAlgebraicSet {
    pub fn empty(dim: usize) -> Self {
        SemiAlgebraicSet {
            dim,
            clauses: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        SemiAlgebraicSet {
            dim,
            clauses: vec![Vec::new()],
        }
    }

    /// Rejects monomials whose exponent list does not match the dimension.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > crate::skewshift::MAX_DIM {
            return Err(invalid("set dimension out of range"));
        }
        for c in self.clauses.iter().flatten() {
            for m in &c.poly.monomials {
                if m.exponents.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: m.exponents.len(),
                    });
                }
                if !m.coefficient.is_finite() {
                    return Err(Error::NonFinite("monomial coefficient"));
                }
            }
        }
        Ok(())
    }

    pub fn polynomial_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.clauses
            .iter()
            .flatten()
            .map(|c| c.poly.degree())
            .max()
            .unwrap_or(0)
    }

    /// `s d`: polynomial count times maximal degree.
    pub fn degree(&self) -> u64 {
        self.polynomial_count() as u64 * self.max_degree() as u64
    }

    pub fn contains_real(&self, x: &[f64]) -> bool {
        self.clauses
            .iter()
            .any(|clause| clause.iter().all(|c| c.holds(x, SIGN_TOLERANCE)))
    }

    fn is_trivially_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    fn is_trivially_full(&self) -> bool {
        self.clauses.iter().any(Vec::is_empty)
    }
}

impl Region for SemiAlgebraicSet {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &TorusPoint) -> bool {
        let reals: Vec<f64> = x.coords().iter().map(|c| c.to_f64()).collect();
        x.dim() == self.dim && self.contains_real(&reals)
    }

    fn exact_measure(&self) -> Option<f64> {
        if self.is_trivially_full() {
            Some(1.0)
        } else if self.is_trivially_empty() {
            Some(0.0)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HitReport {
    pub n: u64,
    pub count: u64,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
}

impl HitReport {
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self.ratio = (bound > 0.0).then(|| self.count as f64 / bound);
        self
    }
}

/// Number of the first `N` orbit points inside `region`.
pub fn hit_count<R: Region + ?Sized>(
    orbit: impl IntoIterator<Item = TorusPoint>,
    region: &R,
    n: u64,
) -> Result<HitReport> {
    let mut seen = 0u64;
    let mut count = 0u64;
    for x in orbit.into_iter().take(n as usize) {
        seen += 1;
        count += region.contains(&x) as u64;
    }
    if seen < n {
        return Err(invalid(alloc::format!("orbit ended after {seen} of {n} points")));
    }
    Ok(HitReport {
        n,
        count,
        bound: None,
        ratio: None,
    })
}

/// `R = floor(1 / (10 eps))`, with a little slack so that `eps = 0.05`
/// gives 2 despite rounding.
pub fn fejer_radius(eps: f64) -> Result<u32> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid("eps must be positive"));
    }
    let r = (1.0 / (10.0 * eps) + 1e-9).floor();
    if r < 1.0 {
        return Err(invalid(alloc::format!(
            "eps = {eps} gives R = 0; the Fejer bound needs eps <= 1/10"
        )));
    }
    if r > u32::MAX as f64 {
        return Err(invalid("eps too small"));
    }
    Ok(r as u32)
}

/// All integer vectors with `||k|| < R`, shell by shell.
pub fn fejer_frequencies(r: u32, b: usize) -> Result<Vec<Vec<i64>>> {
    Ok(lattice_shells(r as i64, b)?.iter().flat_map(|s| s.iter()).collect())
}

/// `|sum_n e(<k, x_n - c>)|`.
pub fn fejer_magnitude(k: &[i64], points: &[TorusPoint], center: Option<&TorusPoint>) -> f64 {
    let mut acc = CompensatedComplexSum::default();
    for x in points {
        let mut phase = TorusScalar::ZERO;
        for (j, (&kj, &xj)) in k.iter().zip(x.coords()).enumerate() {
            let shifted = match center {
                Some(c) => xj - c.coords()[j],
                None => xj,
            };
            phase += shifted.mul_int(kj as i128);
        }
        acc.add(unit_phasor(phase));
    }
    acc.value().norm()
}

/// `2^b R^(-b) sum_k m_k` for magnitudes listed in [`fejer_frequencies`]
/// order.
pub fn fejer_bound_from_magnitudes(r: u32, b: usize, magnitudes: &[f64]) -> f64 {
    let mut sum = CompensatedSum::default();
    for &m in magnitudes {
        sum.add(m);
    }
    (2.0 / r as f64).powi(b as i32) * sum.value()
}

/// `2^b R^(-b) sum_{||k|| < R} |sum_n e(<k, x_n>)|`, a majorant of the
/// number of points within `eps` of the origin.
pub fn fejer_bound(points: &[TorusPoint], eps: f64) -> Result<f64> {
    fejer_bound_impl(points, eps, None)
}

/// [`fejer_bound`] for the ball around `center`.
pub fn fejer_bound_centered(points: &[TorusPoint], center: &TorusPoint, eps: f64) -> Result<f64> {
    fejer_bound_impl(points, eps, Some(center))
}

fn fejer_bound_impl(points: &[TorusPoint], eps: f64, center: Option<&TorusPoint>) -> Result<f64> {
    let Some(first) = points.first() else {
        return Ok(0.0);
    };
    let b = center.map_or(first.dim(), TorusPoint::dim);
    if let Some(bad) = points.iter().find(|p| p.dim() != b) {
        return Err(Error::DimensionMismatch {
            expected: b,
            found: bad.dim(),
        });
    }
    let r = fejer_radius(eps)?;
    let mags: Vec<f64> = fejer_frequencies(r, b)?
        .iter()
        .map(|k| fejer_magnitude(k, points, center))
        .collect();
    Ok(fejer_bound_from_magnitudes(r, b, &mags))
}

/// Balls of radius `eps` at the centres of the cells of a grid with side at
/// most `eps`, one for every cell that may meet `set`.
///
/// A cell is kept when some clause holds at its centre after widening each
/// sign test by the constraint's Lipschitz constant times the half-side, so
/// every point of `set` lies in a kept cell.
pub fn grid_cover(set: &SemiAlgebraicSet, eps: f64) -> Result<Vec<EpsBall>> {
    set.validate()?;
    let b = set.dim;
    if b > 3 {
        return Err(invalid("grid_cover supports b <= 3"));
    }
    if !(1e-3..0.5).contains(&eps) {
        return Err(invalid("grid_cover needs eps in [1e-3, 1/2)"));
    }
    let m = (1.0 / eps - 1e-9).ceil().max(1.0) as u64;
    let cells = (m as f64).powi(b as i32);
    if cells > GRID_LIMIT {
        return Err(Error::Infeasible {
            what: "grid_cover cells",
            estimate: cells,
            limit: GRID_LIMIT,
        });
    }
    let half = 0.5 / m as f64;
    let slack: Vec<Vec<f64>> = set
        .clauses
        .iter()
        .map(|cl| cl.iter().map(|c| c.poly.lipschitz() * half + SIGN_TOLERANCE).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0u64; b];
    let mut center = vec![0.0; b];
    loop {
        for (c, &i) in center.iter_mut().zip(&idx) {
            *c = (2 * i + 1) as f64 * half;
        }
        let hit = set
            .clauses
            .iter()
            .zip(&slack)
            .any(|(cl, sl)| cl.iter().zip(sl).all(|(c, &s)| c.holds(&center, s)));
        if hit {
            out.push(EpsBall {
                center: TorusPoint::from_f64(&center)?,
                eps,
            });
        }
        let Some(pos) = idx.iter().position(|&i| i + 1 < m) else {
            break;
        };
        idx[pos] += 1;
        for i in &mut idx[..pos] {
            *i = 0;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Uniform random point of `T^b` from a generator.
fn random_point(rng: &mut ChaCha8Rng, b: usize) -> TorusPoint {
    let coords = (0..b)
        .map(|_| {
            let hi = rng.next_u64() as u128;
            let lo = rng.next_u64() as u128;
            TorusScalar::from_raw(hi << 64 | lo)
        })
        .collect();
    TorusPoint::new(coords).expect("dimension validated by caller")
}

/// Hits among samples `chunk * MEASURE_CHUNK ..` of the stream for `seed`.
pub fn measure_chunk<R: Region + ?Sized>(region: &R, seed: u64, chunk: u64, count: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    (0..count)
        .filter(|_| region.contains(&random_point(&mut rng, region.dim())))
        .count() as u64
}

/// Monte-Carlo estimate of the measure of `region`; identical for a given
/// seed however the chunks are scheduled.
pub fn measure_estimate<R: Region + ?Sized>(region: &R, samples: u64, seed: u64) -> Result<MeasureEstimate> {
    if samples < 1000 {
        return Err(invalid("measure_estimate needs at least 1000 samples"));
    }
    let b = region.dim();
    if b == 0 || b > crate::skewshift::MAX_DIM {
        return Err(invalid("region dimension out of range"));
    }
    let chunks = samples.div_ceil(MEASURE_CHUNK);
    let hits: u64 = (0..chunks)
        .map(|c| {
            let count = MEASURE_CHUNK.min(samples - c * MEASURE_CHUNK);
            measure_chunk(region, seed, c, count)
        })
        .sum();
    Ok(measure_from_hits(hits, samples))
}

pub fn measure_from_hits(hits: u64, samples: u64) -> MeasureEstimate {
    let p = hits as f64 / samples as f64;
    MeasureEstimate {
        value: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewshift::SkewShiftSystem;
    use crate::Frequency;
    use proptest::prelude::*;

    fn pt(c: &[f64]) -> TorusPoint {
        TorusPoint::from_f64(c).unwrap()
    }

    fn linear(coeffs: &[f64], constant: f64, relation: Relation) -> Constraint {
        let b = coeffs.len();
        let mut monomials: Vec<Monomial> = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut e = vec![0; b];
                e[i] = 1;
                Monomial {
                    exponents: e,
                    coefficient: c,
                }
            })
            .collect();
        monomials.push(Monomial {
            exponents: vec![0; b],
            coefficient: constant,
        });
        Constraint {
            poly: MultiPolynomial { monomials },
            relation,
        }
    }

    fn disc() -> Constraint {
        Constraint {
            poly: MultiPolynomial {
                monomials: vec![
                    Monomial {
                        exponents: vec![2, 0],
                        coefficient: 1.0,
                    },
                    Monomial {
                        exponents: vec![0, 2],
                        coefficient: 1.0,
                    },
                    Monomial {
                        exponents: vec![0, 0],
                        coefficient: -0.25,
                    },
                ],
            },
            relation: Relation::Le,
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(fejer_kernel(0.0, 5), 5.0);
        assert!(fejer_kernel(0.5, 2).abs() < 1e-15);
        assert!((fejer_kernel(0.25, 2) - 1.0).abs() < 1e-14);
        assert_eq!(fejer_kernel(3.0, 7), 7.0);
    }

    #[test]
    fn kernel_matches_fourier_series() {
        for r in [1u32, 2, 5, 13] {
            for i in 0..1000 {
                let x = i as f64 / 1000.0 - 0.5;
                let series: f64 = (-(r as i64) + 1..r as i64)
                    .map(|k| (1.0 - k.abs() as f64 / r as f64) * libm::cos(core::f64::consts::TAU * k as f64 * x))
                    .sum();
                let f = fejer_kernel(x, r);
                assert!(f >= 0.0);
                assert!((f - series).abs() < 1e-10, "r={r} x={x}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        let ball = EpsBall::new(pt(&[0.0]), 0.1).unwrap();
        assert!(ball.contains(&pt(&[0.95])));
        assert!(!ball.contains(&pt(&[0.2])));
        let half = SemiAlgebraicSet {
            dim: 2,
            clauses: vec![vec![linear(&[1.0, 0.0], -0.5, Relation::Ge)]],
        };
        assert!(!half.contains(&pt(&[0.3, 0.7])));
        let union = SemiAlgebraicSet {
            dim: 2,
            clauses: vec![vec![disc()], vec![linear(&[1.0, 0.0], -0.9, Relation::Ge)]],
        };
        assert!(union.contains(&pt(&[0.1, 0.1])));
        assert!(union.contains(&pt(&[0.95, 0.9])));
        assert!(!union.contains(&pt(&[0.6, 0.6])));
        assert_eq!(union.polynomial_count(), 2);
        assert_eq!(union.degree(), 4);
        assert!(EpsBall::new(pt(&[0.0]), 0.6).is_err());
    }

    #[test]
    fn equality_uses_tolerance_band() {
        let line = SemiAlgebraicSet {
            dim: 1,
            clauses: vec![vec![linear(&[1.0], -0.5, Relation::Eq)]],
        };
        assert!(line.contains(&pt(&[0.5])));
        assert!(line.contains_real(&[0.5 + 5e-13]));
        assert!(!line.contains_real(&[0.5 + 1e-11]));
    }

    #[test]
    fn hit_count_examples() {
        let c = pt(&[0.3, 0.4]);
        let ball = EpsBall::new(c.clone(), 0.01).unwrap();
        let r = hit_count(core::iter::repeat_n(c.clone(), 50), &ball, 50).unwrap();
        assert_eq!(r.count, 50);

        let pts: Vec<_> = (0..10).map(|i| pt(&[0.05 + 0.1 * i as f64])).collect();
        let ball = EpsBall::new(pt(&[0.0]), 0.1).unwrap();
        assert_eq!(hit_count(pts.clone(), &ball, 10).unwrap().count, 2);
        assert_eq!(
            hit_count(pts.clone(), &SemiAlgebraicSet::empty(1), 10).unwrap().count,
            0
        );
        assert!(hit_count(pts, &ball, 11).is_err());

        let r = HitReport {
            n: 10,
            count: 2,
            bound: None,
            ratio: None,
        }
        .with_bound(4.0);
        assert_eq!(r.ratio, Some(0.5));
    }

    #[test]
    fn fejer_bound_examples() {
        let zeros = vec![TorusPoint::zero(2).unwrap(); 40];
        let r = fejer_radius(0.05).unwrap();
        assert_eq!(r, 2);
        let bound = fejer_bound(&zeros, 0.05).unwrap();
        // every frequency contributes N
        assert!((bound - 4.0 / 4.0 * 40.0 * 9.0).abs() < 1e-9);
        assert!(bound >= 40.0);
        assert!(fejer_bound(&[pt(&[0.77])], 0.1).unwrap() >= 1.0);
        assert!(fejer_bound(&zeros, 0.2).is_err());

        let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
        let orbit: Vec<_> = sys.orbit(&TorusPoint::zero(2).unwrap(), 1000).unwrap().collect();
        let ball = EpsBall::new(TorusPoint::zero(2).unwrap(), 0.05).unwrap();
        let count = hit_count(orbit.clone(), &ball, 1000).unwrap().count;
        let bound = fejer_bound(&orbit, 0.05).unwrap();
        assert!(count as f64 <= bound, "{count} > {bound}");
    }

    #[test]
    fn centered_bound_matches_translated_points() {
        let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
        let orbit: Vec<_> = sys.orbit(&pt(&[0.2, 0.9]), 300).unwrap().collect();
        let c = pt(&[0.3, 0.6]);
        let shifted: Vec<_> = orbit
            .iter()
            .map(|p| TorusPoint::new(p.coords().iter().zip(c.coords()).map(|(&a, &b)| a - b).collect()).unwrap())
            .collect();
        let a = fejer_bound_centered(&orbit, &c, 0.025).unwrap();
        let b = fejer_bound(&shifted, 0.025).unwrap();
        assert!((a - b).abs() < 1e-9 * a.max(1.0));
    }

    #[test]
    fn cover_examples() {
        let point = SemiAlgebraicSet {
            dim: 2,
            clauses: vec![vec![
                linear(&[1.0, 0.0], -0.3, Relation::Eq),
                linear(&[0.0, 1.0], -0.55, Relation::Eq),
            ]],
        };
        let balls = grid_cover(&point, 0.1).unwrap();
        assert!(!balls.is_empty() && balls.len() <= 4, "{}", balls.len());
        assert!(balls.iter().any(|b| b.contains(&pt(&[0.3, 0.55]))));

        assert!(grid_cover(&SemiAlgebraicSet::empty(2), 0.1).unwrap().is_empty());

        let strip = SemiAlgebraicSet {
            dim: 2,
            clauses: vec![vec![linear(&[1.0, 0.0], -0.25, Relation::Le)]],
        };
        let eps = 0.125;
        let n = grid_cover(&strip, eps).unwrap().len() as f64;
        let area_cells = 0.25 / (eps * eps);
        assert!(n >= area_cells / 2.0 && n <= 2.0 * area_cells, "{n}");

        assert!(grid_cover(&SemiAlgebraicSet::full(4), 0.1).is_err());
        assert!(grid_cover(&strip, 1e-4).is_err());
    }

    #[test]
    fn cover_contains_random_members() {
        let set = SemiAlgebraicSet {
            dim: 2,
            clauses: vec![vec![disc()], vec![linear(&[1.0, 1.0], -1.7, Relation::Ge)]],
        };
        let balls = grid_cover(&set, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut members = 0;
        for _ in 0..10_000 {
            let x = random_point(&mut rng, 2);
            if set.contains(&x) {
                members += 1;
                assert!(balls.iter().any(|b| b.contains(&x)));
            }
        }
        assert!(members > 1000);
    }

    #[test]
    fn measure_examples() {
        let full = measure_estimate(&SemiAlgebraicSet::full(3), 5000, 1).unwrap();
        assert_eq!(
            full,
            MeasureEstimate {
                value: 1.0,
                std_error: 0.0
            }
        );
        let empty = measure_estimate(&SemiAlgebraicSet::empty(3), 5000, 1).unwrap();
        assert_eq!(empty.value, 0.0);
        let ball = EpsBall::new(pt(&[0.4]), 0.1).unwrap();
        let est = measure_estimate(&ball, 20_000, 99).unwrap();
        assert!((est.value - 0.2).abs() <= 3.0 * est.std_error, "{est:?}");
        assert_eq!(est, measure_estimate(&ball, 20_000, 99).unwrap());
        assert!(measure_estimate(&ball, 999, 1).is_err());
        assert_eq!(ball.exact_measure(), Some(0.2f64.powi(1)));
    }

    #[test]
    fn counts_add_over_disjoint_clauses() {
        let left = vec![linear(&[1.0, 0.0], -0.3, Relation::Le)];
        let right = vec![linear(&[1.0, 0.0], -0.7, Relation::Ge)];
        let union = SemiAlgebraicSet {
            dim: 2,
            clauses: vec![left.clone(), right.clone()],
        };
        let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
        let x = TorusPoint::zero(2).unwrap();
        let count = |s: &SemiAlgebraicSet| hit_count(sys.orbit(&x, 5000).unwrap(), s, 5000).unwrap().count;
        let a = count(&SemiAlgebraicSet {
            dim: 2,
            clauses: vec![left],
        });
        let b = count(&SemiAlgebraicSet {
            dim: 2,
            clauses: vec![right],
        });
        assert_eq!(count(&union), a + b);
    }

    proptest! {
        #[test]
        fn ball_indicator_is_majorized(
            raw in proptest::collection::vec(any::<u128>(), 1..=3),
            eps in 0.001f64..=0.1,
        ) {
            let x = TorusPoint::new(raw.into_iter().map(TorusScalar::from_raw).collect()).unwrap();
            let r = fejer_radius(eps).unwrap();
            let b = x.dim();
            let product: f64 = x.coords().iter().map(|c| fejer_kernel(c.to_f64(), r)).product();
            let majorant = (2.0 / r as f64).powi(b as i32) * product;
            let ball = EpsBall::new(TorusPoint::zero(b).unwrap(), eps).unwrap();
            let chi = ball.contains(&x) as u8 as f64;
            prop_assert!(chi <= majorant + 1e-12);
        }

        #[test]
        fn ball_indicator_is_majorized_near_center(
            offsets in proptest::collection::vec(-1.0f64..1.0, 1..=3),
            eps in 0.001f64..=0.1,
        ) {
            // concentrate samples inside the ball so the inequality is tested where chi = 1
            let x = TorusPoint::from_f64(&offsets.iter().map(|o| o * eps).collect::<Vec<_>>()).unwrap();
            let r = fejer_radius(eps).unwrap();
            let product: f64 = x.coords().iter().map(|c| fejer_kernel(c.to_f64(), r)).product();
            let majorant = (2.0 / r as f64).powi(x.dim() as i32) * product;
            let ball = EpsBall::new(TorusPoint::zero(x.dim()).unwrap(), eps).unwrap();
            prop_assert!((ball.contains(&x) as u8 as f64) <= majorant + 1e-12);
        }

        #[test]
        fn hits_never_exceed_fejer_bound(
            raw in any::<u128>(),
            start in proptest::collection::vec(any::<u128>(), 2),
            eps in 0.02f64..=0.1,
            n in 1u64..300,
        ) {
            let sys = SkewShiftSystem::new(2, TorusScalar::from_raw(raw)).unwrap();
            let x = TorusPoint::new(start.into_iter().map(TorusScalar::from_raw).collect()).unwrap();
            let pts: Vec<_> = sys.orbit(&x, n).unwrap().collect();
            let c = pts[0].clone();
            let ball = EpsBall::new(c.clone(), eps).unwrap();
            let count = hit_count(pts.clone(), &ball, n).unwrap().count;
            prop_assert!(count as f64 <= fejer_bound_centered(&pts, &c, eps).unwrap() + 1e-9);
        }
    }
}
