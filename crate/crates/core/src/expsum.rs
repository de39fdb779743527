//! Exponential sums over polynomial phases, the right-hand side of the
//! Weyl differencing inequality, and the max-norm shells `K^i` that
//! decompose `{k in Z^b : ||k|| < R}`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::diophantine::clamped_reciprocal;
use crate::error::{invalid, Error, Result};
use crate::skewshift::{PolyVector, RealPolynomial};
use crate::stats::{CompensatedComplexSum, CompensatedSum};
use crate::torus::TorusScalar;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

/// Largest number of terms in the multiple sum of [`weyl_rhs`].
pub const WEYL_TERM_LIMIT: f64 = 16_777_216.0;
/// Largest `(2R - 1)^b` accepted by [`lattice_shells`].
pub const LATTICE_LIMIT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpSumResult {
    pub value: Complex64,
    pub n: u64,
    pub magnitude: f64,
}

/// `e(x) = exp(2 pi i x)`.
pub fn unit_phasor(x: TorusScalar) -> Complex64 {
    let theta = core::f64::consts::TAU * x.to_centered_f64();
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// `P(n) mod 1`.
pub fn eval_phase(p: &RealPolynomial, n: i128) -> TorusScalar {
    p.eval(n)
}

/// `sum_{n=1}^{N} e(P(n))`, summed in ascending `n` with compensation.
pub fn exp_sum(p: &RealPolynomial, n: u64) -> ExpSumResult {
    let mut acc = CompensatedComplexSum::default();
    for phase in p.differences(1).take(n as usize) {
        acc.add(unit_phasor(phase));
    }
    let value = acc.value();
    ExpSumResult {
        value,
        n,
        magnitude: value.norm(),
    }
}

/// `sum_{n=1}^{N} e(<k, P(n)>)`.
pub fn vector_exp_sum(k: &[i64], p: &PolyVector, n: u64) -> Result<ExpSumResult> {
    Ok(exp_sum(&p.dot(k)?, n))
}

/// The Weyl right-hand side with constant one.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeylRhs {
    pub value: f64,
    /// `ln value`, finite even when `value` overflows.
    pub ln_value: f64,
    /// Some `b! h_1 ... h_{b-1} alpha_b` was an integer.
    pub degenerate: bool,
}

/// `N^(2^(b-1) - 1) + N^(2^(b-1) - b) sum_{h_1..h_{b-1} = 1}^{N}
/// min(N, 1/||b! h_1 ... h_{b-1} alpha_b||)`.
pub fn weyl_rhs(alpha_b: TorusScalar, b: u32, n: u64) -> Result<WeylRhs> {
    if b < 2 {
        return Err(invalid("weyl_rhs needs degree b >= 2"));
    }
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    let terms = (n as f64).powi(b as i32 - 1);
    if terms > WEYL_TERM_LIMIT {
        return Err(Error::Infeasible {
            what: "weyl_rhs multiple sum",
            estimate: terms,
            limit: WEYL_TERM_LIMIT,
        });
    }
    let b_fact: u128 = (1..=b as u128).product();
    let base = alpha_b.mul_wrapping(b_fact);
    let cap = n as f64;
    let mut sum = CompensatedSum::default();
    let mut degenerate = false;
    let mut visit = |x: TorusScalar| {
        degenerate |= x.is_zero();
        sum.add(clamped_reciprocal(x, cap));
    };
    nested_products(base, b - 1, n, &mut visit);
    let top = (1u64 << (b - 1)) as f64;
    let ln_n = cap.ln();
    let ln_lead = (top - 1.0) * ln_n;
    let ln_tail = (top - b as f64) * ln_n + sum.value().ln();
    let (hi, lo) = if ln_lead >= ln_tail {
        (ln_lead, ln_tail)
    } else {
        (ln_tail, ln_lead)
    };
    let ln_value = hi + (lo - hi).exp().ln_1p();
    Ok(WeylRhs {
        value: ln_value.exp(),
        ln_value,
        degenerate,
    })
}

/// Calls `f(base * h_1 * ... * h_depth)` for all `h` in `[1, N]^depth`, in
/// lexicographic order.
fn nested_products(base: TorusScalar, depth: u32, n: u64, f: &mut impl FnMut(TorusScalar)) {
    if depth == 0 {
        f(base);
        return;
    }
    for h in 1..=n {
        nested_products(base.mul_wrapping(h as u128), depth - 1, n, f);
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeylRatio {
    pub magnitude: f64,
    pub rhs: f64,
    /// `|S|^(2^(b-1)) / rhs`.
    pub ratio: f64,
    /// Leading coefficient degenerate (polynomial of degree below 2, or an
    /// integral `b! h alpha_b`); the ratio is reported but carries no claim.
    pub non_diophantine: bool,
}

/// `|S|^(2^(b-1)) / weyl_rhs(alpha_b, b, N)` with `b = deg P`.
pub fn weyl_ratio(p: &RealPolynomial, n: u64) -> Result<WeylRatio> {
    let degree = p.degree();
    let (b, alpha_b, low_degree) = if degree < 2 {
        (2, p.monomial_coeffs().get(2).copied().unwrap_or_default(), true)
    } else {
        (degree as u32, p.leading_coefficient(), false)
    };
    let rhs = weyl_rhs(alpha_b, b, n)?;
    let s = exp_sum(p, n);
    let power = (1u64 << (b - 1)) as f64;
    let ratio = (power * s.magnitude.ln() - rhs.ln_value).exp();
    Ok(WeylRatio {
        magnitude: s.magnitude,
        rhs: rhs.value,
        ratio,
        non_diophantine: low_degree || rhs.degenerate,
    })
}

/// `K^i` for `1 <= i <= b`: vectors with `k_i != 0`, `k_j = 0` for `j > i`
/// and `|k_j| < R` throughout. `K^0 = {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeShell {
    pub index: usize,
    pub radius: i64,
    pub dim: usize,
}

impl LatticeShell {
    pub fn len(&self) -> u64 {
        if self.index == 0 {
            return 1;
        }
        let side = (2 * self.radius - 1) as u64;
        (side - 1) * side.pow(self.index as u32 - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> ShellIter {
        let mut k = vec![0i64; self.dim];
        let done = if self.index == 0 {
            false
        } else {
            let r = self.radius - 1;
            for c in &mut k[..self.index - 1] {
                *c = -r;
            }
            k[self.index - 1] = -r;
            r == 0
        };
        ShellIter { shell: *self, k, done }
    }
}

/// Odometer over one shell; the last moving coordinate skips zero.
#[derive(Clone, Debug)]
pub struct ShellIter {
    shell: LatticeShell,
    k: Vec<i64>,
    done: bool,
}

impl Iterator for ShellIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.k.clone();
        let i = self.shell.index;
        if i == 0 {
            self.done = true;
            return Some(out);
        }
        let r = self.shell.radius - 1;
        let mut pos = 0;
        loop {
            if pos + 1 == i {
                let top = &mut self.k[pos];
                *top += if *top == -1 { 2 } else { 1 };
                if *top > r {
                    self.done = true;
                }
                break;
            }
            if self.k[pos] < r {
                self.k[pos] += 1;
                break;
            }
            self.k[pos] = -r;
            pos += 1;
        }
        Some(out)
    }
}

/// The shells `K^0, ..., K^b` of `{||k|| < R}`.
pub fn lattice_shells(radius: i64, b: usize) -> Result<Vec<LatticeShell>> {
    if radius < 1 {
        return Err(invalid("lattice radius must be at least 1"));
    }
    if b == 0 {
        return Err(invalid("lattice dimension must be at least 1"));
    }
    let total = ((2 * radius - 1) as f64).powi(b as i32);
    if total > LATTICE_LIMIT {
        return Err(Error::Infeasible {
            what: "lattice_shells",
            estimate: total,
            limit: LATTICE_LIMIT,
        });
    }
    Ok((0..=b).map(|index| LatticeShell { index, radius, dim: b }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewshift::{SkewShiftSystem, TorusPoint};
    use crate::Frequency;
    use alloc::collections::BTreeSet;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> RealPolynomial {
        RealPolynomial::from_monomial_f64(c).unwrap()
    }

    #[test]
    fn phase_examples() {
        assert_eq!(eval_phase(&poly(&[0.0, 0.5]), 3), TorusScalar::HALF);
        assert!(eval_phase(&poly(&[0.0, 0.0, 0.25]), 4).is_zero());
    }

    #[test]
    fn incremental_phases_match_direct_evaluation() {
        let g = Frequency::golden().value;
        let coeffs: Vec<_> = (0..=6).map(|k| g.mul_int(3 * k as i128 + 1)).collect();
        let p = RealPolynomial::from_monomial(coeffs.clone()).unwrap();
        for (i, phase) in p.differences(1).take(1_000_000).enumerate().step_by(9973) {
            let n = i as u128 + 1;
            let direct = coeffs.iter().enumerate().fold(TorusScalar::ZERO, |acc, (k, &a)| {
                acc + a.mul_wrapping(n.wrapping_pow(k as u32))
            });
            assert!(crate::circle_distance(phase, direct) <= 1e-8);
        }
    }

    #[test]
    fn exp_sum_examples() {
        let s = exp_sum(&poly(&[0.0, 0.5]), 4);
        assert!(s.magnitude < 1e-14);
        let s = exp_sum(&poly(&[0.0, 0.5]), 5);
        assert!((s.value - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        let s = exp_sum(&RealPolynomial::zero(), 7);
        assert_eq!(s.value, Complex64::new(7.0, 0.0));
    }

    fn naive_sum(phase: impl Fn(u64) -> f64, n: u64) -> Complex64 {
        (1..=n)
            .map(|m| {
                let t = core::f64::consts::TAU * phase(m);
                Complex64::new(libm::cos(t), libm::sin(t))
            })
            .sum()
    }

    #[test]
    fn vector_sum_examples() {
        let g = Frequency::golden().value;
        let sys = SkewShiftSystem::new(2, g).unwrap();
        let pv = sys.as_poly_vector(&TorusPoint::zero(2).unwrap()).unwrap();
        assert_eq!(
            vector_exp_sum(&[0, 0], &pv, 100).unwrap().value,
            Complex64::new(100.0, 0.0)
        );
        assert_eq!(vector_exp_sum(&[1, 0], &pv, 100).unwrap(), exp_sum(&pv.polys[0], 100));

        let s = vector_exp_sum(&[1, 1], &pv, 100).unwrap();
        assert!(s.magnitude <= 100.0);
        // f64 oracle: w n + w n(n-1)/2 with n(n-1)/2 an exact integer
        let w = g.to_f64();
        let oracle = naive_sum(
            |m| {
                let tri = (m * (m - 1) / 2) as f64;
                let v = w * m as f64 + libm::fmod(w * tri, 1.0);
                v - libm::floor(v)
            },
            100,
        );
        assert!((s.value - oracle).norm() < 1e-9, "{:?} vs {:?}", s.value, oracle);
        assert!(vector_exp_sum(&[1], &pv, 10).is_err());
    }

    #[test]
    fn weyl_rhs_examples() {
        let g = Frequency::golden().value;
        let v = weyl_rhs(g, 2, 3).unwrap().value;
        let oracle: f64 = 3.0
            + (1..=3)
                .map(|h| (1.0 / crate::torus_norm(2.0 * h as f64 * g.to_f64()).unwrap()).min(3.0))
                .sum::<f64>();
        assert!((v - oracle).abs() < 1e-9);
        assert!((v - 11.118).abs() < 1e-3, "{v}");
        assert!((weyl_rhs(g, 2, 1).unwrap().value - 2.0).abs() < 1e-12);

        let a3 = TorusScalar::from_f64(0.1234567).unwrap();
        let direct: f64 = [(1, 1), (1, 2), (2, 1), (2, 2)]
            .iter()
            .map(|&(h1, h2)| {
                let x = 6.0 * (h1 * h2) as f64 * a3.to_f64();
                (1.0 / crate::torus_norm(x).unwrap()).min(2.0)
            })
            .sum();
        let v = weyl_rhs(a3, 3, 2).unwrap().value;
        assert!((v - (8.0 + 2.0 * direct)).abs() < 1e-9);

        assert!(matches!(weyl_rhs(g, 3, 5000), Err(Error::Infeasible { .. })));
        assert!(weyl_rhs(g, 1, 5).is_err());
    }

    #[test]
    fn weyl_ratio_examples() {
        let flagged = weyl_ratio(&RealPolynomial::zero(), 16).unwrap();
        assert!(flagged.non_diophantine);

        let g = Frequency::golden().value;
        let p = RealPolynomial::from_monomial(vec![TorusScalar::ZERO, TorusScalar::ZERO, g]).unwrap();
        let r = weyl_ratio(&p, 64).unwrap();
        assert!(!r.non_diophantine);
        assert!(r.ratio <= 1.0, "{}", r.ratio);
        let ratios: Vec<f64> = [8, 16, 32, 64]
            .iter()
            .map(|&n| weyl_ratio(&p, n).unwrap().ratio)
            .collect();
        assert!(ratios.iter().all(|&r| r.is_finite() && r <= 1.0), "{ratios:?}");
    }

    #[test]
    fn shell_examples() {
        let shells = lattice_shells(2, 2).unwrap();
        let sizes: Vec<u64> = shells.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, [1, 2, 6]);
        assert_eq!(sizes.iter().sum::<u64>(), 9);
        let only = lattice_shells(1, 3).unwrap();
        assert_eq!(only.iter().map(|s| s.iter().count()).collect::<Vec<_>>(), [1, 0, 0, 0]);
        assert!(lattice_shells(0, 2).is_err());
        assert!(matches!(lattice_shells(100, 5), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn shells_partition_the_box() {
        for r in 1..=6i64 {
            for b in 1..=4usize {
                let mut seen = BTreeSet::new();
                for shell in lattice_shells(r, b).unwrap() {
                    let members: Vec<_> = shell.iter().collect();
                    assert_eq!(members.len() as u64, shell.len(), "r={r} b={b} i={}", shell.index);
                    for k in members {
                        assert!(k.iter().all(|c| c.abs() < r));
                        assert!(seen.insert(k), "duplicate");
                    }
                }
                assert_eq!(seen.len() as u64, ((2 * r - 1) as u64).pow(b as u32));
            }
        }
    }

    proptest! {
        #[test]
        fn magnitude_bounded_and_shift_invariant(
            c in proptest::collection::vec(any::<u128>(), 1..=5),
            shift in any::<u128>(),
            n in 1u64..400,
        ) {
            let p = RealPolynomial::from_monomial(c.into_iter().map(TorusScalar::from_raw).collect()).unwrap();
            let s = exp_sum(&p, n);
            prop_assert!(s.magnitude <= n as f64 * (1.0 + 1e-12));
            let shifted = exp_sum(&p.shift(TorusScalar::from_raw(shift)), n);
            prop_assert!((s.magnitude - shifted.magnitude).abs() < 1e-10);
        }

        #[test]
        fn vector_sum_is_scalar_sum_of_combination(
            raw in any::<u128>(),
            x in proptest::collection::vec(any::<u128>(), 3),
            k in proptest::collection::vec(-5i64..=5, 3),
            n in 1u64..1000,
        ) {
            let sys = SkewShiftSystem::new(3, TorusScalar::from_raw(raw)).unwrap();
            let pv = sys.as_poly_vector(&TorusPoint::new(x.into_iter().map(TorusScalar::from_raw).collect()).unwrap()).unwrap();
            let v = vector_exp_sum(&k, &pv, n).unwrap();
            // oracle: sum phases coordinate-wise along the closed form
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 1..=n as i128 {
                let phase = pv.eval(m).iter().zip(&k).fold(TorusScalar::ZERO, |a, (&c, &ki)| a + c.mul_int(ki as i128));
                acc += unit_phasor(phase);
            }
            prop_assert!((v.value - acc).norm() < 1e-9);
        }
    }
}
