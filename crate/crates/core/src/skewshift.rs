//! The skew-shift `f(x) = (x_1 + w, x_2 + x_1, ..., x_b + x_{b-1})` on
//! `T^b`, its closed-form iterate and its description as a vector of real
//! polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::modular::{binomial_mod, stirling_first};
use crate::torus::{circle_distance, TorusScalar};

pub const MAX_DIM: usize = 12;
pub const MAX_POLY_DEGREE: usize = 12;

/// A point of `T^b`, `1 <= b <= 12`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<TorusScalar>,
}

impl TorusPoint {
    pub fn new(coords: Vec<TorusScalar>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(invalid(alloc::format!(
                "torus dimension must be in 1..={MAX_DIM}, got {}",
                coords.len()
            )));
        }
        Ok(TorusPoint { coords })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(vec![TorusScalar::ZERO; dim])
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&c| TorusScalar::from_f64(c))
                .collect::<Result<_>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[TorusScalar] {
        &self.coords
    }

    /// Largest coordinate-wise circle distance.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| circle_distance(a, b))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkewShiftSystem {
    b: usize,
    omega: TorusScalar,
}

impl SkewShiftSystem {
    pub fn new(b: usize, omega: TorusScalar) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&b) {
            return Err(invalid(alloc::format!(
                "skew-shift dimension must be in 2..={MAX_DIM}, got {b}"
            )));
        }
        Ok(SkewShiftSystem { b, omega })
    }

    pub fn dim(&self) -> usize {
        self.b
    }

    pub fn omega(&self) -> TorusScalar {
        self.omega
    }

    fn check(&self, x: &TorusPoint) -> Result<()> {
        if x.dim() != self.b {
            return Err(Error::DimensionMismatch {
                expected: self.b,
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn step(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.check(x)?;
        let mut y = x.clone();
        step_in_place(&mut y.coords, self.omega);
        Ok(y)
    }

    pub fn inverse_step(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.check(x)?;
        let mut y = x.clone();
        y.coords[0] -= self.omega;
        for i in 1..self.b {
            let prev = y.coords[i - 1];
            y.coords[i] -= prev;
        }
        Ok(y)
    }

    /// `f^n x` via `(f^n x)_i = sum_{j=0}^{i} C(n, j) y_{i-j}` with
    /// `y_0 = w`, `y_k = x_k`.
    pub fn closed_form(&self, x: &TorusPoint, n: u64) -> Result<TorusPoint> {
        self.closed_form_wide(x, n as i128)
    }

    /// As [`closed_form`](Self::closed_form) for any integer `n`; negative
    /// `n` gives iterates of the inverse map.
    pub fn closed_form_signed(&self, x: &TorusPoint, n: i64) -> Result<TorusPoint> {
        self.closed_form_wide(x, n as i128)
    }

    fn closed_form_wide(&self, x: &TorusPoint, n: i128) -> Result<TorusPoint> {
        self.check(x)?;
        let binom: Vec<u128> = (0..=self.b as u32).map(|j| binomial_mod(n, j)).collect();
        let y = self.seed(x);
        let coords = (1..=self.b)
            .map(|i| (0..=i).fold(TorusScalar::ZERO, |acc, j| acc + y[i - j].mul_wrapping(binom[j])))
            .collect();
        Ok(TorusPoint { coords })
    }

    /// `(w, x_1, ..., x_b)`.
    fn seed(&self, x: &TorusPoint) -> Vec<TorusScalar> {
        let mut y = Vec::with_capacity(self.b + 1);
        y.push(self.omega);
        y.extend_from_slice(&x.coords);
        y
    }

    /// `f^1 x, ..., f^N x`.
    pub fn orbit(&self, x: &TorusPoint, n: u64) -> Result<Orbit> {
        self.check(x)?;
        Ok(Orbit {
            state: x.coords.clone(),
            omega: self.omega,
            remaining: n,
        })
    }

    /// Polynomials `P_i` with `P_i(n) = (f^n x)_i mod 1`, `deg P_i = i` and
    /// leading coefficient `w / i!`.
    pub fn as_poly_vector(&self, x: &TorusPoint) -> Result<PolyVector> {
        self.check(x)?;
        let y = self.seed(x);
        let polys = (1..=self.b)
            .map(|i| RealPolynomial::from_newton((0..=i).map(|j| y[i - j]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyVector { polys })
    }
}

fn step_in_place(c: &mut [TorusScalar], omega: TorusScalar) {
    for i in (1..c.len()).rev() {
        let prev = c[i - 1];
        c[i] += prev;
    }
    c[0] += omega;
}

/// Iterator over successive skew-shift images; each step costs `O(b)`.
#[derive(Clone, Debug)]
pub struct Orbit {
    state: Vec<TorusScalar>,
    omega: TorusScalar,
    remaining: u64,
}

impl Iterator for Orbit {
    type Item = TorusPoint;

    fn next(&mut self) -> Option<TorusPoint> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        step_in_place(&mut self.state, self.omega);
        Some(TorusPoint {
            coords: self.state.clone(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

impl ExactSizeIterator for Orbit {}

/// A real polynomial read modulo one at integer arguments.
///
/// Two coefficient lists are kept. `newton[j]` multiplies `C(n, j)` and is
/// exact modulo one; all evaluation goes through it. `monomial[k]`
/// multiplies `n^k`; it is what degrees and leading coefficients refer to.
/// Converting monomials to the Newton basis is exact, the reverse direction
/// divides by `j!` and is rounded to the 128-bit grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPolynomial {
    monomial: Vec<TorusScalar>,
    newton: Vec<TorusScalar>,
}

impl RealPolynomial {
    pub fn zero() -> Self {
        RealPolynomial {
            monomial: vec![TorusScalar::ZERO],
            newton: vec![TorusScalar::ZERO],
        }
    }

    /// `sum_k coeffs[k] n^k`.
    pub fn from_monomial(coeffs: Vec<TorusScalar>) -> Result<Self> {
        check_len(coeffs.len())?;
        let s2 = stirling_second(coeffs.len() - 1);
        let mut newton = vec![TorusScalar::ZERO; coeffs.len()];
        let mut j_fact: u128 = 1;
        for (j, nj) in newton.iter_mut().enumerate() {
            if j > 0 {
                j_fact *= j as u128;
            }
            for (k, &a) in coeffs.iter().enumerate().skip(j) {
                *nj += a.mul_wrapping(s2[k][j].wrapping_mul(j_fact));
            }
        }
        Ok(RealPolynomial {
            monomial: coeffs,
            newton,
        })
    }

    pub fn from_monomial_f64(coeffs: &[f64]) -> Result<Self> {
        Self::from_monomial(
            coeffs
                .iter()
                .map(|&c| TorusScalar::from_f64(c))
                .collect::<Result<_>>()?,
        )
    }

    /// `sum_j coeffs[j] C(n, j)`, reading each coefficient in `[0, 1)`.
    pub fn from_newton(coeffs: Vec<TorusScalar>) -> Result<Self> {
        check_len(coeffs.len())?;
        let m = coeffs.len() - 1;
        let s1 = stirling_first(m);
        // alpha_k = sum_j beta_j s(j,k) / j!, over the common denominator m!
        let factorial: Vec<BigInt> = (0..=m)
            .scan(BigInt::from(1u8), |f, j| {
                if j > 0 {
                    *f *= j;
                }
                Some(f.clone())
            })
            .collect();
        let monomial = (0..=m)
            .map(|k| {
                let num: BigInt = (k..=m)
                    .map(|j| BigInt::from(coeffs[j].raw()) * s1[j][k] * (&factorial[m] / &factorial[j]))
                    .sum();
                TorusScalar::from_bigint_floor(&num.div_floor(&factorial[m]))
            })
            .collect();
        Ok(RealPolynomial {
            monomial,
            newton: coeffs,
        })
    }

    pub fn monomial_coeffs(&self) -> &[TorusScalar] {
        &self.monomial
    }

    pub fn newton_coeffs(&self) -> &[TorusScalar] {
        &self.newton
    }

    /// Highest power whose monomial coefficient is nonzero modulo one; the
    /// zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.monomial.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn leading_coefficient(&self) -> TorusScalar {
        self.monomial[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.monomial.iter().all(|c| c.is_zero()) && self.newton.iter().all(|c| c.is_zero())
    }

    /// `P(n) mod 1`, exact.
    pub fn eval(&self, n: i128) -> TorusScalar {
        self.newton.iter().enumerate().fold(TorusScalar::ZERO, |acc, (j, &b)| {
            acc + b.mul_wrapping(binomial_mod(n, j as u32))
        })
    }

    /// Finite-difference engine yielding `P(start), P(start+1), ...`.
    pub fn differences(&self, start: i128) -> DifferenceEngine {
        // Delta^j P(n) = sum_l beta_l C(n, l - j)
        let registers = (0..self.newton.len())
            .map(|j| {
                self.newton[j..]
                    .iter()
                    .enumerate()
                    .fold(TorusScalar::ZERO, |acc, (i, &b)| {
                        acc + b.mul_wrapping(binomial_mod(start, i as u32))
                    })
            })
            .collect();
        DifferenceEngine { registers }
    }

    pub fn add(&self, other: &RealPolynomial) -> RealPolynomial {
        let len = self.newton.len().max(other.newton.len());
        let pad = |v: &[TorusScalar], i: usize| v.get(i).copied().unwrap_or_default();
        let sum = |a: &[TorusScalar], b: &[TorusScalar]| (0..len).map(|i| pad(a, i) + pad(b, i)).collect();
        RealPolynomial {
            monomial: sum(&self.monomial, &other.monomial),
            newton: sum(&self.newton, &other.newton),
        }
    }

    pub fn scale(&self, k: i128) -> RealPolynomial {
        RealPolynomial {
            monomial: self.monomial.iter().map(|c| c.mul_int(k)).collect(),
            newton: self.newton.iter().map(|c| c.mul_int(k)).collect(),
        }
    }

    /// `P + c`.
    pub fn shift(&self, c: TorusScalar) -> RealPolynomial {
        let mut out = self.clone();
        out.monomial[0] += c;
        out.newton[0] += c;
        out
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_POLY_DEGREE + 1 {
        return Err(invalid(alloc::format!(
            "polynomial degree must be at most {MAX_POLY_DEGREE}"
        )));
    }
    Ok(())
}

/// Stirling numbers of the second kind `S(k, j)`.
fn stirling_second(max: usize) -> Vec<Vec<u128>> {
    let mut s = vec![vec![0u128; max + 1]; max + 1];
    s[0][0] = 1;
    for k in 1..=max {
        for j in 1..=k {
            s[k][j] = s[k - 1][j - 1] + j as u128 * s[k - 1][j];
        }
    }
    s
}

/// Registers `Delta^j P(n)`; advancing is `d` torus additions.
#[derive(Clone, Debug)]
pub struct DifferenceEngine {
    registers: Vec<TorusScalar>,
}

impl DifferenceEngine {
    pub fn current(&self) -> TorusScalar {
        self.registers[0]
    }

    pub fn advance(&mut self) {
        for j in 0..self.registers.len() - 1 {
            let next = self.registers[j + 1];
            self.registers[j] += next;
        }
    }
}

impl Iterator for DifferenceEngine {
    type Item = TorusScalar;

    fn next(&mut self) -> Option<TorusScalar> {
        let v = self.current();
        self.advance();
        Some(v)
    }
}

/// `(P_1, ..., P_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVector {
    pub polys: Vec<RealPolynomial>,
}

impl PolyVector {
    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(RealPolynomial::degree).collect()
    }

    /// `1 <= deg P_1 < ... < deg P_b`.
    pub fn has_strict_degree_chain(&self) -> bool {
        let d = self.degrees();
        d.first().is_some_and(|&d0| d0 >= 1) && d.windows(2).all(|w| w[0] < w[1])
    }

    /// `sum_i k_i P_i`.
    pub fn dot(&self, k: &[i64]) -> Result<RealPolynomial> {
        if k.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: k.len(),
            });
        }
        Ok(self
            .polys
            .iter()
            .zip(k)
            .fold(RealPolynomial::zero(), |acc, (p, &ki)| acc.add(&p.scale(ki as i128))))
    }

    pub fn eval(&self, n: i128) -> Vec<TorusScalar> {
        self.polys.iter().map(|p| p.eval(n)).collect()
    }
}
