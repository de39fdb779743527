//! Finite-volume operators `H = A + lambda V` on `{-L, ..., L}` with a
//! potential sampled along a skew-shift orbit, and the position moments
//! `sum_n |n|^p |(e^{-itH} phi)_n|^2` together with their Abel means.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::expsum::unit_phasor;
use crate::skewshift::{SkewShiftSystem, TorusPoint};
use crate::stats::{least_squares, CompensatedSum};
use crate::torus::TorusScalar;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

pub const MAX_HALF_WIDTH: usize = 2000;
/// Relative eigenpair residual accepted from the eigensolver.
pub const EIGEN_TOLERANCE: f64 = 1e-9;
/// Mass beyond `0.9 L` above which a moment is considered truncated.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "type"))]
pub enum Kernel {
    /// Hopping 1 between neighbours.
    NearestNeighbor,
    /// `A(n, n') = c e^{-decay |n - n'|}` for `n != n'`.
    Exponential { c: f64, decay: f64 },
}

/// `a cos(2 pi <k, x>) + b sin(2 pi <k, x>)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrigTerm {
    pub k: Vec<i64>,
    pub cos: f64,
    pub sin: f64,
}

/// A real trigonometric polynomial on `T^b`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrigPoly {
    pub terms: Vec<TrigTerm>,
}

impl TrigPoly {
    /// `cos(2 pi x_b)`.
    pub fn cos_last(b: usize) -> Self {
        let mut k = vec![0; b];
        k[b - 1] = 1;
        TrigPoly {
            terms: vec![TrigTerm { k, cos: 1.0, sin: 0.0 }],
        }
    }

    pub fn eval(&self, x: &TorusPoint) -> f64 {
        let mut sum = CompensatedSum::default();
        for t in &self.terms {
            let phase =
                t.k.iter()
                    .zip(x.coords())
                    .fold(TorusScalar::ZERO, |acc, (&k, &c)| acc + c.mul_int(k as i128));
            let z = unit_phasor(phase);
            sum.add(t.cos * z.re + t.sin * z.im);
        }
        sum.value()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportConfig {
    pub half_width: usize,
    pub kernel: Kernel,
    pub lambda: f64,
    pub potential: TrigPoly,
    pub system: SkewShiftSystem,
    pub x0: TorusPoint,
    /// `(site, amplitude)` pairs; normalized before use.
    pub phi: Vec<(i64, f64)>,
}

impl TransportConfig {
    /// Free-ish defaults: nearest-neighbour kernel, `v = cos(2 pi x_b)`,
    /// `phi = delta_0`.
    pub fn new(half_width: usize, lambda: f64, system: SkewShiftSystem, x0: TorusPoint) -> Self {
        TransportConfig {
            half_width,
            kernel: Kernel::NearestNeighbor,
            lambda,
            potential: TrigPoly::cos_last(system.dim()),
            system,
            x0,
            phi: vec![(0, 1.0)],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.half_width > MAX_HALF_WIDTH {
            return Err(invalid(alloc::format!("L must be at most {MAX_HALF_WIDTH}")));
        }
        if !self.lambda.is_finite() {
            return Err(Error::NonFinite("lambda"));
        }
        if let Kernel::Exponential { c, decay } = self.kernel {
            if !(c > 0.0 && decay > 0.0 && c.is_finite() && decay.is_finite()) {
                return Err(invalid("exponential kernel needs positive finite constants"));
            }
        }
        if self.x0.dim() != self.system.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.system.dim(),
                found: self.x0.dim(),
            });
        }
        if self.potential.terms.iter().any(|t| t.k.len() != self.system.dim()) {
            return Err(invalid("potential frequency vectors must have length b"));
        }
        Ok(())
    }

    fn size(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Normalized initial state on the lattice.
    pub fn initial_state(&self) -> Result<DVector<f64>> {
        let l = self.half_width as i64;
        let mut v = DVector::zeros(self.size());
        for &(n, a) in &self.phi {
            if n.abs() > l {
                return Err(invalid(alloc::format!("initial site {n} lies outside [-{l}, {l}]")));
            }
            v[(n + l) as usize] += a;
        }
        let norm: f64 = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(invalid("initial state must have positive finite norm"));
        }
        Ok(v / norm)
    }
}

/// `H_{nn'} = A(n, n') + delta_{nn'} lambda v(f^n x0)` for `|n|, |n'| <= L`,
/// symmetric by construction.
pub fn build_operator(cfg: &TransportConfig) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    let size = cfg.size();
    let l = cfg.half_width as i64;
    let mut h = DMatrix::zeros(size, size);
    for i in 0..size {
        let n = i as i64 - l;
        let x = cfg.system.closed_form_signed(&cfg.x0, n)?;
        h[(i, i)] = cfg.lambda * cfg.potential.eval(&x);
    }
    match cfg.kernel {
        Kernel::NearestNeighbor => {
            for i in 1..size {
                h[(i, i - 1)] = 1.0;
                h[(i - 1, i)] = 1.0;
            }
        }
        Kernel::Exponential { c, decay } => {
            for i in 0..size {
                for j in 0..i {
                    let a = c * (-decay * (i - j) as f64).exp();
                    h[(i, j)] = a;
                    h[(j, i)] = a;
                }
            }
        }
    }
    Ok(h)
}

/// An operator diagonalized once, with the initial state expanded in its
/// eigenbasis.
#[derive(Clone, Debug)]
pub struct Spectral {
    half_width: usize,
    energies: Vec<f64>,
    /// columns are eigenvectors
    vectors: DMatrix<f64>,
    /// `(phi, u_j)`
    weights: DVector<f64>,
    pub max_residual: f64,
}

impl Spectral {
    pub fn new(cfg: &TransportConfig) -> Result<Self> {
        let h = build_operator(cfg)?;
        let phi = cfg.initial_state()?;
        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
        let vectors = DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);

        let scale = h.norm().max(1.0);
        let residual = &h * &vectors - &vectors * DMatrix::from_diagonal(&DVector::from_vec(energies.clone()));
        let max_residual = (0..residual.ncols())
            .map(|c| residual.column(c).norm())
            .fold(0.0, f64::max);
        if !(max_residual <= EIGEN_TOLERANCE * scale) {
            return Err(Error::Eigen {
                residual: max_residual,
                tolerance: EIGEN_TOLERANCE * scale,
            });
        }
        let weights = vectors.transpose() * phi;
        Ok(Spectral {
            half_width: cfg.half_width,
            energies,
            vectors,
            weights,
            max_residual,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `e^{-itH} phi`, indexed by `n + L`.
    pub fn evolve(&self, t: f64) -> Vec<Complex64> {
        let coeffs: Vec<Complex64> = self
            .energies
            .iter()
            .zip(self.weights.iter())
            .map(|(&e, &w)| Complex64::from_polar(w, -t * e))
            .collect();
        (0..self.vectors.nrows())
            .map(|r| self.vectors.row(r).iter().zip(&coeffs).map(|(&u, c)| c * u).sum())
            .collect()
    }

    fn site(&self, row: usize) -> i64 {
        row as i64 - self.half_width as i64
    }

    fn site_weights(&self, p: f64) -> Vec<f64> {
        (0..self.vectors.nrows())
            .map(|r| (self.site(r).unsigned_abs() as f64).powf(p))
            .collect()
    }

    fn boundary_weights(&self) -> Vec<f64> {
        let edge = 0.9 * self.half_width as f64;
        (0..self.vectors.nrows())
            .map(|r| ((self.site(r).abs() as f64) > edge) as u8 as f64)
            .collect()
    }

    pub fn moment(&self, t: f64, p: f64) -> MomentValue {
        let psi = self.evolve(t);
        let dot = |w: &[f64]| {
            let mut s = CompensatedSum::default();
            for (z, &wn) in psi.iter().zip(w) {
                s.add(wn * z.norm_sqr());
            }
            s.value()
        };
        MomentValue::new(dot(&self.site_weights(p)), dot(&self.boundary_weights()))
    }

    /// `G_{jk} = w_j w_k sum_n s_n u_{nj} u_{nk}`.
    fn gram(&self, site_weights: &[f64]) -> DMatrix<f64> {
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |r, c| {
            self.vectors[(r, c)] * self.weights[c]
        });
        let weighted = DMatrix::from_fn(scaled.nrows(), scaled.ncols(), |r, c| scaled[(r, c)] * site_weights[r]);
        scaled.transpose() * weighted
    }

    fn abel_with(&self, g: &DMatrix<f64>, big_t: f64) -> f64 {
        let eta = 2.0 / big_t;
        let eta2 = eta * eta;
        let mut s = CompensatedSum::default();
        for j in 0..g.nrows() {
            for k in 0..g.ncols() {
                let d = self.energies[j] - self.energies[k];
                s.add(g[(j, k)] * eta2 / (eta2 + d * d));
            }
        }
        s.value()
    }

    /// `(2/T) int_0^inf e^{-2t/T} <|X|^p>(t) dt` in closed form.
    pub fn abel_mean(&self, big_t: f64, p: f64) -> Result<MomentValue> {
        Ok(self.abel_series(&[big_t], p)?.remove(0))
    }

    fn abel_series(&self, grid: &[f64], p: f64) -> Result<Vec<MomentValue>> {
        if grid.iter().any(|&t| !(t > 0.0)) {
            return Err(invalid("Abel means need T > 0"));
        }
        let g = self.gram(&self.site_weights(p));
        let gb = self.gram(&self.boundary_weights());
        Ok(grid
            .iter()
            .map(|&t| MomentValue::new(self.abel_with(&g, t), self.abel_with(&gb, t)))
            .collect())
    }

    /// Plain moments at each `T`, or Abel means when `averaged`.
    pub fn series(&self, grid: &[f64], p: f64, averaged: bool) -> Result<MomentSeries> {
        if !(p >= 0.0) {
            return Err(invalid("moment order p must be non-negative"));
        }
        let values = if averaged {
            self.abel_series(grid, p)?
        } else {
            grid.iter().map(|&t| self.moment(t, p)).collect()
        };
        Ok(MomentSeries {
            t_grid: grid.to_vec(),
            values: values.iter().map(|v| v.value).collect(),
            boundary_mass: values.iter().map(|v| v.boundary_mass).collect(),
            p,
            averaged,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentValue {
    pub value: f64,
    /// `sum_{|n| > 0.9 L} |psi_n|^2`.
    pub boundary_mass: f64,
    pub truncated: bool,
}

impl MomentValue {
    fn new(value: f64, boundary_mass: f64) -> Self {
        MomentValue {
            value,
            boundary_mass,
            truncated: boundary_mass > BOUNDARY_MASS_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentSeries {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub boundary_mass: Vec<f64>,
    pub p: f64,
    pub averaged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum GrowthModel {
    /// `log value` against `log T`.
    Poly,
    /// `log value` against `log log T`.
    LogLog,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// Points entering the fit.
    pub points: usize,
    /// The series was cut at the first truncated moment.
    pub truncated: bool,
}

/// Least-squares growth exponent over the pre-saturation part of a series.
pub fn growth_fit(series: &MomentSeries, model: GrowthModel) -> Result<GrowthFit> {
    let len = series.t_grid.len().min(series.values.len());
    let cut = series
        .boundary_mass
        .iter()
        .take(len)
        .position(|&m| m > BOUNDARY_MASS_LIMIT)
        .unwrap_or(len);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..cut {
        let (t, v) = (series.t_grid[i], series.values[i]);
        let xi = match model {
            GrowthModel::Poly => t.ln(),
            GrowthModel::LogLog => t.ln().ln(),
        };
        if xi.is_finite() && v > 0.0 {
            x.push(xi);
            y.push(v.ln());
        }
    }
    if x.len() < 6 {
        return Err(invalid(alloc::format!(
            "growth fit needs at least 6 usable pre-saturation points, found {}",
            x.len()
        )));
    }
    let fit = least_squares(&x, &y)?;
    Ok(GrowthFit {
        slope: fit.slope,
        intercept: fit.intercept,
        residual: fit.residual,
        points: x.len(),
        truncated: cut < len,
    })
}
