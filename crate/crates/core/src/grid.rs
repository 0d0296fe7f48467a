//! Uniform physical grid on `[-L, L]^N`, its frequency lattice, and the
//! discrete Fourier transform pair.
//!
//! Convention: `u_hat(xi) = (2 pi)^{-N} ∫ u(x) e^{-i x xi} dx` and
//! `u(x) = ∫ u_hat(xi) e^{i x xi} dxi`. Points are `x_j = -L + j dx` with
//! `dx = 2L/n`; frequencies are `xi_k = k pi / L` for `k` in `[-n/2, n/2)`,
//! stored in FFT order (`0, 1, .., n/2 - 1, -n/2, .., -1`). Arrays are
//! row-major with the last axis fastest.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub half_extent: f64,
    pub points_per_axis: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_extent: f64, points_per_axis: usize) -> Result<Self> {
        let g = GridSpec { dim, half_extent, points_per_axis };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("grid dimension must be at least 1".into()));
        }
        if !(self.half_extent > 0.0) || !self.half_extent.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half extent L = {} must be positive",
                self.half_extent
            )));
        }
        let n = self.points_per_axis;
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "points per axis n = {n} must be a power of two >= 8"
            )));
        }
        if (n as f64).powi(self.dim as i32) > 1.5e8 {
            return Err(Error::InvalidParameter(format!("grid {n}^{} is too large", self.dim)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_extent / self.points_per_axis as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_extent
    }

    pub fn max_frequency(&self) -> f64 {
        self.points_per_axis as f64 * PI / (2.0 * self.half_extent)
    }

    /// Per-axis indices of a flat index.
    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let n = self.points_per_axis;
        let mut out = vec![0; self.dim];
        for slot in out.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        out
    }

    /// Signed lattice integer for an FFT-ordered axis index.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.points_per_axis;
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        let dx = self.dx();
        self.unravel(idx)
            .into_iter()
            .map(|j| -self.half_extent + j as f64 * dx)
            .collect()
    }

    pub fn frequency(&self, idx: usize) -> Vec<f64> {
        let dxi = self.dxi();
        self.unravel(idx)
            .into_iter()
            .map(|i| self.wavenumber(i) as f64 * dxi)
            .collect()
    }

    /// Whether a frequency sits on the outermost lattice layer of some axis.
    pub fn on_frequency_boundary(&self, idx: usize) -> bool {
        let half = (self.points_per_axis / 2) as i64;
        self.unravel(idx).into_iter().any(|i| {
            let k = self.wavenumber(i);
            k == -half || k == half - 1
        })
    }

    /// Whether a physical point has some coordinate with `|x_j| >= 0.9 L`.
    pub fn in_outer_shell(&self, idx: usize) -> bool {
        let cut = 0.9 * self.half_extent;
        self.point(idx).into_iter().any(|x| x.abs() >= cut)
    }
}

/// Fourier coefficients on the frequency lattice, FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    /// `(2 pi)^N ∑ |u_hat|^2 dxi^N`, the spectral side of Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        let n = self.grid.dim as i32;
        let w = (2.0 * PI).powi(n) * self.grid.dxi().powi(n);
        w * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }
}

/// `∑ |u|^2 dx^N`.
pub fn physical_l2_norm_sq(samples: &[Complex64], grid: &GridSpec) -> f64 {
    grid.dx().powi(grid.dim as i32) * samples.iter().map(|c| c.norm_sqr()).sum::<f64>()
}

fn fft_all_axes(data: &mut [Complex64], grid: &GridSpec, direction: FftDirection) {
    let n = grid.points_per_axis;
    let mut planner = FftPlanner::new();
    let fft: std::sync::Arc<dyn Fft<f64>> = planner.plan_fft(n, direction);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let total = data.len();
    for axis in 0..grid.dim {
        let stride = n.pow((grid.dim - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..total).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

fn parity_sign(grid: &GridSpec, idx: usize) -> f64 {
    let s: i64 = grid.unravel(idx).into_iter().map(|i| grid.wavenumber(i)).sum();
    if s.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Physical samples to Fourier coefficients under the `(2 pi)^{-N}` convention.
pub fn transform_forward(samples: &[Complex64], grid: &GridSpec) -> Result<SpectralField> {
    grid.validate()?;
    if samples.len() != grid.len() {
        return Err(Error::SizeMismatch { expected: grid.len(), got: samples.len() });
    }
    let mut data = samples.to_vec();
    fft_all_axes(&mut data, grid, FftDirection::Forward);
    let scale = (grid.dx() / (2.0 * PI)).powi(grid.dim as i32);
    for (idx, v) in data.iter_mut().enumerate() {
        *v *= scale * parity_sign(grid, idx);
    }
    Ok(SpectralField { grid: grid.clone(), coeffs: data })
}

/// Fourier coefficients back to physical samples.
pub fn transform_inverse(field: &SpectralField) -> Result<Vec<Complex64>> {
    let grid = &field.grid;
    grid.validate()?;
    if field.coeffs.len() != grid.len() {
        return Err(Error::SizeMismatch { expected: grid.len(), got: field.coeffs.len() });
    }
    let scale = grid.dxi().powi(grid.dim as i32);
    let mut data: Vec<Complex64> = field
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, &c)| c * (scale * parity_sign(grid, idx)))
        .collect();
    fft_all_axes(&mut data, grid, FftDirection::Inverse);
    Ok(data)
}
