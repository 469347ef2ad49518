//! Uniform dyadic sampling grids on centered boxes [-L, L]^n, n ∈ {1, 2}.
//!
//! A [`GridFunction`] is a complex-valued sample vector over such a grid in
//! row-major order (axis 0 slowest). Quadrature follows the rectangle rule
//! with weight h^n, which is exact for band-limited integrands once the mesh
//! is below their Nyquist spacing — the regime every test in this crate
//! operates in.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{Kahan, KahanComplex};

// ─── grid geometry ───────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Spatial dimension, 1 or 2.
    pub n: usize,
    /// Box half-width L: the grid covers [-L, L)^n.
    pub half_width: f64,
    /// Samples per axis; a power of two.
    pub points: usize,
}

impl Grid {
    pub fn new(n: usize, half_width: f64, points: usize) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if !points.is_power_of_two() {
            return Err(Error::PointsNotPowerOfTwo(points));
        }
        if !(half_width > 0.0) {
            return Err(Error::invalid("half_width", "must be positive"));
        }
        Ok(Self {
            n,
            half_width,
            points,
        })
    }

    /// Mesh width h = 2L / points.
    #[inline]
    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Total number of sites (points^n).
    #[inline]
    pub fn len(&self) -> usize {
        match self.n {
            1 => self.points,
            _ => self.points * self.points,
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of index i along one axis: -L + i·h.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.h()
    }

    /// Site coordinates for a flat row-major index.
    #[inline]
    pub fn site(&self, flat: usize) -> [f64; 2] {
        match self.n {
            1 => [self.coord(flat), 0.0],
            _ => [self.coord(flat / self.points), self.coord(flat % self.points)],
        }
    }

    /// Quadrature weight h^n.
    #[inline]
    pub fn cell(&self) -> f64 {
        self.h().powi(self.n as i32)
    }

    pub fn same_as(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "expected n={} L={} points={}, got n={} L={} points={}",
                self.n, self.half_width, self.points, other.n, other.half_width, other.points
            )))
        }
    }
}

// ─── sampled functions ───────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: Grid,
    pub samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            samples: vec![Complex64::ZERO; grid.len()],
            grid,
        }
    }

    /// Sample a pointwise rule over the grid.
    pub fn sample<F: Fn(&[f64]) -> Complex64>(grid: Grid, f: F) -> Self {
        let mut out = Self::zeros(grid);
        match grid.n {
            1 => {
                for (i, s) in out.samples.iter_mut().enumerate() {
                    *s = f(&[grid.coord(i)]);
                }
            }
            _ => {
                let m = grid.points;
                for i1 in 0..m {
                    let x1 = grid.coord(i1);
                    for i2 in 0..m {
                        out.samples[i1 * m + i2] = f(&[x1, grid.coord(i2)]);
                    }
                }
            }
        }
        out
    }

    pub fn sample_real<F: Fn(&[f64]) -> f64>(grid: Grid, f: F) -> Self {
        Self::sample(grid, |x| Complex64::new(f(x), 0.0))
    }

    #[inline]
    pub fn at(&self, i1: usize, i2: usize) -> Complex64 {
        debug_assert_eq!(self.grid.n, 2);
        self.samples[i1 * self.grid.points + i2]
    }

    /// L² norm under rectangle-rule quadrature.
    pub fn l2_norm(&self) -> f64 {
        let mut acc = Kahan::new();
        for z in &self.samples {
            acc.add(z.norm_sqr());
        }
        (acc.value() * self.grid.cell()).sqrt()
    }

    /// L¹ norm under rectangle-rule quadrature.
    pub fn l1_norm(&self) -> f64 {
        let mut acc = Kahan::new();
        for z in &self.samples {
            acc.add(z.norm());
        }
        acc.value() * self.grid.cell()
    }

    /// p-quasi-norm (h^n Σ |f|^p)^{1/p} for 0 < p ≤ 1, or the usual norm for
    /// p > 1; no convexity correction — the direct discretization.
    pub fn lp_quasinorm(&self, p: f64) -> f64 {
        assert!(p > 0.0);
        let mut acc = Kahan::new();
        for z in &self.samples {
            acc.add(z.norm().powf(p));
        }
        (acc.value() * self.grid.cell()).powf(1.0 / p)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Quadrature inner product ⟨f, g⟩ = h^n Σ f ḡ.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.grid.same_as(&other.grid)?;
        let mut acc = KahanComplex::new();
        for (a, b) in self.samples.iter().zip(&other.samples) {
            acc.add(a * b.conj());
        }
        Ok(acc.value() * self.grid.cell())
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &GridFunction) -> Result<()> {
        self.grid.same_as(&other.grid)?;
        for (a, b) in self.samples.iter_mut().zip(&other.samples) {
            *a += c * b;
        }
        Ok(())
    }

    /// Fraction of the L¹ mass sitting within `margin` of the box boundary —
    /// the quantity the convolution padding contract bounds.
    pub fn boundary_mass_fraction(&self, margin: f64) -> f64 {
        let total = self.l1_norm();
        if total == 0.0 {
            return 0.0;
        }
        let inner_edge = self.grid.half_width - margin;
        let mut acc = Kahan::new();
        for (i, z) in self.samples.iter().enumerate() {
            let x = self.grid.site(i);
            let linf = match self.grid.n {
                1 => x[0].abs(),
                _ => x[0].abs().max(x[1].abs()),
            };
            if linf >= inner_edge {
                acc.add(z.norm());
            }
        }
        acc.value() * self.grid.cell() / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(3, 1.0, 64).is_err());
        assert!(Grid::new(1, 1.0, 65).is_err());
        assert!(Grid::new(1, -2.0, 64).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form_gaussian() {
        // ∫ e^{-x²} dx = √π; the grid is wide and fine enough for 1e-12.
        let grid = Grid::new(1, 16.0, 1 << 12).unwrap();
        let f = GridFunction::sample_real(grid, |x| (-x[0] * x[0]).exp());
        let integral = f.l1_norm();
        assert!((integral - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_dim_indexing_is_row_major() {
        let grid = Grid::new(2, 1.0, 4).unwrap();
        let f = GridFunction::sample(grid, |x| Complex64::new(x[0], x[1]));
        assert_eq!(f.at(1, 3).re, grid.coord(1));
        assert_eq!(f.at(1, 3).im, grid.coord(3));
    }

    #[test]
    fn boundary_mass_sees_edge_bump() {
        let grid = Grid::new(1, 8.0, 1 << 8).unwrap();
        let centered = GridFunction::sample_real(grid, |x| (-(x[0] * x[0])).exp());
        assert!(centered.boundary_mass_fraction(1.0) < 1e-6);
        let edge = GridFunction::sample_real(grid, |x| (-(x[0] - 7.5) * (x[0] - 7.5) * 4.0).exp());
        assert!(edge.boundary_mass_fraction(1.0) > 0.5);
    }
}
