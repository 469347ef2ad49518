//! Meyer-type mother families and their dilate/translate systems.
//!
//! The scaling spectrum is 1 on |ξ| ≤ 2π/3, falls to 0 across [2π/3, 4π/3]
//! through cos((π/2)ν(·)) with a polynomial ramp ν, and the wavelet spectrum
//! is e^{iξ/2} b(ξ) with b supported on 2π/3 ≤ |ξ| ≤ 8π/3. The half-sample
//! phase is what makes integer translates across *different* scales
//! orthonormal, so it is part of the construction, not a convention.
//!
//! In 2-D the three mothers are the tensor products (φ⊗ψ, ψ⊗φ, ψ⊗ψ),
//! indexed l = 1, 2, 3: bit a of l-1 … whether axis a carries the wavelet
//! factor is read off the usual multiresolution labeling.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::sum::KahanComplex;
use crate::wavelet::profile::Profile1D;
use crate::wavelet::ramp::Ramp;

/// Frequency half-width of every mother profile: the wavelet band ends at 8π/3.
pub const XI_MAX: f64 = 8.0 * std::f64::consts::PI / 3.0;

// ─── family construction ─────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MotherFamily {
    /// Spatial dimension of the system (1 or 2).
    pub n: usize,
    /// Transition ramp order q.
    pub ramp_order: u32,
    /// Number of derivative orders the family is used/certified for.
    pub regularity: u32,
    /// Admissibility margin ε entering decay weights 2n + 2|α| + 2ε.
    pub epsilon: f64,
    /// Scaling mother spectrum φ̂ ≥ 0.
    pub scaling: Profile1D,
    /// Wavelet mother spectrum ψ̂ = e^{iξ/2} b(ξ).
    pub wavelet: Profile1D,
}

/// Which 1-D mother a tensor axis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Scaling,
    Wavelet,
}

impl MotherFamily {
    /// Standard construction: ramp order q = N + 5 (enough spectral
    /// smoothness for the decay classes N certifies at ε = 1/2).
    pub fn build_system(n: usize, resolution: usize, regularity: u32) -> Result<Self> {
        Self::build_with(n, resolution, regularity, regularity + 5, 0.5)
    }

    pub fn build_with(
        n: usize,
        resolution: usize,
        regularity: u32,
        ramp_order: u32,
        epsilon: f64,
    ) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if regularity == 0 {
            return Err(Error::invalid("regularity", "must be at least 1"));
        }
        if !(epsilon > 0.0) {
            return Err(Error::invalid("epsilon", "must be positive"));
        }
        let ramp = Ramp::new(ramp_order)?;
        let scaling = Profile1D::from_spectrum(resolution, XI_MAX, |xi| {
            Complex64::new(scaling_hat(&ramp, xi), 0.0)
        })?;
        let wavelet = Profile1D::from_spectrum(resolution, XI_MAX, |xi| {
            Complex64::new(0.0, xi / 2.0).exp() * band_hat(&ramp, xi)
        })?;
        Ok(Self {
            n,
            ramp_order,
            regularity,
            epsilon,
            scaling,
            wavelet,
        })
    }

    /// Number of wavelet-type mothers: 2ⁿ - 1.
    pub fn member_count(&self) -> usize {
        (1usize << self.n) - 1
    }

    /// Axis decomposition of member l ∈ 1..=2ⁿ-1.
    pub fn member_axes(&self, l: usize) -> Result<Vec<AxisKind>> {
        if l == 0 || l > self.member_count() {
            return Err(Error::invalid(
                "l",
                format!("member index {l} outside 1..={}", self.member_count()),
            ));
        }
        Ok(match (self.n, l) {
            (1, _) => vec![AxisKind::Wavelet],
            (_, 1) => vec![AxisKind::Scaling, AxisKind::Wavelet],
            (_, 2) => vec![AxisKind::Wavelet, AxisKind::Scaling],
            _ => vec![AxisKind::Wavelet, AxisKind::Wavelet],
        })
    }

    #[inline]
    pub fn axis_profile(&self, kind: AxisKind) -> &Profile1D {
        match kind {
            AxisKind::Scaling => &self.scaling,
            AxisKind::Wavelet => &self.wavelet,
        }
    }

    /// ψ^l_{j,k}(x) = 2^{-nj/2} ψ^l(2^{-j}x - k), table route.
    pub fn eval_member(&self, l: usize, j: i32, k: &[i64], x: &[f64]) -> Result<f64> {
        self.eval_member_derivative(l, j, k, x, &vec![0u32; self.n])
    }

    /// ∂^α ψ^l_{j,k}, with the chain-rule factor 2^{-j|α|}; `orders` is the
    /// per-axis derivative multi-index α.
    pub fn eval_member_derivative(
        &self,
        l: usize,
        j: i32,
        k: &[i64],
        x: &[f64],
        orders: &[u32],
    ) -> Result<f64> {
        let axes = self.member_axes(l)?;
        if x.len() != self.n || k.len() != self.n || orders.len() != self.n {
            return Err(Error::invalid("x/k/orders", "dimension mismatch"));
        }
        let scale = 2f64.powi(-j);
        let total_order: u32 = orders.iter().sum();
        let mut value =
            2f64.powi(-(self.n as i32) * j).sqrt() * 2f64.powf(-(j as f64) * total_order as f64);
        for a in 0..self.n {
            let u = scale * x[a] - k[a] as f64;
            value *= self.axis_profile(axes[a]).eval(u, orders[a]);
        }
        Ok(value)
    }

    /// Slow reference route through the full spectral quadrature.
    pub fn eval_member_exact(&self, l: usize, j: i32, k: &[i64], x: &[f64]) -> Result<f64> {
        let axes = self.member_axes(l)?;
        let scale = 2f64.powi(-j);
        let mut value = Complex64::new(2f64.powi(-(self.n as i32) * j).sqrt(), 0.0);
        for a in 0..self.n {
            let u = scale * x[a] - k[a] as f64;
            value *= self.axis_profile(axes[a]).eval_direct(u, 0);
        }
        Ok(value.re)
    }

    /// JSON round-trip with a versioned schema and raw sample arrays.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SavedFamily::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let saved: SavedFamily = serde_json::from_str(text)?;
        saved.into_family()
    }
}

fn scaling_hat(ramp: &Ramp, xi: f64) -> f64 {
    let a = xi.abs();
    let third = 2.0 * std::f64::consts::PI / 3.0;
    if a <= third {
        1.0
    } else if a < 2.0 * third {
        (std::f64::consts::FRAC_PI_2 * ramp.eval(a / third - 1.0)).cos()
    } else {
        0.0
    }
}

fn band_hat(ramp: &Ramp, xi: f64) -> f64 {
    let a = xi.abs();
    let third = 2.0 * std::f64::consts::PI / 3.0;
    if a < third || a > 4.0 * third {
        0.0
    } else if a <= 2.0 * third {
        (std::f64::consts::FRAC_PI_2 * ramp.eval(a / third - 1.0)).sin()
    } else {
        (std::f64::consts::FRAC_PI_2 * ramp.eval(a / (2.0 * third) - 1.0)).cos()
    }
}

// ─── index windows ───────────────────────────────────────────────────────────

/// One basis element: member l, scale j, integer shift k (k[1] unused in 1-D).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletIndex {
    pub l: usize,
    pub j: i32,
    pub k: [i64; 2],
}

/// Finite rectangular window of indices: scales j_min..=j_max, shifts
/// |k|_∞ ≤ k_max, members from l_set. Enumeration order is canonical
/// (l, then j, then k lexicographic) and is part of the coefficient-layout
/// contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexWindow {
    pub j_min: i32,
    pub j_max: i32,
    pub k_max: i64,
    pub l_set: Vec<usize>,
}

impl IndexWindow {
    pub fn new(j_min: i32, j_max: i32, k_max: i64, l_set: Vec<usize>) -> Result<Self> {
        if j_min > j_max {
            return Err(Error::invalid("j_min", "exceeds j_max"));
        }
        if k_max < 0 {
            return Err(Error::invalid("k_max", "must be nonnegative"));
        }
        Ok(Self {
            j_min,
            j_max,
            k_max,
            l_set,
        })
    }

    pub fn shifts_per_axis(&self) -> usize {
        (2 * self.k_max + 1) as usize
    }

    pub fn len(&self, n: usize) -> usize {
        let shifts = self.shifts_per_axis().pow(n as u32);
        self.l_set.len() * (self.j_max - self.j_min + 1) as usize * shifts
    }

    pub fn is_empty(&self) -> bool {
        self.l_set.is_empty()
    }

    /// Canonical enumeration.
    pub fn indices(&self, n: usize) -> Vec<WaveletIndex> {
        let mut out = Vec::with_capacity(self.len(n));
        for &l in &self.l_set {
            for j in self.j_min..=self.j_max {
                for k1 in -self.k_max..=self.k_max {
                    if n == 1 {
                        out.push(WaveletIndex { l, j, k: [k1, 0] });
                    } else {
                        for k2 in -self.k_max..=self.k_max {
                            out.push(WaveletIndex { l, j, k: [k1, k2] });
                        }
                    }
                }
            }
        }
        out
    }

    /// Every member of the window must keep its essential support (at
    /// relative level 1e-6) inside the grid box.
    pub fn validate(&self, family: &MotherFamily, grid: &Grid) -> Result<()> {
        if grid.n != family.n {
            return Err(Error::GridMismatch(format!(
                "grid dimension {} vs family dimension {}",
                grid.n, family.n
            )));
        }
        for &l in &self.l_set {
            let axes = family.member_axes(l)?;
            for j in self.j_min..=self.j_max {
                for kind in &axes {
                    let r_ess = family.axis_profile(*kind).essential_radius(0, 1e-6);
                    let needed = 2f64.powi(j) * (self.k_max as f64 + r_ess);
                    if needed > grid.half_width * (1.0 + 1e-9) {
                        return Err(Error::SupportOverflow {
                            l,
                            j,
                            k: vec![self.k_max; family.n],
                            needed,
                            half_width: grid.half_width,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

// ─── windowed analysis / synthesis on grids ──────────────────────────────────

/// Inner products ⟨f, ψ^l_{j,k}⟩ for every index of the window, in canonical
/// order. Rectangle-rule quadrature; exact for band-limited integrands on a
/// sufficiently fine mesh.
pub fn analyze_window(
    family: &MotherFamily,
    f: &GridFunction,
    window: &IndexWindow,
) -> Result<Vec<Complex64>> {
    window.validate(family, &f.grid)?;
    let mut out = Vec::with_capacity(window.len(family.n));
    for &l in &window.l_set {
        for j in window.j_min..=window.j_max {
            match family.n {
                1 => analyze_1d(family, f, l, j, window.k_max, &mut out),
                _ => analyze_2d(family, f, l, j, window.k_max, &mut out)?,
            }
        }
    }
    Ok(out)
}

/// Σ coeff · ψ^l_{j,k} sampled on the grid, coefficients in canonical order.
pub fn synthesize_window(
    family: &MotherFamily,
    grid: &Grid,
    window: &IndexWindow,
    coeffs: &[Complex64],
) -> Result<GridFunction> {
    window.validate(family, grid)?;
    synthesize_window_unchecked(family, grid, window, coeffs)
}

/// Synthesis without the support guard. Every grid sample is a finite sum,
/// so the expansion is well-defined even when coarse members extend past the
/// box — the guard exists for analysis quadrature, which shares the window
/// type. Callers that only need on-grid values of deliberately wide sums
/// (atom images sampled on atom-sized boxes) come through here.
pub(crate) fn synthesize_window_unchecked(
    family: &MotherFamily,
    grid: &Grid,
    window: &IndexWindow,
    coeffs: &[Complex64],
) -> Result<GridFunction> {
    let expected = window.len(family.n);
    if coeffs.len() != expected {
        return Err(Error::WeightLength {
            got: coeffs.len(),
            expected,
        });
    }
    let mut f = GridFunction::zeros(*grid);
    let mut offset = 0usize;
    for &l in &window.l_set {
        for j in window.j_min..=window.j_max {
            let block = window.shifts_per_axis().pow(family.n as u32);
            let slab = &coeffs[offset..offset + block];
            match family.n {
                1 => synthesize_1d(family, &mut f, l, j, window.k_max, slab),
                _ => synthesize_2d(family, &mut f, l, j, window.k_max, slab)?,
            }
            offset += block;
        }
    }
    Ok(f)
}

fn analyze_1d(
    family: &MotherFamily,
    f: &GridFunction,
    l: usize,
    j: i32,
    k_max: i64,
    out: &mut Vec<Complex64>,
) {
    let grid = &f.grid;
    let table = family.wavelet.table(0);
    let cutoff = table.cutoff;
    let inv_scale = 2f64.powi(-j);
    let s = grid.h() * inv_scale;
    let u0 = -grid.half_width * inv_scale;
    let norm = 2f64.powi(-j).sqrt() * grid.cell();
    let _ = l; // single member in 1-D
    let coeffs: Vec<Complex64> = (-k_max..=k_max)
        .into_par_iter()
        .map(|k| {
            let kf = k as f64;
            let lo = (((kf - cutoff) - u0) / s).ceil().max(0.0) as usize;
            let hi = ((((kf + cutoff) - u0) / s).floor()).min(grid.points as f64 - 1.0) as usize;
            let mut acc = KahanComplex::new();
            for i in lo..=hi {
                let w = table.lookup(u0 + s * i as f64 - kf);
                if w != 0.0 {
                    acc.add(f.samples[i] * w);
                }
            }
            acc.value() * norm
        })
        .collect();
    out.extend(coeffs);
}

fn synthesize_1d(
    family: &MotherFamily,
    f: &mut GridFunction,
    _l: usize,
    j: i32,
    k_max: i64,
    slab: &[Complex64],
) {
    let grid = f.grid;
    let table = family.wavelet.table(0);
    let cutoff = table.cutoff;
    let inv_scale = 2f64.powi(-j);
    let s = grid.h() * inv_scale;
    let u0 = -grid.half_width * inv_scale;
    let norm = 2f64.powi(-j).sqrt();
    f.samples.par_iter_mut().enumerate().for_each(|(i, v)| {
        let u = u0 + s * i as f64;
        let klo = ((u - cutoff).ceil() as i64).max(-k_max);
        let khi = ((u + cutoff).floor() as i64).min(k_max);
        let mut acc = KahanComplex::new();
        for k in klo..=khi {
            let w = table.lookup(u - k as f64);
            if w != 0.0 {
                acc.add(slab[(k + k_max) as usize] * w);
            }
        }
        *v += acc.value() * norm;
    });
}

/// Axis factor matrix A[i][k] = p(u0 + s·i - k) for one 1-D profile.
fn axis_matrix(
    profile: &Profile1D,
    grid: &Grid,
    j: i32,
    k_max: i64,
    order: u32,
) -> Vec<Vec<f64>> {
    let table = profile.table(order);
    let inv_scale = 2f64.powi(-j);
    let s = grid.h() * inv_scale;
    let u0 = -grid.half_width * inv_scale;
    (0..grid.points)
        .map(|i| {
            let u = u0 + s * i as f64;
            (-k_max..=k_max)
                .map(|k| table.lookup(u - k as f64))
                .collect()
        })
        .collect()
}

fn analyze_2d(
    family: &MotherFamily,
    f: &GridFunction,
    l: usize,
    j: i32,
    k_max: i64,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    let axes = family.member_axes(l)?;
    let grid = &f.grid;
    let m = grid.points;
    let kk = (2 * k_max + 1) as usize;
    let a0 = axis_matrix(family.axis_profile(axes[0]), grid, j, k_max, 0);
    let a1 = axis_matrix(family.axis_profile(axes[1]), grid, j, k_max, 0);
    // Stage 1: contract the fast axis. T[i1][k2] = Σ_{i2} F[i1][i2] A1[i2][k2].
    let t: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|i1| {
            let row = &f.samples[i1 * m..(i1 + 1) * m];
            let mut acc = vec![KahanComplex::new(); kk];
            for (i2, fv) in row.iter().enumerate() {
                let w = &a1[i2];
                for (k2, wk) in w.iter().enumerate() {
                    if *wk != 0.0 {
                        acc[k2].add(fv * *wk);
                    }
                }
            }
            acc.into_iter().map(|a| a.value()).collect()
        })
        .collect();
    // Stage 2: contract the slow axis. C[k1][k2] = Σ_{i1} A0[i1][k1] T[i1][k2].
    let norm = 2f64.powi(-j) * grid.cell();
    let rows: Vec<Vec<Complex64>> = (0..kk)
        .into_par_iter()
        .map(|k1| {
            let mut acc = vec![KahanComplex::new(); kk];
            for (i1, trow) in t.iter().enumerate() {
                let w = a0[i1][k1];
                if w != 0.0 {
                    for (k2, tv) in trow.iter().enumerate() {
                        acc[k2].add(tv * w);
                    }
                }
            }
            acc.into_iter().map(|a| a.value() * norm).collect()
        })
        .collect();
    for row in rows {
        out.extend(row);
    }
    Ok(())
}

fn synthesize_2d(
    family: &MotherFamily,
    f: &mut GridFunction,
    l: usize,
    j: i32,
    k_max: i64,
    slab: &[Complex64],
) -> Result<()> {
    let axes = family.member_axes(l)?;
    let grid = f.grid;
    let m = grid.points;
    let kk = (2 * k_max + 1) as usize;
    let a0 = axis_matrix(family.axis_profile(axes[0]), &grid, j, k_max, 0);
    let a1 = axis_matrix(family.axis_profile(axes[1]), &grid, j, k_max, 0);
    let norm = 2f64.powi(-j);
    // Stage 1: U[i1][k2] = Σ_{k1} A0[i1][k1] C[k1][k2].
    let u: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|i1| {
            let mut acc = vec![KahanComplex::new(); kk];
            for k1 in 0..kk {
                let w = a0[i1][k1];
                if w != 0.0 {
                    let crow = &slab[k1 * kk..(k1 + 1) * kk];
                    for (k2, cv) in crow.iter().enumerate() {
                        acc[k2].add(cv * w);
                    }
                }
            }
            acc.into_iter().map(|a| a.value()).collect()
        })
        .collect();
    // Stage 2: F[i1][i2] += Σ_{k2} U[i1][k2] A1[i2][k2].
    f.samples
        .par_chunks_mut(m)
        .enumerate()
        .for_each(|(i1, row)| {
            let urow = &u[i1];
            for (i2, v) in row.iter_mut().enumerate() {
                let w = &a1[i2];
                let mut acc = KahanComplex::new();
                for (k2, wk) in w.iter().enumerate() {
                    if *wk != 0.0 {
                        acc.add(urow[k2] * *wk);
                    }
                }
                *v += acc.value() * norm;
            }
        });
    Ok(())
}

// ─── serialization ───────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct SavedProfile {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl SavedProfile {
    fn from(p: &Profile1D) -> Self {
        Self {
            re: p.samples.iter().map(|c| c.re).collect(),
            im: p.samples.iter().map(|c| c.im).collect(),
        }
    }

    fn into_profile(self, xi_max: f64) -> Result<Profile1D> {
        if self.re.len() != self.im.len() {
            return Err(Error::invalid("samples", "re/im length mismatch"));
        }
        let samples = self
            .re
            .into_iter()
            .zip(self.im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        Profile1D::from_samples(xi_max, samples)
    }
}

/// Versioned on-disk form of a family: plain arrays, no caches.
#[derive(Serialize, Deserialize)]
struct SavedFamily {
    schema_version: u32,
    n: usize,
    ramp_order: u32,
    regularity: u32,
    epsilon: f64,
    xi_max: f64,
    scaling: SavedProfile,
    wavelet: SavedProfile,
}

impl SavedFamily {
    fn from(f: &MotherFamily) -> Self {
        Self {
            schema_version: 1,
            n: f.n,
            ramp_order: f.ramp_order,
            regularity: f.regularity,
            epsilon: f.epsilon,
            xi_max: f.scaling.xi_max,
            scaling: SavedProfile::from(&f.scaling),
            wavelet: SavedProfile::from(&f.wavelet),
        }
    }

    fn into_family(self) -> Result<MotherFamily> {
        if self.schema_version != 1 {
            return Err(Error::invalid(
                "schema_version",
                format!("unsupported version {}", self.schema_version),
            ));
        }
        Ok(MotherFamily {
            n: self.n,
            ramp_order: self.ramp_order,
            regularity: self.regularity,
            epsilon: self.epsilon,
            scaling: self.scaling.into_profile(self.xi_max)?,
            wavelet: self.wavelet.into_profile(self.xi_max)?,
        })
    }
}

// ─── unit tests ──────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    fn family_1d() -> MotherFamily {
        MotherFamily::build_system(1, 1 << 12, 1).unwrap()
    }

    #[test]
    fn mothers_have_unit_norm() {
        let fam = family_1d();
        assert!((fam.wavelet.l2_norm() - 1.0).abs() < 1e-12);
        assert!((fam.scaling.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn band_partition_of_unity() {
        // Σ_{j∈ℤ} |ψ̂(2^j ξ)|² = 1 for ξ ≠ 0; five scales cover any fixed ξ.
        let ramp = Ramp::new(6).unwrap();
        for i in 1..=40 {
            let xi = 0.3 + i as f64 * 0.45;
            let mut s = 0.0;
            for j in -6..=6 {
                s += band_hat(&ramp, 2f64.powi(j) * xi).powi(2);
            }
            assert!((s - 1.0).abs() < 1e-12, "ξ={xi}: {s}");
        }
        // Low frequencies: |φ̂(ξ)|² + Σ_{m≥0} |ψ̂(2^{-m}ξ)|² = 1; the telescope
        // closes once 2^{-m}ξ falls below 2π/3.
        for i in 0..=20 {
            let xi = 0.05 + i as f64 * 0.4;
            let mut s = scaling_hat(&ramp, xi).powi(2);
            for m in 0..=6 {
                s += band_hat(&ramp, xi / 2f64.powi(m)).powi(2);
            }
            assert!((s - 1.0).abs() < 1e-12, "ξ={xi}: {s}");
        }
    }

    #[test]
    fn scaling_identity_is_exact() {
        let fam = family_1d();
        for &(j, k, x) in &[(1i32, 3i64, 0.7f64), (-2, -5, 1.3), (3, 0, -4.0)] {
            let via_member = fam.eval_member(1, j, &[k], &[x]).unwrap();
            let scale = 2f64.powi(-j);
            let direct = scale.sqrt() * fam.wavelet.eval(scale * x - k as f64, 0);
            assert_eq!(via_member, direct);
        }
    }

    #[test]
    fn spectral_derivative_matches_finite_differences() {
        let fam = family_1d();
        let h = 1e-4;
        for &x in &[0.4, 1.0, -2.3, 5.5] {
            let fd = (fam.wavelet.eval(x + h, 0) - fam.wavelet.eval(x - h, 0)) / (2.0 * h);
            let sp = fam.wavelet.eval(x, 1);
            assert!(
                (fd - sp).abs() <= 1e-5 * sp.abs().max(1.0),
                "x={x}: fd {fd} vs spectral {sp}"
            );
        }
        // Chain rule at scale j: ∂ψ_{j,k} carries 2^{-j(1/2 + 1)}.
        let j = 2;
        let d = fam
            .eval_member_derivative(1, j, &[1], &[3.0], &[1])
            .unwrap();
        let scale = 2f64.powi(-j);
        let expected = scale.sqrt() * scale * fam.wavelet.eval(scale * 3.0 - 1.0, 1);
        assert_eq!(d, expected);
    }

    #[test]
    fn window_enumeration_is_canonical_and_sized() {
        let w = IndexWindow::new(-1, 1, 2, vec![1]).unwrap();
        let idx1 = w.indices(1);
        assert_eq!(idx1.len(), w.len(1));
        assert_eq!(idx1.len(), 3 * 5);
        assert_eq!(idx1[0], WaveletIndex { l: 1, j: -1, k: [-2, 0] });
        let idx2 = w.indices(2);
        assert_eq!(idx2.len(), 3 * 25);
        assert_eq!(idx2[1].k, [-2, -1]);
    }

    #[test]
    fn support_overflow_is_detected() {
        let fam = family_1d();
        let grid = Grid::new(1, 16.0, 1 << 10).unwrap();
        let w = IndexWindow::new(0, 4, 8, vec![1]).unwrap();
        match w.validate(&fam, &grid) {
            Err(Error::SupportOverflow { needed, .. }) => assert!(needed > 16.0),
            other => panic!("expected support overflow, got {other:?}"),
        }
    }

    #[test]
    fn analysis_synthesis_round_trip_1d() {
        let fam = family_1d();
        let grid = Grid::new(1, 64.0, 1 << 11).unwrap(); // h = 1/16
        let window = IndexWindow::new(0, 1, 4, vec![1]).unwrap();
        let m = window.len(1);
        let coeffs: Vec<Complex64> = (0..m)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let f = synthesize_window(&fam, &grid, &window, &coeffs).unwrap();
        let back = analyze_window(&fam, &f, &window).unwrap();
        let worst = coeffs
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "round-trip error {worst}");
    }

    #[test]
    fn serialization_round_trip() {
        let fam = MotherFamily::build_system(2, 1 << 10, 2).unwrap();
        let json = fam.to_json().unwrap();
        let back = MotherFamily::from_json(&json).unwrap();
        assert_eq!(back.n, 2);
        assert_eq!(back.ramp_order, fam.ramp_order);
        assert_eq!(back.wavelet.samples, fam.wavelet.samples);
        assert_eq!(fam.to_json().unwrap(), back.to_json().unwrap());
    }
}
