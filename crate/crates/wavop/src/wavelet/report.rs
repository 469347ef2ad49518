//! Empirical certificates for a mother family: weighted decay tables, Gram
//! matrices of finite windows, and Parseval defects.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::sum::Kahan;
use crate::wavelet::family::{analyze_window, AxisKind, IndexWindow, MotherFamily};

// ─── weighted decay report ───────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct DecayRow {
    pub l: usize,
    /// Per-axis derivative multi-index α.
    pub orders: Vec<u32>,
    pub r: f64,
    /// max |∂^α ψ^l| over a thin ring |x| ≈ r.
    pub raw: f64,
    /// raw · (1+r)^{2n + 2|α| + 2ε}.
    pub weighted: f64,
}

#[derive(Debug, Clone)]
pub struct DecayClass {
    pub l: usize,
    pub orders: Vec<u32>,
    pub weight_exponent: f64,
    /// True when the weighted envelope is non-increasing over the radii
    /// (up to 5% ring-sampling slack) — i.e. the decay order is certified.
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub classes: Vec<DecayClass>,
}

impl DecayReport {
    pub fn class(&self, l: usize, orders: &[u32]) -> Option<&DecayClass> {
        self.classes
            .iter()
            .find(|c| c.l == l && c.orders == orders)
    }
}

fn multi_indices(n: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    match n {
        1 => {
            for a in 0..=cap {
                out.push(vec![a]);
            }
        }
        _ => {
            for total in 0..=cap {
                for a0 in (0..=total).rev() {
                    out.push(vec![a0, total - a0]);
                }
            }
        }
    }
    out
}

/// max |∂^α ψ^l| over a fattened ring r·[0.97, 1.03] (the fattening rides out
/// the oscillation zeros of a band-limited mother).
fn ring_max(family: &MotherFamily, l: usize, orders: &[u32], r: f64) -> Result<f64> {
    let axes = family.member_axes(l)?;
    let mut best = 0.0f64;
    for step in -4i32..=4 {
        let rr = r * (1.0 + step as f64 * 0.0075);
        match family.n {
            1 => {
                for x in [rr, -rr] {
                    let v = family.axis_profile(axes[0]).eval(x, orders[0]).abs();
                    best = best.max(v);
                }
            }
            _ => {
                for a in 0..64 {
                    let th = a as f64 * std::f64::consts::TAU / 64.0;
                    let v = family.axis_profile(axes[0]).eval(rr * th.cos(), orders[0])
                        * family.axis_profile(axes[1]).eval(rr * th.sin(), orders[1]);
                    best = best.max(v.abs());
                }
            }
        }
    }
    Ok(best)
}

/// Weighted decay table C(α, r) = max_{|x|≈r} |∂^α ψ^l| · (1+r)^{2n+2|α|+2ε}
/// for every member and every |α| ≤ order_cap, with per-class certification
/// flags. Classes whose envelope fails to decay are flagged, not asserted —
/// a polynomial-ramp mother of finite order genuinely cannot certify
/// arbitrarily high weight classes on a finite radius range.
pub fn decay_report(family: &MotherFamily, order_cap: u32, radii: &[f64]) -> Result<DecayReport> {
    if radii.len() < 2 {
        return Err(Error::invalid("radii", "need at least two radii"));
    }
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    for l in 1..=family.member_count() {
        for orders in multi_indices(family.n, order_cap) {
            let total: u32 = orders.iter().sum();
            let weight =
                2.0 * family.n as f64 + 2.0 * total as f64 + 2.0 * family.epsilon;
            let mut weighted_vals = Vec::with_capacity(radii.len());
            for &r in radii {
                let raw = ring_max(family, l, &orders, r)?;
                let weighted = raw * (1.0 + r).powf(weight);
                weighted_vals.push(weighted);
                rows.push(DecayRow {
                    l,
                    orders: orders.clone(),
                    r,
                    raw,
                    weighted,
                });
            }
            let mut certified = weighted_vals[weighted_vals.len() - 1]
                <= weighted_vals[0] * (1.0 + 1e-9);
            for pair in weighted_vals.windows(2) {
                if pair[1] > pair[0] * 1.05 {
                    certified = false;
                }
            }
            classes.push(DecayClass {
                l,
                orders,
                weight_exponent: weight,
                certified,
            });
        }
    }
    Ok(DecayReport { rows, classes })
}

// ─── Gram matrices ───────────────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct GramReport {
    pub dim: usize,
    /// Dense row-major Gram entries (the basis is real-valued).
    pub entries: Vec<f64>,
    pub max_identity_deviation: f64,
}

/// Gram matrix of the window under grid quadrature. In 2-D the tensor
/// structure is exploited: every entry is a product of two 1-D cross inner
/// products, which keeps a 500-index window at desk cost.
pub fn gram_matrix(
    family: &MotherFamily,
    window: &IndexWindow,
    grid: &Grid,
) -> Result<GramReport> {
    if window.is_empty() {
        return Err(Error::invalid("window", "empty window has no Gram matrix"));
    }
    window.validate(family, grid)?;
    let indices = window.indices(family.n);
    let dim = indices.len();
    let entries = match family.n {
        1 => {
            let vectors: Vec<Vec<f64>> = indices
                .par_iter()
                .map(|w| {
                    let scale = 2f64.powi(-w.j);
                    let norm = scale.sqrt();
                    (0..grid.points)
                        .map(|i| {
                            let u = scale * grid.coord(i) - w.k[0] as f64;
                            norm * family.wavelet.eval(u, 0)
                        })
                        .collect()
                })
                .collect();
            let h = grid.cell();
            let mut entries = vec![0.0f64; dim * dim];
            entries
                .par_chunks_mut(dim)
                .enumerate()
                .for_each(|(a, row)| {
                    for (b, slot) in row.iter_mut().enumerate() {
                        let mut acc = Kahan::new();
                        for (x, y) in vectors[a].iter().zip(&vectors[b]) {
                            acc.add(x * y);
                        }
                        *slot = acc.value() * h;
                    }
                });
            entries
        }
        _ => {
            // Distinct 1-D factors appearing in the window.
            let mut factors: Vec<(AxisKind, i32, i64)> = Vec::new();
            for kind in [AxisKind::Scaling, AxisKind::Wavelet] {
                for j in window.j_min..=window.j_max {
                    for k in -window.k_max..=window.k_max {
                        factors.push((kind, j, k));
                    }
                }
            }
            let vectors: Vec<Vec<f64>> = factors
                .par_iter()
                .map(|&(kind, j, k)| {
                    let scale = 2f64.powi(-j);
                    let norm = scale.sqrt();
                    (0..grid.points)
                        .map(|i| {
                            let u = scale * grid.coord(i) - k as f64;
                            norm * family.axis_profile(kind).eval(u, 0)
                        })
                        .collect()
                })
                .collect();
            let pos: HashMap<(u8, i32, i64), usize> = factors
                .iter()
                .enumerate()
                .map(|(i, &(kind, j, k))| ((kind as u8, j, k), i))
                .collect();
            // 1-D cross inner products, with the 1-D mesh h.
            let h = grid.h();
            let nf = factors.len();
            let mut cross = vec![0.0f64; nf * nf];
            cross.par_chunks_mut(nf).enumerate().for_each(|(a, row)| {
                for (b, slot) in row.iter_mut().enumerate() {
                    let mut acc = Kahan::new();
                    for (x, y) in vectors[a].iter().zip(&vectors[b]) {
                        acc.add(x * y);
                    }
                    *slot = acc.value() * h;
                }
            });
            let factor_of = |w: &crate::wavelet::family::WaveletIndex,
                             axis: usize|
             -> Result<usize> {
                let axes = family.member_axes(w.l)?;
                Ok(pos[&(axes[axis] as u8, w.j, w.k[axis])])
            };
            let mut entries = vec![0.0f64; dim * dim];
            for (a, wa) in indices.iter().enumerate() {
                let fa0 = factor_of(wa, 0)?;
                let fa1 = factor_of(wa, 1)?;
                for (b, wb) in indices.iter().enumerate() {
                    let fb0 = factor_of(wb, 0)?;
                    let fb1 = factor_of(wb, 1)?;
                    entries[a * dim + b] = cross[fa0 * nf + fb0] * cross[fa1 * nf + fb1];
                }
            }
            entries
        }
    };
    let mut max_dev = 0.0f64;
    for a in 0..dim {
        for b in 0..dim {
            let target = if a == b { 1.0 } else { 0.0 };
            max_dev = max_dev.max((entries[a * dim + b] - target).abs());
        }
    }
    Ok(GramReport {
        dim,
        entries,
        max_identity_deviation: max_dev,
    })
}

// ─── Parseval defect ─────────────────────────────────────────────────────────

/// |‖f‖₂² - Σ_W |⟨f, ψ_w⟩|²| / ‖f‖₂². Zero input is an error; an empty
/// window captures nothing, so its defect is exactly 1.
pub fn parseval_defect(
    family: &MotherFamily,
    f: &GridFunction,
    window: &IndexWindow,
) -> Result<f64> {
    let norm_sq = {
        let n = f.l2_norm();
        n * n
    };
    if norm_sq == 0.0 {
        return Err(Error::ZeroFunction("parseval_defect"));
    }
    if window.is_empty() {
        return Ok(1.0);
    }
    let coeffs = analyze_window(family, f, window)?;
    let mut acc = Kahan::new();
    for c in &coeffs {
        acc.add(c.norm_sqr());
    }
    Ok((norm_sq - acc.value()).abs() / norm_sq)
}

/// Convenience: synthesize a random in-span function for Parseval tests.
pub fn random_in_span(
    family: &MotherFamily,
    grid: &Grid,
    window: &IndexWindow,
    rng: &mut impl rand::Rng,
) -> Result<GridFunction> {
    let m = window.len(family.n);
    let coeffs: Vec<Complex64> = (0..m)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    crate::wavelet::family::synthesize_window(family, grid, window, &coeffs)
}
